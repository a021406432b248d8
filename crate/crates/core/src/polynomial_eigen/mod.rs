//! Exact eigenproblem at `q = -k/2`: the integer matrices `M_k`, their
//! palindromic eigenvectors, the resulting polynomial eigenfunctions and the
//! Bernoulli eigenfunctions.

mod bernoulli;
pub mod field;
pub mod poly;
mod spectrum;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::binomial;
use crate::report::Check;

pub use bernoulli::{bernoulli_eigenfunction, BernoulliEigen, LaurentPolynomial};
pub use spectrum::{
    eigenpair_to_eigenfunction, leading_bounds, mk_spectra, mk_spectrum, period_search,
    pseudo_scalar_checks, EigenFunction, LeadingBounds, MkSpectrum, PalindromeClass, PeriodRow,
    PolyEigenpair,
};

/// Largest supported `k`; entries stay far inside `i64`.
pub const MAX_K: usize = 60;

/// `(k+1) × (k+1)` integer matrix with `C(k-i, j-i)` above the diagonal,
/// `2` on it and `C(i, j)` below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MkMatrix {
    pub k: usize,
    pub entries: Vec<Vec<i64>>,
}

/// Builds `M_k` and verifies its structural invariants.
pub fn build_mk(k: usize) -> Result<MkMatrix> {
    if k > MAX_K {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds {MAX_K}")));
    }
    let c = |n: usize, r: usize| -> i64 {
        i64::try_from(binomial(n as u64, r as u64)).expect("binomial fits in i64")
    };
    let entries = (0..=k)
        .map(|i| {
            (0..=k)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Less => c(k - i, j - i),
                    std::cmp::Ordering::Equal => 2,
                    std::cmp::Ordering::Greater => c(i, j),
                })
                .collect()
        })
        .collect();
    let m = MkMatrix { k, entries };
    if let Some(bad) = m.invariants().into_iter().find(|c| !c.passed) {
        return Err(Error::CheckFailed { id: bad.id, detail: bad.detail });
    }
    Ok(m)
}

impl MkMatrix {
    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn to_bigint(&self) -> Vec<Vec<BigInt>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        nalgebra::DMatrix::from_fn(n, n, |i, j| self.entries[i][j] as f64)
    }

    /// Point symmetry, row sums `2^i + 2^{k-i}` and column sums `C(k+2, j+1)`.
    pub fn invariants(&self) -> Vec<Check> {
        let k = self.k;
        let n = self.dim();
        let sym = (0..n).all(|i| (0..n).all(|j| self.entries[i][j] == self.entries[k - i][k - j]));
        let rows = (0..n).all(|i| {
            let s: i128 = self.entries[i].iter().map(|&x| x as i128).sum();
            s == (1i128 << i) + (1i128 << (k - i))
        });
        let cols = (0..n).all(|j| {
            let s: i128 = (0..n).map(|i| self.entries[i][j] as i128).sum();
            BigInt::from(s) == binomial(k as u64 + 2, j as u64 + 1)
        });
        vec![
            Check::boolean("mk-point-symmetry", sym, format!("M(i,j) = M(k-i,k-j) for k = {k}")),
            Check::boolean("mk-row-sums", rows, "row i sums to 2^i + 2^(k-i)"),
            Check::boolean("mk-column-sums", cols, "column j sums to C(k+2, j+1)"),
        ]
    }

    /// `M_k Φ` in exact integer arithmetic.
    pub fn apply_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.entries
            .iter()
            .map(|row| row.iter().zip(v).map(|(&a, b)| BigInt::from(a) * b).sum())
            .collect()
    }

    /// `M_kᵀ Ψ` in exact integer arithmetic.
    pub fn apply_transpose_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        (0..n)
            .map(|j| (0..n).map(|i| BigInt::from(self.entries[i][j]) * &v[i]).sum())
            .collect()
    }

    /// CSV with one row per matrix row.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<String> = (0..self.dim()).map(|j| format!("c{j}")).collect();
        w.write_record(&header)?;
        for row in &self.entries {
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrices() {
        assert_eq!(build_mk(0).unwrap().entries, vec![vec![2]]);
        assert_eq!(build_mk(1).unwrap().entries, vec![vec![2, 1], vec![1, 2]]);
        let m4 = build_mk(4).unwrap();
        assert_eq!(
            m4.entries,
            vec![
                vec![2, 4, 6, 4, 1],
                vec![1, 2, 3, 3, 1],
                vec![1, 2, 2, 2, 1],
                vec![1, 3, 3, 2, 1],
                vec![1, 4, 6, 4, 2],
            ]
        );
    }

    #[test]
    fn invariants_hold_up_to_twenty() {
        for k in 0..=20 {
            assert!(build_mk(k).unwrap().invariants().iter().all(|c| c.passed));
        }
    }
}
