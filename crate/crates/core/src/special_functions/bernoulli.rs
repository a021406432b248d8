use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::rational::{binomial, fmt_fraction};

/// Exact Bernoulli numbers `B_0..=B_N` with `B_1 = -1/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliTable {
    pub values: Vec<BigRational>,
}

impl BernoulliTable {
    pub fn get(&self, m: usize) -> &BigRational {
        &self.values[m]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `ζ(-k) = (-1)^k B_{k+1}/(k+1)`; for `k >= 1` this is `-B_{k+1}/(k+1)`.
    pub fn zeta_negative(&self, k: usize) -> BigRational {
        let v = self.values[k + 1].clone() / BigRational::from_integer(BigInt::from(k + 1));
        if k % 2 == 0 {
            v
        } else {
            -v
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliRow {
    pub m: usize,
    pub exact: String,
    pub value: f64,
}

impl BernoulliTable {
    pub fn rows(&self) -> Vec<BernoulliRow> {
        self.values
            .iter()
            .enumerate()
            .map(|(m, b)| BernoulliRow {
                m,
                exact: fmt_fraction(b),
                value: crate::rational::to_f64(b),
            })
            .collect()
    }
}

/// Bernoulli numbers up to `B_N` from `Σ_{j<=m} C(m+1, j) B_j = 0`, together
/// with `ζ(-k)` for `k = 0..N-1`.
pub fn bernoulli_and_zeta(n: usize) -> (BernoulliTable, Vec<BigRational>) {
    let mut values: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for (j, b) in values.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * b;
        }
        values.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    let table = BernoulliTable { values };
    let zeta = (0..n).map(|k| table.zeta_negative(k)).collect();
    (table, zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn known_values() {
        let (t, zeta) = bernoulli_and_zeta(14);
        assert_eq!(*t.get(0), rat(1, 1));
        assert_eq!(*t.get(1), rat(-1, 2));
        assert_eq!(*t.get(2), rat(1, 6));
        assert_eq!(*t.get(12), rat(-691, 2730));
        assert_eq!(*t.get(14), rat(7, 6));
        for m in (3..=14).step_by(2) {
            assert!(t.get(m).is_zero());
        }
        assert_eq!(zeta[0], rat(-1, 2));
        assert_eq!(zeta[1], rat(-1, 12));
        assert_eq!(zeta[3], rat(1, 120));
        assert!(zeta[2].is_zero());
    }
}
