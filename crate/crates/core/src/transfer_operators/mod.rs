//! Truncated matrices of `M`, `N`, `P^± = M ± N`, `Q^± = I ± M^{-1}N` and
//! `J = N M^{-1}` on `L²(m_q)`, their spectra, and the structural identities
//! they satisfy.

mod assemble;
mod checks;
mod spectrum;

use std::fmt;

use nalgebra::DMatrix;
use num_rational::BigRational;
use serde::Serialize;

use crate::laguerre_space::{Basis, SpaceParams};

pub use assemble::{
    assemble_derived, assemble_m, assemble_m_with, assemble_n, assemble_n_kernel_with,
    assemble_n_with, ell_vector_exact, m_gram_exact, n_gram_exact, NMethod, DEFAULT_KERNEL_NODES,
};
pub use checks::{
    drift_diagnostic, j_diagnostic, n_eigensystem_check, nuclearity_surrogate, psi_k,
    verify_structure, DriftReport, JDiagnostic, NuclearityReport, OperatorReport,
};
pub use spectrum::{spectral_norm, spectrum, SpectrumResult};

/// Which operator a matrix truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OpKind {
    M,
    N,
    PPlus,
    PMinus,
    QPlus,
    QMinus,
    J,
}

impl OpKind {
    pub fn parse(s: &str) -> crate::Result<OpKind> {
        Ok(match s {
            "M" | "m" => OpKind::M,
            "N" | "n" => OpKind::N,
            "P+" | "p+" | "Pplus" => OpKind::PPlus,
            "P-" | "p-" | "Pminus" => OpKind::PMinus,
            "Q+" | "q+" | "Qplus" => OpKind::QPlus,
            "Q-" | "q-" | "Qminus" => OpKind::QMinus,
            "J" | "j" => OpKind::J,
            other => return Err(crate::Error::Parse(format!("unknown operator `{other}`"))),
        })
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpKind::M => "M",
            OpKind::N => "N",
            OpKind::PPlus => "P+",
            OpKind::PMinus => "P-",
            OpKind::QPlus => "Q+",
            OpKind::QMinus => "Q-",
            OpKind::J => "J",
        })
    }
}

/// A `K x K` truncation. Entry `(i, j)` is the `i`-th coordinate of the image
/// of the `j`-th basis vector, so matrices act on coefficient columns.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub kind: OpKind,
    pub params: SpaceParams,
    pub basis: Basis,
    pub entries: DMatrix<f64>,
    pub exact: Option<Vec<Vec<BigRational>>>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// `max |A - Aᵀ|`.
    pub fn asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).abs().max()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = nalgebra::DVector::from_column_slice(x);
        (&self.entries * v).iter().copied().collect()
    }

    /// Exact product with a rational coefficient column.
    pub fn apply_exact(&self, x: &[BigRational]) -> Option<Vec<BigRational>> {
        let a = self.exact.as_ref()?;
        Some(
            a.iter()
                .map(|row| {
                    row.iter()
                        .zip(x)
                        .fold(BigRational::from_integer(0.into()), |acc, (r, c)| acc + r * c)
                })
                .collect(),
        )
    }

    /// CSV with columns `row,col,value`.
    pub fn to_csv(&self) -> crate::Result<String> {
        let mut t = crate::report::Table::new(
            format!("{} matrix, q={}, K={}, basis={}", self.kind, self.params.q, self.dim(), self.basis),
            &["row", "col", "value"],
        );
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                t.push(vec![i.into(), j.into(), self.entries[(i, j)].into()]);
            }
        }
        t.to_csv()
    }
}
