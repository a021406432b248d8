use nalgebra::{DVector, SymmetricEigen};
use serde::Serialize;

use super::{OpKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::laguerre_space::{Basis, CoefficientVector};

/// Eigen-decomposition of a symmetric truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub kind: OpKind,
    pub q: f64,
    pub k: usize,
    /// Descending by value.
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Vec<CoefficientVector>,
    /// `||A v - λ v|| / ||v||` per pair.
    pub residuals: Vec<f64>,
    /// `max |A - Aᵀ|` before symmetrisation.
    pub asymmetry: f64,
}

impl SpectrumResult {
    /// Eigenvalues sorted by decreasing absolute value.
    pub fn by_magnitude(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
        v
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Eigenvalue closest to `target`.
    pub fn nearest(&self, target: f64) -> f64 {
        self.eigenvalues
            .iter()
            .copied()
            .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
            .expect("nonempty spectrum")
    }
}

/// Symmetric eigen-decomposition of an `ê`-basis matrix.
///
/// Eigenvectors are normalised to unit length with their first
/// non-negligible component positive.
pub fn spectrum(matrix: &OperatorMatrix) -> Result<SpectrumResult> {
    if matrix.basis != Basis::EHat {
        return Err(Error::InvalidParameter("spectrum expects an ê-basis matrix".into()));
    }
    let asymmetry = matrix.asymmetry();
    let scale = matrix.entries.abs().max().max(1.0);
    if asymmetry > 1e-10 * scale {
        return Err(Error::InvalidParameter(format!(
            "{} is not symmetric (asymmetry {asymmetry:e})",
            matrix.kind
        )));
    }
    let a = (&matrix.entries + matrix.entries.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(a.clone(), 1e-15, 100_000)
        .ok_or_else(|| Error::EigenSolver(format!("{} did not converge", matrix.kind)))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut eigenvalues = Vec::with_capacity(order.len());
    let mut eigenvectors = Vec::with_capacity(order.len());
    let mut residuals = Vec::with_capacity(order.len());
    for i in order {
        let lambda = eig.eigenvalues[i];
        let mut v: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        let big = v.amax();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * big) {
            if *first < 0.0 {
                v = -v;
            }
        }
        let norm = v.norm();
        residuals.push((&a * &v - &v * lambda).norm() / norm);
        eigenvalues.push(lambda);
        eigenvectors.push(CoefficientVector::new(
            matrix.params.clone(),
            Basis::EHat,
            v.iter().copied().collect(),
        ));
    }
    Ok(SpectrumResult {
        kind: matrix.kind,
        q: matrix.params.q,
        k: matrix.dim(),
        eigenvalues,
        eigenvectors,
        residuals,
        asymmetry,
    })
}

/// Largest singular value.
pub fn spectral_norm(matrix: &OperatorMatrix) -> Result<f64> {
    let sv = matrix
        .entries
        .clone()
        .try_svd(false, false, 1e-15, 100_000)
        .ok_or_else(|| Error::EigenSolver("SVD did not converge".into()))?
        .singular_values;
    Ok(sv.max())
}
