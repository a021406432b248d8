//! The Hilbert space `L²(m_q)` with `m_q(dt) = t^p e^{-t} dt`, `p = 2q - 1`.
//!
//! Functions are represented by coefficient vectors in one of three bases:
//! the generalized Laguerre polynomials `e_n = L_n^p`, their orthonormal
//! rescaling `ê_n = e_n / ||e_n||`, or the monomials `f_n = t^n / n!`.

mod basis;
mod borel;
pub(crate) use borel::phi_norm;
mod params;

pub use basis::{
    basis_change, e_to_f_exact, inner_product, inner_product_exact, Basis, CoefficientVector, InnerKind,
    TriangularChangeOfBasis,
};
pub use borel::{
    borel_closed_form, borel_closed_form_complex, borel_numeric, borel_numeric_fn,
    family_vector, jq_apply, Family,
};
pub use params::SpaceParams;
