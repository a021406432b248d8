//! Gamma-function ratios, Laguerre polynomials, Bessel functions, Gauss
//! rules, terminating hypergeometric sums and Bernoulli numbers.

mod bernoulli;
mod bessel;
mod gamma;
mod hypergeometric;
mod laguerre;
mod quadrature;

pub use bernoulli::{bernoulli_and_zeta, BernoulliTable};
pub use bessel::{bessel_j, bessel_j_checked, bessel_j_scaled, BESSEL_VALIDATED_MAX};
pub use gamma::{binomial_real, gamma, ln_gamma, ln_gamma_signed, pochhammer};
pub use hypergeometric::{hyp2f1_terminating, jacobi_p0_at_zero, jacobi_p0_at_zero_exact};
pub use laguerre::{
    laguerre, laguerre_all, laguerre_exact, laguerre_functions, laguerre_orthonormal_all,
    laguerre_sum,
};
pub use quadrature::{gauss_laguerre, gauss_laguerre_cached, gauss_legendre, QuadratureRule};
