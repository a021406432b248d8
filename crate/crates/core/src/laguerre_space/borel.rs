use nalgebra::Complex;
use serde::Serialize;

use super::{basis_change, Basis, CoefficientVector, SpaceParams};
use crate::error::{Error, Result};
use crate::special_functions::{binomial_real, gauss_laguerre_cached, ln_gamma, pochhammer};

type C64 = Complex<f64>;

/// Function families with closed-form Borel images.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `e_n = L_n^p`
    E,
    /// `f_n = t^n / n!`
    F,
    /// `h_n^+ = e^{-t}(e_n + f_n)`
    HPlus,
    /// `h_n^- = e^{-t}(e_n - f_n)`
    HMinus,
    /// normalised `φ_n = sqrt(2^{p+1} n!/Γ(n+p+1)) e^{-t} L_n^p(2t)`
    Phi,
}

impl Family {
    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "e" => Ok(Family::E),
            "f" => Ok(Family::F),
            "h+" | "hplus" => Ok(Family::HPlus),
            "h-" | "hminus" => Ok(Family::HMinus),
            "phi" => Ok(Family::Phi),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }
}

/// Normalisation `sqrt(2^{p+1} n! / Γ(n+p+1))` of `φ_n`.
pub(crate) fn phi_norm(p: f64, n: usize) -> f64 {
    let ln = (p + 1.0) * std::f64::consts::LN_2 + ln_gamma(n as f64 + 1.0).expect("n >= 0")
        - ln_gamma(n as f64 + p + 1.0).expect("p > -1");
    (0.5 * ln).exp()
}

fn in_domain(x: C64) -> bool {
    (x - C64::new(1.0, 0.0)).norm() < 1.0 || (x.im == 0.0 && x.re > 0.0)
}

/// `B_q` of a family member at complex `x` in the disk `|x - 1| < 1` or on
/// the positive axis.
pub fn borel_closed_form_complex(
    params: &SpaceParams,
    family: Family,
    n: usize,
    x: C64,
) -> Result<C64> {
    if !in_domain(x) {
        return Err(Error::domain(x, "|x - 1| < 1 or x > 0"));
    }
    let poch = pochhammer(n as f64 + 1.0, params.p)?;
    let one = C64::new(1.0, 0.0);
    let xn = x.powu(n as u32);
    let denom = || ((one + x).ln() * (n as f64 + 2.0 * params.q)).exp();
    let v = match family {
        Family::E => (one - x).powu(n as u32) * poch,
        Family::F => xn * poch,
        Family::HPlus => (one + xn) / denom() * poch,
        Family::HMinus => (one - xn) / denom() * poch,
        Family::Phi => (one - x).powu(n as u32) / denom() * (poch * phi_norm(params.p, n)),
    };
    Ok(v)
}

/// Real-argument [`borel_closed_form_complex`].
pub fn borel_closed_form(params: &SpaceParams, family: Family, n: usize, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(x, "|x - 1| < 1 or x > 0"));
    }
    Ok(borel_closed_form_complex(params, family, n, C64::new(x, 0.0))?.re)
}

/// Coefficient vector of a family member.
pub fn family_vector(params: &SpaceParams, family: Family, n: usize) -> CoefficientVector {
    match family {
        Family::E => CoefficientVector::unit(params.clone(), Basis::E, n),
        Family::F => CoefficientVector::unit(params.clone(), Basis::F, n),
        Family::HPlus | Family::HMinus => {
            let sign = if family == Family::HPlus { 1.0 } else { -1.0 };
            let a = basis_change(params, n);
            let mut c: Vec<f64> = a.entries[n].iter().map(|v| sign * v).collect();
            c[n] += 1.0;
            CoefficientVector::new(params.clone(), Basis::E, c).damped()
        }
        Family::Phi => {
            let norm = phi_norm(params.p, n);
            let d = (0..=n)
                .map(|m| {
                    norm * binomial_real(n as f64 + params.p, (n - m) as u64) * (-2f64).powi(m as i32)
                })
                .collect();
            CoefficientVector::new(params.clone(), Basis::F, d).damped()
        }
    }
}

/// Numerical `B_q[φ](x)` for real `x > 0` from `B_q[φ](x) = ∫ s^p e^{-s} φ(sx) ds`.
///
/// This form avoids the factor `e^{t(1 - 1/x)}` of the defining integral,
/// which grows without bound once `x >= 2`. For damped vectors the extra
/// `e^{-sx}` is folded into the weight by `u = s(1+x)`, so polynomial inputs
/// of either kind are integrated exactly by the Gauss rule.
pub fn borel_numeric(phi: &CoefficientVector, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(x, "x > 0"));
    }
    let p = phi.params.p;
    let count = phi.len() + 32;
    let rule = gauss_laguerre_cached(p, count)?;
    if phi.damped {
        let poly = CoefficientVector { damped: false, ..phi.clone() };
        let r = x / (1.0 + x);
        let scale = (-(p + 1.0) * (1.0 + x).ln()).exp();
        Ok(scale * rule.integrate(|u| poly.evaluate(u * r)))
    } else {
        Ok(rule.integrate(|s| phi.evaluate(s * x)))
    }
}

/// `B_q[φ](x)` for an arbitrary evaluable `φ` with a `count`-node rule.
pub fn borel_numeric_fn<F: Fn(f64) -> f64>(
    params: &SpaceParams,
    phi: F,
    x: f64,
    count: usize,
) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(x, "x > 0"));
    }
    let rule = gauss_laguerre_cached(params.p, count)?;
    let v = rule.integrate(|s| phi(s * x));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::SlowDecay(format!("B_q integrand not integrable at x = {x}")))
    }
}

/// `(J_q f)(x) = x^{-2q} f(1/x)`.
pub fn jq_apply<F: Fn(f64) -> f64 + ?Sized>(f: &F, q: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(x, "x > 0"));
    }
    Ok((-2.0 * q * x.ln()).exp() * f(1.0 / x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(q: f64) -> SpaceParams {
        SpaceParams::new(q, 16).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let p = s(1.0);
        assert!((borel_closed_form(&p, Family::F, 0, 0.37).unwrap() - 1.0).abs() < 1e-15);
        assert!((borel_closed_form(&p, Family::E, 1, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((borel_closed_form(&p, Family::HPlus, 0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(borel_closed_form(&p, Family::E, 1, -0.5).is_err());
        let z = borel_closed_form_complex(&p, Family::F, 1, C64::new(1.0, 0.5)).unwrap();
        assert!((z - C64::new(2.0, 1.0)).norm() < 1e-14);
        assert!(borel_closed_form_complex(&p, Family::F, 1, C64::new(1.0, 1.5)).is_err());
    }

    #[test]
    fn numeric_examples() {
        let p = s(1.0);
        let e1 = family_vector(&p, Family::E, 1);
        assert!((borel_numeric(&e1, 0.5).unwrap() - 1.0).abs() < 1e-8);
        let f2 = family_vector(&p, Family::F, 2);
        assert!((borel_numeric(&f2, 0.3).unwrap() - 0.27).abs() < 1e-8);
        let hm = family_vector(&p, Family::HMinus, 1);
        assert!(borel_numeric(&hm, 1.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn numeric_matches_closed_forms() {
        for q in [0.5, 1.0, 1.75] {
            let p = s(q);
            for family in [Family::E, Family::F, Family::HPlus, Family::HMinus, Family::Phi] {
                for n in 0..=15 {
                    let v = family_vector(&p, family, n);
                    for x in [0.1, 0.5, 1.0, 1.5] {
                        let exact = borel_closed_form(&p, family, n, x).unwrap();
                        let num = borel_numeric(&v, x).unwrap();
                        // cancellation scale: the same transform with all monomial
                        // coefficients made nonnegative
                        let mut abs = v.convert(Basis::F);
                        abs.coeffs.iter_mut().for_each(|c| *c = c.abs());
                        let scale = exact.abs().max(borel_numeric(&abs, x).unwrap());
                        assert!(
                            (num - exact).abs() <= 1e-8 * scale,
                            "{family:?} q={q} n={n} x={x}: {num} vs {exact}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn involution() {
        let p = s(1.0);
        let h0 = |x: f64| borel_closed_form(&p, Family::HPlus, 0, x).unwrap();
        assert!((jq_apply(&h0, 1.0, 3.0).unwrap() - 0.125).abs() < 1e-15);
        assert!((h0(3.0) - 0.125).abs() < 1e-15);
        let phi1 = |x: f64| borel_closed_form(&p, Family::Phi, 1, x).unwrap();
        assert!((jq_apply(&phi1, 1.0, 2.0).unwrap() + phi1(2.0)).abs() < 1e-14);
        let one = |_: f64| 1.0;
        assert_eq!(jq_apply(&one, 1.0, 2.0).unwrap(), 0.25);
        let g = |x: f64| (x + 0.3).sin() / (1.0 + x * x);
        for x in [0.2, 1.0, 4.5] {
            let once = |y: f64| jq_apply(&g, 1.3, y).unwrap();
            let twice = jq_apply(&once, 1.3, x).unwrap();
            assert!((twice - g(x)).abs() < 1e-12);
        }
    }
}
