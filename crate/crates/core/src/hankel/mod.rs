//! Hankel transforms `J`, `J̃`, `K` and their self-reciprocal families.

mod checks;
mod families;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special_functions::{bessel_j_scaled, gauss_laguerre_cached};

pub use checks::{
    biorthogonality_defect, change_of_variable_defect, expansion_identity_defect,
    mellin_symmetry_check, ode_residual, phibar_exact, reciprocity_residual, ResidualReport,
};
pub use families::{family_eval, FamilyKind, ReciprocalFamily};

/// Default number of Gauss–Laguerre nodes for one transform evaluation.
pub const DEFAULT_NODES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HankelKind {
    /// `∫ J_p(2√(st)) (s/t)^{p/2} φ(s) ds`
    J,
    /// `∫ J_p(2√(st)) (t/s)^{p/2} ψ(s) ds`
    JTilde,
    /// `∫ J_p(st) √(st) ϕ(s) ds`
    K,
}

impl HankelKind {
    pub fn parse(s: &str) -> Result<HankelKind> {
        match s.to_ascii_lowercase().as_str() {
            "j" => Ok(HankelKind::J),
            "jtilde" | "jt" => Ok(HankelKind::JTilde),
            "k" => Ok(HankelKind::K),
            other => Err(Error::Parse(format!("unknown transform `{other}`"))),
        }
    }
}

impl fmt::Display for HankelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HankelKind::J => "J",
            HankelKind::JTilde => "Jtilde",
            HankelKind::K => "K",
        })
    }
}

/// Decay profile of the input, used to pick the quadrature substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// `φ(s) ~ e^{-rate·s}`
    Exponential(f64),
    /// `φ(s) ~ e^{-rate·s²}`
    Gaussian(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HankelTransform {
    pub kind: HankelKind,
    pub p: f64,
}

impl HankelTransform {
    pub fn new(kind: HankelKind, p: f64) -> Result<Self> {
        if !(p > -1.0) || !p.is_finite() {
            return Err(Error::domain(p, "p > -1"));
        }
        Ok(HankelTransform { kind, p })
    }

    /// Decay assumed by [`hankel_apply`]: exponential for `J`, `J̃` and
    /// Gaussian (`e^{-s²/2}`) for `K`.
    pub fn default_decay(&self) -> Decay {
        match self.kind {
            HankelKind::J | HankelKind::JTilde => Decay::Exponential(1.0),
            HankelKind::K => Decay::Gaussian(0.5),
        }
    }

    /// Kernel times the integrand, written so that no `t^{-p}` factor appears.
    fn integrand<F: Fn(f64) -> f64 + ?Sized>(&self, f: &F, s: f64, t: f64) -> f64 {
        let p = self.p;
        match self.kind {
            HankelKind::J => 2f64.powf(p) * bessel_j_scaled(p, 2.0 * (s * t).sqrt()) * s.powf(p) * f(s),
            HankelKind::JTilde => 2f64.powf(p) * bessel_j_scaled(p, 2.0 * (s * t).sqrt()) * t.powf(p) * f(s),
            HankelKind::K => {
                let st = s * t;
                bessel_j_scaled(p, st) * st.powf(p + 0.5) * f(s)
            }
        }
    }
}

/// `T f(t)` with the default decay and node count.
pub fn hankel_apply<F: Fn(f64) -> f64 + ?Sized>(tr: &HankelTransform, f: &F, t: f64) -> Result<f64> {
    hankel_apply_with(tr, f, t, tr.default_decay(), DEFAULT_NODES)
}

/// `T f(t)` by generalised Gauss–Laguerre quadrature at `α = p` after the
/// substitution matching `decay`.
///
/// Returns [`Error::SlowDecay`] when the outer quarter of the nodes carries a
/// visible share of the sum, which flags inputs that decay too slowly.
pub fn hankel_apply_with<F: Fn(f64) -> f64 + ?Sized>(
    tr: &HankelTransform,
    f: &F,
    t: f64,
    decay: Decay,
    nodes: usize,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(t, "t > 0"));
    }
    let rule = gauss_laguerre_cached(tr.p, nodes)?;
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut tail = 0.0;
    let cut = 3 * rule.len() / 4;
    for i in 0..rule.len() {
        let u = rule.nodes[i];
        let (s, jac) = match decay {
            Decay::Exponential(r) => (u / r, 1.0 / r),
            Decay::Gaussian(c) => {
                let s = (u / c).sqrt();
                (s, 1.0 / (2.0 * (c * u).sqrt()))
            }
        };
        let w = rule.scaled_weight(i);
        let term = w * jac * tr.integrand(f, s, t);
        if !term.is_finite() {
            return Err(Error::SlowDecay(format!("non-finite integrand at s = {s}")));
        }
        total += term;
        abs_total += term.abs();
        if i >= cut {
            tail += term.abs();
        }
    }
    if tail > 1e-6 * abs_total.max(f64::MIN_POSITIVE) {
        return Err(Error::SlowDecay(format!(
            "{:.1e} of the absolute sum comes from s >= {:.1}",
            tail / abs_total,
            rule.nodes[cut]
        )));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_is_fixed_by_j() {
        for p in [0.0, 1.0, 2.5] {
            let tr = HankelTransform::new(HankelKind::J, p).unwrap();
            for t in [0.3, 1.0, 4.0] {
                let v = hankel_apply(&tr, &|s: f64| (-s).exp(), t).unwrap();
                assert!((v - (-t).exp()).abs() < 1e-7, "p={p} t={t}");
            }
        }
    }

    #[test]
    fn scaling_pair() {
        // a^q e^{-as} maps to a^{-q} e^{-t/a}; q = 1 with a = 2
        let tr = HankelTransform::new(HankelKind::J, 1.0).unwrap();
        let a = 2.0;
        let v = hankel_apply_with(&tr, &|s: f64| a * (-a * s).exp(), 1.0, Decay::Exponential(a), 200)
            .unwrap();
        assert!((v - (-0.5f64).exp() / 2.0).abs() < 1e-7);
    }

    #[test]
    fn slow_decay_flagged() {
        let tr = HankelTransform::new(HankelKind::J, 1.0).unwrap();
        let r = hankel_apply(&tr, &|s: f64| 1.0 / (1.0 + s), 1.0);
        assert!(matches!(r, Err(Error::SlowDecay(_))));
        assert!(HankelTransform::new(HankelKind::K, -1.0).is_err());
    }
}
