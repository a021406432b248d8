use serde::Serialize;

use super::{Decay, HankelKind, HankelTransform};
use crate::error::{Error, Result};
use crate::laguerre_space::phi_norm;
use crate::special_functions::{laguerre, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// `φ_n(t) = sqrt(2^{p+1} n!/Γ(n+p+1)) e^{-t} L_n^p(2t)`
    Phi,
    /// `ψ_n = t^p φ_n`
    Psi,
    /// `ϕ_n(t) = sqrt(2 n!/Γ(n+p+1)) e^{-t²/2} t^{p+1/2} L_n^p(t²)`
    SmallPhi,
    /// `h_n^+ = e^{-t}(L_n^p + t^n/n!)`
    HPlus,
    /// `h_n^- = e^{-t}(L_n^p - t^n/n!)`
    HMinus,
}

impl FamilyKind {
    pub fn parse(s: &str) -> Result<FamilyKind> {
        match s.to_ascii_lowercase().as_str() {
            "phi" => Ok(FamilyKind::Phi),
            "psi" => Ok(FamilyKind::Psi),
            "smallphi" | "varphi" => Ok(FamilyKind::SmallPhi),
            "h+" | "hplus" => Ok(FamilyKind::HPlus),
            "h-" | "hminus" => Ok(FamilyKind::HMinus),
            other => Err(Error::Parse(format!("unknown family `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Phi => "phi",
            FamilyKind::Psi => "psi",
            FamilyKind::SmallPhi => "smallphi",
            FamilyKind::HPlus => "hplus",
            FamilyKind::HMinus => "hminus",
        }
    }

    /// Transform under which the family is self-reciprocal.
    pub fn transform(self) -> HankelKind {
        match self {
            FamilyKind::Phi | FamilyKind::HPlus | FamilyKind::HMinus => HankelKind::J,
            FamilyKind::Psi => HankelKind::JTilde,
            FamilyKind::SmallPhi => HankelKind::K,
        }
    }

    /// Eigenvalue of member `n` under [`FamilyKind::transform`].
    pub fn sign(self, n: usize) -> f64 {
        match self {
            FamilyKind::HPlus => 1.0,
            FamilyKind::HMinus => -1.0,
            _ if n % 2 == 0 => 1.0,
            _ => -1.0,
        }
    }

    pub fn decay(self) -> Decay {
        match self {
            FamilyKind::SmallPhi => Decay::Gaussian(0.5),
            _ => Decay::Exponential(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReciprocalFamily {
    pub kind: FamilyKind,
    pub p: f64,
    pub n: usize,
}

impl ReciprocalFamily {
    pub fn new(kind: FamilyKind, p: f64, n: usize) -> Result<Self> {
        if !(p > -1.0) || !p.is_finite() {
            return Err(Error::domain(p, "p > -1"));
        }
        Ok(ReciprocalFamily { kind, p, n })
    }

    pub fn transform(&self) -> HankelTransform {
        HankelTransform { kind: self.kind.transform(), p: self.p }
    }

    pub fn eval(&self, t: f64) -> f64 {
        family_eval(self, t)
    }
}

fn small_phi_norm(p: f64, n: usize) -> f64 {
    let ln = std::f64::consts::LN_2 + ln_gamma(n as f64 + 1.0).expect("n >= 0")
        - ln_gamma(n as f64 + p + 1.0).expect("p > -1");
    (0.5 * ln).exp()
}

/// Pointwise value of a family member at `t > 0`.
pub fn family_eval(fam: &ReciprocalFamily, t: f64) -> f64 {
    let (p, n) = (fam.p, fam.n);
    match fam.kind {
        FamilyKind::Phi => phi_norm(p, n) * (-t).exp() * laguerre(n, p, 2.0 * t),
        FamilyKind::Psi => t.powf(p) * phi_norm(p, n) * (-t).exp() * laguerre(n, p, 2.0 * t),
        FamilyKind::SmallPhi => {
            small_phi_norm(p, n) * (-t * t / 2.0).exp() * t.powf(p + 0.5) * laguerre(n, p, t * t)
        }
        FamilyKind::HPlus | FamilyKind::HMinus => {
            let mono = (n as f64 * t.ln() - ln_gamma(n as f64 + 1.0).expect("n >= 0")).exp();
            let mono = if t == 0.0 { if n == 0 { 1.0 } else { 0.0 } } else { mono };
            let s = if fam.kind == FamilyKind::HPlus { 1.0 } else { -1.0 };
            (-t).exp() * (laguerre(n, p, t) + s * mono)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f = ReciprocalFamily::new(FamilyKind::Phi, 1.0, 0).unwrap();
        assert!((f.eval(1.0) - 2.0 / std::f64::consts::E).abs() < 1e-15);
        let g = ReciprocalFamily::new(FamilyKind::Psi, 1.0, 0).unwrap();
        assert!((g.eval(2.0) - 2.0 * f.eval(2.0)).abs() < 1e-15);
        assert_eq!(ReciprocalFamily::new(FamilyKind::HMinus, 1.0, 0).unwrap().eval(0.7), 0.0);
    }
}
