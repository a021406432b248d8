use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, fmt_fraction};
use crate::special_functions::ln_gamma;

/// `(q, p = 2q - 1, K)`; fixes the space `L²(m_q)` and its truncations.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceParams {
    pub q: f64,
    pub p: f64,
    pub k: usize,
    q_exact: Option<BigRational>,
}

#[derive(Serialize)]
struct ParamsView<'a> {
    q: f64,
    p: f64,
    k: usize,
    q_exact: Option<&'a str>,
}

impl Serialize for SpaceParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.q_exact.as_ref().map(fmt_fraction);
        ParamsView {
            q: self.q,
            p: self.p,
            k: self.k,
            q_exact: exact.as_deref(),
        }
        .serialize(s)
    }
}

impl SpaceParams {
    /// Real `q`; an exact value is attached when `q` is within `1e-12` of a
    /// fraction with denominator at most 64 (for instance `0.5`, `1.5`, `2`).
    pub fn new(q: f64, k: usize) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::domain(q, "q > 0"));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("truncation K must be >= 1".into()));
        }
        let q_exact = rational::detect_rational(q, 64);
        Ok(SpaceParams { q, p: 2.0 * q - 1.0, k, q_exact })
    }

    pub fn exact(q: BigRational, k: usize) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::domain(fmt_fraction(&q), "q > 0"));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("truncation K must be >= 1".into()));
        }
        let qf = rational::to_f64(&q);
        Ok(SpaceParams { q: qf, p: 2.0 * qf - 1.0, k, q_exact: Some(q) })
    }

    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("truncation K must be >= 1".into()));
        }
        Ok(SpaceParams { k, ..self.clone() })
    }

    pub fn q_exact(&self) -> Option<&BigRational> {
        self.q_exact.as_ref()
    }

    /// `p = 2q - 1` as a rational when `q` is known exactly.
    pub fn p_exact(&self) -> Option<BigRational> {
        self.q_exact
            .as_ref()
            .map(|q| q * BigRational::from_integer(BigInt::from(2)) - BigRational::one())
    }

    /// `2q` when it is a positive integer; enables exact Gram matrices.
    pub fn two_q_integer(&self) -> Option<u64> {
        let two_q = self.q_exact.as_ref()? * BigRational::from_integer(BigInt::from(2));
        if two_q.is_integer() {
            two_q.to_integer().to_u64()
        } else {
            None
        }
    }

    /// `ln ||e_n||² = ln Γ(n + 2q) - ln n!`.
    pub fn ln_e_norm_sq(&self, n: usize) -> f64 {
        ln_gamma(n as f64 + 2.0 * self.q).expect("q > 0") - ln_gamma(n as f64 + 1.0).expect("n >= 0")
    }

    pub fn e_norm(&self, n: usize) -> f64 {
        (0.5 * self.ln_e_norm_sq(n)).exp()
    }

    /// Total mass `Γ(2q)` of `m_q`.
    pub fn mass(&self) -> f64 {
        ln_gamma(2.0 * self.q).expect("q > 0").exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn construction() {
        let s = SpaceParams::new(1.0, 8).unwrap();
        assert_eq!(s.p, 1.0);
        assert_eq!(s.two_q_integer(), Some(2));
        assert_eq!(s.p_exact(), Some(rat(1, 1)));
        let h = SpaceParams::new(0.5, 3).unwrap();
        assert_eq!(h.two_q_integer(), Some(1));
        let r = SpaceParams::exact(rat(3, 4), 3).unwrap();
        assert_eq!(r.two_q_integer(), None);
        assert_eq!(r.p_exact(), Some(rat(1, 2)));
        assert!(SpaceParams::new(0.0, 3).is_err());
        assert!(SpaceParams::new(1.0, 0).is_err());
        assert!((SpaceParams::new(2.0, 1).unwrap().e_norm(1) - 24f64.sqrt()).abs() < 1e-12);
    }
}
