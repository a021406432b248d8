//! Exact Farey-map dynamics: the map itself, continued fractions, Farey
//! levels, the Stern–Brocot tree, iterates of the signed transfer operators
//! and the Knauf partition function.

mod farey;
mod partition;
mod tree;

pub use farey::{
    farey_sequence, farey_sequence_capped, inverse_branch_preimages, FareyLevel, Fraction,
    DEFAULT_LEVEL_CAP,
};
pub use partition::{
    growth_rate_estimate, growth_rate_estimate_with, knauf_partition, knauf_partition_exact, knauf_partition_with,
    level_sums, GrowthEstimate,
};
pub use tree::{stern_brocot_level, transfer_iterate, IterateMode, SternBrocotLevel, TreeNode};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Sign selecting `P^+` or `P^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The Farey map: `x/(1-x)` on `[0, 1/2]`, `(1-x)/x` on `[1/2, 1]`.
pub fn farey_map(x: &BigRational) -> Result<BigRational> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(Error::domain(crate::rational::fmt_fraction(x), "[0, 1]"));
    }
    let one = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    if x <= &half {
        Ok(x / (&one - x))
    } else {
        Ok((&one - x) / x)
    }
}

/// Continued-fraction digits `[a_1, ..., a_k]` of a number in `[0, 1)`.
///
/// The canonical form has `a_k > 1` whenever `k > 1`; the empty sequence
/// encodes 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    digits: Vec<u64>,
}

impl ContinuedFraction {
    /// Builds from digits, rejecting zeros; a trailing `1` is folded into
    /// the previous digit so the result is canonical.
    pub fn new(mut digits: Vec<u64>) -> Result<Self> {
        if digits.iter().any(|&d| d == 0) {
            return Err(Error::InvalidParameter(
                "continued-fraction digits must be positive".into(),
            ));
        }
        if digits.len() > 1 && *digits.last().unwrap() == 1 {
            digits.pop();
            *digits.last_mut().unwrap() += 1;
        }
        Ok(ContinuedFraction { digits })
    }

    /// Euclidean expansion of `x` in `(0, 1)`.
    pub fn from_rational(x: &BigRational) -> Result<Self> {
        if !x.is_positive() || x >= &BigRational::one() {
            return Err(Error::domain(crate::rational::fmt_fraction(x), "(0, 1)"));
        }
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        let mut digits = Vec::new();
        // x = num/den < 1: a_1 = floor(den/num), continue with the remainder
        while !num.is_zero() {
            let (q, r) = den.div_rem(&num);
            let q = q
                .to_u64()
                .ok_or_else(|| Error::InvalidParameter("digit exceeds u64".into()))?;
            digits.push(q);
            den = num;
            num = r;
        }
        Ok(ContinuedFraction { digits })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    pub fn to_rational(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for &d in self.digits.iter().rev() {
            acc = (BigRational::from_integer(BigInt::from(d)) + acc).recip();
        }
        acc
    }

    /// Digit shift `[a_1, a_2, ...] -> [a_1 - 1, a_2, ...]`, with a leading
    /// zero dropped. This is how the Farey map acts on expansions.
    pub fn shift(&self) -> ContinuedFraction {
        let mut digits = self.digits.clone();
        if digits.is_empty() {
            return ContinuedFraction { digits };
        }
        digits[0] -= 1;
        if digits[0] == 0 {
            digits.remove(0);
        }
        ContinuedFraction { digits }
    }
}

/// Canonical continued fraction of `x` in `(0, 1)`.
pub fn to_continued_fraction(x: &BigRational) -> Result<ContinuedFraction> {
    ContinuedFraction::from_rational(x)
}

pub fn from_continued_fraction(cf: &ContinuedFraction) -> BigRational {
    cf.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn map_examples() {
        assert_eq!(farey_map(&rat(0, 1)).unwrap(), rat(0, 1));
        assert_eq!(farey_map(&rat(2, 5)).unwrap(), rat(2, 3));
        assert_eq!(farey_map(&rat(3, 4)).unwrap(), rat(1, 3));
        assert_eq!(farey_map(&rat(1, 2)).unwrap(), rat(1, 1));
        assert_eq!(farey_map(&rat(1, 1)).unwrap(), rat(0, 1));
        assert!(farey_map(&rat(5, 4)).is_err());
        assert!(farey_map(&rat(-1, 4)).is_err());
    }

    #[test]
    fn continued_fraction_examples() {
        let cf = to_continued_fraction(&rat(2, 5)).unwrap();
        assert_eq!(cf.digits(), &[2, 2]);
        assert_eq!(to_continued_fraction(&rat(1, 2)).unwrap().digits(), &[2]);
        let image = to_continued_fraction(&farey_map(&rat(2, 5)).unwrap()).unwrap();
        assert_eq!(image.digits(), &[1, 2]);
        assert_eq!(image, cf.shift());
        assert!(to_continued_fraction(&rat(1, 1)).is_err());
        assert!(to_continued_fraction(&rat(0, 1)).is_err());
    }

    #[test]
    fn non_canonical_input_is_normalised() {
        let cf = ContinuedFraction::new(vec![2, 1]).unwrap();
        assert_eq!(cf.digits(), &[3]);
        assert_eq!(cf.to_rational(), rat(1, 3));
        assert!(ContinuedFraction::new(vec![2, 0]).is_err());
    }

    #[test]
    fn shift_commutes_with_map_on_small_fractions() {
        for b in 2..40i64 {
            for a in 1..b {
                if num_integer::gcd(a, b) != 1 {
                    continue;
                }
                let x = rat(a, b);
                let cf = to_continued_fraction(&x).unwrap();
                assert_eq!(from_continued_fraction(&cf), x);
                let shifted = cf.shift().to_rational();
                assert_eq!(farey_map(&x).unwrap(), shifted, "x = {a}/{b}");
            }
        }
    }
}
