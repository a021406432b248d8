//! Exact rational arithmetic on arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Formats as `a/b`, also for integers (`1/1`, `0/1`).
pub fn fmt_fraction(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a/b` or a bare integer.
pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a fraction: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => {
            let a: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(a))
        }
    }
}

/// Converts to the nearest double, also when numerator and denominator
/// individually exceed the double range.
pub fn to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && n.abs() < 9.0e15 && d < 9.0e15 {
            return n / d;
        }
    }
    r.to_f64().unwrap_or_else(|| {
        // fall back to a scaled division
        let nb = r.numer().bits() as i64;
        let db = r.denom().bits() as i64;
        let shift = nb - db - 60;
        let (n, d) = if shift > 0 {
            (r.numer().clone(), r.denom().clone() << shift as usize)
        } else {
            (r.numer().clone() << (-shift) as usize, r.denom().clone())
        };
        let q = (n / d).to_f64().unwrap_or(f64::NAN);
        q * 2f64.powi(shift as i32)
    })
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact binomial coefficient C(n, k) for nonnegative integers.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Generalised binomial coefficient C(x, k) = x(x-1)...(x-k+1)/k! for rational x.
pub fn binomial_rational(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= x - int(i as i64);
        acc /= int(i as i64 + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Rising factorial (a)_j = a(a+1)...(a+j-1) for rational a.
pub fn rising(a: &BigRational, j: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..j {
        acc *= a + int(i as i64);
    }
    acc
}

/// Integer power of a rational, negative exponents allowed for nonzero bases.
pub fn powi(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Returns `Some(n)` when `x` is an integer.
pub fn as_integer(x: &BigRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Rational approximation with denominator dividing `max_denom`, when `x` is
/// within `1e-12` of such a value.
pub fn detect_rational(x: f64, max_denom: i64) -> Option<BigRational> {
    for d in 1..=max_denom {
        let n = (x * d as f64).round();
        if (n / d as f64 - x).abs() < 1e-12 && n.abs() < 1e15 {
            return Some(rat(n as i64, d));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let r = parse_fraction("6/-4").unwrap();
        assert_eq!(fmt_fraction(&r), "-3/2");
        let r = parse_fraction("7").unwrap();
        assert_eq!(fmt_fraction(&r), "7/1");
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial_rational(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial_rational(&int(6), 3), int(20));
    }

    #[test]
    fn huge_to_f64() {
        let big = BigRational::new(factorial(300), factorial(298));
        assert_eq!(to_f64(&big), 300.0 * 299.0);
    }
}
