use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{binomial_rational, int};

/// Exact terminating `₂F₁(-n, b; c; z) = Σ_{j<=n} (-n)_j (b)_j / ((c)_j j!) z^j`.
pub fn hyp2f1_terminating(
    n: u64,
    b: &BigRational,
    c: &BigRational,
    z: &BigRational,
) -> Result<BigRational> {
    let mut total = BigRational::one();
    let mut term = BigRational::one();
    for j in 0..n {
        let jr = BigRational::from_integer(BigInt::from(j));
        let cj = c + &jr;
        if cj.is_zero() {
            return Err(Error::Pole(format!("2F1 lower parameter c = {c} with n = {n}")));
        }
        let a = BigRational::from_integer(BigInt::from(j) - BigInt::from(n));
        term = term * a * (b + &jr) * z / (cj * (jr + BigRational::one()));
        total += &term;
    }
    Ok(total)
}

/// `P_n^{(p,0)}(0) = (-2)^{-n} Σ_k (-1)^k C(n+p, k) C(n, k)` exactly.
pub fn jacobi_p0_at_zero_exact(n: u64, p: &BigRational) -> BigRational {
    let top = p + int(n as i64);
    let nn = int(n as i64);
    let mut total = BigRational::zero();
    for k in 0..=n {
        let term = binomial_rational(&top, k) * binomial_rational(&nn, k);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let scale = BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32));
    if n % 2 == 1 {
        -total * scale
    } else {
        total * scale
    }
}

/// Floating-point [`jacobi_p0_at_zero_exact`] for real `p`.
pub fn jacobi_p0_at_zero(n: u64, p: f64) -> f64 {
    use super::gamma::binomial_real;
    let mut total = 0.0;
    for k in 0..=n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binomial_real(n as f64 + p, k) * binomial_real(n as f64, k);
    }
    total * (-0.5f64).powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn examples() {
        let two = rat(2, 1);
        assert_eq!(hyp2f1_terminating(1, &rat(1, 1), &rat(2, 1), &two).unwrap(), rat(0, 1));
        assert_eq!(hyp2f1_terminating(2, &rat(1, 1), &rat(2, 1), &two).unwrap(), rat(1, 3));
        assert_eq!(hyp2f1_terminating(0, &rat(5, 1), &rat(0, 1), &two).unwrap(), rat(1, 1));
        assert!(hyp2f1_terminating(3, &rat(1, 1), &rat(-1, 1), &two).is_err());
        // c = -n is allowed: the sum stops before the vanishing factor
        assert!(hyp2f1_terminating(2, &rat(1, 1), &rat(-2, 1), &two).is_ok());
    }

    #[test]
    fn jacobi_values() {
        assert_eq!(jacobi_p0_at_zero_exact(0, &rat(3, 2)), rat(1, 1));
        assert_eq!(jacobi_p0_at_zero_exact(1, &rat(1, 1)), rat(1, 2));
        assert!((jacobi_p0_at_zero(1, 1.0) - 0.5).abs() < 1e-16);
        for n in 0..=8u64 {
            // C(n+p, n) 2F1(-n, n+2q; 2q; 1/2) with p = 1, 2q = 2
            let route = binomial_rational(&rat(n as i64 + 1, 1), n)
                * hyp2f1_terminating(n, &rat(n as i64 + 2, 1), &rat(2, 1), &rat(1, 2)).unwrap();
            assert_eq!(route, jacobi_p0_at_zero_exact(n, &rat(1, 1)), "n={n}");
        }
    }
}
