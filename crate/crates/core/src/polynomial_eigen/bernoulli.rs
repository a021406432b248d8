use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{factorial, int, powi, rat, to_f64};
use crate::report::Check;
use crate::special_functions::bernoulli_and_zeta;

/// Finite sum of integer powers of `x` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPolynomial {
    pub terms: BTreeMap<i64, BigRational>,
}

impl LaurentPolynomial {
    pub fn add_term(&mut self, n: i64, c: BigRational) {
        let e = self.terms.entry(n).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&n);
        }
    }

    pub fn coefficient(&self, n: i64) -> BigRational {
        self.terms.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.terms.iter().map(|(n, c)| c * powi(x, *n)).sum()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.terms.iter().map(|(n, c)| to_f64(c) * x.powi(*n as i32)).sum()
    }

    /// Exponent range `(min, max)`.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (n, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = match n {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{n}"),
            };
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "({a}){mono}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernoulliEigen {
    pub k: usize,
    /// Human-readable form.
    pub display: String,
    /// `(exponent, coefficient)` pairs.
    pub coefficients: Vec<(i64, String)>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub poly: LaurentPolynomial,
}

/// `f_k(x) = ζ(-k)/2 (1 + x^k) + (-1)^k k! Σ_{n=-1}^{k+1} B_{n+1} B_{k+1-n}
/// x^n / ((n+1)! (k+1-n)!)`, fixed by `P^+_{-k/2}` for even `k` and zero for
/// odd `k`.
pub fn bernoulli_eigenfunction(k: usize) -> BernoulliEigen {
    let (b, _) = bernoulli_and_zeta(k + 2);
    let mut poly = LaurentPolynomial::default();
    let z = b.zeta_negative(k) / int(2);
    poly.add_term(0, z.clone());
    poly.add_term(k as i64, z);
    let pre = BigRational::from_integer(factorial(k as u64)) * if k % 2 == 0 { int(1) } else { int(-1) };
    for n in -1..=(k as i64 + 1) {
        let i = (n + 1) as usize;
        let j = (k as i64 + 1 - n) as usize;
        let c = b.get(i) * b.get(j)
            / BigRational::from_integer(factorial(i as u64) * factorial(j as u64));
        poly.add_term(n, &pre * c);
    }
    let mut checks = Vec::new();
    if k % 2 == 1 {
        checks.push(Check::boolean("odd-k-vanishes", poly.is_zero(), format!("f_{k} ≡ 0")));
    } else {
        let one = BigRational::one();
        let mut three_term = true;
        let mut transfer = true;
        for x in [int(1), int(2), int(3), rat(1, 2)] {
            let xk: BigRational = num_traits::pow(x.clone(), k);
            let lhs = poly.eval(&x) - poly.eval(&(&x + &one));
            let rhs = &xk * poly.eval(&(&one + x.recip()));
            three_term &= lhs == rhs;
            // P^+ f(x) = (1+x)^k [f(x/(1+x)) + f(1/(1+x))] at q = -k/2
            let y = &one + &x;
            let pf = num_traits::pow(y.clone(), k) * (poly.eval(&(&x / &y)) + poly.eval(&y.recip()));
            transfer &= pf == poly.eval(&x);
        }
        checks.push(Check::boolean(
            "bernoulli-three-term-exact",
            three_term,
            "f(x) - f(x+1) = x^k f(1+1/x) at x = 1, 2, 3, 1/2",
        ));
        checks.push(Check::boolean(
            "bernoulli-fixed-point-exact",
            transfer,
            "P^+ f = f at x = 1, 2, 3, 1/2",
        ));
    }
    BernoulliEigen {
        k,
        display: poly.to_string(),
        coefficients: poly.terms.iter().map(|(n, c)| (*n, c.to_string())).collect(),
        checks,
        poly,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_examples() {
        let f0 = bernoulli_eigenfunction(0);
        assert_eq!(f0.poly.coefficient(1), rat(1, 12));
        assert_eq!(f0.poly.coefficient(-1), rat(1, 12));
        assert_eq!(f0.poly.coefficient(0), rat(-3, 12));
        assert_eq!(f0.poly.eval(&int(1)), rat(-1, 12));
        assert_eq!(f0.poly.eval(&rat(1, 2)) * int(2), rat(-1, 12));
        let f2 = bernoulli_eigenfunction(2);
        assert_eq!(f2.poly.coefficient(1), rat(5, 360));
        assert_eq!(f2.poly.coefficient(3), rat(-1, 360));
        assert_eq!(f2.poly.coefficient(-1), rat(-1, 360));
        assert_eq!(f2.poly.terms.len(), 3);
    }

    #[test]
    fn even_fixed_odd_zero() {
        for k in 0..=16 {
            let f = bernoulli_eigenfunction(k);
            assert!(f.checks.iter().all(|c| c.passed), "k={k}: {}", f.display);
        }
    }
}
