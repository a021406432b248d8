//! Dense univariate polynomials over ℚ, Sturm sequences and real-root
//! isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::{int, to_f64};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[BigInt]) -> Self {
        Poly::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.0.clone();
        let dn = d.degree();
        let lead = d.leading();
        if r.len() < d.0.len() {
            return (Poly::new(Vec::new()), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dn];
        for i in (0..q.len()).rev() {
            let c = &r[i + dn] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dn);
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factorisation `p = c Π g_m^m` (Yun). Returns the monic
    /// factors `(m, g_m)` of positive degree.
    pub fn square_free(&self) -> Vec<(usize, Poly)> {
        let mut out = Vec::new();
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = self.div_rem(&a0).0;
        let mut c = d.div_rem(&a0).0;
        let mut m = 1;
        loop {
            let dd = c.sub(&b.derivative());
            if b.degree() == 0 {
                break;
            }
            let a = b.gcd(&dd);
            if a.degree() > 0 {
                out.push((m, a.monic()));
            }
            b = b.div_rem(&a).0;
            c = dd.div_rem(&a).0;
            m += 1;
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(BigRational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut c = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Positive multiple with coprime integer coefficients.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.0.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| num_integer::gcd(acc, c.clone()));
        Poly::new(ints.into_iter().map(|c| BigRational::from_integer(c / &g)).collect())
    }

    /// Sign of the value at `x`, by homogeneous integer Horner evaluation
    /// when the coefficients are integers.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        if !self.0.iter().all(|c| c.is_integer()) {
            return self.eval(x).cmp(&BigRational::zero());
        }
        let (num, den) = (x.numer(), x.denom());
        let n = self.degree();
        let mut v = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Σ c_i num^i den^{n-i}, accumulated from the constant term up
        let mut num_pow = BigInt::one();
        let mut terms = Vec::with_capacity(n + 1);
        for c in &self.0 {
            terms.push(c.numer() * &num_pow);
            num_pow *= num;
        }
        for t in terms.iter().rev() {
            v += t * &den_pow;
            den_pow *= den;
        }
        v.sign().cmp_zero()
    }

    /// Cauchy bound: every root has modulus below it.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let m = self.0[..self.degree()]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }
}

/// Sturm chain `p, p', -rem(p, p'), ...`, each member rescaled by a positive
/// constant.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.primitive(), p.derivative().primitive()];
    while !chain.last().expect("nonempty").is_zero() && chain.last().expect("nonempty").degree() > 0 {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&int(-1)).primitive());
    }
    chain.retain(|q| !q.is_zero());
    chain
}

fn sign_changes<I: Iterator<Item = Ordering>>(signs: I) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign_of(x: &BigRational) -> Ordering {
    x.cmp(&BigRational::zero())
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

/// Sign changes of the chain at `x`.
pub fn variations_at(chain: &[Poly], x: &BigRational) -> usize {
    sign_changes(chain.iter().map(|p| p.sign_at(x)))
}

/// Sign changes at `±∞`.
pub fn variations_at_infinity(chain: &[Poly], positive: bool) -> usize {
    sign_changes(chain.iter().map(|p| {
        let s = sign_of(&p.leading());
        if !positive && p.degree() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }))
}

/// Number of distinct real roots of a square-free polynomial.
pub fn count_real_roots(p: &Poly) -> usize {
    let chain = sturm_chain(p);
    variations_at_infinity(&chain, false) - variations_at_infinity(&chain, true)
}

/// Disjoint isolating intervals `(lo, hi]` with one root of the square-free
/// `p` each, refined by exact bisection until `hi - lo <= rel·max(1, |lo|)`.
pub fn isolate_real_roots(p: &Poly, rel: f64) -> Vec<(BigRational, BigRational)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let b = p.root_bound();
    let mut stack = vec![(-b.clone(), b)];
    let mut found = Vec::new();
    let two = int(2);
    while let Some((lo, hi)) = stack.pop() {
        let n = variations_at(&chain, &lo) - variations_at(&chain, &hi);
        match n {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    // refine each interval by sign bisection of p itself
    let tol = BigRational::from_float(rel).expect("finite tolerance");
    let p = &p.primitive();
    for (lo, hi) in found.iter_mut() {
        let scale = if lo.abs() > BigRational::one() { lo.abs() } else { BigRational::one() };
        let mut s_hi = p.sign_at(hi);
        while &*hi - &*lo > &tol * &scale {
            let mid = (&*lo + &*hi) / &two;
            let s = p.sign_at(&mid);
            if s == Ordering::Equal {
                *lo = mid.clone() - &tol * &scale / &two;
                *hi = mid;
                break;
            }
            if s == s_hi {
                *hi = mid;
                s_hi = s;
            } else {
                *lo = mid;
            }
        }
    }
    found.sort();
    found
}

/// Characteristic polynomial `det(xI - A)` of an integer matrix by
/// Faddeev–LeVerrier in exact integer arithmetic.
pub fn characteristic_polynomial(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    // M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; n];
    for k in 1..=n {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = BigInt::zero();
                for l in 0..n {
                    if !m[l][j].is_zero() {
                        s += &a[i][l] * &m[l][j];
                    }
                }
                next[i][j] = s;
            }
            next[i][i] += &coeffs[n - k + 1];
        }
        m = next;
        let mut tr = BigInt::zero();
        for i in 0..n {
            for l in 0..n {
                tr += &a[i][l] * &m[l][i];
            }
        }
        coeffs[n - k] = -tr / BigInt::from(k);
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[1, 2, 1])), b);
    }

    #[test]
    fn square_free_parts() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 2, -1]).scale(&int(-1)).mul(&p(&[2, 1]));
        let sf = f.square_free();
        assert_eq!(sf, vec![(1, p(&[2, 1])), (2, p(&[-1, 1]))]);
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(count_real_roots(&p(&[-2, 0, 1])), 2);
        assert_eq!(count_real_roots(&p(&[1, 0, 1])), 0);
        let roots = isolate_real_roots(&p(&[-2, 0, 1]), 1e-12);
        assert_eq!(roots.len(), 2);
        assert!((to_f64(&roots[1].1) - 2f64.sqrt()).abs() < 1e-11);
        assert!(roots[0].1 < rat(0, 1));
    }

    #[test]
    fn charpoly_small() {
        let a = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(2)],
        ];
        let c = characteristic_polynomial(&a);
        assert_eq!(c, vec![BigInt::from(3), BigInt::from(-4), BigInt::from(1)]);
    }
}
