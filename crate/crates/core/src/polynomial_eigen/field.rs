//! Exact arithmetic in ℚ and in quadratic fields ℚ(√d).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::rational::to_f64;

/// Minimal field interface for exact linear algebra.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, r: BigRational) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn to_f64(&self) -> f64;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn from_rational_like(&self, r: BigRational) -> Self {
        r
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn to_f64(&self) -> f64 {
        to_f64(self)
    }
}

/// `a + b√d` with `d > 1` square-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSqrt {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

impl QSqrt {
    pub fn new(a: BigRational, b: BigRational, d: BigInt) -> Self {
        QSqrt { a, b, d }
    }

    pub fn rational(a: BigRational, d: &BigInt) -> Self {
        QSqrt { a, b: BigRational::zero(), d: d.clone() }
    }

    pub fn conjugate(&self) -> Self {
        QSqrt { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(self.d.clone())
    }
}

impl Field for QSqrt {
    fn zero_like(&self) -> Self {
        QSqrt::rational(BigRational::zero(), &self.d)
    }
    fn one_like(&self) -> Self {
        QSqrt::rational(BigRational::one(), &self.d)
    }
    fn from_rational_like(&self, r: BigRational) -> Self {
        QSqrt::rational(r, &self.d)
    }
    fn vanishes(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QSqrt::new(&self.a + &o.a, &self.b + &o.b, self.d.clone())
    }
    fn sub(&self, o: &Self) -> Self {
        QSqrt::new(&self.a - &o.a, &self.b - &o.b, self.d.clone())
    }
    fn mul(&self, o: &Self) -> Self {
        QSqrt::new(
            &self.a * &o.a + &self.b * &o.b * self.d_rat(),
            &self.a * &o.b + &self.b * &o.a,
            self.d.clone(),
        )
    }
    fn div(&self, o: &Self) -> Self {
        let norm = &o.a * &o.a - &o.b * &o.b * o.d_rat();
        let num = self.mul(&o.conjugate());
        QSqrt::new(num.a / &norm, num.b / norm, self.d.clone())
    }
    fn neg(&self) -> Self {
        QSqrt::new(-&self.a, -&self.b, self.d.clone())
    }
    fn to_f64(&self) -> f64 {
        // avoid cancellation when a ≈ -b√d
        let a = to_f64(&self.a);
        let b = to_f64(&self.b);
        let s = to_f64(&self.d_rat()).sqrt() * b;
        if a != 0.0 && s != 0.0 && a.signum() != s.signum() {
            let norm = to_f64(&(&self.a * &self.a - &self.b * &self.b * self.d_rat()));
            norm / (a - s)
        } else {
            a + s
        }
    }
}

impl fmt::Display for QSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        // common denominator form (u + v√d)/w
        let w = num_integer::lcm(self.a.denom().clone(), self.b.denom().clone());
        let u = (&self.a * BigRational::from_integer(w.clone())).to_integer();
        let v = (&self.b * BigRational::from_integer(w.clone())).to_integer();
        let root = match v.abs() {
            x if x.is_one() => format!("√{}", self.d),
            x => format!("{x}√{}", self.d),
        };
        let sign = if v.is_negative() { "-" } else { "+" };
        let body = if u.is_zero() {
            format!("{}{root}", if v.is_negative() { "-" } else { "" })
        } else {
            format!("{u}{sign}{root}")
        };
        if w.is_one() {
            write!(f, "{body}")
        } else if u.is_zero() {
            write!(f, "{body}/{w}")
        } else {
            write!(f, "({body})/{w}")
        }
    }
}

/// Basis of the null space of `a` (row-major, `n × n`) by Gauss–Jordan
/// elimination. Each basis vector has a 1 at its free pivot.
pub fn null_space<F: Field>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].vanishes()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].one_like().div(&m[r][c]);
        for j in 0..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].vanishes() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let v = m[i][j].sub(&f.mul(&m[r][j]));
                    m[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let zero = a[0][0].zero_like();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); cols];
        v[free] = zero.one_like();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Independent subset of `vectors` (exact rank test by elimination).
pub fn independent<F: Field>(vectors: Vec<Vec<F>>) -> Vec<Vec<F>> {
    let mut reduced: Vec<(usize, Vec<F>)> = Vec::new();
    let mut kept = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for (pc, row) in &reduced {
            if !w[*pc].vanishes() {
                let f = w[*pc].div(&row[*pc]);
                for j in 0..w.len() {
                    w[j] = w[j].sub(&f.mul(&row[j]));
                }
            }
        }
        if let Some(pc) = w.iter().position(|x| !x.vanishes()) {
            reduced.push((pc, w));
            kept.push(v);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn quadratic_arithmetic() {
        let d = BigInt::from(113);
        let x = QSqrt::new(int(11) / int(2), int(1) / int(2), d.clone());
        // x is a root of t² - 11t + 2
        let val = x.mul(&x).sub(&x.mul(&x.from_rational_like(int(11)))).add(&x.from_rational_like(int(2)));
        assert!(val.vanishes());
        assert_eq!(x.to_string(), "(11+√113)/2");
        let y = x.div(&x);
        assert_eq!(y, x.one_like());
        assert!((x.conjugate().to_f64() - (11.0 - 113f64.sqrt()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = vec![vec![int(1), int(-1)], vec![int(-2), int(2)]];
        let ns = null_space(&a);
        assert_eq!(ns, vec![vec![int(1), int(1)]]);
    }
}
