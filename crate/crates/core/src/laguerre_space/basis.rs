use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::SpaceParams;
use crate::error::{Error, Result};
use crate::rational::{binomial_rational, factorial, int};
use crate::special_functions::{binomial_real, laguerre_all, ln_gamma};

/// Coordinate system for [`CoefficientVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// `e_n = L_n^p`, orthogonal with `||e_n||² = Γ(n+2q)/n!`.
    E,
    /// `e_n / ||e_n||`.
    EHat,
    /// `f_n = t^n / n!`.
    F,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::E => "e",
            Basis::EHat => "ehat",
            Basis::F => "f",
        })
    }
}

/// A function `Σ c_n b_n(t)`, optionally multiplied by `e^{-t}`.
///
/// The `damped` flag covers the families `h_n^± = e^{-t}(e_n ± f_n)` and
/// `e^{-t} L_n^p(2t)` that are not polynomials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientVector {
    pub params: SpaceParams,
    pub basis: Basis,
    pub coeffs: Vec<f64>,
    pub damped: bool,
}

/// Which closed-form Gram entry [`inner_product`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InnerKind {
    /// `(f_n, f_m)`
    FF,
    /// `(e_n, e_m)`
    EE,
    /// `(f_n, e_m)`
    FE,
}

/// Closed-form inner products in `L²(m_q)`.
pub fn inner_product(params: &SpaceParams, kind: InnerKind, n: usize, m: usize) -> f64 {
    let two_q = 2.0 * params.q;
    let lf = |k: usize| ln_gamma(k as f64 + 1.0).expect("k >= 0");
    match kind {
        InnerKind::FF => (ln_gamma(n as f64 + m as f64 + two_q).expect("q > 0") - lf(n) - lf(m)).exp(),
        InnerKind::EE => {
            if n == m {
                params.ln_e_norm_sq(n).exp()
            } else {
                0.0
            }
        }
        InnerKind::FE => {
            if m > n {
                return 0.0;
            }
            // (-1)^m Γ(n+2q) / (m! (n-m)!)
            let mag = (ln_gamma(n as f64 + two_q).expect("q > 0") - lf(m) - lf(n - m)).exp();
            if m % 2 == 0 {
                mag
            } else {
                -mag
            }
        }
    }
}

/// Exact inner products; requires `2q` to be a positive integer.
pub fn inner_product_exact(
    params: &SpaceParams,
    kind: InnerKind,
    n: usize,
    m: usize,
) -> Result<BigRational> {
    let two_q = params
        .two_q_integer()
        .ok_or_else(|| Error::InvalidParameter("exact inner products need 2q in Z".into()))?;
    // Γ(j + 2q) = (j + 2q - 1)!
    let gamma = |j: usize| factorial(j as u64 + two_q - 1);
    let fact = |j: usize| factorial(j as u64);
    let r = match kind {
        InnerKind::FF => BigRational::new(gamma(n + m), fact(n) * fact(m)),
        InnerKind::EE if n == m => BigRational::new(gamma(n), fact(n)),
        InnerKind::EE => BigRational::zero(),
        InnerKind::FE if m > n => BigRational::zero(),
        InnerKind::FE => {
            let v = BigRational::new(gamma(n), fact(m) * fact(n - m));
            if m % 2 == 0 {
                v
            } else {
                -v
            }
        }
    };
    Ok(r)
}

/// The lower-triangular matrix `a_{i,j} = (-1)^j C(i+p, i-j)` of size
/// `(n+1) x (n+1)`: row `i` holds the `e`-coordinates of `f_i` and also the
/// `f`-coordinates of `e_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularChangeOfBasis {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
    pub exact: Option<Vec<Vec<BigRational>>>,
}

/// Builds `A_n`; exact entries accompany the floats when `p` is rational.
pub fn basis_change(params: &SpaceParams, n: usize) -> TriangularChangeOfBasis {
    let size = n + 1;
    let mut entries = vec![vec![0.0; size]; size];
    for (i, row) in entries.iter_mut().enumerate() {
        for (j, a) in row.iter_mut().enumerate().take(i + 1) {
            let v = binomial_real(i as f64 + params.p, (i - j) as u64);
            *a = if j % 2 == 0 { v } else { -v };
        }
    }
    let exact = params.p_exact().map(|p| {
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if j > i {
                            return BigRational::zero();
                        }
                        let v = binomial_rational(&(&p + int(i as i64)), (i - j) as u64);
                        if j % 2 == 0 {
                            v
                        } else {
                            -v
                        }
                    })
                    .collect()
            })
            .collect()
    });
    TriangularChangeOfBasis { n, entries, exact }
}

impl TriangularChangeOfBasis {
    pub fn size(&self) -> usize {
        self.n + 1
    }

    /// `Aᵀ x` on the leading `n+1` entries; both directions of the change of
    /// basis are this map because `A² = I`.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let size = self.size();
        (0..size)
            .map(|j| {
                (j..size)
                    .map(|i| self.entries[i][j] * x.get(i).copied().unwrap_or(0.0))
                    .sum()
            })
            .collect()
    }

    pub fn apply_transpose_exact(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        let a = self
            .exact
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("no exact entries (irrational p)".into()))?;
        let size = self.size();
        Ok((0..size)
            .map(|j| {
                let mut acc = BigRational::zero();
                for i in j..size.min(x.len()) {
                    acc += &a[i][j] * &x[i];
                }
                acc
            })
            .collect())
    }

    /// `e`-coefficients to `f`-coefficients.
    pub fn e_to_f(&self, c: &[f64]) -> Vec<f64> {
        self.apply_transpose(c)
    }

    /// `f`-coefficients to `e`-coefficients.
    pub fn f_to_e(&self, d: &[f64]) -> Vec<f64> {
        self.apply_transpose(d)
    }

    /// `Π_n`: orthogonal projection onto polynomials of degree `<= n`, taking
    /// `e`-coefficients (any length) to the `f`-coefficients `d_0..d_n`.
    ///
    /// Orthogonality of the `e_s` makes the projection a truncation in the
    /// `e`-basis, after which the coordinates are rewritten in the `f_r`.
    pub fn project(&self, c: &[f64]) -> Vec<f64> {
        let truncated: Vec<f64> = c.iter().take(self.size()).copied().collect();
        self.apply_transpose(&truncated)
    }

    pub fn project_exact(&self, c: &[BigRational]) -> Result<Vec<BigRational>> {
        let truncated: Vec<BigRational> = c.iter().take(self.size()).cloned().collect();
        self.apply_transpose_exact(&truncated)
    }

    /// Exact test of `A² = I`.
    pub fn is_involution_exact(&self) -> Option<bool> {
        let a = self.exact.as_ref()?;
        let size = self.size();
        for i in 0..size {
            for j in 0..size {
                let mut acc = BigRational::zero();
                for (k, row) in a.iter().enumerate().take(size) {
                    acc += &a[i][k] * &row[j];
                }
                let expect = if i == j { BigRational::one() } else { BigRational::zero() };
                if acc != expect {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// `max |(A²)_{ij} - δ_{ij}|` in floating point.
    pub fn involution_defect(&self) -> f64 {
        let size = self.size();
        let a = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..size {
            for j in 0..size {
                let acc: f64 = (0..size).map(|k| a[i][k] * a[k][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc - expect).abs());
            }
        }
        worst
    }
}

impl CoefficientVector {
    pub fn new(params: SpaceParams, basis: Basis, coeffs: Vec<f64>) -> Self {
        CoefficientVector { params, basis, coeffs, damped: false }
    }

    pub fn damped(mut self) -> Self {
        self.damped = true;
        self
    }

    /// Unit vector for index `n` in `basis`.
    pub fn unit(params: SpaceParams, basis: Basis, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        CoefficientVector::new(params, basis, coeffs)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Re-expresses the same function in `target`.
    pub fn convert(&self, target: Basis) -> CoefficientVector {
        if target == self.basis || self.coeffs.is_empty() {
            return CoefficientVector { basis: target, ..self.clone() };
        }
        let n = self.coeffs.len() - 1;
        let to_e: Vec<f64> = match self.basis {
            Basis::E => self.coeffs.clone(),
            Basis::EHat => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c / self.params.e_norm(i))
                .collect(),
            Basis::F => basis_change(&self.params, n).f_to_e(&self.coeffs),
        };
        let coeffs = match target {
            Basis::E => to_e,
            Basis::EHat => to_e
                .iter()
                .enumerate()
                .map(|(i, c)| c * self.params.e_norm(i))
                .collect(),
            Basis::F => basis_change(&self.params, n).e_to_f(&to_e),
        };
        CoefficientVector { coeffs, basis: target, ..self.clone() }
    }

    /// Value at `t >= 0`.
    pub fn evaluate(&self, t: f64) -> f64 {
        let n = self.coeffs.len();
        if n == 0 {
            return 0.0;
        }
        let poly: f64 = match self.basis {
            Basis::F => {
                let mut term = 1.0;
                let mut acc = 0.0;
                for (i, c) in self.coeffs.iter().enumerate() {
                    if i > 0 {
                        term *= t / i as f64;
                    }
                    acc += c * term;
                }
                acc
            }
            Basis::E | Basis::EHat => {
                let vals = laguerre_all(n - 1, self.params.p, t);
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let scale = if self.basis == Basis::EHat {
                            1.0 / self.params.e_norm(i)
                        } else {
                            1.0
                        };
                        c * scale * vals[i]
                    })
                    .sum()
            }
        };
        if self.damped {
            poly * (-t).exp()
        } else {
            poly
        }
    }

    /// `L²(m_q)` norm of an undamped vector from its closed-form Gram matrix.
    pub fn norm(&self) -> Result<f64> {
        if self.damped {
            return Err(Error::InvalidParameter(
                "closed-form norm only for polynomial vectors".into(),
            ));
        }
        let sq = match self.basis {
            Basis::EHat => self.coeffs.iter().map(|c| c * c).sum(),
            Basis::E => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * c * self.params.ln_e_norm_sq(i).exp())
                .sum(),
            Basis::F => {
                let mut acc = 0.0;
                for (i, a) in self.coeffs.iter().enumerate() {
                    for (j, b) in self.coeffs.iter().enumerate() {
                        acc += a * b * inner_product(&self.params, InnerKind::FF, i, j);
                    }
                }
                acc
            }
        };
        Ok(f64::sqrt(sq))
    }

    /// CSV with a `# params` comment line, then `index,coefficient`.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = format!(
            "# q={} p={} K={} basis={} damped={}\n",
            self.params.q, self.params.p, self.params.k, self.basis, self.damped
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "coefficient"])?;
        for (i, c) in self.coeffs.iter().enumerate() {
            w.write_record([i.to_string(), crate::report::fmt_real(*c)])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?);
        Ok(out)
    }
}

/// Exact `e`-to-`f` conversion, for callers holding rational coefficients.
pub fn e_to_f_exact(params: &SpaceParams, c: &[BigRational]) -> Result<Vec<BigRational>> {
    if c.is_empty() {
        return Ok(Vec::new());
    }
    basis_change(params, c.len() - 1).apply_transpose_exact(c)
}



#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::special_functions::gauss_laguerre;

    fn q1() -> SpaceParams {
        SpaceParams::new(1.0, 10).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let s = q1();
        assert!((inner_product(&s, InnerKind::FF, 1, 1) - 6.0).abs() < 1e-12);
        assert!((inner_product(&s, InnerKind::EE, 1, 1) - 2.0).abs() < 1e-12);
        assert!((inner_product(&s, InnerKind::FE, 2, 1) + 6.0).abs() < 1e-12);
        assert_eq!(inner_product(&s, InnerKind::FE, 1, 2), 0.0);
        assert_eq!(inner_product_exact(&s, InnerKind::FE, 2, 1).unwrap(), rat(-6, 1));
        assert_eq!(inner_product_exact(&s, InnerKind::FF, 1, 1).unwrap(), rat(6, 1));
    }

    #[test]
    fn quadrature_reproduces_gram_entries() {
        for q in [0.5, 1.0, 1.5] {
            let s = SpaceParams::new(q, 13).unwrap();
            let rule = gauss_laguerre(s.p, 40).unwrap();
            for n in 0..=12 {
                for m in 0..=12 {
                    let fnv = CoefficientVector::unit(s.clone(), Basis::F, n);
                    let fm = CoefficientVector::unit(s.clone(), Basis::F, m);
                    let em = CoefficientVector::unit(s.clone(), Basis::E, m);
                    let en = CoefficientVector::unit(s.clone(), Basis::E, n);
                    let cases = [
                        (rule.integrate(|t| fnv.evaluate(t) * fm.evaluate(t)), InnerKind::FF),
                        (rule.integrate(|t| en.evaluate(t) * em.evaluate(t)), InnerKind::EE),
                        (rule.integrate(|t| fnv.evaluate(t) * em.evaluate(t)), InnerKind::FE),
                    ];
                    for (num, kind) in cases {
                        let exact = inner_product(&s, kind, n, m);
                        let scale = inner_product(&s, InnerKind::FF, n, n).sqrt()
                            * inner_product(&s, InnerKind::FF, m, m).sqrt();
                        assert!(
                            (num - exact).abs() <= 1e-10 * exact.abs().max(1e-3 * scale),
                            "{kind:?} q={q} n={n} m={m}: {num} vs {exact}"
                        );
                    }
                }
            }
            assert!((rule.integrate(|_| 1.0) - s.mass()).abs() < 1e-12 * s.mass());
        }
    }

    #[test]
    fn change_of_basis_examples() {
        let s = q1();
        let a = basis_change(&s, 1);
        assert_eq!(a.entries, vec![vec![1.0, 0.0], vec![2.0, -1.0]]);
        assert_eq!(a.is_involution_exact(), Some(true));
        // f_1 = 2 e_0 - e_1, evaluated at t = 1
        let f1 = CoefficientVector::new(s.clone(), Basis::E, a.entries[1].clone());
        assert!((f1.evaluate(1.0) - 1.0).abs() < 1e-15);
        for p in [0, 1, 2] {
            let sp = SpaceParams::exact(rat(p + 1, 2), 5).unwrap();
            assert_eq!(basis_change(&sp, 30).is_involution_exact(), Some(true));
        }
    }

    #[test]
    fn projection_is_idempotent_exactly() {
        let s = q1();
        let a = basis_change(&s, 2);
        let c: Vec<BigRational> = (0..10).map(|i| rat(3 * i - 7, i + 2)).collect();
        let d = a.project_exact(&c).unwrap();
        // back to e-coordinates and project again
        let c2 = a.apply_transpose_exact(&d).unwrap();
        assert_eq!(a.project_exact(&c2).unwrap(), d);
        assert_eq!(&c2[..], &c[..3]);
    }

    #[test]
    fn conversions_round_trip() {
        let s = SpaceParams::new(1.5, 9).unwrap();
        let v = CoefficientVector::new(s, Basis::EHat, vec![0.3, -1.2, 0.7, 2.0, 0.0, -0.5]);
        for via in [Basis::E, Basis::F] {
            let back = v.convert(via).convert(Basis::EHat);
            for (a, b) in v.coeffs.iter().zip(&back.coeffs) {
                assert!((a - b).abs() < 1e-12);
            }
            for t in [0.0, 0.7, 3.0] {
                assert!((v.convert(via).evaluate(t) - v.evaluate(t)).abs() < 1e-10);
            }
        }
        let n_ehat = v.norm().unwrap();
        let n_f = v.convert(Basis::F).norm().unwrap();
        assert!((n_ehat - n_f).abs() < 1e-9 * n_ehat);
    }
}
