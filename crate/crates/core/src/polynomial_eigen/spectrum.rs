use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::{independent, null_space, Field, QSqrt};
use super::poly::{characteristic_polynomial, count_real_roots, isolate_real_roots, Poly};
use super::{build_mk, MkMatrix};
use crate::error::{Error, Result};
use crate::par::{map_slice, Exec};
use crate::rational::{binomial, int, rat, to_f64};
use crate::report::{Check, CheckReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PalindromeClass {
    Palindrome,
    Skew,
    /// Only possible for `λ = 0`.
    Mixed,
}

impl PalindromeClass {
    /// Sign in the three-term functional equation, `+` for palindromes.
    pub fn sign(self) -> Option<f64> {
        match self {
            PalindromeClass::Palindrome => Some(1.0),
            PalindromeClass::Skew => Some(-1.0),
            PalindromeClass::Mixed => None,
        }
    }
}

/// Exact representation of an eigenpair when one is available.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactPair {
    Rational { lambda: BigRational, b: Vec<BigRational> },
    Quadratic { lambda: QSqrt, b: Vec<QSqrt> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyEigenpair {
    pub lambda: f64,
    /// Exact form such as `(11+√113)/2`, when recognised.
    pub lambda_exact: Option<String>,
    /// Algebraic multiplicity of `λ`.
    pub multiplicity: usize,
    /// Eigenvector of `M_k`, scaled so its first nonzero entry is 1.
    pub b: Vec<f64>,
    pub b_exact: Option<Vec<String>>,
    pub class: PalindromeClass,
    #[serde(skip)]
    pub exact: Option<ExactPair>,
}

impl PolyEigenpair {
    /// Polynomial coefficients `a_i = C(k, i) b_i`.
    pub fn a(&self) -> Vec<f64> {
        let k = self.b.len() - 1;
        self.b
            .iter()
            .enumerate()
            .map(|(i, b)| b * binomial(k as u64, i as u64).to_f64().expect("finite"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MkSpectrum {
    pub k: usize,
    /// `det(xI - M_k)` from the constant term up.
    pub char_poly: Vec<String>,
    /// Sturm count of real roots equals the number of distinct roots.
    pub real_certified: bool,
    /// Largest imaginary part returned by the general (Schur) eigen-solver.
    pub general_solver_max_imag: f64,
    pub pairs: Vec<PolyEigenpair>,
}

impl MkSpectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut seen: Vec<f64> = Vec::new();
        for p in &self.pairs {
            if !seen.iter().any(|&x| x == p.lambda) {
                seen.push(p.lambda);
                out.extend(std::iter::repeat(p.lambda).take(p.multiplicity));
            }
        }
        out
    }

    pub fn leading(&self) -> &PolyEigenpair {
        &self.pairs[0]
    }
}

fn square_free_part(d: &BigInt) -> (BigInt, BigInt) {
    // d = f² d0
    let mut d0 = d.clone();
    let mut f = BigInt::from(1);
    let mut p = BigInt::from(2);
    while &p * &p <= d0 {
        let pp = &p * &p;
        while (&d0 % &pp).is_zero() {
            d0 /= &pp;
            f *= &p;
        }
        p += 1;
    }
    (f, d0)
}

fn reversed<T: Clone>(v: &[T]) -> Vec<T> {
    v.iter().rev().cloned().collect()
}

fn normalise_first<F: Field>(v: Vec<F>) -> Vec<F> {
    let first = v.iter().find(|x| !x.vanishes()).expect("nonzero vector").clone();
    v.iter().map(|x| x.div(&first)).collect()
}

/// Splits an eigenspace basis into palindromic and skew representatives via
/// `Φ ± Φ'`.
fn symmetrise<F: Field>(basis: &[Vec<F>]) -> Vec<(PalindromeClass, Vec<F>)> {
    let plus: Vec<Vec<F>> = basis
        .iter()
        .map(|v| v.iter().zip(reversed(v)).map(|(a, b)| a.add(&b)).collect::<Vec<F>>())
        .filter(|v: &Vec<F>| v.iter().any(|x| !x.vanishes()))
        .collect();
    let minus: Vec<Vec<F>> = basis
        .iter()
        .map(|v| v.iter().zip(reversed(v)).map(|(a, b)| a.sub(&b)).collect::<Vec<F>>())
        .filter(|v: &Vec<F>| v.iter().any(|x| !x.vanishes()))
        .collect();
    let mut out: Vec<(PalindromeClass, Vec<F>)> = independent(plus)
        .into_iter()
        .map(|v| (PalindromeClass::Palindrome, normalise_first(v)))
        .collect();
    out.extend(
        independent(minus)
            .into_iter()
            .map(|v| (PalindromeClass::Skew, normalise_first(v))),
    );
    out
}

fn shifted<F: Field>(m: &MkMatrix, lambda: &F) -> Vec<Vec<F>> {
    let n = m.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = lambda.from_rational_like(int(m.get(i, j)));
                    if i == j {
                        e.sub(lambda)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect()
}

fn numeric_eigenvectors(m: &MkMatrix, lambda: f64, multiplicity: usize) -> Result<Vec<(PalindromeClass, Vec<f64>)>> {
    let n = m.dim();
    let mut a = m.to_f64();
    for i in 0..n {
        a[(i, i)] -= lambda;
    }
    let svd = a
        .try_svd(false, true, 1e-15, 10_000)
        .ok_or_else(|| Error::EigenSolver("SVD did not converge".into()))?;
    let vt = svd.v_t.ok_or_else(|| Error::EigenSolver("SVD failed".into()))?;
    let scale = m.to_f64().norm();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for (rank, &i) in idx.iter().enumerate() {
        if rank >= multiplicity || (rank > 0 && svd.singular_values[i] > 1e-8 * scale) {
            break;
        }
        basis.push(vt.row(i).iter().copied().collect());
    }
    // symmetrised candidates, strongest first; keep at most dim-many
    let mut candidates: Vec<(f64, PalindromeClass, Vec<f64>)> = Vec::new();
    for v in &basis {
        for (class, sign) in [(PalindromeClass::Palindrome, 1.0), (PalindromeClass::Skew, -1.0)] {
            let w: Vec<f64> = v.iter().zip(v.iter().rev()).map(|(a, b)| a + sign * b).collect();
            let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            candidates.push((nrm, class, w));
        }
    }
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut kept: Vec<(PalindromeClass, Vec<f64>)> = Vec::new();
    for (_, class, mut w) in candidates {
        if kept.len() == basis.len() {
            break;
        }
        for (c, u) in &kept {
            if *c == class {
                let d: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                w.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
            }
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-3 {
            kept.push((class, w.iter().map(|x| x / nrm).collect()));
        }
    }
    let out = kept
        .into_iter()
        .map(|(class, v)| {
            let first = *v.iter().find(|x| x.abs() > 1e-10).expect("nonzero vector");
            (class, v.iter().map(|x| x / first).collect())
        })
        .collect();
    Ok(out)
}

/// Full eigen-decomposition of `M_k`.
///
/// Reality of the spectrum is certified exactly with a Sturm sequence on the
/// square-free part of the characteristic polynomial; a failure is an error.
/// Integer and quadratic-irrational eigenvalues get exact eigenvectors over
/// ℚ or ℚ(√d); other eigenvalues fall back to an SVD null space.
pub fn mk_spectrum(k: usize) -> Result<MkSpectrum> {
    let m = build_mk(k)?;
    let cp = characteristic_polynomial(&m.to_bigint());
    let p = Poly::from_ints(&cp);
    let factors = p.square_free();
    let sf = factors.iter().fold(Poly::new(vec![int(1)]), |acc, (_, g)| acc.mul(g));
    let real_certified = count_real_roots(&sf) == sf.degree();
    if !real_certified {
        return Err(Error::NonReal(format!("M_{k} has non-real eigenvalues")));
    }
    // the default Schur solver iterates without bound on clustered spectra
    let general_solver_max_imag = m
        .to_f64()
        .try_schur(1e-14, 10_000)
        .or_else(|| m.to_f64().try_schur(1e-12, 10_000))
        .or_else(|| m.to_f64().try_schur(1e-10, 10_000))
        .map(|s| s.complex_eigenvalues().iter().map(|z| z.im.abs()).fold(0.0, f64::max))
        .unwrap_or(f64::NAN);

    let mut pairs = Vec::new();
    for (mult, g) in &factors {
        let roots: Vec<f64> = isolate_real_roots(g, 1e-15)
            .iter()
            .map(|(lo, hi)| (to_f64(lo) + to_f64(hi)) / 2.0)
            .collect();
        let mut used = vec![false; roots.len()];
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            let r = roots[i];
            let n = r.round();
            if (r - n).abs() < 1e-6 && n.abs() < 9e15 && g.eval(&int(n as i64)).is_zero() {
                used[i] = true;
                let lambda = int(n as i64);
                let basis = null_space(&shifted(&m, &lambda));
                for (class, b) in symmetrise(&basis) {
                    pairs.push(make_pair(
                        r,
                        Some(lambda.to_string()),
                        *mult,
                        class,
                        Some(ExactPair::Rational { lambda: lambda.clone(), b }),
                    ));
                }
                continue;
            }
            // look for a conjugate root completing an integer quadratic factor
            let mut matched = None;
            for j in (i + 1)..roots.len() {
                if used[j] {
                    continue;
                }
                let (s, t) = (roots[i] + roots[j], roots[i] * roots[j]);
                let (sr, tr) = (s.round(), t.round());
                if (s - sr).abs() > 1e-6 || (t - tr).abs() > 1e-6 * tr.abs().max(1.0) {
                    continue;
                }
                let quad = Poly::new(vec![int(tr as i64), int(-(sr as i64)), int(1)]);
                if g.div_rem(&quad).1.is_zero() {
                    matched = Some((j, sr as i64, tr as i64));
                    break;
                }
            }
            match matched {
                Some((j, s, t)) => {
                    used[i] = true;
                    used[j] = true;
                    let disc = BigInt::from(s * s - 4 * t);
                    let (f, d0) = square_free_part(&disc);
                    let half = rat(1, 2);
                    for (root, sign) in [(roots[i], -1), (roots[j], 1)] {
                        let lam = QSqrt::new(
                            int(s) * &half,
                            BigRational::from_integer(&f * BigInt::from(sign)) * &half,
                            d0.clone(),
                        );
                        let basis = null_space(&shifted(&m, &lam));
                        for (class, b) in symmetrise(&basis) {
                            pairs.push(make_pair(
                                root,
                                Some(lam.to_string()),
                                *mult,
                                class,
                                Some(ExactPair::Quadratic { lambda: lam.clone(), b }),
                            ));
                        }
                    }
                }
                None => {
                    used[i] = true;
                    for (class, b) in numeric_eigenvectors(&m, r, *mult)? {
                        pairs.push(PolyEigenpair {
                            lambda: r,
                            lambda_exact: None,
                            multiplicity: *mult,
                            b,
                            b_exact: None,
                            class,
                            exact: None,
                        });
                    }
                }
            }
        }
    }
    pairs.sort_by(|a, b| {
        b.lambda
            .total_cmp(&a.lambda)
            .then((a.class as u8).cmp(&(b.class as u8)))
    });
    Ok(MkSpectrum {
        k,
        char_poly: cp.iter().map(|c| c.to_string()).collect(),
        real_certified,
        general_solver_max_imag,
        pairs,
    })
}

fn make_pair(
    root: f64,
    lambda_exact: Option<String>,
    multiplicity: usize,
    class: PalindromeClass,
    exact: Option<ExactPair>,
) -> PolyEigenpair {
    let (b, b_exact, lambda) = match exact.as_ref().expect("exact data") {
        ExactPair::Rational { lambda, b } => (
            b.iter().map(to_f64).collect(),
            b.iter().map(|x| x.to_string()).collect(),
            to_f64(lambda),
        ),
        ExactPair::Quadratic { lambda, b } => (
            b.iter().map(|x| x.to_f64()).collect(),
            b.iter().map(|x| x.to_string()).collect(),
            lambda.to_f64(),
        ),
    };
    debug_assert!((lambda - root).abs() <= 1e-6 * root.abs().max(1.0), "{lambda} vs {root} {lambda_exact:?}");
    PolyEigenpair {
        lambda,
        lambda_exact,
        multiplicity,
        b,
        b_exact: Some(b_exact),
        class,
        exact,
    }
}

/// Spectra for several `k`, computed concurrently.
pub fn mk_spectra(exec: Exec, ks: &[usize]) -> Result<Vec<MkSpectrum>> {
    map_slice(exec, ks, |&k| mk_spectrum(k)).into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenFunction {
    pub k: usize,
    pub lambda: f64,
    pub lambda_exact: Option<String>,
    /// `+1` for `P^+`, `-1` for `P^-`.
    pub sign: i8,
    /// `a_0, ..., a_k`.
    pub coeffs: Vec<f64>,
    pub coeffs_exact: Option<Vec<String>>,
    pub display: String,
    pub checks: Vec<Check>,
}

impl EigenFunction {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn poly_display(coeffs: &[String]) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c == "0" {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        let coef = if mono.is_empty() {
            c.clone()
        } else if c == "1" {
            String::new()
        } else if c == "-1" {
            "-".to_string()
        } else if c.contains(['+', '/']) || c[1..].contains('-') {
            format!("({c})")
        } else {
            c.clone()
        };
        terms.push(format!("{coef}{mono}"));
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(" + ").replace("+ -", "- ")
}

fn eval_field<F: Field>(a: &[F], x: &F) -> F {
    a.iter().rev().fold(x.zero_like(), |acc, c| acc.mul(x).add(c))
}

/// `λ f(x) - f(x+1) ∓ x^k f(1+1/x)` at the sample points, plus the ratio
/// identities at `x = 0, 1, 2`, all exact.
fn exact_checks<F: Field>(k: usize, lambda: &F, a: &[F], sign: f64) -> Vec<Check> {
    let one = lambda.one_like();
    let mut ok = true;
    for x in [rat(1, 2), int(1), int(2), int(3)] {
        let xf = lambda.from_rational_like(x.clone());
        let lhs = lambda.mul(&eval_field(a, &xf)).sub(&eval_field(a, &xf.add(&one)));
        let xk = lambda.from_rational_like(num_traits::pow(x.clone(), k));
        let arg = one.add(&one.div(&xf));
        let mut rhs = xk.mul(&eval_field(a, &arg));
        if sign < 0.0 {
            rhs = rhs.neg();
        }
        ok &= lhs.sub(&rhs).vanishes();
    }
    let mut checks = vec![Check::boolean(
        "three-term-equation-exact",
        ok,
        "λf(x) - f(x+1) = ±x^k f(1+1/x) at x = 1/2, 1, 2, 3",
    )];
    let f0 = eval_field(a, &lambda.zero_like());
    if !f0.vanishes() {
        let f1 = eval_field(a, &one);
        let two = one.add(&one);
        let f2 = eval_field(a, &two);
        checks.push(Check::boolean(
            "ratio-lambda",
            lambda.mul(&f0).sub(&f0.add(&f1)).vanishes(),
            "λ = 1 + f(1)/f(0)",
        ));
        if sign > 0.0 {
            checks.push(Check::boolean(
                "ratio-lambda-quadratic",
                lambda.mul(&lambda.sub(&one)).mul(&f0).sub(&two.mul(&f2)).vanishes(),
                "λ(λ-1)/2 = f(2)/f(0)",
            ));
        }
    }
    checks
}

fn numeric_checks(k: usize, lambda: f64, a: &[f64], sign: f64) -> Vec<Check> {
    let f = |x: f64| a.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let size = |x: f64| a.iter().rev().fold(0.0, |acc, c: &f64| acc * x.abs() + c.abs());
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.0, 3.0] {
        let r = lambda * f(x) - f(x + 1.0) - sign * x.powi(k as i32) * f(1.0 + 1.0 / x);
        let scale = lambda.abs() * size(x) + size(x + 1.0) + x.powi(k as i32) * size(1.0 + 1.0 / x);
        worst = worst.max(r.abs() / scale);
    }
    let mut checks = vec![Check::within(
        "three-term-equation",
        worst,
        1e-10,
        "λf(x) - f(x+1) = ±x^k f(1+1/x) at x = 1/2, 1, 2, 3 (relative)",
    )];
    let f0 = f(0.0);
    if f0.abs() > 1e-12 * size(1.0) {
        checks.push(Check::within(
            "ratio-lambda",
            (lambda - 1.0 - f(1.0) / f0).abs() / lambda.abs().max(1.0),
            1e-10,
            "λ = 1 + f(1)/f(0)",
        ));
        if sign > 0.0 {
            checks.push(Check::within(
                "ratio-lambda-quadratic",
                (lambda * (lambda - 1.0) / 2.0 - f(2.0) / f0).abs() / (lambda * lambda).max(1.0),
                1e-10,
                "λ(λ-1)/2 = f(2)/f(0)",
            ));
        }
    }
    checks
}

/// Polynomial eigenfunction `f(x) = Σ C(k,i) b_i x^i` of `P^±_{-k/2}` and its
/// verification.
pub fn eigenpair_to_eigenfunction(k: usize, pair: &PolyEigenpair) -> Result<EigenFunction> {
    if pair.lambda.abs() < 1e-8 {
        return Err(Error::InvalidParameter("λ = 0 gives no eigenfunction".into()));
    }
    if pair.b.len() != k + 1 {
        return Err(Error::InvalidParameter(format!("vector length {} != k+1", pair.b.len())));
    }
    let sign = pair
        .class
        .sign()
        .ok_or_else(|| Error::InvalidParameter("mixed eigenvector".into()))?;
    let c = |i: usize| BigRational::from_integer(binomial(k as u64, i as u64));
    let (coeffs_exact, checks) = match &pair.exact {
        Some(ExactPair::Rational { lambda, b }) => {
            let a: Vec<BigRational> = b.iter().enumerate().map(|(i, x)| x * c(i)).collect();
            (Some(a.iter().map(|x| x.to_string()).collect()), exact_checks(k, lambda, &a, sign))
        }
        Some(ExactPair::Quadratic { lambda, b }) => {
            let a: Vec<QSqrt> = b
                .iter()
                .enumerate()
                .map(|(i, x)| x.mul(&x.from_rational_like(c(i))))
                .collect();
            (Some(a.iter().map(|x| x.to_string()).collect::<Vec<_>>()), exact_checks(k, lambda, &a, sign))
        }
        None => (None, numeric_checks(k, pair.lambda, &pair.a(), sign)),
    };
    let coeffs = pair.a();
    let display = match &coeffs_exact {
        Some(c) => poly_display(c),
        None => poly_display(&coeffs.iter().map(|x| format!("{x:.12}")).collect::<Vec<_>>()),
    };
    Ok(EigenFunction {
        k,
        lambda: pair.lambda,
        lambda_exact: pair.lambda_exact.clone(),
        sign: sign as i8,
        coeffs,
        coeffs_exact,
        display,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingBounds {
    pub k: usize,
    /// Largest row sum `2^k + 1`.
    pub big_s: f64,
    /// Smallest row sum, computed from the matrix.
    pub small_s: f64,
    pub h: f64,
    pub g: f64,
    pub lower: f64,
    pub upper: f64,
    pub lambda: f64,
    pub palindromic: bool,
    /// The alternative closed form for the smallest row sum and the bounds it
    /// gives; it agrees with `small_s` for odd `k` only.
    pub small_s_closed_form: f64,
    pub lower_closed_form: f64,
    pub upper_closed_form: f64,
    pub holds: bool,
}

fn h_g(big_s: f64, s: f64) -> (f64, f64) {
    let h = (-s + 2.0 + (s * s + 4.0 * (big_s - s)).sqrt()) / 2.0;
    let g = (big_s - 2.0 + (big_s * big_s - 4.0 * (big_s - s)).sqrt()) / (2.0 * (s - 1.0));
    (h, g)
}

/// Row-sum bounds `s - 1 + h <= λ_max <= S - 1 + 1/g` on the leading eigenvalue.
pub fn leading_bounds(k: usize) -> Result<LeadingBounds> {
    if k == 0 {
        return Err(Error::InvalidParameter("k >= 1 required".into()));
    }
    let m = build_mk(k)?;
    let sums: Vec<f64> = m.entries.iter().map(|r| r.iter().sum::<i64>() as f64).collect();
    let big_s = sums.iter().copied().fold(f64::MIN, f64::max);
    let small_s = sums.iter().copied().fold(f64::MAX, f64::min);
    let closed = if k % 2 == 0 {
        2f64.powi(k as i32 / 2 + 1) + 2f64.powi(k as i32 / 2 - 1)
    } else {
        2f64.powi((k as i32 + 1) / 2) + 2f64.powi((k as i32 - 1) / 2)
    };
    let spec = mk_spectrum(k)?;
    let lead = spec.leading();
    let (h, g) = h_g(big_s, small_s);
    let (hc, gc) = h_g(big_s, closed);
    let lower = small_s - 1.0 + h;
    let upper = big_s - 1.0 + 1.0 / g;
    let tol = 1e-12 * lead.lambda;
    let palindromic = lead.class == PalindromeClass::Palindrome && lead.multiplicity == 1;
    let out = LeadingBounds {
        k,
        big_s,
        small_s,
        h,
        g,
        lower,
        upper,
        lambda: lead.lambda,
        palindromic,
        small_s_closed_form: closed,
        lower_closed_form: closed - 1.0 + hc,
        upper_closed_form: big_s - 1.0 + 1.0 / gc,
        holds: lower <= lead.lambda + tol && lead.lambda <= upper + tol && palindromic,
    };
    if !out.holds {
        return Err(Error::CheckFailed {
            id: "leading-bounds".into(),
            detail: format!("k = {k}: {lower} <= {} <= {upper} fails or not palindromic", lead.lambda),
        });
    }
    Ok(out)
}

/// `⟨Φ, Ψ⟩ = Σ b_i c_{k-i}`.
fn pseudo(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b.iter().rev()).map(|(x, y)| x * y).sum()
}

/// Adjointness of `M_k` under the pseudo-scalar product on random integer
/// vectors, and `⟨Φ, Φ⟩ = ±||Φ||²` on the eigenvectors with `λ ≠ 0`.
pub fn pseudo_scalar_checks(k: usize, seed: u64) -> Result<CheckReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k >= 1 required".into()));
    }
    let m = build_mk(k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjoint = true;
    for _ in 0..32 {
        let phi: Vec<BigInt> = (0..=k).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
        let psi: Vec<BigInt> = (0..=k).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect();
        adjoint &= pseudo(&m.apply_int(&phi), &psi) == pseudo(&phi, &m.apply_transpose_int(&psi));
    }
    let spec = mk_spectrum(k)?;
    let mut worst: f64 = 0.0;
    for p in spec.pairs.iter().filter(|p| p.lambda.abs() > 1e-8) {
        let norm2: f64 = p.b.iter().map(|x| x * x).sum();
        let ps: f64 = p.b.iter().zip(p.b.iter().rev()).map(|(x, y)| x * y).sum();
        let sign = p.class.sign().unwrap_or(0.0);
        worst = worst.max((ps - sign * norm2).abs() / norm2);
    }
    Ok(CheckReport::new(
        format!("pseudo-scalar k={k}"),
        vec![
            Check::boolean(
                "pseudo-adjointness-exact",
                adjoint,
                "⟨M_k Φ, Ψ⟩ = ⟨Φ, M_kᵀ Ψ⟩ on 32 random integer pairs",
            ),
            Check::within(
                "pseudo-norm-sign",
                worst,
                1e-10,
                "⟨Φ, Φ⟩ = ±||Φ||² for eigenvectors with λ ≠ 0",
            ),
        ],
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodRow {
    pub k: usize,
    pub dimension: usize,
    pub palindromic: usize,
    pub skew: usize,
}

/// Exact dimension of the `λ = 1` eigenspace of `M_k`, split by symmetry.
/// Exploratory only.
pub fn period_search(k: usize) -> Result<PeriodRow> {
    if k == 0 {
        return Err(Error::InvalidParameter("k >= 1 required".into()));
    }
    let m = build_mk(k)?;
    let basis = null_space(&shifted(&m, &int(1)));
    let split = symmetrise(&basis);
    let palindromic = split.iter().filter(|(c, _)| *c == PalindromeClass::Palindrome).count();
    Ok(PeriodRow {
        k,
        dimension: basis.len(),
        palindromic,
        skew: split.len() - palindromic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m4_spectrum() {
        let s = mk_spectrum(4).unwrap();
        let r = 113f64.sqrt();
        let expect = [(11.0 + r) / 2.0, 1.0, (11.0 - r) / 2.0, -1.0, -1.0];
        let got = s.eigenvalues();
        assert_eq!(got.len(), 5);
        for (a, b) in got.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{got:?}");
        }
        assert_eq!(s.pairs[0].lambda_exact.as_deref(), Some("(11+√113)/2"));
        let skew_one = s.pairs.iter().find(|p| p.lambda == 1.0).unwrap();
        assert_eq!(skew_one.b, vec![1.0, 0.0, 0.0, 0.0, -1.0]);
        assert_eq!(skew_one.class, PalindromeClass::Skew);
        let minus: Vec<_> = s.pairs.iter().filter(|p| p.lambda == -1.0).collect();
        assert_eq!(minus.len(), 2);
        assert_eq!(minus[0].b_exact.as_ref().unwrap(), &["1", "0", "-2/3", "0", "1"]);
        assert_eq!(minus[1].b_exact.as_ref().unwrap(), &["0", "1", "0", "-1", "0"]);
    }

    #[test]
    fn k1_and_unit_eigenvector() {
        let s = mk_spectrum(1).unwrap();
        assert_eq!(s.eigenvalues(), vec![3.0, 1.0]);
        for k in 1..=12 {
            let m = build_mk(k).unwrap();
            let mut v = vec![BigInt::zero(); k + 1];
            v[0] = BigInt::from(1);
            v[k] = BigInt::from(-1);
            assert_eq!(m.apply_int(&v), v);
        }
    }

    #[test]
    fn eigenfunctions_examples() {
        let s = mk_spectrum(4).unwrap();
        let lead = eigenpair_to_eigenfunction(4, &s.pairs[0]).unwrap();
        assert!(lead.passed(), "{:?}", lead.checks);
        assert_eq!(lead.display, "x^4 + ((-1+√113)/4)x^3 + 3x^2 + ((-1+√113)/4)x + 1");
        let h2 = s.pairs.iter().find(|p| p.lambda == 1.0).unwrap();
        let f = eigenpair_to_eigenfunction(4, h2).unwrap();
        assert_eq!(f.display, "-x^4 + 1");
        assert_eq!(f.sign, -1);
        assert!(f.passed());
        let s3 = mk_spectrum(3).unwrap();
        let f3 = eigenpair_to_eigenfunction(3, &s3.pairs[0]).unwrap();
        assert_eq!(f3.lambda, 7.0);
        assert_eq!(f3.coeffs, vec![1.0, 2.0, 2.0, 1.0]);
        for p in s.pairs.iter().chain(&s3.pairs).filter(|p| p.lambda.abs() > 1e-8) {
            let k = p.b.len() - 1;
            assert!(eigenpair_to_eigenfunction(k, p).unwrap().passed());
        }
    }

    #[test]
    fn bounds() {
        let b1 = leading_bounds(1).unwrap();
        assert_eq!((b1.lower, b1.lambda, b1.upper), (3.0, 3.0, 3.0));
        let b4 = leading_bounds(4).unwrap();
        assert!((b4.lower_closed_form - 10.6569).abs() < 1e-4);
        assert!((b4.upper_closed_form - 16.578).abs() < 1e-3);
        assert!((b4.lower - 9.0).abs() < 1e-12);
        for k in 1..=12 {
            assert!(leading_bounds(k).unwrap().holds);
        }
    }

    #[test]
    fn pseudo_and_period() {
        assert!(pseudo_scalar_checks(4, 7).unwrap().passed);
        let r = period_search(4).unwrap();
        assert_eq!((r.dimension, r.skew), (1, 1));
        assert_eq!(period_search(1).unwrap().dimension, 1);
    }

    #[test]
    fn reality_up_to_twenty() {
        for k in 0..=20 {
            let s = mk_spectrum(k).unwrap();
            assert!(s.real_certified);
            assert_eq!(s.eigenvalues().len(), k + 1, "k={k}");
            for p in s.pairs.iter().filter(|p| p.lambda.abs() > 1e-8) {
                assert_ne!(p.class, PalindromeClass::Mixed);
            }
        }
    }
}
