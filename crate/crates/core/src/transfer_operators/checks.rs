use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::assemble::{assemble_derived, assemble_m, assemble_n, ell_vector_exact, NMethod};
use super::spectrum::{spectral_norm, spectrum};
use super::OpKind;
use crate::error::{Error, Result};
use crate::exact_farey::Sign;
use crate::laguerre_space::{basis_change, SpaceParams};
use crate::rational::rat;
use crate::report::Check;
use crate::special_functions::{
    bessel_j_scaled, binomial_real, gauss_laguerre_cached, laguerre, ln_gamma,
};

/// Golden mean `(√5 - 1)/2`.
pub(crate) fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// JSON-friendly summary `{kind, q, K, eigenvalues, checks}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorReport {
    pub kind: String,
    pub q: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub eigenvalues: Vec<f64>,
    pub checks: Vec<Check>,
}

impl OperatorReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// `2^{-2n-2q} Σ_k (1 ± (-1)^{n-k}) C(n+p,k) C(n,k)`.
fn positivity_form(params: &SpaceParams, n: usize, sign: Sign) -> f64 {
    let p = params.p;
    let s = sign.as_f64();
    let ln_scale = -(2.0 * n as f64 + 2.0 * params.q) * std::f64::consts::LN_2;
    (0..=n)
        .map(|k| {
            let par = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            (1.0 + s * par) * binomial_real(n as f64 + p, k as u64) * binomial_real(n as f64, k as u64)
        })
        .sum::<f64>()
        * ln_scale.exp()
}

fn degree(v: &[BigRational]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

/// Exact and floating-point structural identities for `n <= n_max`.
///
/// Needs an exactly known `q`. Every check is run; the report lists them in
/// order, so the first failing identity is `first_failure()`.
pub fn verify_structure(params: &SpaceParams, n_max: usize) -> Result<OperatorReport> {
    if n_max >= params.k {
        return Err(Error::InvalidParameter(format!("n_max = {n_max} must be < K = {}", params.k)));
    }
    if params.q_exact().is_none() {
        return Err(Error::InvalidParameter("structure checks need an exact q".into()));
    }
    let k = params.k;
    let a = basis_change(params, k - 1);
    let ax = a.exact.clone().expect("rational q gives exact A");
    let m = assemble_m(params)?;
    let nm = assemble_n(params, NMethod::Exact)?;
    let qp = assemble_derived(&m, &nm, OpKind::QPlus)?;
    let qm = assemble_derived(&m, &nm, OpKind::QMinus)?;
    let mut checks = Vec::new();

    // M^{-1}N = Q^+ - I acts as Aᵀ on e-coordinates
    let minus_identity = |v: &[BigRational]| -> Vec<BigRational> {
        let img = qp.apply_exact(v).expect("exact Q");
        img.iter().zip(v).map(|(x, y)| x - y).collect()
    };
    let mut swap_ok = true;
    for n in 0..=n_max {
        let mut e_n = vec![BigRational::zero(); k];
        e_n[n] = rat(1, 1);
        let mut f_n = vec![BigRational::zero(); k];
        f_n[..=n].clone_from_slice(&ax[n][..=n]);
        swap_ok &= minus_identity(&e_n) == f_n && minus_identity(&f_n) == e_n;
    }
    checks.push(Check::boolean(
        "swap-relations-exact",
        swap_ok,
        format!("M^-1 N exchanges e_n and f_n for n <= {n_max}"),
    ));

    let mut worst_form: f64 = 0.0;
    let mut form_positive = true;
    let mut h_positive = true;
    let mut worst_h: f64 = 0.0;
    for n in 0..=n_max {
        for sign in [Sign::Plus, Sign::Minus] {
            let closed = positivity_form(params, n, sign);
            let assembled = m.entries[(n, n)] + sign.as_f64() * nm.entries[(n, n)];
            worst_form = worst_form.max((closed - assembled).abs() / m.entries[(n, n)]);
            if sign == Sign::Minus && n == 0 {
                // h_0^- = e^{-t}(e_0 - f_0) vanishes identically
                form_positive &= closed == 0.0;
                continue;
            }
            form_positive &= closed > 0.0;
            // (h_n^±, e_n) = (M ℓ_n^±, e_n) from the assembled M
            let ell = ell_vector_exact(params, n, sign)?;
            let hat: Vec<f64> = ell
                .iter()
                .enumerate()
                .map(|(j, c)| crate::rational::to_f64(c) * params.e_norm(j))
                .collect();
            let dot: f64 = (0..k).map(|j| m.entries[(n, j)] * hat[j]).sum::<f64>() / params.e_norm(n);
            h_positive &= dot > 0.0;
            worst_h = worst_h.max((dot - closed).abs() / closed);
        }
    }
    checks.push(Check::within(
        "positivity-form-vs-assembled",
        worst_form,
        1e-12,
        "((M ± N)e_n, e_n)/||e_n||^2 closed sum against assembled diagonals (relative to M_nn)",
    ));
    checks.push(Check::boolean(
        "positivity-form-sign",
        form_positive,
        "closed positivity sum > 0 (and = 0 only for the minus sign at n = 0)",
    ));
    checks.push(Check::boolean(
        "h-dot-e-positive",
        h_positive,
        "(h_n^±, e_n) > 0 from assembled M; h_0^- is identically zero and skipped",
    ));
    checks.push(Check::within(
        "h-dot-e-vs-closed",
        worst_h,
        1e-8,
        "(h_n^±, e_n)/||e_n||^2 from M against the closed positivity sum",
    ));

    let mut degrees_ok = true;
    let mut dots_ok = true;
    for n in 0..=n_max {
        for sign in [Sign::Plus, Sign::Minus] {
            let ell_e = ell_vector_exact(params, n, sign)?;
            // f-coordinates of ℓ_n^± are those of e_n plus ±1 at index n
            let mut ell_f: Vec<BigRational> = ax[n].clone();
            match sign {
                Sign::Plus => ell_f[n] += rat(1, 1),
                Sign::Minus => ell_f[n] -= rat(1, 1),
            }
            let expected = match (sign, n) {
                (Sign::Minus, 0) => None,
                (Sign::Plus, _) => Some(2 * (n / 2)),
                (Sign::Minus, _) => Some(2 * ((n - 1) / 2) + 1),
            };
            degrees_ok &= degree(&ell_f) == expected;
            let parity = if n % 2 == 0 { 1 } else { -1 };
            let target = rat(1 + sign.as_f64() as i64 * parity, 1);
            dots_ok &= ell_e[n] == target;
        }
    }
    checks.push(Check::boolean(
        "ell-degree-pattern",
        degrees_ok,
        "deg ℓ_n^+ = 2⌊n/2⌋, deg ℓ_n^- = 2⌊(n-1)/2⌋+1, ℓ_0^- = 0",
    ));
    checks.push(Check::boolean(
        "ell-dot-e-exact",
        dots_ok,
        "(ℓ_n^±, e_n) = (1 ± (-1)^n) ||e_n||^2",
    ));

    let mut q_ok = true;
    for n in 0..k {
        for sign in [Sign::Plus, Sign::Minus] {
            let ell = ell_vector_exact(params, n, sign)?;
            let (same, other) = match sign {
                Sign::Plus => (&qp, &qm),
                Sign::Minus => (&qm, &qp),
            };
            let img = same.apply_exact(&ell).expect("exact Q");
            q_ok &= img.iter().zip(&ell).all(|(x, y)| *x == y * rat(2, 1));
            q_ok &= other.apply_exact(&ell).expect("exact Q").iter().all(Zero::is_zero);
        }
    }
    checks.push(Check::boolean(
        "q-on-ell-exact",
        q_ok,
        format!("Q^± ℓ_n^± = 2ℓ_n^± and Q^± ℓ_n^∓ = 0 for all n < {k}"),
    ));

    Ok(OperatorReport {
        kind: "structure".into(),
        q: params.q,
        k,
        eigenvalues: Vec::new(),
        checks,
    })
}

/// `ψ_k(t) = sqrt(5^q k!/Γ(k+2q)) L_k^p(√5 t) e^{-αt}`.
pub fn psi_k(params: &SpaceParams, k: usize, t: f64) -> f64 {
    let q = params.q;
    let ln_c = 0.5 * (q * 5f64.ln() + ln_gamma(k as f64 + 1.0).expect("k >= 0")
        - ln_gamma(k as f64 + 2.0 * q).expect("q > 0"));
    ln_c.exp() * laguerre(k, params.p, 5f64.sqrt() * t) * (-golden() * t).exp()
}

/// `(N ψ_k)(t)` by direct quadrature of the Bessel kernel.
fn n_apply_psi(params: &SpaceParams, k: usize, t: f64, count: usize) -> Result<f64> {
    let p = params.p;
    let rule = gauss_laguerre_cached(p, count)?;
    // s^p e^{-s} e^{-αs} ds with u = (1+α)s
    let c = 1.0 + golden();
    let scale = (-(p + 1.0) * c.ln()).exp();
    let two_p = 2f64.powf(p);
    let sum = rule.integrate(|u| {
        let s = u / c;
        let psi_poly = psi_k(params, k, s) * (golden() * s).exp();
        two_p * bessel_j_scaled(p, 2.0 * (s * t).sqrt()) * psi_poly
    });
    Ok(scale * sum)
}

/// Eigenpairs `(λ_k, ψ_k)` of `N` with `λ_k = (-1)^k α^{2(q+k)}`.
pub fn n_eigensystem_check(params: &SpaceParams, k_max: usize) -> Result<OperatorReport> {
    if k_max > 8 {
        return Err(Error::InvalidParameter("k_max must be <= 8".into()));
    }
    let q = params.q;
    let p = params.p;
    let a = golden();
    let sqrt5 = 5f64.sqrt();
    let mut checks = Vec::new();
    let outer = gauss_laguerre_cached(p, 64)?;
    let exact_rule = gauss_laguerre_cached(p, 2 * k_max + 8)?;
    for k in 0..=k_max {
        let lambda = if k % 2 == 0 { 1.0 } else { -1.0 } * a.powf(2.0 * (q + k as f64));
        // ||ψ_k||² = c² 5^{-q} ∫ L_k(u)² u^p e^{-u} du, exact by the rule
        let norm_sq = exact_rule.integrate(|u| {
            let v = psi_k(params, k, u / sqrt5) * (a * u / sqrt5).exp();
            v * v
        }) * (-q * 5f64.ln()).exp();
        let norm = norm_sq.sqrt();
        checks.push(Check::within(
            format!("psi-norm-k{k}"),
            (norm - 1.0).abs(),
            1e-8,
            format!("||ψ_{k}|| = {norm}"),
        ));
        // residual with t = u/√5 so that the integrand carries no net exponential
        let mut res = 0.0;
        for (u, w) in outer.nodes.iter().zip(&outer.weights) {
            let t = u / sqrt5;
            let r = n_apply_psi(params, k, t, 160)? - lambda * psi_k(params, k, t);
            res += w * r * r * (u * (1.0 - 1.0 / sqrt5)).exp();
        }
        let res = (res * (-q * 5f64.ln()).exp()).sqrt() / norm;
        checks.push(Check::within(
            format!("psi-residual-k{k}"),
            res,
            1e-8,
            format!("||Nψ_{k} - λ_{k}ψ_{k}|| / ||ψ_{k}|| with λ_{k} = {lambda}"),
        ));
    }
    let n = assemble_n(params, NMethod::Exact)?;
    let spec = spectrum(&n)?;
    let norm = spec.by_magnitude()[0].abs();
    checks.push(Check::within(
        "n-spectral-norm",
        (norm - a.powf(2.0 * q)).abs(),
        1e-8,
        format!("||N|| = {norm}, golden-mean power {}", a.powf(2.0 * q)),
    ));
    let top = spec.by_magnitude();
    let worst = (0..=k_max.min(params.k - 1))
        .map(|k| {
            let lambda = if k % 2 == 0 { 1.0 } else { -1.0 } * a.powf(2.0 * (q + k as f64));
            (top[k] - lambda).abs()
        })
        .fold(0.0, f64::max);
    checks.push(Check::within(
        "n-top-eigenvalues",
        worst,
        1e-8,
        format!("largest |λ| of the K={} truncation against (-1)^k α^(2(q+k))", params.k),
    ));
    Ok(OperatorReport {
        kind: "N".into(),
        q,
        k: params.k,
        eigenvalues: spec.eigenvalues,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuclearityReport {
    /// `||e_n|| ||g_n||`
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Consecutive term ratios.
    pub ratios: Vec<f64>,
    /// Largest ratio beyond `n = 5`.
    pub max_ratio_tail: f64,
    /// Largest relative gap between the closed-form `||g_n||` and quadrature.
    pub g_norm_defect: f64,
}

/// Partial sums of `Σ ||e_n|| ||g_n||`, `||g_n|| = √Γ(2n+2q) / (n! 3^{n+q})`.
pub fn nuclearity_surrogate(params: &SpaceParams, n_terms: usize) -> Result<NuclearityReport> {
    if n_terms < 7 {
        return Err(Error::InvalidParameter("need at least 7 terms".into()));
    }
    let q = params.q;
    let p = params.p;
    let ln_g = |n: usize| {
        0.5 * ln_gamma(2.0 * n as f64 + 2.0 * q).expect("q > 0")
            - ln_gamma(n as f64 + 1.0).expect("n >= 0")
            - (n as f64 + q) * 3f64.ln()
    };
    let terms: Vec<f64> = (0..n_terms)
        .map(|n| (0.5 * params.ln_e_norm_sq(n) + ln_g(n)).exp())
        .collect();
    let mut acc = 0.0;
    let partial_sums = terms
        .iter()
        .map(|t| {
            acc += t;
            acc
        })
        .collect();
    let ratios: Vec<f64> = terms.windows(2).map(|w| w[1] / w[0]).collect();
    let max_ratio_tail = ratios[5..].iter().copied().fold(0.0, f64::max);
    // ||g_n||² = ∫ t^{2n} e^{-2t}/n!² t^p e^{-t} dt; u = 3t makes it exact
    let rule = gauss_laguerre_cached(p, n_terms + 4)?;
    let mut defect: f64 = 0.0;
    for n in 0..n_terms {
        let lf = ln_gamma(n as f64 + 1.0).expect("n >= 0");
        let vals: f64 = rule.integrate(|u| ((2 * n) as f64 * (u / 3.0).ln() - 2.0 * lf).exp());
        let num = (vals * (-(p + 1.0) * 3f64.ln()).exp()).sqrt();
        defect = defect.max((num - ln_g(n).exp()).abs() / ln_g(n).exp());
    }
    Ok(NuclearityReport { terms, partial_sums, ratios, max_ratio_tail, g_norm_defect: defect })
}

/// Norm diagnostics for `J = N M^{-1}` and `Q^±`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JDiagnostic {
    pub q: f64,
    #[serde(rename = "K")]
    pub k: usize,
    /// `||N M^{-1}||` through a Cholesky solve; `None` when `M` is not
    /// numerically positive definite.
    pub j_norm_solve: Option<f64>,
    /// `||J||` from the exact identity `J = (M^{-1}N)*`, i.e. the transpose of
    /// `Q^+ - I` in the `ê` basis.
    pub j_norm_structural: f64,
    /// `λ_max(M)/λ_min(M)` of the truncation.
    pub m_condition: f64,
    pub q_plus_norm: f64,
    pub q_minus_norm: f64,
    /// Spectral radius of `Q^±` (the diagonal of a triangular matrix).
    pub q_plus_radius: f64,
    pub q_minus_radius: f64,
    pub bound: f64,
}

pub fn j_diagnostic(params: &SpaceParams) -> Result<JDiagnostic> {
    let m = assemble_m(params)?;
    let n = assemble_n(params, NMethod::Exact)?;
    let eig = m.entries.clone().symmetric_eigenvalues();
    let m_condition = eig.max() / eig.min();
    let j_norm_solve = match assemble_derived(&m, &n, OpKind::J) {
        Ok(j) => Some(spectral_norm(&j)?),
        Err(Error::IllConditioned(_)) => None,
        Err(e) => return Err(e),
    };
    let qp = assemble_derived(&m, &n, OpKind::QPlus)?;
    let qm = assemble_derived(&m, &n, OpKind::QMinus)?;
    let mut b = qp.clone();
    for i in 0..b.dim() {
        b.entries[(i, i)] -= 1.0;
    }
    let radius = |q: &super::OperatorMatrix| (0..q.dim()).map(|i| q.entries[(i, i)].abs()).fold(0.0, f64::max);
    Ok(JDiagnostic {
        q: params.q,
        k: params.k,
        j_norm_solve,
        j_norm_structural: spectral_norm(&b)?,
        m_condition,
        q_plus_norm: spectral_norm(&qp)?,
        q_minus_norm: spectral_norm(&qm)?,
        q_plus_radius: radius(&qp),
        q_minus_radius: radius(&qm),
        bound: 2.0 * PI,
    })
}

/// Movement of the `P^+` eigenvalue nearest `target` when `K` doubles.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub q: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub target: f64,
    pub nearest_k: f64,
    pub nearest_2k: f64,
    pub drift: f64,
    pub residual_scale: f64,
}

pub fn drift_diagnostic(params: &SpaceParams, target: f64) -> Result<DriftReport> {
    let eig_near = |s: &SpaceParams| -> Result<(f64, f64)> {
        let m = assemble_m(s)?;
        let n = assemble_n(s, NMethod::Exact)?;
        let spec = spectrum(&assemble_derived(&m, &n, OpKind::PPlus)?)?;
        Ok((spec.nearest(target), spec.max_residual()))
    };
    let (a, ra) = eig_near(params)?;
    let (b, rb) = eig_near(&params.with_k(2 * params.k)?)?;
    Ok(DriftReport {
        q: params.q,
        k: params.k,
        target,
        nearest_k: a,
        nearest_2k: b,
        drift: (a - b).abs(),
        residual_scale: ra.max(rb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_examples() {
        let s = SpaceParams::new(1.0, 10).unwrap();
        assert!((positivity_form(&s, 1, Sign::Plus) - 0.25).abs() < 1e-15);
        assert!((positivity_form(&s, 1, Sign::Minus) - 0.125).abs() < 1e-15);
        assert_eq!(positivity_form(&s, 0, Sign::Minus), 0.0);
    }

    #[test]
    fn structure_passes() {
        for q in [0.5, 1.0, 1.5] {
            let s = SpaceParams::new(q, 24).unwrap();
            let r = verify_structure(&s, 12).unwrap();
            assert!(r.passed(), "q={q}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn eigenfunctions_of_n() {
        let s = SpaceParams::new(1.0, 60).unwrap();
        let r = n_eigensystem_check(&s, 3).unwrap();
        assert!(r.passed(), "{:?}", r.first_failure());
        let half = SpaceParams::new(0.5, 60).unwrap();
        let n = assemble_n(&half, NMethod::Exact).unwrap();
        let top = spectrum(&n).unwrap().by_magnitude()[0];
        assert!((top - golden()).abs() < 1e-8);
    }

    #[test]
    fn nuclearity() {
        let s = SpaceParams::new(1.0, 10).unwrap();
        let r = nuclearity_surrogate(&s, 30).unwrap();
        assert!(r.max_ratio_tail < 1.0);
        assert!(r.g_norm_defect < 1e-12);
    }
}
