use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::families::{family_eval, FamilyKind, ReciprocalFamily};
use super::hankel_apply_with;
use super::{Decay, DEFAULT_NODES};
use crate::error::{Error, Result};
use crate::par::{map_slice, Exec};
use crate::rational::{binomial_rational, factorial, int, rising, to_f64};
use crate::report::{Check, CheckReport};
use crate::special_functions::{
    binomial_real, gamma, gauss_laguerre_cached, gauss_legendre, hyp2f1_terminating, laguerre,
};

/// Composite Gauss–Legendre nodes and weights covering the bulk of an
/// `L²(ℝ₊)` integrand whose square decays like `decay` does, squared.
fn l2_grid(decay: Decay, n: usize) -> Result<Vec<(f64, f64)>> {
    let edges: Vec<f64> = match decay {
        Decay::Exponential(r) => {
            let top = (40.0 + 4.0 * n as f64) / r;
            let mut e = vec![0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];
            e.retain(|x| *x < top);
            e.push(top);
            e
        }
        Decay::Gaussian(c) => {
            let top = ((20.0 + 4.0 * n as f64) / c).sqrt();
            let mut e = vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
            e.retain(|x| *x < top);
            e.push(top);
            e
        }
    };
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let rule = gauss_legendre(20, w[0], w[1])?;
        out.extend(rule.nodes.iter().copied().zip(rule.weights.iter().copied()));
    }
    Ok(out)
}

fn l2_norm(grid: &[(f64, f64)], values: &[f64]) -> f64 {
    grid.iter().zip(values).map(|((_, w), v)| w * v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub family: String,
    pub transform: String,
    pub p: f64,
    /// `||T f_n - σ_n f_n|| / ||f_n||` for `n = 0..=n_max`.
    pub residuals: Vec<f64>,
    pub tolerance: f64,
    pub checks: Vec<Check>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `L²(ℝ₊)` residuals of the self-reciprocity relations for one family.
pub fn reciprocity_residual(exec: Exec, kind: FamilyKind, p: f64, n_max: usize) -> Result<ResidualReport> {
    if n_max > 8 {
        return Err(Error::InvalidParameter("n_max must be <= 8".into()));
    }
    let tol = 1e-6;
    let mut residuals = Vec::new();
    let mut checks = Vec::new();
    for n in 0..=n_max {
        let fam = ReciprocalFamily::new(kind, p, n)?;
        if kind == FamilyKind::HMinus && n == 0 {
            // h_0^- vanishes identically
            residuals.push(0.0);
            continue;
        }
        let grid = l2_grid(kind.decay(), n)?;
        let tr = fam.transform();
        let f = |s: f64| family_eval(&fam, s);
        let images = map_slice(exec, &grid, |&(t, _)| {
            hankel_apply_with(&tr, &f, t, kind.decay(), DEFAULT_NODES)
        });
        let sigma = kind.sign(n);
        let mut diff = Vec::with_capacity(grid.len());
        let mut vals = Vec::with_capacity(grid.len());
        for (&(t, _), img) in grid.iter().zip(images) {
            let v = f(t);
            diff.push(img? - sigma * v);
            vals.push(v);
        }
        let r = l2_norm(&grid, &diff) / l2_norm(&grid, &vals);
        checks.push(Check::within(
            format!("{}-{}-reciprocity-n{n}", kind.name(), tr.kind),
            r,
            tol,
            format!("p = {p}, eigenvalue {sigma}"),
        ));
        residuals.push(r);
    }
    Ok(ResidualReport {
        family: kind.name().into(),
        transform: kind.transform().to_string(),
        p,
        residuals,
        tolerance: tol,
        checks,
    })
}

/// `φ̄*_n(s) = ((p+1)_n / n!) ₂F₁(-n, s; p+1; 2)`, the Mellin transform of
/// `e^{-t} L_n^p(2t)` divided by `Γ(s)`.
pub fn phibar_exact(n: u64, p: &BigRational, s: &BigRational) -> Result<BigRational> {
    let c = p + BigRational::one();
    let pre = rising(&c, n) / BigRational::from_integer(factorial(n));
    Ok(pre * hyp2f1_terminating(n, s, &c, &int(2))?)
}

/// The same quantity from the monomial expansion of `L_n^p(2t)`:
/// `Σ_k (-2)^k C(n+p, n-k) (s)_k / k!`.
fn phibar_expansion(n: u64, p: &BigRational, s: &BigRational) -> BigRational {
    let top = p + int(n as i64);
    (0..=n).fold(BigRational::zero(), |acc, k| {
        let c = binomial_rational(&top, n - k) * rising(s, k) * int(2).pow(k as i32)
            / BigRational::from_integer(factorial(k));
        if k % 2 == 0 {
            acc + c
        } else {
            acc - c
        }
    })
}

/// Exact Mellin-side functional equation and its numeric companions.
pub fn mellin_symmetry_check(p: &BigRational, n_max: u64, s_samples: &[BigRational]) -> Result<CheckReport> {
    if p.is_negative() {
        return Err(Error::domain(p, "p >= 0"));
    }
    let pf = to_f64(p);
    let reflect = |s: &BigRational| p + BigRational::one() - s;
    let mut feq = true;
    let mut expansion = true;
    let mut worst_quad: f64 = 0.0;
    for n in 0..=n_max {
        for s in s_samples {
            let a = phibar_exact(n, p, s)?;
            let b = phibar_exact(n, p, &reflect(s))?;
            feq &= if n % 2 == 0 { a == b } else { a == -b };
            expansion &= a == phibar_expansion(n, p, s);
            let sf = to_f64(s);
            if sf > 0.0 {
                let rule = gauss_laguerre_cached(sf - 1.0, n as usize + 4)?;
                // the rule's weight is t^{s-1} e^{-t}
                let num = rule.integrate(|t| laguerre(n as usize, pf, 2.0 * t)) / gamma(sf)?;
                let exact = to_f64(&a);
                worst_quad = worst_quad.max((num - exact).abs() / exact.abs().max(1.0));
            }
        }
    }
    let mut checks = vec![
        Check::boolean(
            "mellin-functional-equation",
            feq,
            format!("φ̄*_n(s) = (-1)^n φ̄*_n(1+p-s) exactly for n <= {n_max}, p = {p}"),
        ),
        Check::boolean(
            "mellin-laguerre-expansion",
            expansion,
            "hypergeometric form equals the term-by-term Mellin transform of L_n^p(2t)",
        ),
        Check::within(
            "mellin-quadrature",
            worst_quad,
            1e-9,
            "Gauss–Laguerre Mellin integral against the exact value for s > 0",
        ),
    ];
    // ∫ a^{-q} e^{-t/a} ψ_n dt = (-1)^n ∫ a^q e^{-at} ψ_n dt
    let q = (pf + 1.0) / 2.0;
    let mut worst_lap: f64 = 0.0;
    for n in 0..=n_max as usize {
        let fam = ReciprocalFamily::new(FamilyKind::Psi, pf, n)?;
        let side = |c: f64| -> Result<f64> {
            // ∫ e^{-ct} ψ_n(t) dt with u = (1+c)t
            let rule = gauss_laguerre_cached(pf, n + 6)?;
            let norm = family_eval(&ReciprocalFamily::new(FamilyKind::Phi, pf, n)?, 0.0);
            let lag0 = laguerre(n, pf, 0.0);
            let scale = norm / lag0;
            let v = rule.integrate(|u| laguerre(n, pf, 2.0 * u / (1.0 + c)));
            Ok(scale * v * (1.0 + c).powf(-pf - 1.0))
        };
        for a in [0.5f64, 1.0, 3.0] {
            let left = a.powf(-q) * side(1.0 / a)?;
            let right = fam.kind.sign(n) * a.powf(q) * side(a)?;
            worst_lap = worst_lap.max((left - right).abs());
        }
    }
    checks.push(Check::within(
        "laplace-pair-psi",
        worst_lap,
        1e-6,
        "Laplace-side pair identity for (ψ_n, (-1)^n ψ_n) at a = 1/2, 1, 3",
    ));
    Ok(CheckReport::new(format!("mellin p={p}"), checks))
}

/// Finite-difference check of `ϕ_n'' = ((p²-1/4)/t² + t² - 4n - 2p - 2) ϕ_n`
/// and of the read-back `Hϕ_n / ϕ_n = 2n + p + 1`.
pub fn ode_residual(p: f64, n: usize, t_samples: &[f64]) -> Result<CheckReport> {
    let fam = ReciprocalFamily::new(FamilyKind::SmallPhi, p, n)?;
    let f = |t: f64| family_eval(&fam, t);
    let second = |t: f64, h: f64| (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let mut sensitivity: f64 = 0.0;
    let mut eig_worst: f64 = 0.0;
    let peak = t_samples.iter().map(|&t| f(t).abs()).fold(0.0, f64::max);
    for &t in t_samples {
        if !(t > h) {
            return Err(Error::domain(t, "t away from the origin"));
        }
        let v = (p * p - 0.25) / (t * t) + t * t - 4.0 * n as f64 - 2.0 * p - 2.0;
        let d2 = second(t, h);
        let scale = d2.abs().max((v * f(t)).abs()).max(f(t).abs()).max(1.0);
        worst = worst.max((d2 - v * f(t)).abs() / scale);
        sensitivity = sensitivity.max((d2 - second(t, 2.0 * h)).abs() / scale);
        if f(t).abs() > 1e-3 * peak {
            let hf = 0.5 * (-d2 + ((p * p - 0.25) / (t * t) + t * t) * f(t));
            eig_worst = eig_worst.max((hf / f(t) - (2.0 * n as f64 + p + 1.0)).abs());
        }
    }
    Ok(CheckReport::new(
        format!("ode p={p} n={n}"),
        vec![
            Check::within(
                "ode-residual",
                worst,
                1e-4,
                format!("step 1e-4; change under step doubling {sensitivity:.2e}"),
            ),
            Check::within(
                "h-eigenvalue-readback",
                eig_worst,
                1e-4,
                format!("Hϕ_{n}/ϕ_{n} against {}", 2.0 * n as f64 + p + 1.0),
            ),
        ],
    ))
}

/// `max |⟨φ_n, ψ_m⟩ - δ_nm|` and `max |⟨ϕ_n, ϕ_m⟩ - δ_nm|` over `n, m <= n_max`,
/// both by composite Gauss–Legendre on a truncated half line.
pub fn biorthogonality_defect(p: f64, n_max: usize) -> Result<(f64, f64)> {
    let exp_grid = l2_grid(Decay::Exponential(1.0), n_max)?;
    let gauss_grid = l2_grid(Decay::Gaussian(0.5), n_max)?;
    let table = |kind: FamilyKind, grid: &[(f64, f64)]| -> Result<Vec<Vec<f64>>> {
        (0..=n_max)
            .map(|n| {
                let fam = ReciprocalFamily::new(kind, p, n)?;
                Ok(grid.iter().map(|&(t, _)| family_eval(&fam, t)).collect())
            })
            .collect()
    };
    let phi = table(FamilyKind::Phi, &exp_grid)?;
    let psi = table(FamilyKind::Psi, &exp_grid)?;
    let small = table(FamilyKind::SmallPhi, &gauss_grid)?;
    let dot = |a: &[f64], b: &[f64], grid: &[(f64, f64)]| -> f64 {
        grid.iter().zip(a.iter().zip(b)).map(|((_, w), (x, y))| w * x * y).sum()
    };
    let (mut bi, mut ortho): (f64, f64) = (0.0, 0.0);
    for n in 0..=n_max {
        for m in 0..=n_max {
            let delta = if n == m { 1.0 } else { 0.0 };
            bi = bi.max((dot(&phi[n], &psi[m], &exp_grid) - delta).abs());
            ortho = ortho.max((dot(&small[n], &small[m], &gauss_grid) - delta).abs());
        }
    }
    Ok((bi, ortho))
}

/// Largest relative disagreement between `ϕ_n(t)` and its two expressions
/// through `φ_n(t²/2)` and `ψ_n(t²/2)`.
pub fn change_of_variable_defect(p: f64, n: usize, samples: &[f64]) -> Result<f64> {
    let q = (p + 1.0) / 2.0;
    let phi = ReciprocalFamily::new(FamilyKind::Phi, p, n)?;
    let psi = ReciprocalFamily::new(FamilyKind::Psi, p, n)?;
    let small = ReciprocalFamily::new(FamilyKind::SmallPhi, p, n)?;
    let mut worst: f64 = 0.0;
    for &t in samples {
        let a = 2f64.powf(0.5 - q) * t.powf(p + 0.5) * family_eval(&phi, t * t / 2.0);
        let b = 2f64.powf(q - 0.5) * t.powf(0.5 - p) * family_eval(&psi, t * t / 2.0);
        let c = family_eval(&small, t);
        let scale = a.abs().max(1e-300);
        worst = worst.max((a - b).abs() / scale).max((a - c).abs() / scale);
    }
    Ok(worst)
}

/// `φ_n` and `Jφ_n` through the `h_m^±` expansion against direct evaluation.
pub fn expansion_identity_defect(p: f64, n_max: usize, samples: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        let phi = ReciprocalFamily::new(FamilyKind::Phi, p, n)?;
        let norm = family_eval(&phi, 0.0) / laguerre(n, p, 0.0);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        for &t in samples {
            let (mut even, mut odd) = (0.0, 0.0);
            for m in 0..=n {
                let hp = family_eval(&ReciprocalFamily::new(FamilyKind::HPlus, p, m)?, t);
                let hm = family_eval(&ReciprocalFamily::new(FamilyKind::HMinus, p, m)?, t);
                let c = binomial_real(n as f64 + p, (n - m) as u64) * (-2f64).powi(m as i32);
                even += c * (hp + hm) / 2.0;
                odd += c * (hp - hm) / 2.0;
            }
            let direct = family_eval(&phi, t);
            let scale = direct.abs().max(norm * (-t).exp());
            worst = worst
                .max((sign * norm * even - direct).abs() / scale)
                // Jφ_n from the expansion must equal (-1)^n φ_n
                .max((sign * norm * odd - sign * direct).abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{hankel_apply, HankelKind, HankelTransform};
    use crate::rational::rat;

    #[test]
    fn k_on_small_phi_example() {
        let fam = ReciprocalFamily::new(FamilyKind::SmallPhi, 0.0, 1).unwrap();
        let tr = HankelTransform::new(HankelKind::K, 0.0).unwrap();
        let v = hankel_apply(&tr, &|s: f64| fam.eval(s), 1.0).unwrap();
        assert!((v + fam.eval(1.0)).abs() < 1e-7);
    }

    #[test]
    fn reciprocity_examples() {
        let r = reciprocity_residual(Exec::default(), FamilyKind::Phi, 1.0, 4).unwrap();
        assert!(r.passed(), "{:?}", r.residuals);
        let r = reciprocity_residual(Exec::default(), FamilyKind::SmallPhi, 0.0, 4).unwrap();
        assert!(r.passed(), "{:?}", r.residuals);
        for kind in [FamilyKind::HPlus, FamilyKind::HMinus, FamilyKind::Psi] {
            let r = reciprocity_residual(Exec::default(), kind, 1.0, 4).unwrap();
            assert!(r.passed(), "{kind:?} {:?}", r.residuals);
        }
    }

    #[test]
    fn mellin_examples() {
        let one = rat(1, 1);
        assert_eq!(phibar_exact(1, &one, &rat(0, 1)).unwrap(), rat(2, 1));
        assert_eq!(phibar_exact(1, &one, &rat(2, 1)).unwrap(), rat(-2, 1));
        assert!(phibar_exact(1, &one, &one).unwrap().is_zero());
        let s = [rat(1, 2), rat(1, 3), rat(5, 7), rat(-3, 2)];
        for p in [rat(0, 1), rat(1, 1), rat(3, 2)] {
            let r = mellin_symmetry_check(&p, 6, &s).unwrap();
            assert!(r.passed, "{:?}", r.first_failure());
        }
    }

    #[test]
    fn ode_examples() {
        for (n, t) in [(0, 1.0), (2, 2.0), (0, 1.3), (3, 0.8)] {
            let r = ode_residual(1.0, n, &[t]).unwrap();
            assert!(r.passed, "{:?}", r.first_failure());
        }
    }

    #[test]
    fn grid_identities() {
        for p in [0.0, 1.0, 2.0] {
            let (bi, ortho) = biorthogonality_defect(p, 6).unwrap();
            assert!(bi < 1e-8 && ortho < 1e-8, "p={p}: {bi} {ortho}");
        }
        let ts = [0.2, 0.9, 1.7, 3.1];
        assert!(change_of_variable_defect(1.5, 3, &ts).unwrap() < 1e-10);
        assert!(expansion_identity_defect(1.0, 4, &ts).unwrap() < 1e-8);
    }
}
