use num_rational::BigRational;
use num_traits::Zero;

use super::gamma::{binomial_real, ln_gamma};
use crate::rational::{binomial_rational, factorial, powi};

/// `L_n^p(t)` by the three-term recurrence.
pub fn laguerre(n: usize, p: f64, t: f64) -> f64 {
    *laguerre_all(n, p, t).last().expect("nonempty")
}

/// `[L_0^p(t), ..., L_n^p(t)]`.
pub fn laguerre_all(n: usize, p: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(1.0 + p - t);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + p - t) * out[k] - (kf + p) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `L_n^p(t) = Σ_j (-1)^j C(n+p, n-j) t^j / j!`, evaluated term by term.
pub fn laguerre_sum(n: usize, p: f64, t: f64) -> f64 {
    let mut total = 0.0;
    let mut tj_over_fact = 1.0;
    for j in 0..=n {
        if j > 0 {
            tj_over_fact *= t / j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * binomial_real(n as f64 + p, (n - j) as u64) * tj_over_fact;
    }
    total
}

/// Exact `L_n^p(t)` for rational `p` and `t`.
pub fn laguerre_exact(n: usize, p: &BigRational, t: &BigRational) -> BigRational {
    let top = p + BigRational::from_integer((n as i64).into());
    let mut total = BigRational::zero();
    for j in 0..=n {
        let term = binomial_rational(&top, (n - j) as u64) * powi(t, j as i64)
            / BigRational::from_integer(factorial(j as u64));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// `[l_0(t), ..., l_n(t)]` with `l_k = L_k^p / ||L_k^p||` orthonormal for
/// `t^p e^{-t} dt`.
pub fn laguerre_orthonormal_all(n: usize, p: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push((-0.5 * ln_gamma(p + 1.0).expect("p > -1")).exp());
    if n == 0 {
        return out;
    }
    out.push(out[0] * (1.0 + p - t) / (1.0 + p).sqrt());
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + p - t) * out[k] - (kf * (kf + p)).sqrt() * out[k - 1])
            / ((kf + 1.0) * (kf + p + 1.0)).sqrt();
        out.push(next);
    }
    out
}

/// Laguerre functions `e^{-t/2} t^{p/2} l_k(t)` for `k = 0..=n`, orthonormal
/// in `L²(0, ∞)`.
///
/// The recurrence runs on a rescaled copy so that neither the polynomial
/// growth nor the exponential decay leaves the `f64` range before they are
/// combined.
pub fn laguerre_functions(n: usize, p: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    if t == 0.0 {
        let v0 = if p == 0.0 { 1.0 } else if p > 0.0 { 0.0 } else { f64::INFINITY };
        out.push(v0);
        let mut prev = 0.0;
        let mut cur = 1.0;
        for k in 0..n {
            let kf = k as f64;
            // at t = 0 the ratio l_{k+1}/l_k is fixed by the recurrence
            let next = ((2.0 * kf + 1.0 + p) * cur - (kf * (kf + p)).sqrt() * prev)
                / ((kf + 1.0) * (kf + p + 1.0)).sqrt();
            prev = cur;
            cur = next;
            out.push(v0 * cur);
        }
        return out;
    }
    let mut log_scale = -0.5 * t + 0.5 * p * t.ln() - 0.5 * ln_gamma(p + 1.0).expect("p > -1");
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(log_scale.exp());
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + p - t) * cur - (kf * (kf + p)).sqrt() * prev)
            / ((kf + 1.0) * (kf + p + 1.0)).sqrt();
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let s = mag.ln();
            log_scale += s;
            let inv = (-s).exp();
            prev *= inv;
            cur *= inv;
        }
        out.push(cur * log_scale.exp());
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, to_f64};

    #[test]
    fn examples() {
        assert_eq!(laguerre(1, 1.0, 0.0), 2.0);
        assert_eq!(laguerre(2, 1.0, 0.0), 3.0);
        assert_eq!(laguerre(0, 2.5, 7.0), 1.0);
        assert_eq!(laguerre_exact(2, &rat(1, 1), &rat(2, 1)), rat(-1, 1));
    }

    #[test]
    fn recurrence_matches_sum() {
        for p in [0.0, 1.0, 3.0] {
            for t in [0.1, 1.0, 10.0] {
                for n in 0..=10 {
                    let a = laguerre(n, p, t);
                    let b = laguerre_sum(n, p, t);
                    assert!((a - b).abs() <= 1e-11 * b.abs().max(1.0), "n={n} p={p} t={t}");
                }
            }
        }
    }

    #[test]
    fn exact_matches_float() {
        let p = rat(1, 2);
        let t = rat(7, 3);
        for n in 0..12 {
            let e = to_f64(&laguerre_exact(n, &p, &t));
            assert!((e - laguerre(n, 0.5, 7.0 / 3.0)).abs() < 1e-12 * e.abs().max(1.0));
        }
    }

    #[test]
    fn functions_match_direct_product_and_survive_large_t() {
        let p = 1.5;
        for &t in &[0.3, 4.0, 30.0] {
            let direct = laguerre_orthonormal_all(20, p, t);
            let scaled = laguerre_functions(20, p, t);
            let w = (-0.5 * t + 0.5 * p * f64::ln(t)).exp();
            for k in 0..=20 {
                assert!((scaled[k] - w * direct[k]).abs() < 1e-12, "t={t} k={k}");
            }
        }
        let far = laguerre_functions(150, 1.0, 900.0);
        assert!(far.iter().all(|v| v.is_finite()));
        // the functions are bounded by 1 in absolute value well inside the oscillatory zone
        let mid = laguerre_functions(150, 1.0, 200.0);
        assert!(mid.iter().all(|v| v.abs() < 1.0));
    }
}
