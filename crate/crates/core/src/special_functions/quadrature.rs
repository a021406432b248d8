use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Gauss rule `∫ f(t) w(t) dt ≈ Σ w_i f(t_i)`.
///
/// For Laguerre rules `w(t) = t^alpha e^{-t}` on `(0, ∞)`; for Legendre rules
/// `alpha` is zero and the weight is 1 on the stated interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ln w_i`, finite even where `w_i` underflows.
    #[serde(skip)]
    pub ln_weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `w_i e^{t_i} t_i^{-alpha}`: the weight divided by the Laguerre weight
    /// function at its node, which stays of moderate size for every node.
    pub fn scaled_weight(&self, i: usize) -> f64 {
        let t = self.nodes[i];
        (self.ln_weights[i] + t - self.alpha * t.ln()).exp()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| if w == 0.0 { 0.0 } else { w * f(t) })
            .sum()
    }

    /// CSV with columns `index,node,weight`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "node", "weight"])?;
        for (i, (t, wt)) in self.nodes.iter().zip(&self.weights).enumerate() {
            w.write_record([i.to_string(), format!("{t:.17e}"), format!("{wt:.17e}")])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

fn jacobi_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::try_new(m, 1e-15, 10_000)
        .ok_or_else(|| Error::EigenSolver("Jacobi matrix did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenSolver("non-finite Jacobi eigenvalue".into()));
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// Orthonormal Laguerre values at `x`, returned as
/// `(l_n, l_{n-1}, ln Σ_{k<n} l_k²)` with a common scale removed from the
/// first two.
fn laguerre_christoffel(n: usize, alpha: f64, x: f64) -> (f64, f64, f64) {
    let mut log_scale = -0.5 * ln_gamma(alpha + 1.0).expect("alpha > -1");
    let mut prev = 0.0;
    let mut cur = 1.0;
    // Σ l_k² = exp(2 log_scale) * acc
    let mut acc = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf * (kf + alpha)).sqrt() * prev)
            / ((kf + 1.0) * (kf + alpha + 1.0)).sqrt();
        prev = cur;
        cur = next;
        if k + 1 < n {
            acc += cur * cur;
        }
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 {
            let inv = 1.0 / mag;
            prev *= inv;
            cur *= inv;
            acc *= inv * inv;
            log_scale += mag.ln();
        }
    }
    (cur, prev, 2.0 * log_scale + acc.ln())
}

/// Gauss–Laguerre rule for `t^alpha e^{-t}` with `count` nodes.
///
/// Nodes come from the Jacobi matrix of the Laguerre recurrence and are then
/// polished by Newton steps on `L_count^alpha`; weights use the Christoffel
/// function, which stays accurate where eigenvector components underflow.
pub fn gauss_laguerre(alpha: f64, count: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::domain(alpha, "alpha > -1"));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    let diag: Vec<f64> = (0..count).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..count)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    let mut nodes = jacobi_eigenvalues(&diag, &off)?;
    let n = count as f64;
    let c = (n * (n + alpha)).sqrt();
    for x in nodes.iter_mut() {
        for _ in 0..4 {
            let (ln, ln1, _) = laguerre_christoffel(count, alpha, *x);
            let denom = n * ln - c * ln1;
            if denom == 0.0 {
                break;
            }
            let step = *x * ln / denom;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
    }
    let ln_weights: Vec<f64> = nodes
        .iter()
        .map(|&x| -laguerre_christoffel(count, alpha, x).2)
        .collect();
    let weights = ln_weights.iter().map(|l| l.exp()).collect();
    if nodes.windows(2).any(|w| !(w[0] < w[1])) || nodes[0] <= 0.0 {
        return Err(Error::EigenSolver("Laguerre nodes not strictly increasing".into()));
    }
    Ok(QuadratureRule { alpha, nodes, weights, ln_weights })
}

/// Shared, memoised [`gauss_laguerre`]; operator assembly asks for the same
/// few rules many times.
pub fn gauss_laguerre_cached(alpha: f64, count: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (alpha.to_bits(), count);
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_laguerre(alpha, count)?);
    cache
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    Ok(rule)
}

/// Gauss–Legendre rule with `count` nodes mapped to `[a, b]`.
pub fn gauss_legendre(count: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if count == 0 {
        return Err(Error::InvalidParameter("rule needs at least one node".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidParameter(format!("empty interval [{a}, {b}]")));
    }
    let diag = vec![0.0; count];
    let off: Vec<f64> = (1..count)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let mut xs = jacobi_eigenvalues(&diag, &off)?;
    let legendre = |x: f64| {
        let (mut p0, mut p1) = (1.0, x);
        for k in 1..count {
            let k = k as f64;
            let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        let dp = count as f64 * (x * p1 - p0) / (x * x - 1.0);
        if count == 1 {
            (x, 1.0)
        } else {
            (p1, dp)
        }
    };
    let mut weights = Vec::with_capacity(count);
    for x in xs.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = legendre(*x);
            *x -= p / dp;
        }
        let (_, dp) = legendre(*x);
        weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
    }
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let weights: Vec<f64> = weights.iter().map(|w| half * w).collect();
    Ok(QuadratureRule {
        alpha: 0.0,
        nodes: xs.iter().map(|x| mid + half * x).collect(),
        ln_weights: weights.iter().map(|w| w.ln()).collect(),
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_functions::gamma;

    #[test]
    fn one_node_rules() {
        let r = gauss_laguerre(0.0, 1).unwrap();
        assert!((r.nodes[0] - 1.0).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
        let r = gauss_laguerre(1.0, 1).unwrap();
        assert!((r.nodes[0] - 2.0).abs() < 1e-15 && (r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn monomial_exactness() {
        for &(alpha, count) in &[(1.0, 20), (0.0, 32), (-0.5, 15), (3.0, 40), (2.0, 150)] {
            let r = gauss_laguerre(alpha, count).unwrap();
            let total: f64 = r.weights.iter().sum();
            let g = gamma(alpha + 1.0).unwrap();
            assert!((total - g).abs() < 1e-12 * g, "alpha={alpha} count={count}");
            for j in [1usize, count, 2 * count - 1] {
                let exact = ln_gamma(alpha + 1.0 + j as f64).unwrap();
                let log_sum = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(&t, &w)| w.ln() + j as f64 * t.ln())
                    .fold(f64::NEG_INFINITY, |m, v| m.max(v));
                let s: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .filter(|(_, &w)| w > 0.0)
                    .map(|(&t, &w)| (w.ln() + j as f64 * t.ln() - log_sum).exp())
                    .sum();
                // relative error of the integral equals the log difference to first order
                let rel = (log_sum + s.ln() - exact).abs();
                assert!(rel < 1e-12, "alpha={alpha} count={count} j={j} rel={rel}");
            }
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn legendre_exactness() {
        let r = gauss_legendre(12, 0.0, 2.0).unwrap();
        for j in 0..24 {
            let exact = 2f64.powi(j + 1) / (j + 1) as f64;
            assert!((r.integrate(|t| t.powi(j)) - exact).abs() < 1e-13 * exact);
        }
        assert!(gauss_legendre(3, 1.0, 1.0).is_err());
    }

    #[test]
    fn csv_dump() {
        let csv = gauss_laguerre(0.0, 2).unwrap().to_csv().unwrap();
        assert!(csv.starts_with("index,node,weight\n0,"));
        assert_eq!(csv.lines().count(), 3);
    }
}
