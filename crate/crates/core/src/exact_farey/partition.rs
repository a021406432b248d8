use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Depth at which the denominator tree is split into independent subtrees.
const SPLIT_DEPTH: usize = 10;

fn weight(b: u64, two_q: f64) -> f64 {
    (-two_q * (b as f64).ln()).exp()
}

/// Adds `b^{-2q}` for every fraction first appearing at levels
/// `level..=n` below the neighbour-denominator pair `(left, right)`.
fn descend(left: u64, right: u64, level: usize, n: usize, two_q: f64, out: &mut [f64]) {
    let b = left + right;
    out[level - 1] += weight(b, two_q);
    if level < n {
        descend(left, b, level + 1, n, two_q, out);
        descend(b, right, level + 1, n, two_q, out);
    }
}

/// `s[k-1] = Σ b^{-2q}` over the fractions of `F_k \ F_{k-1}` for
/// `k = 1..=n` (with `F_0 = {0/1}`, so `s[0] = 1`).
pub fn level_sums(exec: Exec, n: usize, q: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    if !q.is_finite() {
        return Err(Error::domain(q, "finite reals"));
    }
    let two_q = 2.0 * q;
    let mut sums = vec![0.0; n];
    sums[0] = 1.0;
    if n == 1 {
        return Ok(sums);
    }
    // Breadth-first down to the split depth, then independent subtrees.
    let mut frontier: Vec<(u64, u64)> = vec![(1, 1)];
    let mut level = 2;
    while level < n && level < SPLIT_DEPTH {
        let mut next = Vec::with_capacity(frontier.len() * 2);
        for &(l, r) in &frontier {
            let b = l + r;
            sums[level - 1] += weight(b, two_q);
            next.push((l, b));
            next.push((b, r));
        }
        frontier = next;
        level += 1;
    }
    let start = level;
    let partials = par::map_slice(exec, &frontier, |&(l, r)| {
        let mut out = vec![0.0; n];
        descend(l, r, start, n, two_q, &mut out);
        out
    });
    // Fixed summation order keeps the result independent of the executor.
    for part in partials {
        for (s, p) in sums.iter_mut().zip(part) {
            *s += p;
        }
    }
    Ok(sums)
}

/// `2 Σ_{a/b ∈ F_n \ {0/1}} b^{-2q}`, which equals `(P_q^{+n} 1)(0)`.
pub fn knauf_partition(n: usize, q: f64) -> Result<f64> {
    knauf_partition_with(Exec::default(), n, q)
}

pub fn knauf_partition_with(exec: Exec, n: usize, q: f64) -> Result<f64> {
    let sums = level_sums(exec, n, q)?;
    Ok(2.0 * sums.iter().sum::<f64>())
}

/// Exact partition sum for `2q = two_q`.
pub fn knauf_partition_exact(n: usize, two_q: i64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    if n > super::DEFAULT_LEVEL_CAP {
        return Err(Error::InvalidParameter(format!(
            "level {n} exceeds the cap {}",
            super::DEFAULT_LEVEL_CAP
        )));
    }
    let exp = two_q.unsigned_abs() as u32;
    let term = |b: u64| -> BigRational {
        let p = BigInt::from(b).pow(exp);
        if two_q >= 0 {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        }
    };
    let mut total = BigRational::one();
    let mut stack = vec![(1u64, 1u64, 2usize)];
    while let Some((l, r, level)) = stack.pop() {
        if level > n {
            continue;
        }
        let b = l + r;
        total += term(b);
        stack.push((l, b, level + 1));
        stack.push((b, r, level + 1));
    }
    Ok(total * BigRational::from_integer(BigInt::from(2)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub q: f64,
    pub n_max: usize,
    /// `Z_{n_max} / Z_{n_max - 1}`.
    pub ratio: f64,
    /// `Z_n / Z_{n-1}` for `n = 2..=n_max`.
    pub ratios: Vec<f64>,
    /// `(1/n) log Z_n` for `n = 1..=n_max`; tends to `log λ(q)`.
    pub log_rates: Vec<f64>,
}

/// Estimates the growth rate `λ(q)` of `Z_n = (P_q^{+n} 1)(0)`.
pub fn growth_rate_estimate(q: f64, n_max: usize) -> Result<GrowthEstimate> {
    growth_rate_estimate_with(Exec::default(), q, n_max)
}

pub fn growth_rate_estimate_with(exec: Exec, q: f64, n_max: usize) -> Result<GrowthEstimate> {
    if !(q < 1.0) {
        return Err(Error::domain(q, "q < 1"));
    }
    if n_max < 3 {
        return Err(Error::InvalidParameter("n_max must be >= 3".into()));
    }
    if n_max > super::DEFAULT_LEVEL_CAP + 4 {
        return Err(Error::InvalidParameter(format!("n_max {n_max} too large")));
    }
    let sums = level_sums(exec, n_max, q)?;
    let mut z = Vec::with_capacity(n_max);
    let mut acc = 0.0;
    for s in sums {
        acc += s;
        z.push(2.0 * acc);
    }
    let ratios: Vec<f64> = z.windows(2).map(|w| w[1] / w[0]).collect();
    let log_rates = z
        .iter()
        .enumerate()
        .map(|(i, v)| v.ln() / (i + 1) as f64)
        .collect();
    Ok(GrowthEstimate {
        q,
        n_max,
        ratio: *ratios.last().expect("n_max >= 3"),
        ratios,
        log_rates,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_farey::farey_sequence;
    use crate::rational::rat;

    #[test]
    fn small_values() {
        assert_eq!(knauf_partition(1, 0.7).unwrap(), 2.0);
        assert!((knauf_partition(2, 1.0).unwrap() - 2.5).abs() < 1e-15);
        assert!((knauf_partition(3, 1.0).unwrap() - 53.0 / 18.0).abs() < 1e-15);
        assert_eq!(knauf_partition_exact(3, 2).unwrap(), rat(53, 18));
        assert_eq!(knauf_partition_exact(1, 5).unwrap(), rat(2, 1));
    }

    #[test]
    fn matches_enumeration() {
        for n in 1..=12 {
            let level = farey_sequence(n).unwrap();
            for q in [-1.0, 0.25, 1.0, 1.5] {
                let direct: f64 = 2.0
                    * level.fractions[1..]
                        .iter()
                        .map(|f| (f.b as f64).powf(-2.0 * q))
                        .sum::<f64>();
                let fast = knauf_partition(n, q).unwrap();
                assert!((fast - direct).abs() <= 1e-13 * direct, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn executors_agree() {
        let a = knauf_partition_with(Exec::Sequential, 18, 0.8).unwrap();
        let b = knauf_partition_with(Exec::Parallel, 18, 0.8).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exact_matches_float() {
        for two_q in [-2, 0, 1, 2, 3] {
            let exact = crate::rational::to_f64(&knauf_partition_exact(12, two_q).unwrap());
            let float = knauf_partition(12, two_q as f64 / 2.0).unwrap();
            assert!((exact - float).abs() <= 1e-13 * exact);
        }
    }

    #[test]
    fn growth_at_zero_is_two() {
        let est = growth_rate_estimate(0.0, 20).unwrap();
        assert!((est.ratio - 2.0).abs() < 1e-3);
        assert!(growth_rate_estimate(1.0, 10).is_err());
        assert!(growth_rate_estimate(0.5, 2).is_err());
    }
}
