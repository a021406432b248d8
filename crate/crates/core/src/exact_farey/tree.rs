use super::{Fraction, Sign};
use crate::error::{Error, Result};

/// A vertex `a/b` of the Stern–Brocot tree together with the linear form
/// `n_0(x) = mu x + nu` of the numerator paired with it in the tree
/// expansion of the transfer-operator iterates.
///
/// Level `n` vertices correspond one-to-one to compositions `Φ` of `n - 1`
/// inverse branches; `Φ(x) = (mu x + nu)/(γ x + δ)` with `a = mu + γ`,
/// `b = nu + δ`. `odd` records whether `Φ` uses `x -> 1/(1+x)` an odd number
/// of times, which flips the pairing for `P^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub fraction: Fraction,
    pub mu: u64,
    pub nu: u64,
    pub odd: bool,
}

impl TreeNode {
    /// `(mu, nu)` of `n_0` for the requested sign.
    pub fn n0(&self, sign: Sign) -> (u64, u64) {
        match (sign, self.odd) {
            (Sign::Minus, true) => (self.fraction.a - self.mu, self.fraction.b - self.nu),
            _ => (self.mu, self.nu),
        }
    }

    /// `(a - mu, b - nu)` of `n_1` for the requested sign.
    pub fn n1(&self, sign: Sign) -> (u64, u64) {
        let (mu, nu) = self.n0(sign);
        (self.fraction.a - mu, self.fraction.b - nu)
    }
}

/// Level `n` of the Stern–Brocot tree, ordered ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SternBrocotLevel {
    pub n: usize,
    pub nodes: Vec<TreeNode>,
}

/// Builds level `n` (level 1 is the root `1/1`) by composing the inverse
/// branches as 2x2 integer matrices.
pub fn stern_brocot_level(n: usize) -> Result<SternBrocotLevel> {
    if n == 0 {
        return Err(Error::InvalidParameter("tree level must be >= 1".into()));
    }
    if n > super::DEFAULT_LEVEL_CAP {
        return Err(Error::InvalidParameter(format!(
            "tree level {n} exceeds the cap {}",
            super::DEFAULT_LEVEL_CAP
        )));
    }
    // (alpha, beta, gamma, delta, odd) for Φ(x) = (alpha x + beta)/(gamma x + delta)
    let mut words: Vec<[u64; 4]> = vec![[1, 0, 0, 1]];
    let mut parity = vec![false];
    for _ in 1..n {
        let mut next = Vec::with_capacity(words.len() * 2);
        let mut next_parity = Vec::with_capacity(words.len() * 2);
        for (w, &odd) in words.iter().zip(&parity) {
            let [al, be, ga, de] = *w;
            // Φ ∘ (x -> x/(1+x)): right-multiply by [[1,0],[1,1]]
            next.push([al + be, be, ga + de, de]);
            next_parity.push(odd);
            // Φ ∘ (x -> 1/(1+x)): right-multiply by [[0,1],[1,1]]
            next.push([be, al + be, de, ga + de]);
            next_parity.push(!odd);
        }
        words = next;
        parity = next_parity;
    }
    let mut nodes: Vec<TreeNode> = words
        .iter()
        .zip(&parity)
        .map(|(&[al, be, ga, de], &odd)| TreeNode {
            fraction: Fraction::new(al + ga, be + de),
            mu: al,
            nu: be,
            odd,
        })
        .collect();
    nodes.sort_by(|x, y| x.fraction.cmp(&y.fraction));
    Ok(SternBrocotLevel { n, nodes })
}

/// How [`transfer_iterate`] evaluates `(P_q^{±n} f)(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterateMode {
    /// Apply the one-step operator recursively.
    Direct,
    /// Sum over the Stern–Brocot level `n`.
    Tree,
}

/// `(P_q^{±n} f)(x)` where `(P_q^± f)(x) = (x+1)^{-2q} [f(x/(x+1)) ± f(1/(x+1))]`.
pub fn transfer_iterate<F>(f: &F, x: f64, n: usize, q: f64, sign: Sign, mode: IterateMode) -> Result<f64>
where
    F: Fn(f64) -> f64 + ?Sized,
{
    if n == 0 {
        return Err(Error::InvalidParameter("iterate count must be >= 1".into()));
    }
    if x < 0.0 || !x.is_finite() {
        return Err(Error::domain(x, "[0, inf)"));
    }
    let value = match mode {
        IterateMode::Direct => direct(f, x, n, q, sign.as_f64()),
        IterateMode::Tree => {
            let level = stern_brocot_level(n)?;
            level
                .nodes
                .iter()
                .map(|node| {
                    let (a, b) = (node.fraction.a as f64, node.fraction.b as f64);
                    let den = a * x + b;
                    let (m0, n0) = node.n0(sign);
                    let (m1, n1) = node.n1(sign);
                    let y0 = (m0 as f64 * x + n0 as f64) / den;
                    let y1 = (m1 as f64 * x + n1 as f64) / den;
                    (f(y0) + sign.as_f64() * f(y1)) * (-2.0 * q * den.ln()).exp()
                })
                .sum()
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter(format!(
            "function evaluation produced {value}"
        )))
    }
}

fn direct<F>(f: &F, x: f64, n: usize, q: f64, s: f64) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    let weight = (-2.0 * q * (x + 1.0).ln()).exp();
    let (left, right) = (x / (x + 1.0), 1.0 / (x + 1.0));
    if n == 1 {
        weight * (f(left) + s * f(right))
    } else {
        weight * (direct(f, left, n - 1, q, s) + s * direct(f, right, n - 1, q, s))
    }
}
