use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Levels beyond this hold more than 2^25 fractions and are refused unless
/// the caller raises the cap explicitly.
pub const DEFAULT_LEVEL_CAP: usize = 26;

/// Nonnegative fraction `a/b` with machine-word numerator and denominator.
///
/// Denominators in level `n` are bounded by the Fibonacci number `F_{n+1}`,
/// so `u64` covers every level that fits in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub a: u64,
    pub b: u64,
}

impl Fraction {
    pub const fn new(a: u64, b: u64) -> Self {
        Fraction { a, b }
    }

    pub fn mediant(self, other: Fraction) -> Fraction {
        Fraction::new(self.a + other.a, self.b + other.b)
    }

    pub fn reciprocal(self) -> Fraction {
        Fraction::new(self.b, self.a)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.a), BigInt::from(self.b))
    }

    pub fn to_f64(self) -> f64 {
        self.a as f64 / self.b as f64
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.a as u128 * other.b as u128).cmp(&(other.a as u128 * self.b as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

/// The ascending Farey sequence `F_n` of level `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyLevel {
    pub n: usize,
    pub fractions: Vec<Fraction>,
}

impl FareyLevel {
    /// Fractions of `F_n` that are not in `F_{n-1}` (every other entry).
    pub fn new_fractions(&self) -> Vec<Fraction> {
        if self.n == 1 {
            return self.fractions.clone();
        }
        self.fractions.iter().skip(1).step_by(2).copied().collect()
    }

    /// Checks strict increase and the unimodular neighbour relation
    /// `a'' b' - a' b'' = 1`.
    pub fn check_neighbours(&self) -> Result<()> {
        for w in self.fractions.windows(2) {
            let (l, r) = (w[0], w[1]);
            let det = r.a as i128 * l.b as i128 - l.a as i128 * r.b as i128;
            if det != 1 {
                return Err(Error::CheckFailed {
                    id: "farey-neighbour-determinant".into(),
                    detail: format!("{l}, {r} have determinant {det}"),
                });
            }
        }
        Ok(())
    }
}

/// `F_n` by repeated mediant insertion, refusing levels above
/// [`DEFAULT_LEVEL_CAP`].
pub fn farey_sequence(n: usize) -> Result<FareyLevel> {
    farey_sequence_capped(n, DEFAULT_LEVEL_CAP)
}

pub fn farey_sequence_capped(n: usize, cap: usize) -> Result<FareyLevel> {
    if n == 0 {
        return Err(Error::InvalidParameter("Farey level must be >= 1".into()));
    }
    if n > cap {
        return Err(Error::InvalidParameter(format!(
            "Farey level {n} exceeds the cap {cap}"
        )));
    }
    let mut fractions = vec![Fraction::new(0, 1), Fraction::new(1, 1)];
    for _ in 1..n {
        let mut next = Vec::with_capacity(2 * fractions.len() - 1);
        for w in fractions.windows(2) {
            next.push(w[0]);
            next.push(w[0].mediant(w[1]));
        }
        next.push(*fractions.last().unwrap());
        fractions = next;
    }
    Ok(FareyLevel { n, fractions })
}

/// The set `{0} ∪ F^{-1}{0} ∪ ... ∪ F^{-n}{0}`, computed by applying the two
/// inverse branches `y -> y/(1+y)`, `y -> 1/(1+y)` in exact arithmetic.
pub fn inverse_branch_preimages(n: usize) -> BTreeSet<BigRational> {
    let one = BigRational::one();
    let mut all: BTreeSet<BigRational> = BTreeSet::new();
    let mut frontier: BTreeSet<BigRational> = BTreeSet::new();
    frontier.insert(BigRational::zero());
    all.insert(BigRational::zero());
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for y in &frontier {
            let denom = &one + y;
            next.insert(y / &denom);
            next.insert(denom.recip());
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(level: &FareyLevel) -> Vec<String> {
        level.fractions.iter().map(|f| f.to_string()).collect()
    }

    #[test]
    fn printed_levels() {
        assert_eq!(render(&farey_sequence(1).unwrap()), ["0/1", "1/1"]);
        assert_eq!(
            render(&farey_sequence(3).unwrap()),
            ["0/1", "1/3", "1/2", "2/3", "1/1"]
        );
        assert_eq!(
            render(&farey_sequence(4).unwrap()),
            ["0/1", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "1/1"]
        );
    }

    #[test]
    fn level_size_and_neighbours() {
        for n in 1..=16 {
            let level = farey_sequence(n).unwrap();
            assert_eq!(level.fractions.len(), (1 << (n - 1)) + 1);
            level.check_neighbours().unwrap();
        }
    }

    #[test]
    fn cap_and_zero_are_rejected() {
        assert!(farey_sequence(0).is_err());
        assert!(farey_sequence(DEFAULT_LEVEL_CAP + 1).is_err());
        assert!(farey_sequence_capped(5, 4).is_err());
    }

    #[test]
    fn corrupted_level_fails_neighbour_check() {
        let mut level = farey_sequence(4).unwrap();
        level.fractions[3] = Fraction::new(3, 7);
        assert!(level.check_neighbours().is_err());
    }
}
