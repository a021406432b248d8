use std::f64::consts::PI;

use super::gamma::{gamma, ln_gamma};
use crate::error::{Error, Result};

/// Upper end of the argument range on which [`bessel_j_checked`] is
/// validated against independent identities.
pub const BESSEL_VALIDATED_MAX: f64 = 200.0;

const ASYMPTOTIC_FROM: f64 = 1000.0;

/// Bessel function of the first kind `J_p(x)` for `p > -1`, `x >= 0`.
///
/// Small arguments use the ascending series, moderate ones Miller's backward
/// recurrence normalised by the Neumann sum for `(x/2)^ν`, and very large
/// ones the Hankel asymptotic expansion.
pub fn bessel_j(p: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if p == 0.0 {
            1.0
        } else if p > 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
    }
    if x <= 2.0 || x * x <= 4.0 * (p + 1.0) {
        return series(p, x, false);
    }
    if x >= ASYMPTOTIC_FROM.max(p * p) {
        return hankel_asymptotic(p, x);
    }
    miller(p, x)
}

/// [`bessel_j`] with argument validation; arguments beyond the validated
/// range are reported instead of silently evaluated.
pub fn bessel_j_checked(p: f64, x: f64) -> Result<f64> {
    if !(p > -1.0) || !p.is_finite() {
        return Err(Error::domain(p, "order p > -1"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(x, "[0, inf)"));
    }
    if x > BESSEL_VALIDATED_MAX {
        return Err(Error::OutsideValidatedRange(x));
    }
    Ok(bessel_j(p, x))
}

/// `J_p(x) / x^p`, which is entire in `x` and equals `2^{-p}/Γ(p+1)` at 0.
pub fn bessel_j_scaled(p: f64, x: f64) -> f64 {
    if x <= 2.0 || x * x <= 4.0 * (p + 1.0) {
        series(p, x, true)
    } else {
        bessel_j(p, x) * (-p * x.ln()).exp()
    }
}

fn series(p: f64, x: f64, scaled: bool) -> f64 {
    let half = 0.5 * x;
    let lead = if scaled {
        (-p * std::f64::consts::LN_2 - ln_gamma(p + 1.0).expect("p > -1")).exp()
    } else if p + 1.0 > 170.0 {
        (p * half.ln() - ln_gamma(p + 1.0).expect("p > -1")).exp()
    } else {
        half.powf(p) / gamma(p + 1.0).expect("p > -1")
    };
    let z = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= z / (kf * (kf + p));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller(p: f64, x: f64) -> f64 {
    let m = p.floor();
    let nu = p - m;
    // index of J_p in the ladder J_{ν+k}; p < 0 needs one step below ν
    let target = m as i64;
    let top = (x.max(m.max(0.0)) + 30.0 + 12.0 * x.cbrt()).ceil() as usize;
    let mut next = 0.0; // J_{ν+k+1}
    let mut cur = 1e-300; // J_{ν+k}
    let mut norm = 0.0;
    let mut at_target = 0.0;
    // coefficient of J_{ν+2j} in the Neumann sum is Γ(ν+1) for j = 0 and
    // (ν+2j) g_j with g_j = Γ(ν+j)/j! otherwise
    let g1 = gamma(nu + 1.0).expect("nu in [0,1)");
    let mut g = vec![g1; top / 2 + 2];
    for j in 1..g.len() - 1 {
        g[j + 1] = g[j] * (nu + j as f64) / (j + 1) as f64;
    }
    for k in (0..=top).rev() {
        if k as i64 == target {
            at_target = cur;
        }
        if k % 2 == 0 {
            let c = if k == 0 { g1 } else { (nu + k as f64) * g[k / 2] };
            norm += c * cur;
        }
        if k == 0 {
            break;
        }
        let prev = 2.0 * (nu + k as f64) / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            next *= 1e-250;
            cur *= 1e-250;
            norm *= 1e-250;
            at_target *= 1e-250;
        }
    }
    // after the loop `cur` = J_ν and `next` = J_{ν+1} (scaled)
    let j_nu = cur;
    let j_nu1 = next;
    let value = if target < 0 {
        2.0 * nu / x * j_nu - j_nu1
    } else {
        at_target
    };
    value * (0.5 * x).powf(nu) / norm
}

fn hankel_asymptotic(p: f64, x: f64) -> f64 {
    let mu = 4.0 * p * p;
    let chi = x - (0.5 * p + 0.25) * PI;
    let mut pp = 0.0;
    let mut qq = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        }
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            0 => pp += term,
            1 => qq += term,
            2 => pp -= term,
            _ => qq -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    (2.0 / (PI * x)).sqrt() * (pp * chi.cos() - qq * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_order(x: f64) -> (f64, f64) {
        let c = (2.0 / (PI * x)).sqrt();
        (c * x.sin(), c * x.cos())
    }

    #[test]
    fn examples() {
        assert_eq!(bessel_j(0.0, 0.0), 1.0);
        assert!((bessel_j(0.5, PI / 2.0) - 2.0 / PI).abs() < 1e-14);
        assert!((bessel_j_scaled(1.0, 1e-9) - 0.5).abs() < 1e-15);
        assert!((bessel_j(1.0, 1e-6) / 1e-6 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn half_integer_closed_forms() {
        let mut x = 0.05;
        while x < 1500.0 {
            let (s, c) = half_order(x);
            assert!((bessel_j(0.5, x) - s).abs() < 1e-12, "x={x}");
            assert!((bessel_j(-0.5, x) - c).abs() < 1e-12, "x={x}");
            let j32 = s / x - c;
            assert!((bessel_j(1.5, x) - j32).abs() < 1e-12, "x={x}");
            x *= 1.37;
        }
    }

    #[test]
    fn reference_values() {
        // J_0(1), J_1(10), J_0(100), J_5(30)
        let cases = [
            (0.0, 1.0, 0.7651976865579666),
            (1.0, 10.0, 0.0434727461688616),
            (0.0, 100.0, 0.01998585030422312),
            (5.0, 30.0, -0.14324029551207706),
            (3.0, 0.5, 0.002563729994587244),
        ];
        for (p, x, v) in cases {
            assert!((bessel_j(p, x) - v).abs() < 1e-13, "p={p} x={x}");
        }
    }

    #[test]
    fn three_term_recurrence() {
        for p in [0.3, 1.0, 2.5, 7.0, 20.0] {
            for i in 1..80 {
                let x = 0.37 * i as f64 * (1.0 + i as f64 / 20.0);
                let lhs = bessel_j(p - 1.0, x) + bessel_j(p + 1.0, x);
                let rhs = 2.0 * p / x * bessel_j(p, x);
                assert!((lhs - rhs).abs() < 1e-10, "p={p} x={x}");
            }
        }
    }

    #[test]
    fn checked_rejects() {
        assert!(bessel_j_checked(-1.0, 1.0).is_err());
        assert!(bessel_j_checked(0.0, -1.0).is_err());
        assert!(matches!(bessel_j_checked(0.0, 250.0), Err(Error::OutsideValidatedRange(_))));
    }
}
