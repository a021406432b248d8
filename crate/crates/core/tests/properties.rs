use approx::relative_eq;
use farey_core::exact_farey::{
    farey_map, farey_sequence, knauf_partition, knauf_partition_exact, to_continued_fraction, transfer_iterate,
    ContinuedFraction, IterateMode, Sign,
};
use farey_core::laguerre_space::{basis_change, SpaceParams};
use farey_core::polynomial_eigen::{bernoulli_eigenfunction, build_mk};
use farey_core::rational::{rat, to_f64};
use farey_core::special_functions::{bessel_j, gauss_laguerre, laguerre, laguerre_exact, ln_gamma};
use num_integer::Integer;
use proptest::prelude::*;

fn coprime_pair() -> impl Strategy<Value = (i64, i64)> {
    (2i64..400).prop_flat_map(|b| (1..b, Just(b))).prop_filter("coprime", |(a, b)| a.gcd(b) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn continued_fraction_round_trip((a, b) in coprime_pair()) {
        let x = rat(a, b);
        let cf = to_continued_fraction(&x).unwrap();
        prop_assert_eq!(cf.to_rational(), x.clone());
        prop_assert_eq!(ContinuedFraction::new(cf.digits().to_vec()).unwrap(), cf.clone());
        prop_assert_eq!(farey_map(&x).unwrap(), cf.shift().to_rational());
    }

    #[test]
    fn fraction_enters_at_its_digit_sum((a, b) in coprime_pair()) {
        let x = rat(a, b);
        let n = to_continued_fraction(&x).unwrap().digit_sum() as usize;
        prop_assume!(n <= 14);
        let fresh = farey_sequence(n).unwrap().new_fractions();
        prop_assert!(fresh.iter().any(|f| f.to_rational() == x));
        if n > 1 {
            let before = farey_sequence(n - 1).unwrap();
            prop_assert!(!before.fractions.iter().any(|f| f.to_rational() == x));
        }
    }

    #[test]
    fn farey_neighbours_are_unimodular(n in 1usize..14) {
        let level = farey_sequence(n).unwrap();
        for w in level.fractions.windows(2) {
            prop_assert_eq!(w[1].a as i64 * w[0].b as i64 - w[0].a as i64 * w[1].b as i64, 1);
        }
    }

    #[test]
    fn direct_and_tree_iterates_agree(
        n in 1usize..7,
        q in 0.2f64..3.0,
        x in 0.0f64..5.0,
        c in -2.0f64..2.0,
        plus in any::<bool>(),
    ) {
        let f = move |y: f64| (c * y).cos() + y;
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let d = transfer_iterate(&f, x, n, q, sign, IterateMode::Direct).unwrap();
        let t = transfer_iterate(&f, x, n, q, sign, IterateMode::Tree).unwrap();
        let g = move |y: f64| (c * y).cos().abs() + y;
        let scale = transfer_iterate(&g, x, n, q, Sign::Plus, IterateMode::Tree).unwrap();
        prop_assert!((d - t).abs() <= 1e-12 * scale, "{} vs {}", d, t);
    }

    #[test]
    fn exact_partition_matches_float(n in 1usize..11, two_q in 1i64..7) {
        let exact = to_f64(&knauf_partition_exact(n, two_q).unwrap());
        let float = knauf_partition(n, two_q as f64 / 2.0).unwrap();
        prop_assert!(relative_eq!(exact, float, max_relative = 1e-13));
    }

    #[test]
    fn change_of_basis_is_an_involution(num in 1i64..13, size in 1usize..22) {
        let params = SpaceParams::exact(rat(num, 4), size).unwrap();
        prop_assert_eq!(basis_change(&params, size).is_involution_exact(), Some(true));
    }

    #[test]
    fn mk_invariants_hold(k in 0usize..40) {
        let m = build_mk(k).unwrap();
        for c in m.invariants() {
            prop_assert!(c.passed, "{}: {}", c.id, c.detail);
        }
    }

    #[test]
    fn bernoulli_fixed_points(half in 0usize..8) {
        let f = bernoulli_eigenfunction(2 * half);
        prop_assert!(f.checks.iter().all(|c| c.passed));
        prop_assert!(bernoulli_eigenfunction(2 * half + 1).poly.is_zero());
    }

    #[test]
    fn bessel_three_term_recurrence(p in 1.0f64..6.0, x in 0.1f64..30.0) {
        let lhs = bessel_j(p - 1.0, x) + bessel_j(p + 1.0, x);
        let rhs = 2.0 * p / x * bessel_j(p, x);
        prop_assert!((lhs - rhs).abs() < 1e-9, "p={} x={}: {} vs {}", p, x, lhs, rhs);
    }

    #[test]
    fn gauss_laguerre_moments(alpha in -0.5f64..3.0, m in 0i32..20) {
        let rule = gauss_laguerre(alpha, 12).unwrap();
        let got = rule.integrate(|t| t.powi(m));
        let expect = ln_gamma(m as f64 + alpha + 1.0).unwrap().exp();
        prop_assert!(relative_eq!(got, expect, max_relative = 1e-10));
    }

    #[test]
    fn laguerre_float_matches_exact(n in 0usize..25, p in 0i64..4, (a, b) in (1i64..60, 1i64..12)) {
        let t = rat(a, b);
        let exact = to_f64(&laguerre_exact(n, &rat(p, 1), &t));
        let float = laguerre(n, p as f64, a as f64 / b as f64);
        // cancellation scale: the same sum with every term made positive
        let scale = laguerre(n, p as f64, -(a as f64) / b as f64).abs().max(1.0);
        prop_assert!((exact - float).abs() <= 1e-12 * scale);
    }
}
