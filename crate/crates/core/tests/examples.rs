//! Worked examples across the public API.

use farey_core::exact_farey::{
    farey_map, farey_sequence, growth_rate_estimate, knauf_partition_exact, stern_brocot_level, transfer_iterate,
    IterateMode, Sign,
};
use farey_core::hankel::{hankel_apply, reciprocity_residual, FamilyKind, HankelKind, HankelTransform};
use farey_core::laguerre_space::{borel_closed_form, inner_product, Family, InnerKind, SpaceParams};
use farey_core::par::Exec;
use farey_core::polynomial_eigen::{build_mk, leading_bounds, mk_spectrum, period_search};
use farey_core::rational::rat;
use farey_core::special_functions::{bernoulli_and_zeta, bessel_j, gauss_laguerre, hyp2f1_terminating, laguerre};
use farey_core::transfer_operators::{assemble_m, assemble_n, spectrum, NMethod};

#[test]
fn farey_levels_and_tree() {
    assert_eq!(farey_map(&rat(3, 4)).unwrap(), rat(1, 3));
    let f1: Vec<String> = farey_sequence(1).unwrap().fractions.iter().map(|f| f.to_string()).collect();
    assert_eq!(f1, ["0/1", "1/1"]);
    let l3: Vec<String> = stern_brocot_level(3).unwrap().nodes.iter().map(|n| n.fraction.to_string()).collect();
    assert_eq!(l3, ["1/3", "2/3", "3/2", "3/1"]);
}

#[test]
fn iterate_examples() {
    let one = |_: f64| 1.0;
    assert_eq!(transfer_iterate(&one, 0.0, 1, 1.0, Sign::Plus, IterateMode::Direct).unwrap(), 2.0);
    let inv = |x: f64| 1.0 / x;
    let v = transfer_iterate(&inv, 0.5, 1, 1.0, Sign::Plus, IterateMode::Tree).unwrap();
    assert!((v - 2.0).abs() < 1e-14);
    let g = |x: f64| (1.0 - x) / x;
    let v = transfer_iterate(&g, 1.0 / 3.0, 1, 0.5, Sign::Minus, IterateMode::Direct).unwrap();
    assert!((v - 2.0).abs() < 1e-14);
    assert_eq!(knauf_partition_exact(1, 3).unwrap(), rat(2, 1));
}

#[test]
fn growth_at_zero() {
    let est = growth_rate_estimate(0.0, 20).unwrap();
    assert!((est.ratio - 2.0).abs() < 0.02, "{}", est.ratio);
}

#[test]
fn special_function_values() {
    assert!((laguerre(2, 1.0, 0.0) - 3.0).abs() < 1e-15);
    assert!((bessel_j(0.5, std::f64::consts::FRAC_PI_2) - 2.0 / std::f64::consts::PI).abs() < 1e-13);
    let r = gauss_laguerre(1.0, 1).unwrap();
    assert!((r.nodes[0] - 2.0).abs() < 1e-14 && (r.weights[0] - 1.0).abs() < 1e-14);
    assert_eq!(hyp2f1_terminating(2, &rat(1, 1), &rat(2, 1), &rat(2, 1)).unwrap(), rat(1, 3));
    let (b, zeta) = bernoulli_and_zeta(13);
    assert_eq!(b.get(12), &rat(-691, 2730));
    assert_eq!(zeta[1], rat(-1, 12));
}

#[test]
fn space_and_operator_values() {
    let p = SpaceParams::new(1.0, 80).unwrap();
    assert!((inner_product(&p, InnerKind::FF, 1, 1) - 6.0).abs() < 1e-12);
    assert!((inner_product(&p, InnerKind::FE, 2, 1) + 6.0).abs() < 1e-12);
    assert!((borel_closed_form(&p, Family::HPlus, 0, 1.0).unwrap() - 0.5).abs() < 1e-15);
    let m = assemble_m(&p.with_k(2).unwrap()).unwrap();
    assert!((m.entries[(0, 0)] - 0.25).abs() < 1e-14);
    assert!((m.entries[(1, 1)] - 3.0 / 16.0).abs() < 1e-14);
    let n = assemble_n(&p, NMethod::Exact).unwrap();
    assert!((n.entries[(1, 1)] - 1.0 / 16.0).abs() < 1e-14);
    let a = (5f64.sqrt() - 1.0) / 2.0;
    assert!((n.trace() - a / 5f64.sqrt()).abs() < 1e-6);
    let spec = spectrum(&n).unwrap();
    assert!((spec.eigenvalues[0] - a * a).abs() < 1e-8);
    assert!((spec.min() + a.powi(4)).abs() < 1e-8);
}

#[test]
fn hankel_values() {
    let j = HankelTransform::new(HankelKind::J, 1.0).unwrap();
    let v = hankel_apply(&j, &|s: f64| 2.0 * (-2.0 * s).exp(), 1.0).unwrap();
    assert!((v - (-0.5f64).exp() / 2.0).abs() < 1e-7);
    let r = reciprocity_residual(Exec::Sequential, FamilyKind::HPlus, 1.0, 4).unwrap();
    assert!(r.passed(), "{:?}", r.residuals);
}

#[test]
fn mk_values() {
    assert_eq!(build_mk(1).unwrap().entries, vec![vec![2, 1], vec![1, 2]]);
    let s = mk_spectrum(3).unwrap();
    assert_eq!(s.leading().lambda, 7.0);
    assert_eq!(s.leading().a(), vec![1.0, 2.0, 2.0, 1.0]);
    let b = leading_bounds(2).unwrap();
    assert!(b.holds && b.lower <= 4.5616 && 4.5616 <= b.upper);
    let r = period_search(1).unwrap();
    assert_eq!((r.dimension, r.skew), (1, 1));
}
