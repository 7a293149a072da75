//! Closed-form constants against independently coded oracles and against
//! exhaustive enumeration.

use indseq::constants::{
    dani_degree_bound, er_low_degree_thresholds, er_s, expected_count, frieze_beta, karp_constants, nat_ratio,
    planted_two_sided_bound, ratio_to_f64, regular_expected_rate, solve_rho, tree_planted_density, tree_s,
    tree_unimodality_thresholds,
};
use indseq::count::independence_sequence;
use indseq::estimators::enumerate_family;
use indseq::generators::ModelSpec;
use num_rational::BigRational;
use num_traits::Zero;
use std::f64::consts::E;

/// Principal branch of Lambert W on `[0, e]` by Halley iteration.
fn lambert_w(x: f64) -> f64 {
    let mut w = x.ln_1p();
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    w
}

#[test]
fn rho_is_the_omega_constant() {
    // Fixed-point iteration of x = e^{-x} contracts with factor ρ < 1.
    let mut x = 0.5f64;
    for _ in 0..200 {
        x = (-x).exp();
    }
    let c = solve_rho();
    assert!((c.rho - x).abs() < 1e-12);
    assert!((c.rho - lambert_w(1.0)).abs() < 1e-12);
    let r = x;
    assert!((c.variance_rate - r * (1.0 - r - r * r) / (1.0 + r)).abs() < 1e-14);
    assert!((c.variance_rate_squared - c.variance_rate.powi(2)).abs() < 1e-15);
    assert!((c.mean_correction - r * r * (r + 2.0) / (2.0 * (r + 1.0).powi(3))).abs() < 1e-14);
}

#[test]
fn karp_fractions_follow_lambert_w_below_e() {
    // For d <= e the smallest root is the fixed point W(d) of x = d e^{-x},
    // so a = b = W(d) and the density is (2W + W²)/(2d).
    for d in [0.1, 0.5, 1.0, 1.5, 2.0, 2.5, E] {
        let k = karp_constants(d).unwrap();
        let w = lambert_w(d);
        assert!((k.a - w).abs() < 1e-6, "d={d}: a={} W={w}", k.a);
        assert!((k.b - w).abs() < 1e-6);
        let frac = (2.0 * w + w * w) / (2.0 * d);
        assert!((k.independent_fraction - frac).abs() < 1e-6);
        assert!((k.matching_fraction + k.independent_fraction - 1.0).abs() < 1e-15);
    }
    assert!(karp_constants(0.0).is_err());
    assert!(karp_constants(2.8).is_err());
}

#[test]
fn frieze_formula() {
    let d = 100.0f64;
    let want = (2.0 / d) * (d.ln() - d.ln().ln() - 2f64.ln() + 1.0);
    assert!((frieze_beta(d).unwrap() - want).abs() < 1e-15);
    // At d = e^e: (2/e^e)(e − 1 − ln 2 + 1).
    let ee = E.powf(E);
    let want = 2.0 / ee * (E - 2f64.ln());
    assert!((frieze_beta(ee).unwrap() - want).abs() < 1e-12);
    assert!(frieze_beta(E).is_err());
}

#[test]
fn tree_thresholds_are_sign_changes() {
    let t = tree_unimodality_thresholds();
    let lower = |a: f64| tree_planted_density(a) * (1.0 - tree_s(a)) / a;
    let upper = |a: f64| tree_planted_density(a) * (1.0 + tree_s(a)) / a;
    let h = 1e-7;
    assert!(lower(t.alpha_increasing - h) > 1.0 && lower(t.alpha_increasing + h) < 1.0);
    assert!(upper(t.alpha_decreasing - h) > 1.0 && upper(t.alpha_decreasing + h) < 1.0);
    // No earlier crossing: the lower bound stays above 1 on the whole prefix.
    for i in 1..1000 {
        let a = t.alpha_increasing * i as f64 / 1000.0;
        assert!(lower(a) > 1.0, "α = {a}");
    }
}

#[test]
fn er_thresholds_are_sign_changes() {
    for d in [1.0, 2.0, E] {
        let th = er_low_degree_thresholds(d).unwrap();
        let a = th.alpha_left.expect("left threshold exists");
        let lower = |x: f64| (1.0 - er_s(d, th.beta, x)) * (1.0 - x) * (-d * x).exp() / x;
        assert!(lower(a - 1e-7) > 1.0 && lower(a + 1e-7) < 1.0, "d={d}");
    }
}

#[test]
fn expected_counts_match_enumeration() {
    for model in [ModelSpec::gnp_p(5, 0.25), ModelSpec::gnp_p(4, 0.5), ModelSpec::tree(5), ModelSpec::tree(6)] {
        let family = enumerate_family(&model).unwrap();
        let total: BigRational = family.iter().map(|(_, w)| w.clone()).sum();
        assert_eq!(total, BigRational::from_integer(1.into()));
        let seqs: Vec<_> = family.iter().map(|(g, _)| independence_sequence(g).unwrap()).collect();
        for k in 0..=model.n() {
            let want: BigRational = family.iter().zip(&seqs).map(|((_, w), s)| w * nat_ratio(&s.get(k))).sum();
            let got = expected_count(&model, k).unwrap();
            assert_eq!(got.exact.as_ref().unwrap(), &want, "{model:?} k={k}");
            if !want.is_zero() {
                assert!((got.ln_value - ratio_to_f64(&want).ln()).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn regular_rate_matches_direct_evaluation() {
    let xlnx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    for d in [3.0, 4.0, 10.0] {
        for a in [0.05, 0.1, 0.2, 0.3, 0.45] {
            let want = (d - 1.0) * xlnx(1.0 - a) - xlnx(a) - d / 2.0 * xlnx(1.0 - 2.0 * a);
            assert!((regular_expected_rate(d, a).unwrap() - want).abs() < 1e-14);
        }
    }
}

#[test]
fn bounds_are_probabilities_in_range() {
    for t in [0.01, 0.1, 1.0] {
        let b = planted_two_sided_bound(500, 0.1, 2.0, t);
        assert!(b > 0.0 && b <= 2.0);
    }
    let r = dani_degree_bound(0.25).unwrap();
    let want = 2.0 * (4f64.ln() + 1.0) / 0.25 - 2.0 / 0.5;
    assert!((r.value - want).abs() < 1e-12);
}
