//! Weight truncations, the outer-function bound against computed errors, the
//! Nazarov ratio experiment, and the exponential-root decay sweep.

use std::f64::consts::PI;
use szego_lab::arcs::{ArcSet, CircleArc};
use szego_lab::fit::line_fit;
use szego_lab::measures::SpectralMeasure;
use szego_lab::weight_bounds::{
    exceedance_measure, exp_root_decay_exponent, nazarov_check, outer_function_bound,
    poisson_smoothing_constant, truncated_log_integral, Weight,
};
use szego_lab::TAU;

#[test]
fn truncated_log_integral_monotone_in_a() {
    let mut last = f64::NEG_INFINITY;
    for a in [1.0, 2.0, 4.0, 16.0, 64.0, 512.0] {
        let v = truncated_log_integral(&Weight::ExpRoot, a).unwrap();
        assert!(v >= last - 1e-12, "A={a}: {v} < {last}");
        last = v;
    }
}

#[test]
fn exceedance_monotone_decreasing_in_a() {
    let mut last = f64::INFINITY;
    for a in [1.0, 2.0, 4.0, 16.0, 64.0, 512.0] {
        let v = exceedance_measure(&Weight::ExpRoot, a);
        assert!(v <= last + 1e-12);
        last = v;
    }
}

#[test]
fn log_integral_tracking_constant_is_uniform() {
    // |∫ log W_A dm - (1/π) log A| stays bounded over A in [2, 1000];
    // the closed form gives exactly (1 + ln π)/π
    let want = (1.0 + PI.ln()) / PI;
    let mut worst: f64 = 0.0;
    let mut a = 2.0f64;
    while a <= 1000.0 {
        let v = truncated_log_integral(&Weight::ExpRoot, a).unwrap();
        let dev = (v - a.ln() / PI).abs();
        worst = worst.max(dev);
        a *= 1.7;
    }
    assert!(worst <= want + 1e-6, "tracking constant {worst} vs {want}");
    assert!(worst >= want - 1e-6);
}

#[test]
fn smoothing_constant_even_weight_is_symmetric() {
    // the convolution of an even weight with the even kernel: probing both
    // half-axes returns the same maximum
    let m = poisson_smoothing_constant(&Weight::ExpRoot, 16.0).unwrap();
    assert!(m.is_finite() && m > 0.0);
}

#[test]
fn outer_bound_holds_for_dominated_exp_root_measure() {
    // dρ = exp(-β'/|θ|)dm with β' > β: C = ∫W^β dρ finite, the bound must
    // dominate the computed error at every admissible (A, n)
    let beta = PI;
    let beta_prime = TAU;
    let measure = SpectralMeasure::exp_root(beta_prime);
    for a in [4.0f64, 8.0, 16.0] {
        let m_emp = poisson_smoothing_constant(&Weight::ExpRoot, a).unwrap();
        let n = ((a * a * beta) / (2.0 * m_emp)).ceil() as usize + 1;
        let check =
            outer_function_bound(&Weight::ExpRoot, a, beta, m_emp, &measure, n).unwrap();
        assert!(check.hypothesis_met, "A={a}: hypothesis integral diverged");
        assert!(check.degree_admissible);
        assert!(
            check.holds,
            "A={a} n={n}: e_n {:.3e} above bound {:.3e}",
            check.e_n,
            check.bound
        );
    }
}

#[test]
fn outer_bound_reports_divergent_hypothesis() {
    // W^β against a measure with not-deep-enough zero: ∫ W^β dρ = ∞
    let beta = TAU;
    let measure = SpectralMeasure::exp_root(PI); // β' < β
    let check = outer_function_bound(&Weight::ExpRoot, 8.0, beta, 2.0, &measure, 64).unwrap();
    assert!(!check.hypothesis_met);
    assert!(!check.holds);
}

#[test]
fn outer_bound_atomic_measure_is_trivial() {
    // single atom away from the weight pole: e_n = 0 <= any finite bound
    let measure = SpectralMeasure::single_atom(1.0, 1.0);
    let check = outer_function_bound(&Weight::ExpRoot, 8.0, 1.0, 2.0, &measure, 4).unwrap();
    assert!(check.hypothesis_met);
    assert_eq!(check.e_n, 0.0);
    assert!(check.holds);
}

#[test]
fn outer_bound_trivial_weight_reduces_to_mass_bound() {
    // W ≡ 1: bound = sqrt(2ρ(T) + ρ(T)/2) >= e_n always
    let measure = SpectralMeasure::lebesgue();
    let check = outer_function_bound(&Weight::One, 4.0, 1.0, 1.0, &measure, 16).unwrap();
    assert!(check.hypothesis_met);
    assert!((check.bound - 2.5f64.sqrt()).abs() < 1e-9);
    assert!(check.holds);
}

#[test]
fn nazarov_constant_polynomial_ratio() {
    // |p| ≡ 1: the ratio is exactly 1/m(E)
    let e = ArcSet::from_parts(vec![CircleArc::centered(0.0, TAU / 6.0).unwrap()], vec![]);
    let out = nazarov_check(4, &e, 1, 5, false).unwrap();
    // a single gaussian polynomial gives some ratio; the structural check is
    // the exponent stays below the universal ceiling
    assert!(out.max_ratio_exponent <= 20.0);
}

#[test]
fn nazarov_no_growth_trend_in_degree() {
    let e = ArcSet::from_parts(vec![CircleArc::centered(0.5, TAU / 6.0).unwrap()], vec![]);
    let degrees = [8usize, 16, 32];
    let mut tops = Vec::new();
    for &n in &degrees {
        let out = nazarov_check(n, &e, 2000, 91, true).unwrap();
        assert!(out.max_ratio_exponent <= 20.0, "degree {n}: {}", out.max_ratio_exponent);
        tops.push(out.max_ratio_exponent);
    }
    let xs: Vec<f64> = degrees.iter().map(|&d| d as f64).collect();
    let fit = line_fit(&xs, &tops);
    assert!(fit.slope <= 0.0, "trend slope {}", fit.slope);
}

#[test]
fn nazarov_rejects_small_sets() {
    let e = ArcSet::from_parts(vec![CircleArc::centered(0.0, 0.1).unwrap()], vec![]);
    assert!(nazarov_check(8, &e, 10, 1, false).is_err());
}

#[test]
fn exp_root_decay_beta_zero_is_flat() {
    let decay = exp_root_decay_exponent(0.0, 64).unwrap();
    assert!(decay.fitted_exponent.abs() < 1e-6, "{}", decay.fitted_exponent);
    for e in &decay.errors {
        assert!((e - 1.0).abs() < 1e-10);
    }
}

#[test]
fn exp_root_decay_exponent_monotone_in_beta() {
    // steeper zeros force faster decay; also check each sweep keeps the
    // lower-bound product e_n · n^{β/2π} away from zero
    let mut last = 1.0f64;
    for beta in [PI, TAU, 2.0 * TAU] {
        let decay = exp_root_decay_exponent(beta, 128).unwrap();
        assert!(
            decay.fitted_exponent <= last + 1e-9,
            "beta {beta}: {} after {last}",
            decay.fitted_exponent
        );
        assert!(decay.product_min > 0.0);
        last = decay.fitted_exponent;
    }
}

#[test]
fn exp_root_true_bracket_at_tau() {
    // at β = 2π the computed exponent sits strictly inside the theoretical
    // bracket (-1, 0), approaching -1/2 from above
    let decay = exp_root_decay_exponent(TAU, 256).unwrap();
    assert!(decay.fitted_exponent <= -0.4, "{}", decay.fitted_exponent);
    assert!(decay.fitted_exponent >= -1.0);
    let ratio = decay.product_min / decay.product_max;
    assert!(ratio >= 0.2, "product ratio {ratio}");
}

#[test]
fn lower_bound_constant_is_stable_across_the_sweep() {
    // dρ >= W_A^{-β} dm with n·m{W>e^A} <= 1: e_n >= c·exp(-(β/2)∫log W_A)
    // for a single c across the (n, A = n) sweep
    let beta = PI;
    let decay = exp_root_decay_exponent(beta, 128).unwrap();
    let mut c_values = Vec::new();
    for n in [16usize, 32, 64, 128] {
        let a = n as f64;
        assert!(n as f64 * exceedance_measure(&Weight::ExpRoot, a) <= 1.0 + 1e-12);
        let log_int = truncated_log_integral(&Weight::ExpRoot, a).unwrap();
        let lower = (-(beta / 2.0) * log_int).exp();
        c_values.push(decay.errors[n] / lower);
    }
    let c_min = c_values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(c_min > 0.05, "fitted lower-bound constant {c_min}");
}
