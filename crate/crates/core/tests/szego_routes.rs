//! Prediction-error routes against hand oracles and each other, plus the
//! square-summability verdicts and probability bounds.

use proptest::prelude::*;
use std::f64::consts::PI;
use szego_lab::arcs::CircleArc;
use szego_lab::fit::line_fit;
use szego_lab::measures::{moments, quadrature_resolving, MomentSequence, SpectralMeasure};
use szego_lab::szego::{
    prediction_error_direct, prediction_errors_from_quadrature, prediction_errors_levinson,
    single_step_failure_bound, square_summability, TailVerdict,
};
use szego_lab::C64;

/// Hand-solved 2x2 / 3x3 least squares for ρ = ½δ₁ + ½δ₋₁.
///
/// Moments: r(m) = (1 + (-1)^m)/2. Projection of 1 on span{t}: the normal
/// equation r(0)c = r(1) gives c = 0, so e_1² = r(0) = 1. On span{t, t²}:
/// [[1,0],[0,1]]c = [0,1] gives c = (0,1), e_2² = 1 - 1 = 0.
#[test]
fn two_atom_errors_match_hand_computation() {
    let measure = SpectralMeasure::from_atoms(vec![(0.0, 0.5), (PI, 0.5)]);
    let r = moments(&measure, 4).unwrap();
    // independent re-derivation from raw moments
    let r0 = r.at(0).re;
    let r1 = r.at(1);
    let c1 = r1 / r0;
    let e1_sq = r0 - (c1 * r1.conj()).re;
    assert!((e1_sq - 1.0).abs() < 1e-14);
    let e2_sq = r0 - (r.at(2).norm_sqr() / r0 + r.at(1).norm_sqr() / r0);
    assert!(e2_sq.abs() < 1e-14);

    let seq = prediction_errors_levinson(&r, 4).unwrap();
    assert!((seq.errors[1] - 1.0).abs() < 1e-12);
    assert!(seq.errors[2].abs() < 1e-10);
    let direct = prediction_error_direct(&r, 1).unwrap();
    assert!((direct.error - 1.0).abs() < 1e-12);
}

#[test]
fn routes_agree_on_random_atomic_measures() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let count = rng.random_range(1..=8usize);
        let atoms: Vec<(f64, f64)> =
            (0..count).map(|_| (rng.random_range(-PI..PI), rng.random_range(0.1..1.0))).collect();
        let measure = SpectralMeasure::from_atoms(atoms);
        let r = moments(&measure, 24).unwrap();
        let fast = prediction_errors_levinson(&r, 24).unwrap();
        let e0 = fast.errors[0];
        for n in 1..=24 {
            let direct = prediction_error_direct(&r, n).unwrap();
            if fast.errors[n].min(direct.error) >= 1e-2 * e0 {
                let rel = (fast.errors[n] - direct.error).abs() / direct.error;
                assert!(rel <= 1e-6, "n={n}: relative {rel:.3e}");
            } else {
                assert!((fast.errors[n] - direct.error).abs() <= 1e-3 * e0);
            }
        }
    }
}

#[test]
fn quadrature_route_agrees_with_moment_routes_when_conditioned() {
    let arc = CircleArc::centered(0.0, PI / 2.0).unwrap();
    let measure = SpectralMeasure::uniform_on_arc(arc);
    let r = moments(&measure, 12).unwrap();
    let fast = prediction_errors_levinson(&r, 12).unwrap();
    let rule = quadrature_resolving(&measure, 64).unwrap();
    let stable = prediction_errors_from_quadrature(&rule, 12);
    for n in 0..=12 {
        let rel = (fast.errors[n] - stable.errors[n]).abs() / stable.errors[n];
        assert!(rel < 1e-6, "n={n}: {} vs {}", fast.errors[n], stable.errors[n]);
    }
}

#[test]
fn half_circle_log_errors_are_affine() {
    let arc = CircleArc::centered(0.0, PI / 2.0).unwrap();
    let measure = SpectralMeasure::uniform_on_arc(arc);
    let rule = quadrature_resolving(&measure, 2 * 64 + 8).unwrap();
    let seq = prediction_errors_from_quadrature(&rule, 64);
    let xs: Vec<f64> = (8..=64).map(|n| n as f64).collect();
    let ys: Vec<f64> = (8..=64).map(|n| seq.errors[n].ln()).collect();
    let fit = line_fit(&xs, &ys);
    assert!(fit.slope < -0.05, "slope {}", fit.slope);
    assert!(fit.r_squared >= 0.99, "R² {}", fit.r_squared);
}

#[test]
fn scaling_scales_errors_by_sqrt() {
    let measure = SpectralMeasure::from_atoms(vec![(0.1, 0.4), (1.4, 0.2), (-2.2, 0.9)]);
    let c = 3.7f64;
    let r = moments(&measure, 8).unwrap();
    let rs = moments(&measure.scale(c), 8).unwrap();
    let a = prediction_errors_levinson(&r, 8).unwrap();
    let b = prediction_errors_levinson(&rs, 8).unwrap();
    for n in 0..=8 {
        let want = a.errors[n] * c.sqrt();
        assert!((b.errors[n] - want).abs() <= 1e-10 * (1.0 + want));
    }
}

#[test]
fn rotation_leaves_errors_unchanged() {
    let measure = SpectralMeasure::from_atoms(vec![(0.1, 0.4), (1.4, 0.2), (-2.2, 0.9)]);
    let r = moments(&measure, 8).unwrap();
    let rr = moments(&measure.rotate(0.9), 8).unwrap();
    let a = prediction_errors_levinson(&r, 8).unwrap();
    let b = prediction_errors_levinson(&rr, 8).unwrap();
    for n in 0..=8 {
        assert!((a.errors[n] - b.errors[n]).abs() <= 1e-10 * (1.0 + a.errors[n]));
    }
}

#[test]
fn atomic_measure_on_three_points_dies_at_three() {
    let roots = SpectralMeasure::from_atoms(
        (0..3).map(|j| (szego_lab::TAU * j as f64 / 3.0 - PI / 3.0, 1.0 / 3.0)).collect(),
    );
    let r = moments(&roots, 8).unwrap();
    let seq = prediction_errors_levinson(&r, 8).unwrap();
    for n in 3..=8 {
        assert_eq!(seq.errors[n], 0.0);
    }
    assert!(seq.errors[2] > 0.0);
}

#[test]
fn square_summability_verdicts() {
    // geometric decay: converges via the exponential tail model
    let geometric: Vec<f64> = (0..40).map(|n| 0.8f64.powi(n)).collect();
    let rep = square_summability(&geometric, true).unwrap();
    assert_eq!(rep.verdict, TailVerdict::Holds);
    assert_eq!(rep.tail_model, "exponential");
    // true sum of the tail beyond the data: Σ_{n>39} 0.64^n
    let want_tail = 0.64f64.powi(40) / (1.0 - 0.64);
    let got = rep.tail_estimate.unwrap();
    assert!((got - want_tail).abs() < 0.2 * want_tail, "{got} vs {want_tail}");

    // power decay n^{-1}: e² ~ n^{-2} converges
    let inv: Vec<f64> = (0..64).map(|n| if n == 0 { 1.0 } else { 1.0 / n as f64 }).collect();
    let rep = square_summability(&inv, true).unwrap();
    assert_eq!(rep.verdict, TailVerdict::Holds);
    assert_eq!(rep.tail_model, "power");

    // power decay n^{-0.4}: e² ~ n^{-0.8} diverges -> inconclusive
    let slow: Vec<f64> = (0..64).map(|n| ((n + 1) as f64).powf(-0.4)).collect();
    let rep = square_summability(&slow, true).unwrap();
    assert_eq!(rep.verdict, TailVerdict::Inconclusive);

    // arc measure: geometric errors, verdict holds
    let arc = CircleArc::centered(0.0, PI / 2.0).unwrap();
    let rule =
        quadrature_resolving(&SpectralMeasure::uniform_on_arc(arc), 2 * 48 + 8).unwrap();
    let seq = prediction_errors_from_quadrature(&rule, 48);
    let rep = square_summability(&seq.errors, true).unwrap();
    assert_eq!(rep.verdict, TailVerdict::Holds);
}

#[test]
fn arc_fixture_failure_bound_is_small_at_32() {
    let arc = CircleArc::centered(0.0, PI / 2.0).unwrap();
    let rule =
        quadrature_resolving(&SpectralMeasure::uniform_on_arc(arc), 2 * 32 + 8).unwrap();
    let seq = prediction_errors_from_quadrature(&rule, 32);
    let bound = single_step_failure_bound(seq.errors[32], 1.0);
    assert!(bound < 1e-3, "bound {bound:.3e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn errors_monotone_nonincreasing(
        angles in proptest::collection::vec(-PI..PI, 1..7),
        mass in 0.2f64..2.0,
    ) {
        let mut atoms: Vec<(f64, f64)> = Vec::new();
        for &a in &angles {
            if atoms.iter().all(|&(b, _)| {
                let d = (a - b).rem_euclid(szego_lab::TAU);
                d.min(szego_lab::TAU - d) > 1e-3
            }) {
                atoms.push((a, mass));
            }
        }
        prop_assume!(!atoms.is_empty());
        let r = moments(&SpectralMeasure::from_atoms(atoms), 16).unwrap();
        let seq = prediction_errors_levinson(&r, 16).unwrap();
        for w in seq.errors.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
        // reflection coefficients stay inside the closed unit disk
        for refl in &seq.reflections {
            prop_assert!(refl.norm() <= 1.0 + 1e-10);
        }
    }
}

/// The reported error is the L²(ρ) norm of the monic extremal polynomial:
/// recompute Σ mass·|A_n(t)|² from the coefficients and the measure.
#[test]
fn error_is_extremal_polynomial_norm() {
    let atoms = vec![(0.3, 0.5), (1.7, 0.3), (-2.0, 0.7)];
    let measure = SpectralMeasure::from_atoms(atoms.clone());
    let r = moments(&measure, 6).unwrap();
    for n in 1..=2usize {
        let sol = prediction_error_direct(&r, n).unwrap();
        let mut norm_sq = 0.0;
        for &(angle, mass) in &atoms {
            let t = C64::from_polar(1.0, angle);
            let mut val = t.powu(n as u32);
            for (k, q) in sol.coefficients.iter().enumerate() {
                val += q * t.powu(k as u32);
            }
            norm_sq += mass * val.norm_sqr();
        }
        let rel = (norm_sq.sqrt() - sol.error).abs() / sol.error.max(1e-12);
        assert!(rel < 1e-8, "n={n}: {} vs {}", norm_sq.sqrt(), sol.error);

        // the P(0)=1 normalization has the same modulus on the circle, so
        // the same L²(ρ) norm
        let b = sol.constant_term_normalized();
        let mut alt_sq = 0.0;
        for &(angle, mass) in &atoms {
            let t = C64::from_polar(1.0, angle);
            let mut val = C64::new(0.0, 0.0);
            for (k, c) in b.iter().enumerate() {
                val += c * t.powu(k as u32);
            }
            alt_sq += mass * val.norm_sqr();
        }
        assert!((alt_sq - norm_sq).abs() <= 1e-12 * (1.0 + norm_sq));
    }
}

/// Degenerate but valid input: a Hermitian sequence that is not PSD makes
/// the PSD check fail but must not panic the recursion.
#[test]
fn non_psd_sequence_reported() {
    let bad = MomentSequence::from_nonnegative_lags(vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
    assert!(!bad.is_toeplitz_psd(1e-10));
}
