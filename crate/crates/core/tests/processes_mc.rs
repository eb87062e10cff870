//! Monte-Carlo checks of the generators against exact ensemble formulas.

use szego_lab::measures::moments;
use szego_lab::processes::{
    ensemble_covariance, gen_gaussian, gen_periodic_word, gen_unimodular_rotation,
    periodic_word_spectrum,
};
use szego_lab::{C64, TAU};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Exact circular autocorrelation of the word: (1/N) Σ_u w[u] conj(w[u+m]).
fn circular_autocorrelation(word: &[C64], m: usize) -> C64 {
    let n = word.len();
    let mut acc = C64::new(0.0, 0.0);
    for u in 0..n {
        acc += word[u] * word[(u + m) % n].conj();
    }
    acc / n as f64
}

#[test]
fn word_ensemble_matches_circular_autocorrelation() {
    let word: Vec<C64> = [1.0, 0.0, 2.0, 1.0, 1.0].iter().map(|&v| c(v)).collect();
    let trials = 10_000u64;
    let (means, errs) =
        ensemble_covariance(|t| gen_periodic_word(&word, 24, 1000 + t), trials, 4).unwrap();
    for m in 0..=4usize {
        let want = circular_autocorrelation(&word, m);
        let dev = (means[m] - want).norm();
        assert!(
            dev <= 3.0 * errs[m].max(1e-4),
            "lag {m}: dev {dev:.4} vs 3σ {:.4}",
            3.0 * errs[m]
        );
    }
}

#[test]
fn word_spectrum_moments_equal_circular_autocorrelation() {
    // the commuting square: word -> spectrum -> moments == exact ensemble
    // covariance for every lag
    let word: Vec<C64> = [1.0, -1.0, 0.0, 2.0].iter().map(|&v| c(v)).collect();
    let measure = periodic_word_spectrum(&word);
    let r = moments(&measure, 8).unwrap();
    for m in 0..=8usize {
        let want = circular_autocorrelation(&word, m % word.len());
        assert!(
            (r.at(m as i64) - want).norm() < 1e-12,
            "lag {m}: {} vs {want}",
            r.at(m as i64)
        );
    }
}

#[test]
fn gaussian_atom_process_covariance() {
    let s_angle = 1.3f64;
    let measure = szego_lab::measures::SpectralMeasure::single_atom(s_angle, 1.0);
    let trials = 10_000u64;
    let (means, errs) =
        ensemble_covariance(|t| gen_gaussian(&measure, 8, 24, 500 + t), trials, 4).unwrap();
    // E r̂(0) = total mass
    assert!((means[0].re - 1.0).abs() <= 4.0 * errs[0].max(1e-3));
    for m in 1..=4usize {
        let want = C64::from_polar(1.0, -(m as f64) * s_angle);
        assert!((means[m] - want).norm() <= 4.0 * errs[m].max(1e-3), "lag {m}");
    }
}

#[test]
fn gaussian_lebesgue_first_moment_vanishes() {
    let measure = szego_lab::measures::SpectralMeasure::lebesgue();
    let trials = 10_000u64;
    let (means, _) =
        ensemble_covariance(|t| gen_gaussian(&measure, 64, 24, 900 + t), trials, 1).unwrap();
    assert!(
        means[1].norm() <= 3.0 / (trials as f64).sqrt() + 1e-3,
        "r̂(1) = {}",
        means[1]
    );
}

#[test]
fn unimodular_rotation_matches_measure_moments() {
    let measure =
        szego_lab::measures::SpectralMeasure::from_atoms(vec![(0.0, 0.25), (2.0, 0.75)]);
    let r = moments(&measure, 6).unwrap();
    let trials = 10_000u64;
    let (means, _) = ensemble_covariance(
        |t| gen_unimodular_rotation(&measure, 16, 77 + t, None),
        trials,
        6,
    )
    .unwrap();
    let tol = 3.0 / (trials as f64).sqrt();
    for m in 0..=6usize {
        assert!(
            (means[m] - r.at(m as i64)).norm() <= tol,
            "lag {m}: {} vs {}",
            means[m],
            r.at(m as i64)
        );
    }
}

#[test]
fn unimodular_cyclic_phase_has_same_covariance() {
    // s a rational rotation of order 7: drawing t from the cyclic group of
    // order 7 leaves the covariance identical (the group average of t·conj(t)
    // is still 1)
    let order = 7u64;
    let s_angle = TAU * 3.0 / order as f64;
    let measure = szego_lab::measures::SpectralMeasure::single_atom(s_angle, 1.0);
    let trials = 10_000u64;
    let (means, _) = ensemble_covariance(
        |t| gen_unimodular_rotation(&measure, 16, 31 + t, Some(order)),
        trials,
        6,
    )
    .unwrap();
    for m in 0..=6usize {
        let want = C64::from_polar(1.0, -(m as f64) * s_angle);
        assert!((means[m] - want).norm() <= 1e-10, "lag {m}: {}", means[m]);
    }
}

#[test]
fn generators_are_stationary_across_positions() {
    // ensemble means of ξ(n) and ξ(n)conj(ξ(n+3)) must not depend on n
    let word: Vec<C64> = [0.0, 1.0, 1.0, 2.0, 0.0, 1.0].iter().map(|&v| c(v)).collect();
    let trials = 10_000u64;
    let positions: Vec<i64> = (0..=16).collect();
    let mut mean_vals = Vec::new();
    let mut mean_prods = Vec::new();
    for &n in &positions {
        let mut sv = C64::new(0.0, 0.0);
        let mut sp = C64::new(0.0, 0.0);
        for t in 0..trials {
            let w = gen_periodic_word(&word, 48, 4242 + t).unwrap();
            sv += w.at(n).unwrap();
            sp += w.at(n).unwrap() * w.at(n + 3).unwrap().conj();
        }
        mean_vals.push(sv / trials as f64);
        mean_prods.push(sp / trials as f64);
    }
    // spread across positions within 4 monte-carlo standard errors; values
    // are O(1), so se ~ 1/sqrt(trials)
    let se = 4.0 / (trials as f64).sqrt() * 2.0;
    for v in &mean_vals[1..] {
        assert!((v - mean_vals[0]).norm() <= se, "mean drift {v}");
    }
    for p in &mean_prods[1..] {
        assert!((p - mean_prods[0]).norm() <= se, "product drift {p}");
    }
}

#[test]
fn unimodular_values_exactly_on_circle() {
    let measure = szego_lab::measures::SpectralMeasure::lebesgue();
    let w = gen_unimodular_rotation(&measure, 256, 9, None).unwrap();
    for v in w.values() {
        assert!((v.norm() - 1.0).abs() <= 1e-15);
    }
}

#[test]
fn alternating_sample_covariance() {
    let vals: Vec<C64> = (0..128).map(|n| c(if n % 2 == 0 { 1.0 } else { -1.0 })).collect();
    let w = szego_lab::processes::RealizationWindow::new(0, vals, None).unwrap();
    let r = szego_lab::processes::sample_covariance(&w, 6).unwrap();
    for m in 0..=6i64 {
        let want = if m % 2 == 0 { 1.0 } else { -1.0 };
        assert!((r.at(m).re - want).abs() <= m as f64 / 128.0 + 1e-12, "lag {m}");
    }
}

#[test]
fn weighted_norm_and_tail_bound() {
    // constant-1 window: ||ξ||_p over |m| <= 100 plus the tail bound must
    // dominate the exact series Σ (1+|m|)^{-2p}
    let p = 1.5f64;
    let vals = vec![c(1.0); 201];
    let w = szego_lab::processes::RealizationWindow::new(-100, vals, None).unwrap();
    let partial = w.weighted_norm(p);
    let tail = szego_lab::processes::weighted_norm_tail_bound(1.0, p, 100);
    let exact: f64 = (-4000i64..=4000)
        .map(|m| (1.0 / (1.0 + m.abs() as f64).powf(p)).powi(2))
        .sum::<f64>()
        .sqrt();
    let upper = (partial * partial + tail * tail).sqrt();
    assert!(partial <= exact && exact <= upper, "{partial} <= {exact} <= {upper}");
}

#[test]
fn process_spec_json_roundtrip() {
    let json = r#"{"kind":"unimodular_rotation",
        "measure":{"atoms":[{"angle":0.5,"mass":1.0}],"pieces":[]},
        "cyclic_order":4}"#;
    let spec: szego_lab::processes::ProcessSpec = serde_json::from_str(json).unwrap();
    let w = spec.generate(16, 3).unwrap();
    assert_eq!(w.len(), 16);
    for v in w.values() {
        assert!((v.norm() - 1.0).abs() < 1e-14);
    }
}
