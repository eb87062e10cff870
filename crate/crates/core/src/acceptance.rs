//! The acceptance harness: every release criterion as a callable check, each
//! returning a pass/fail line with the measured numbers. The integration
//! test suite and the CLI `verify-all` command both run these.
//!
//! Brute-force oracles used here (minimal-period scan, circular
//! autocorrelation) are deliberately written independently of the library
//! routines they cross-check.

use crate::arcs::{ArcSet, CircleArc};
use crate::fit::line_fit;
use crate::measures::{moments, support, Density, Piece, SpectralMeasure};
use crate::periodicity::{
    certify_integer_word, detect_period_extended, prediction_success_experiment, Predictor,
};
use crate::processes::{
    ensemble_covariance, gen_gaussian, gen_periodic_word, gen_unimodular_rotation,
    periodic_word_spectrum,
};
use crate::spectra::estimate_spectrum;
use crate::szego::{
    errors_csv, levinson_predictor, prediction_error_direct, prediction_errors_levinson,
};
use crate::weight_bounds::{
    exp_root_decay_exponent, nazarov_check, poisson_smoothing_constant, PoissonKernel, Weight,
};
use crate::{C64, TAU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<28} ({:6.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }

    /// Like [`CriterionResult::line`] without the wall time, for artifacts
    /// that must be byte-identical across reruns.
    pub fn stable_line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<28} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn run(
    id: usize,
    name: &'static str,
    f: impl FnOnce() -> (bool, String),
) -> CriterionResult {
    let t0 = Instant::now();
    let (passed, detail) = f();
    CriterionResult { id, name, passed, detail, seconds: t0.elapsed().as_secs_f64() }
}

/// Run every criterion with the given base seed.
pub fn all_criteria(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_01_oracle_equivalence(seed),
        criterion_02_exact_values(),
        criterion_03_gap_exponential_decay(),
        criterion_04_exp_root_bracket(),
        criterion_05_helson_roundtrip(seed),
        criterion_06_probability_bound(seed),
        criterion_07_cyclotomic(seed),
        criterion_08_realization_spectrum(seed),
        criterion_09_unimodular_covariance(seed),
        criterion_10_poisson_smoothing(),
        criterion_11_nazarov_stability(seed),
        criterion_12_determinism(seed),
    ]
}

fn random_atomic_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> SpectralMeasure {
    let count = rng.random_range(1..=max_atoms);
    let atoms = (0..count)
        .map(|_| (rng.random_range(-PI..PI), rng.random_range(0.1..1.0)))
        .collect();
    SpectralMeasure::from_atoms(atoms)
}

// The fixtures all have strictly positive density: the routes under
// comparison both run through the moment sequence, whose Toeplitz
// conditioning is (e_0/e_n)², so densities with deep gaps would drown the
// comparison in roundoff long before n = 32 regardless of algorithm.
fn density_fixtures() -> Vec<(&'static str, SpectralMeasure)> {
    let full = CircleArc::full();
    let cosine_samples: Vec<f64> =
        full.chebyshev_grid(257).iter().map(|t| 1.0 + t.cos() * 0.9).collect();
    let bimodal_samples: Vec<f64> =
        full.chebyshev_grid(257).iter().map(|t| 0.6 + 0.5 * (2.0 * t).cos()).collect();
    vec![
        ("lebesgue", SpectralMeasure::lebesgue()),
        ("exp_root_tau", SpectralMeasure::exp_root(TAU)),
        ("exp_root_pi", SpectralMeasure::exp_root(PI)),
        (
            "cosine_samples",
            SpectralMeasure {
                atoms: vec![],
                pieces: vec![Piece {
                    arc: full,
                    density: Density::Samples { values: cosine_samples },
                }],
            },
        ),
        (
            "bimodal_samples",
            SpectralMeasure {
                atoms: vec![],
                pieces: vec![Piece {
                    arc: full,
                    density: Density::Samples { values: bimodal_samples },
                }],
            },
        ),
    ]
}

/// 1. Levinson route vs direct normal-equation route, 200 random atomic
///    measures and 5 density fixtures, n <= 32.
///
/// Comparison contract: strict 1e-6 relative agreement wherever the problem
/// supports it (e_n >= 1e-2 e_0; there the Toeplitz conditioning leaves
/// ~1e-8 of headroom). Below that — near-degenerate and exactly degenerate
/// degrees — both routes must sit at the common numerical floor, |Δ| <=
/// 1e-3 e_0, since the moment data only determines e_n up to ~ε·(e_0/e_n)³.
pub fn criterion_01_oracle_equivalence(seed: u64) -> CriterionResult {
    run(1, "szego oracle equivalence", || {
        let n_max = 32usize;
        let mut worst = 0.0f64;
        let mut worst_at = String::new();
        let mut worst_floor = 0.0f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA11CE);
        let mut cases: Vec<(String, SpectralMeasure)> = (0..200)
            .map(|i| (format!("atomic[{i}]"), random_atomic_measure(&mut rng, 8)))
            .collect();
        for (name, m) in density_fixtures() {
            cases.push((name.to_string(), m));
        }
        for (name, measure) in &cases {
            let r = match moments(measure, n_max) {
                Ok(r) => r,
                Err(e) => return (false, format!("moments failed for {name}: {e}")),
            };
            let fast = match prediction_errors_levinson(&r, n_max) {
                Ok(f) => f,
                Err(e) => return (false, format!("levinson failed for {name}: {e}")),
            };
            let e0 = fast.errors[0];
            for n in 1..=n_max {
                let direct = match prediction_error_direct(&r, n) {
                    Ok(d) => d,
                    Err(e) => return (false, format!("direct failed for {name} n={n}: {e}")),
                };
                let diff = (fast.errors[n] - direct.error).abs();
                if fast.errors[n].min(direct.error) >= 1e-2 * e0 {
                    let rel = diff / direct.error;
                    if rel > worst {
                        worst = rel;
                        worst_at = format!("{name} n={n}");
                    }
                } else if diff > 1e-3 * e0 {
                    return (
                        false,
                        format!(
                            "{name} n={n}: near-degenerate routes differ by {:.2e}·e_0",
                            diff / e0
                        ),
                    );
                } else {
                    worst_floor = worst_floor.max(diff / e0);
                }
            }
        }
        (
            worst <= 1e-6,
            format!(
                "max relative difference {worst:.3e} at {worst_at} (tol 1e-6); near-degenerate floor {worst_floor:.1e}·e_0"
            ),
        )
    })
}

/// 2. Exact values: Lebesgue e_n = 1 ± 1e-12 (n <= 64); single atom e_n = 0
///    ± 1e-10 (n >= 1); ½δ₁ + ½δ₋₁ gives e_1 = 1, e_2 = 0 ± 1e-10.
pub fn criterion_02_exact_values() -> CriterionResult {
    run(2, "exact prediction errors", || {
        let r = moments(&SpectralMeasure::lebesgue(), 64).unwrap();
        let seq = prediction_errors_levinson(&r, 64).unwrap();
        let leb_dev = seq.errors.iter().map(|e| (e - 1.0).abs()).fold(0.0f64, f64::max);
        if leb_dev > 1e-12 {
            return (false, format!("Lebesgue deviation {leb_dev:.2e} > 1e-12"));
        }
        let r = moments(&SpectralMeasure::single_atom(0.37, 1.0), 16).unwrap();
        let seq = prediction_errors_levinson(&r, 16).unwrap();
        let atom_dev = seq.errors[1..].iter().cloned().fold(0.0f64, f64::max);
        if atom_dev > 1e-10 {
            return (false, format!("single-atom deviation {atom_dev:.2e} > 1e-10"));
        }
        let two = SpectralMeasure::from_atoms(vec![(0.0, 0.5), (PI, 0.5)]);
        let r = moments(&two, 4).unwrap();
        let seq = prediction_errors_levinson(&r, 4).unwrap();
        let d1 = (seq.errors[1] - 1.0).abs();
        let d2 = seq.errors[2].abs();
        if d1 > 1e-10 || d2 > 1e-10 {
            return (false, format!("two-atom case: |e_1-1|={d1:.2e}, e_2={d2:.2e}"));
        }
        (
            true,
            format!("lebesgue dev {leb_dev:.1e}, atom dev {atom_dev:.1e}, e_1/e_2 dev {d1:.1e}/{d2:.1e}"),
        )
    })
}

/// 3. Spectral gap forces exponential decay: uniform density on |θ| <= π/2,
///    log e_n affine in n over [8, 64] with slope < -0.05 and R² >= 0.99.
pub fn criterion_03_gap_exponential_decay() -> CriterionResult {
    run(3, "gap => exponential decay", || {
        let arc = CircleArc::centered(0.0, PI / 2.0).unwrap();
        let measure = SpectralMeasure::uniform_on_arc(arc);
        let rule = crate::measures::quadrature_resolving(&measure, 2 * 64 + 8).unwrap();
        let seq = crate::szego::prediction_errors_from_quadrature(&rule, 64);
        let xs: Vec<f64> = (8..=64).map(|n| n as f64).collect();
        let ys: Vec<f64> = (8..=64).map(|n| seq.errors[n].ln()).collect();
        let fit = line_fit(&xs, &ys);
        (
            fit.slope < -0.05 && fit.r_squared >= 0.99,
            format!("slope {:.4} (< -0.05), R² {:.6} (>= 0.99)", fit.slope, fit.r_squared),
        )
    })
}

/// 4. Exponential-root bracket at β = 2π: product e_n·n has min/max >= 0.2
///    over [64, 256] and the fitted log-log slope is <= -0.5.
pub fn criterion_04_exp_root_bracket() -> CriterionResult {
    run(4, "exp-root decay bracket", || {
        let decay = match exp_root_decay_exponent(TAU, 256) {
            Ok(d) => d,
            Err(e) => return (false, format!("pipeline failed: {e}")),
        };
        let ratio = decay.product_min / decay.product_max;
        (
            ratio >= 0.2 && decay.fitted_exponent <= -0.5,
            format!(
                "product ratio {ratio:.3} (>= 0.2), fitted exponent {:.3} (<= -0.5)",
                decay.fitted_exponent
            ),
        )
    })
}

/// Independent brute-force minimal period of a word (oracle).
fn brute_force_word_period(word: &[C64]) -> u64 {
    let n = word.len();
    'cand: for p in 1..=n {
        for k in 0..n {
            if (word[k] - word[(k + p) % n]).norm() > 1e-12 {
                continue 'cand;
            }
        }
        return p as u64;
    }
    n as u64
}

fn word_round_trip(word: &[C64], seed: u64) -> Result<(u64, u64, f64), String> {
    let brute = brute_force_word_period(word);
    let degree = word.len();
    let measure = periodic_word_spectrum(word);
    let lag = degree.max(measure.atoms.len()) + 1;
    let r = moments(&measure, lag).map_err(|e| e.to_string())?;
    let predictor = levinson_predictor(&r, degree).map_err(|e| e.to_string())?;
    let window_len = 2 * degree.max(2);
    let window = gen_periodic_word(word, window_len, seed).map_err(|e| e.to_string())?;
    let report = detect_period_extended(&window, Predictor::Szego(&predictor), degree)
        .map_err(|e| e.to_string())?;
    let found = report.period.ok_or("no period found")?;
    Ok((found, brute, report.max_residual))
}

/// 5. Round-trip: every binary word of length <= 10 plus 500 random ternary
///    words of length <= 8; the detected period equals the brute-force
///    minimal period and residuals stay below δ_X/2.
pub fn criterion_05_helson_roundtrip(seed: u64) -> CriterionResult {
    run(5, "period detection round-trip", || {
        let mut checked = 0u64;
        let mut max_residual = 0.0f64;
        // exhaustive binary words
        for len in 1..=10usize {
            for bits in 0..(1u32 << len) {
                let word: Vec<C64> = (0..len)
                    .map(|k| C64::new(((bits >> k) & 1) as f64, 0.0))
                    .collect();
                match word_round_trip(&word, seed ^ (bits as u64) << 8 ^ len as u64) {
                    Ok((found, brute, residual)) => {
                        if found != brute {
                            return (
                                false,
                                format!("binary word {bits:b} len {len}: found {found}, brute {brute}"),
                            );
                        }
                        max_residual = max_residual.max(residual);
                        if residual >= 0.5 {
                            return (false, format!("residual {residual:.2e} >= δ/2 on len {len}"));
                        }
                    }
                    Err(e) => return (false, format!("binary len {len} bits {bits:b}: {e}")),
                }
                checked += 1;
            }
        }
        // random ternary words
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x3A3A);
        for i in 0..500u64 {
            let len = rng.random_range(1..=8usize);
            let word: Vec<C64> =
                (0..len).map(|_| C64::new(rng.random_range(0..3) as f64, 0.0)).collect();
            match word_round_trip(&word, seed ^ 0xBEEF ^ i) {
                Ok((found, brute, residual)) => {
                    if found != brute {
                        return (false, format!("ternary #{i}: found {found}, brute {brute}"));
                    }
                    max_residual = max_residual.max(residual);
                }
                Err(e) => return (false, format!("ternary #{i}: {e}")),
            }
            checked += 1;
        }
        (true, format!("{checked} words, all periods match; max residual {max_residual:.2e}"))
    })
}

/// 6. Prediction success probability: binary period-6 word, N in 6..=12,
///    1000 shifted realizations; empirical rate >= bound - 0.03.
pub fn criterion_06_probability_bound(seed: u64) -> CriterionResult {
    run(6, "prediction probability bound", || {
        let word: Vec<C64> =
            [1.0, 1.0, 0.0, 1.0, 0.0, 0.0].iter().map(|&v| C64::new(v, 0.0)).collect();
        if brute_force_word_period(&word) != 6 {
            return (false, "fixture word does not have period 6".into());
        }
        let stats = match prediction_success_experiment(&word, 6..=12, 1000, 12, seed ^ 0x42) {
            Ok(s) => s,
            Err(e) => return (false, format!("experiment failed: {e}")),
        };
        let mut detail = String::new();
        for s in &stats {
            detail.push_str(&format!("N={}: rate {:.3} bound {:.3}; ", s.degree, s.success_rate, s.success_bound));
            if s.success_rate < s.success_bound - 0.03 {
                return (
                    false,
                    format!("N={}: rate {:.4} below bound {:.4} - 0.03", s.degree, s.success_rate, s.success_bound),
                );
            }
        }
        (true, detail)
    })
}

/// Independent brute-force minimal period of an integer word (oracle).
fn brute_force_int_period(word: &[i64]) -> u64 {
    let n = word.len();
    'cand: for p in 1..=n {
        for k in 0..n {
            if word[k] != word[(k + p) % n] {
                continue 'cand;
            }
        }
        return p as u64;
    }
    n as u64
}

/// 7. Cyclotomic certification: integer words with entries in {-2..2},
///    periods up to 12; the lcm of the cyclotomic indices equals the
///    brute-force minimal period exactly. Exhaustive through length 6,
///    seeded-random coverage for lengths 7..=12.
pub fn criterion_07_cyclotomic(seed: u64) -> CriterionResult {
    run(7, "cyclotomic certification", || {
        let mut checked = 0u64;
        let verify = |word: &[i64]| -> Result<(), String> {
            let (frac, cert) = certify_integer_word(word).map_err(|e| e.to_string())?;
            if !frac.verify(word.len() as u64) {
                return Err(format!("fraction invariant failed for {word:?}"));
            }
            let brute = brute_force_int_period(word);
            if cert.minimal_period != brute {
                return Err(format!(
                    "word {word:?}: certified {} != brute {brute}",
                    cert.minimal_period
                ));
            }
            Ok(())
        };
        // exhaustive over entries {-2..2} through length 6
        for len in 1..=6usize {
            let mut word = vec![-2i64; len];
            loop {
                if let Err(e) = verify(&word) {
                    return (false, e);
                }
                checked += 1;
                // odometer increment over {-2..2}^len
                let mut pos = 0;
                loop {
                    if pos == len {
                        break;
                    }
                    word[pos] += 1;
                    if word[pos] <= 2 {
                        break;
                    }
                    word[pos] = -2;
                    pos += 1;
                }
                if pos == len {
                    break;
                }
            }
        }
        // seeded random words for lengths 7..=12
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC1C1);
        for len in 7..=12usize {
            for _ in 0..2000 {
                let word: Vec<i64> = (0..len).map(|_| rng.random_range(-2..=2)).collect();
                if let Err(e) = verify(&word) {
                    return (false, e);
                }
                checked += 1;
            }
        }
        (true, format!("{checked} integer words certified exactly"))
    })
}

/// 8. Realization spectra at desk scale: 50 atomic Gaussian processes stay
///    inside the η = 2π/64 neighborhood of the measure support in >= 98% of
///    runs; 20 Lebesgue runs never report a gap of length >= 2π/8.
pub fn criterion_08_realization_spectrum(seed: u64) -> CriterionResult {
    run(8, "realization spectrum containment", || {
        let eta = TAU / 64.0;
        let resolution = 192usize;
        let window_len = 1usize << 16;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5157);
        let mut contained = 0u32;
        for trial in 0..50u64 {
            let measure = random_atomic_measure(&mut rng, 6);
            let spt = support(&measure);
            let window = match gen_gaussian(&measure, 64, window_len, seed ^ (trial * 31 + 7)) {
                Ok(w) => w,
                Err(e) => return (false, format!("generation failed: {e}")),
            };
            let sigma = match estimate_spectrum(&window, resolution) {
                Ok(s) => s,
                Err(e) => return (false, format!("spectrum estimate failed: {e}")),
            };
            if sigma.within_neighborhood_of(&spt, eta) {
                contained += 1;
            }
        }
        if contained < 49 {
            return (false, format!("containment {contained}/50 below 49/50"));
        }
        let mut max_gap_seen = 0.0f64;
        for trial in 0..20u64 {
            let window =
                match gen_gaussian(&SpectralMeasure::lebesgue(), 256, window_len, seed ^ (trial * 97 + 3)) {
                    Ok(w) => w,
                    Err(e) => return (false, format!("lebesgue generation failed: {e}")),
                };
            let sigma = match estimate_spectrum(&window, 64) {
                Ok(s) => s,
                Err(e) => return (false, format!("spectrum estimate failed: {e}")),
            };
            max_gap_seen = max_gap_seen.max(sigma.largest_gap());
        }
        (
            max_gap_seen < TAU / 8.0,
            format!("atomic containment {contained}/50; max Lebesgue gap {max_gap_seen:.4} (< {:.4})", TAU / 8.0),
        )
    })
}

/// 9. Rotation-process covariance identity: ensemble covariance matches the
///    measure moments within 3/sqrt(trials) for three measures.
pub fn criterion_09_unimodular_covariance(seed: u64) -> CriterionResult {
    run(9, "unimodular covariance identity", || {
        let trials = 10_000u64;
        let tol = 3.0 / (trials as f64).sqrt();
        let fixtures: Vec<(&str, SpectralMeasure)> = vec![
            ("atom", SpectralMeasure::single_atom(2.0, 1.0)),
            ("two_atoms", SpectralMeasure::from_atoms(vec![(0.0, 0.5), (PI, 0.5)])),
            ("lebesgue", SpectralMeasure::lebesgue()),
        ];
        let mut detail = String::new();
        for (name, measure) in fixtures {
            let want = moments(&measure, 8).unwrap();
            let got = ensemble_covariance(
                |t| gen_unimodular_rotation(&measure, 32, seed ^ (t * 131 + 11), None),
                trials,
                8,
            );
            let (means, _errs) = match got {
                Ok(g) => g,
                Err(e) => return (false, format!("{name}: {e}")),
            };
            let mut worst = 0.0f64;
            for (m, mean) in means.iter().enumerate() {
                worst = worst.max((mean - want.at(m as i64)).norm());
            }
            detail.push_str(&format!("{name}: max dev {worst:.4}; "));
            if worst > tol {
                return (false, format!("{name}: deviation {worst:.4} > {tol:.4}"));
            }
        }
        (true, format!("{detail}(tol {tol:.4})"))
    })
}

/// 10. Poisson smoothing: kernel mass 1 ± 1e-10 and the empirical smoothing
///     constant varies by less than a factor 2 across A in {8, 32, 128}.
pub fn criterion_10_poisson_smoothing() -> CriterionResult {
    run(10, "poisson smoothing constant", || {
        for a in [8.0f64, 32.0, 128.0] {
            let mass = PoissonKernel::new(1.0 - 1.0 / a).unwrap().mass();
            if (mass - 1.0).abs() > 1e-10 {
                return (false, format!("kernel mass at A={a}: {mass:.12}"));
            }
        }
        let ms: Vec<f64> = match [8.0f64, 32.0, 128.0]
            .iter()
            .map(|&a| poisson_smoothing_constant(&Weight::ExpRoot, a))
            .collect::<Result<Vec<_>, _>>()
        {
            Ok(v) => v,
            Err(e) => return (false, format!("convolution failed: {e}")),
        };
        let lo = ms.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ms.iter().cloned().fold(0.0f64, f64::max);
        (
            hi / lo < 2.0,
            format!("M_emp = {:.4}/{:.4}/{:.4}, spread factor {:.3} (< 2)", ms[0], ms[1], ms[2], hi / lo),
        )
    })
}

/// 11. Nazarov ratio stability: A_emp <= 20 for degrees {8, 16, 32} at 1e4
///     trials each, with no increasing trend in the degree.
pub fn criterion_11_nazarov_stability(seed: u64) -> CriterionResult {
    run(11, "nazarov ratio stability", || {
        let e = ArcSet::from_parts(vec![CircleArc::centered(0.5, TAU / 6.0).unwrap()], vec![]);
        let degrees = [8usize, 16, 32];
        let mut exponents = Vec::new();
        for &n in &degrees {
            match nazarov_check(n, &e, 10_000, seed ^ (n as u64), true) {
                Ok(out) => {
                    if out.max_ratio_exponent > 20.0 {
                        return (
                            false,
                            format!("degree {n}: A_emp {:.2} > 20", out.max_ratio_exponent),
                        );
                    }
                    exponents.push(out.max_ratio_exponent);
                }
                Err(e) => return (false, format!("degree {n}: {e}")),
            }
        }
        let xs: Vec<f64> = degrees.iter().map(|&n| n as f64).collect();
        let fit = line_fit(&xs, &exponents);
        (
            fit.slope <= 1e-9,
            format!(
                "A_emp = {:.3}/{:.3}/{:.3}, trend slope {:.2e} (<= 0)",
                exponents[0], exponents[1], exponents[2], fit.slope
            ),
        )
    })
}

/// Deterministic artifact bundle shared by `verify-all` and criterion 12.
pub fn artifact_bundle(seed: u64) -> Vec<(String, String)> {
    let mut out = Vec::new();

    let r = moments(&SpectralMeasure::lebesgue(), 8).unwrap();
    let seq = prediction_errors_levinson(&r, 8).unwrap();
    out.push(("szego_errors_lebesgue.csv".to_string(), errors_csv(&seq)));

    let decay = exp_root_decay_exponent(TAU, 64).unwrap();
    let mut csv = String::from("n,e_n,product\n");
    for (n, e) in decay.errors.iter().enumerate().skip(1) {
        csv.push_str(&format!("{n},{e:.12e},{:.12e}\n", e * (n as f64)));
    }
    out.push(("theta_sweep_beta_tau.csv".to_string(), csv));

    let word: Vec<C64> = [0.0, 1.0].iter().map(|&v| C64::new(v, 0.0)).collect();
    let window = gen_periodic_word(&word, 32, seed).unwrap();
    let report = crate::periodicity::detect_period(&window, 4).unwrap();
    out.push((
        "detect_period_alternating.json".to_string(),
        serde_json::to_string_pretty(&report).unwrap(),
    ));

    let measure = SpectralMeasure::from_atoms(vec![(0.0, 0.5), (2.0, 0.5)]);
    let sim = gen_gaussian(&measure, 16, 64, seed).unwrap();
    out.push(("simulate_two_atoms.csv".to_string(), sim.to_csv()));

    let e = ArcSet::from_parts(vec![CircleArc::centered(0.5, TAU / 6.0).unwrap()], vec![]);
    let naz = nazarov_check(8, &e, 200, seed, false).unwrap();
    out.push((
        "nazarov_degree8.csv".to_string(),
        format!(
            "degree,trials,max_ratio_exponent,mean_ratio_exponent\n{},{},{:.12e},{:.12e}\n",
            naz.degree, naz.trials, naz.max_ratio_exponent, naz.mean_ratio_exponent
        ),
    ));
    out
}

/// 12. Determinism: the artifact bundle built twice from one seed is
///     byte-identical.
pub fn criterion_12_determinism(seed: u64) -> CriterionResult {
    run(12, "artifact determinism", || {
        let a = artifact_bundle(seed);
        let b = artifact_bundle(seed);
        if a.len() != b.len() {
            return (false, "bundle size mismatch".into());
        }
        for ((name_a, body_a), (name_b, body_b)) in a.iter().zip(&b) {
            if name_a != name_b || body_a != body_b {
                return (false, format!("artifact {name_a} differs between runs"));
            }
        }
        (true, format!("{} artifacts byte-identical across reruns", a.len()))
    })
}
