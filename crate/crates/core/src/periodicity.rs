//! Period detection engines: δ-prediction extension with alphabet rounding,
//! window scanning with the alphabet-power bound, and the exact integer
//! (cyclotomic) certification route.

use crate::arc_polys::GapPredictor;
use crate::error::{Error, Result};
use crate::intpoly::{cyclotomic, divisors, IntPoly};
use crate::measures::moments;
use crate::processes::{gen_periodic_word, periodic_word_spectrum, RealizationWindow};
use crate::szego::{levinson_predictor, prediction_errors_levinson, PredictionSolution};
use crate::C64;
use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Either kind of monic predictor drives the same extension loop.
#[derive(Debug, Clone, Copy)]
pub enum Predictor<'a> {
    Gap(&'a GapPredictor),
    Szego(&'a PredictionSolution),
}

impl<'a> Predictor<'a> {
    pub fn degree(&self) -> usize {
        match self {
            Predictor::Gap(g) => g.degree,
            Predictor::Szego(s) => s.degree,
        }
    }

    pub fn coefficients(&self) -> &[C64] {
        match self {
            Predictor::Gap(g) => &g.coefficients,
            Predictor::Szego(s) => &s.coefficients,
        }
    }

    /// Certified bound (gap) or statistical error (Szegő) of the functional.
    pub fn error_level(&self) -> f64 {
        match self {
            Predictor::Gap(g) => g.certified_delta,
            Predictor::Szego(s) => s.error,
        }
    }

    pub fn method(&self) -> DetectionMethod {
        match self {
            Predictor::Gap(_) => DetectionMethod::GapPredictor,
            Predictor::Szego(_) => DetectionMethod::SzegoPredictor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionMethod {
    GapPredictor,
    SzegoPredictor,
    DirectScan,
    Cyclotomic,
}

/// Result of extending a window by δ-prediction.
#[derive(Debug, Clone)]
pub struct Extension {
    pub window: RealizationWindow,
    pub forward_residuals: Vec<f64>,
    pub backward_residuals: Vec<f64>,
}

impl Extension {
    pub fn max_residual(&self) -> f64 {
        self.forward_residuals
            .iter()
            .chain(&self.backward_residuals)
            .cloned()
            .fold(0.0, f64::max)
    }
}

fn nearest_in_alphabet(alphabet: &[C64], value: C64) -> (C64, f64) {
    let mut best = alphabet[0];
    let mut dist = f64::INFINITY;
    for &a in alphabet {
        let d = (a - value).norm();
        if d < dist {
            dist = d;
            best = a;
        }
    }
    (best, dist)
}

/// Extend the window `steps` indices forward and (through the conjugate-
/// reversed functional) backward, rounding every predicted value to the
/// nearest alphabet element.
///
/// Each new value solves the monic functional ξ(m) + Σ q_k ξ(m-n+k) = 0 for
/// the unknown term; a rounding residual of δ_X/2 or more aborts with the
/// offending position.
pub fn predict_extend(
    window: &RealizationWindow,
    predictor: Predictor<'_>,
    steps: usize,
) -> Result<Extension> {
    let alphabet = window
        .alphabet()
        .ok_or_else(|| Error::InvalidAlphabet("extension needs a finite alphabet".into()))?
        .to_vec();
    let delta_x = crate::processes::alphabet_separation(&alphabet)?;
    let half_delta = if delta_x.is_finite() { delta_x / 2.0 } else { f64::INFINITY };
    let n = predictor.degree();
    if n == 0 || n > window.len() {
        return Err(Error::WindowTooShort { have: window.len(), need: n.max(1) });
    }
    if predictor.error_level() >= half_delta {
        return Err(Error::PredictorTooWeak {
            error: predictor.error_level(),
            half_delta,
        });
    }
    let q = predictor.coefficients();

    let mut start = window.start();
    let mut values = window.values().to_vec();
    let mut forward_residuals = Vec::with_capacity(steps);
    let mut backward_residuals = Vec::with_capacity(steps);

    // forward: ξ(m) = -Σ_k q_k ξ(m-n+k)
    for _ in 0..steps {
        let m = start + values.len() as i64;
        let mut raw = C64::new(0.0, 0.0);
        for (k, qk) in q.iter().enumerate() {
            let idx = (m - n as i64 + k as i64 - start) as usize;
            raw -= qk * values[idx];
        }
        let (rounded, residual) = nearest_in_alphabet(&alphabet, raw);
        if residual >= half_delta {
            return Err(Error::AmbiguousRounding { position: m, residual, half_delta });
        }
        forward_residuals.push(residual);
        values.push(rounded);
    }

    // backward: the conjugate-reversed functional ξ(m) + Σ_{k=1..n}
    // conj(q_{n-k}) ξ(m+k) has the same modulus on the circle, hence the
    // same certified level
    for _ in 0..steps {
        let m = start - 1;
        let mut raw = C64::new(0.0, 0.0);
        for k in 1..=n {
            let idx = (m + k as i64 - start) as usize;
            raw -= q[n - k].conj() * values[idx];
        }
        let (rounded, residual) = nearest_in_alphabet(&alphabet, raw);
        if residual >= half_delta {
            return Err(Error::AmbiguousRounding { position: m, residual, half_delta });
        }
        backward_residuals.push(residual);
        values.insert(0, rounded);
        start = m;
    }

    let window = RealizationWindow::new(start, values, Some(alphabet))?;
    Ok(Extension { window, forward_residuals, backward_residuals })
}

/// Outcome of a period scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeriodReport {
    pub period: Option<u64>,
    /// |X|^n as a decimal string (the combinatorial bound may be huge).
    pub helson_bound: String,
    pub predictor_degree: usize,
    pub method: DetectionMethod,
    pub max_residual: f64,
    pub validated_len: usize,
}

fn values_equal(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

/// Minimal N such that ξ(k+N) = ξ(k) across the whole window, N up to half
/// the window length; None when no repetition validates.
fn scan_minimal_period(window: &RealizationWindow) -> Option<u64> {
    let vals = window.values();
    let len = vals.len();
    let tol = window.separation().map_or(1e-9, |d| (d / 4.0).min(1e-6));
    'outer: for cand in 1..=(len / 2) {
        for k in 0..(len - cand) {
            if !values_equal(vals[k], vals[k + cand], tol) {
                continue 'outer;
            }
        }
        return Some(cand as u64);
    }
    None
}

fn helson_bound_string(alphabet_size: usize, degree: usize) -> String {
    BigUint::from(alphabet_size.max(1)).pow(degree as u32).to_string()
}

/// Scan the window directly for its minimal period and report it together
/// with the combinatorial bound |X|ⁿ for the given predictor degree.
pub fn detect_period(window: &RealizationWindow, n: usize) -> Result<PeriodReport> {
    if window.len() < 2 * n.max(1) {
        return Err(Error::WindowTooShort { have: window.len(), need: 2 * n.max(1) });
    }
    let alphabet_size = window.alphabet().map_or(0, |a| a.len());
    Ok(PeriodReport {
        period: scan_minimal_period(window),
        helson_bound: helson_bound_string(alphabet_size, n),
        predictor_degree: n,
        method: DetectionMethod::DirectScan,
        max_residual: 0.0,
        validated_len: window.len(),
    })
}

/// Extend the window with the predictor first, then scan; residuals are
/// carried into the report.
pub fn detect_period_extended(
    window: &RealizationWindow,
    predictor: Predictor<'_>,
    steps: usize,
) -> Result<PeriodReport> {
    let ext = predict_extend(window, predictor, steps)?;
    let alphabet_size = window.alphabet().map_or(0, |a| a.len());
    Ok(PeriodReport {
        period: scan_minimal_period(&ext.window),
        helson_bound: helson_bound_string(alphabet_size, predictor.degree()),
        predictor_degree: predictor.degree(),
        method: predictor.method(),
        max_residual: ext.max_residual(),
        validated_len: ext.window.len(),
    })
}

fn mix_seed(a: u64, b: u64) -> u64 {
    // splitmix64 step over the combined value
    let mut z = a ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One row of the prediction-success experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PredictionExperimentStat {
    pub degree: usize,
    pub trials: u64,
    pub successes: u64,
    pub success_rate: f64,
    /// max(0, 1 - 8 Σ_{n>=N} e_n² / δ²).
    pub success_bound: f64,
    pub vacuous: bool,
    pub tail_square_sum: f64,
}

/// Empirical whole-sequence prediction success over shifted realizations of
/// the word, against the theoretical bound from the prediction-error tail.
pub fn prediction_success_experiment(
    word: &[C64],
    degrees: std::ops::RangeInclusive<usize>,
    trials: u64,
    steps: usize,
    seed: u64,
) -> Result<Vec<PredictionExperimentStat>> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("word must be nonempty".into()));
    }
    let measure = periodic_word_spectrum(word);
    let atom_count = measure.atoms.len();
    let n_hi = *degrees.end();
    let lag = n_hi.max(atom_count) + 2;
    let r = moments(&measure, lag)?;
    let errs = prediction_errors_levinson(&r, lag)?;
    let mut distinct: Vec<C64> = Vec::new();
    for v in word {
        if !distinct.iter().any(|u| (u - v).norm() < 1e-12) {
            distinct.push(*v);
        }
    }
    let delta_x = crate::processes::alphabet_separation(&distinct)?;

    let mut out = Vec::new();
    for degree in degrees {
        let tail_square_sum: f64 = errs.errors[degree.min(lag)..].iter().map(|e| e * e).sum();
        let raw_bound = 1.0 - 8.0 * tail_square_sum / (delta_x * delta_x);
        let vacuous = raw_bound <= 0.0;
        let success_bound = raw_bound.max(0.0);
        let predictor = levinson_predictor(&r, degree)?;

        let base_len = (2 * degree).max(2 * word.len()).max(degree + 4);
        let full_len = base_len + 2 * steps;
        let mut successes = 0u64;
        for t in 0..trials {
            let truth = gen_periodic_word(word, full_len, mix_seed(seed, t))?;
            let observed = slice_window(&truth, truth.start() + steps as i64, base_len)?;
            if let Ok(ext) = predict_extend(&observed, Predictor::Szego(&predictor), steps) {
                let ok = (ext.window.start()..ext.window.end()).all(|m| {
                    match (ext.window.at(m), truth.at(m)) {
                        (Some(a), Some(b)) => (a - b).norm() < 1e-9,
                        _ => false,
                    }
                });
                if ok {
                    successes += 1;
                }
            }
        }
        out.push(PredictionExperimentStat {
            degree,
            trials,
            successes,
            success_rate: successes as f64 / trials.max(1) as f64,
            success_bound,
            vacuous,
            tail_square_sum,
        });
    }
    Ok(out)
}

fn slice_window(window: &RealizationWindow, start: i64, len: usize) -> Result<RealizationWindow> {
    let values: Option<Vec<C64>> = (start..start + len as i64).map(|n| window.at(n)).collect();
    let values = values.ok_or(Error::WindowTooShort { have: window.len(), need: len })?;
    RealizationWindow::new(start, values, window.alphabet().map(|a| a.to_vec()))
}

// ---------------------------------------------------------------------------
// exact integer route
// ---------------------------------------------------------------------------

/// Reduced fraction P/Q with Q monic dividing z^N - 1; the generating
/// function of an integer N-periodic sequence is exactly P/Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolyFraction {
    pub numerator: IntPoly,
    pub denominator: IntPoly,
}

impl IntPolyFraction {
    /// Denominator divides z^N - 1, is monic, and shares no factor with the
    /// numerator.
    pub fn verify(&self, n: u64) -> bool {
        if self.denominator.is_zero() {
            return false;
        }
        let monic = self.denominator.is_monic();
        let divides = self.denominator.divides(&IntPoly::cycle(n));
        let g = self.numerator.gcd(&self.denominator);
        let coprime = self.numerator.is_zero() || g.degree() == 0;
        monic && divides && coprime
    }
}

/// Reduce Σ_{n<N} w_n zⁿ / (1 - z^N) to lowest terms over ℤ[z].
///
/// Sign convention: the result satisfies F⁺ = P/Q literally with Q monic, so
/// the constant word 1 yields P = -1, Q = z - 1.
pub fn rational_reduce(word: &[i64]) -> Result<IntPolyFraction> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("word must be nonempty".into()));
    }
    let n = word.len() as u64;
    let t = IntPoly::from_i64(word);
    if t.is_zero() {
        return Ok(IntPolyFraction { numerator: IntPoly::zero(), denominator: IntPoly::one() });
    }
    // T/(1 - z^N) = (-T)/(z^N - 1)
    let num = t.neg();
    let den = IntPoly::cycle(n);
    let g = num.gcd(&den);
    let numerator = num.exact_div(&g).expect("gcd divides");
    let denominator = den.exact_div(&g).expect("gcd divides");
    Ok(IntPolyFraction { numerator, denominator })
}

/// Cyclotomic factorization of a monic divisor of z^N - 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclotomicCertificate {
    pub indices: Vec<u64>,
    /// lcm of the indices: zeroes(Q) ⊂ {t : t^{N*} = 1}.
    pub minimal_period: u64,
}

/// Factor Q into cyclotomic polynomials Φ_d, d | N, by exact division, and
/// read off the certified minimal period as the lcm of the indices.
pub fn cyclotomic_factor(q: &IntPoly, n: u64) -> Result<CyclotomicCertificate> {
    if q.is_zero() || !q.is_monic() {
        return Err(Error::NotCyclotomicDivisor { n });
    }
    if !q.divides(&IntPoly::cycle(n)) {
        return Err(Error::NotCyclotomicDivisor { n });
    }
    let mut rest = q.clone();
    let mut indices = Vec::new();
    for d in divisors(n) {
        if rest.degree() == 0 {
            break;
        }
        let phi = cyclotomic(d);
        if let Some(next) = rest.exact_div(&phi) {
            indices.push(d);
            rest = next;
        }
    }
    if rest.degree() != 0 {
        return Err(Error::NotCyclotomicDivisor { n });
    }
    let minimal_period = indices.iter().fold(1u64, |acc, &d| acc.lcm(&d));
    Ok(CyclotomicCertificate { indices, minimal_period })
}

/// The full integer route: reduce the word's generating function and certify
/// its minimal period from the cyclotomic indices of the denominator.
pub fn certify_integer_word(word: &[i64]) -> Result<(IntPolyFraction, CyclotomicCertificate)> {
    let frac = rational_reduce(word)?;
    let cert = cyclotomic_factor(&frac.denominator, word.len() as u64)?;
    Ok((frac, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn window_of(word: &[f64], len: usize, seed: u64) -> RealizationWindow {
        let w: Vec<C64> = word.iter().map(|&v| c(v)).collect();
        gen_periodic_word(&w, len, seed).unwrap()
    }

    #[test]
    fn constant_sequence_extends_exactly() {
        let w = window_of(&[3.0], 8, 1);
        let predictor = PredictionSolution {
            degree: 1,
            coefficients: vec![c(-1.0)],
            error: 0.0,
            degenerate: true,
        };
        let ext = predict_extend(&w, Predictor::Szego(&predictor), 5).unwrap();
        assert_eq!(ext.window.len(), 18);
        assert_eq!(ext.max_residual(), 0.0);
        assert!(ext.window.values().iter().all(|v| (v - c(3.0)).norm() == 0.0));
    }

    #[test]
    fn alternating_detects_period_two() {
        let w = window_of(&[0.0, 1.0], 24, 9);
        let rep = detect_period(&w, 4).unwrap();
        assert_eq!(rep.period, Some(2));
        assert_eq!(rep.helson_bound, "16");
    }

    #[test]
    fn constant_detects_period_one() {
        let w = window_of(&[5.0], 16, 2);
        let rep = detect_period(&w, 3).unwrap();
        assert_eq!(rep.period, Some(1));
    }

    #[test]
    fn flip_symmetry_of_detection() {
        let w = window_of(&[0.0, 1.0, 1.0, 2.0, 0.0], 40, 17);
        let a = detect_period(&w, 5).unwrap();
        let b = detect_period(&w.flip(), 5).unwrap();
        assert_eq!(a.period, b.period);
    }

    #[test]
    fn rational_reduce_cases() {
        // constant word 1: F⁺ = 1/(1-z) = -1/(z-1)
        let f = rational_reduce(&[1]).unwrap();
        assert_eq!(f.numerator, IntPoly::from_i64(&[-1]));
        assert_eq!(f.denominator, IntPoly::from_i64(&[-1, 1]));
        assert!(f.verify(1));

        // word [1,-1]: (1-z)/(1-z²) reduces to denominator Φ₂ = z + 1
        let f = rational_reduce(&[1, -1]).unwrap();
        assert_eq!(f.denominator, IntPoly::from_i64(&[1, 1]));
        assert!(f.verify(2));

        // zero word
        let f = rational_reduce(&[0, 0, 0]).unwrap();
        assert!(f.numerator.is_zero());
        assert_eq!(f.denominator, IntPoly::one());
    }

    #[test]
    fn cyclotomic_factor_cases() {
        let cert = cyclotomic_factor(&IntPoly::from_i64(&[-1, 1]), 1).unwrap();
        assert_eq!(cert.indices, vec![1]);
        assert_eq!(cert.minimal_period, 1);

        let cert = cyclotomic_factor(&IntPoly::from_i64(&[1, 1]), 2).unwrap();
        assert_eq!(cert.indices, vec![2]);
        assert_eq!(cert.minimal_period, 2);

        // (z²+z+1)(z+1) -> indices {2,3}, lcm 6
        let q = IntPoly::from_i64(&[1, 1, 1]).mul(&IntPoly::from_i64(&[1, 1]));
        let cert = cyclotomic_factor(&q, 6).unwrap();
        assert_eq!(cert.indices, vec![2, 3]);
        assert_eq!(cert.minimal_period, 6);

        // z² + 1 does not divide z³ - 1
        assert!(cyclotomic_factor(&IntPoly::from_i64(&[1, 0, 1]), 3).is_err());
    }

    #[test]
    fn certified_period_matches_brute_force_small() {
        let words: [&[i64]; 6] = [
            &[1],
            &[1, -1],
            &[1, 1, 0],
            &[2, -1, 2, -1],
            &[1, 0, 0, 1, 0, 0],
            &[1, 2, 1, 2, 1, 2],
        ];
        for word in words {
            let (_, cert) = certify_integer_word(word).unwrap();
            let brute = brute_force_period(word);
            assert_eq!(cert.minimal_period, brute, "word {word:?}");
        }
    }

    fn brute_force_period(word: &[i64]) -> u64 {
        let n = word.len();
        'cand: for p in 1..=n {
            if !n.is_multiple_of(p) {
                continue;
            }
            for k in 0..n {
                if word[k] != word[(k + p) % n] {
                    continue 'cand;
                }
            }
            return p as u64;
        }
        n as u64
    }
}
