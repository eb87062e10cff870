//! Generators for the stationary sequences under study — shifted periodic
//! words, Gaussian sums with a prescribed spectral measure, unimodular
//! rotations — and sample covariance estimation.

use crate::arcs::principal;
use crate::error::{Error, Result};
use crate::measures::{quadrature, MeasureSpec, MomentSequence, SpectralMeasure};
use crate::{C64, TAU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// A finite stretch ξ(a..b) of one realization, with an optional finite
/// alphabet the values are drawn from.
#[derive(Debug, Clone)]
pub struct RealizationWindow {
    start: i64,
    values: Vec<C64>,
    alphabet: Option<Vec<C64>>,
}

/// Minimal pairwise distance of a finite value set; must be positive.
pub fn alphabet_separation(alphabet: &[C64]) -> Result<f64> {
    if alphabet.len() < 2 {
        return Ok(f64::INFINITY);
    }
    let mut sep = f64::INFINITY;
    for i in 0..alphabet.len() {
        for j in (i + 1)..alphabet.len() {
            sep = sep.min((alphabet[i] - alphabet[j]).norm());
        }
    }
    if sep <= 0.0 {
        return Err(Error::InvalidAlphabet("alphabet values not pairwise distinct".into()));
    }
    Ok(sep)
}

impl RealizationWindow {
    pub fn new(start: i64, values: Vec<C64>, alphabet: Option<Vec<C64>>) -> Result<Self> {
        if let Some(x) = &alphabet {
            let sep = alphabet_separation(x)?;
            for (i, v) in values.iter().enumerate() {
                let nearest = x.iter().map(|a| (a - v).norm()).fold(f64::INFINITY, f64::min);
                if nearest > 1e-9 * (1.0 + sep) {
                    return Err(Error::InvalidAlphabet(format!(
                        "value at offset {i} not in the alphabet"
                    )));
                }
            }
        }
        Ok(RealizationWindow { start, values, alphabet })
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last index.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn alphabet(&self) -> Option<&[C64]> {
        self.alphabet.as_deref()
    }

    /// Minimal pairwise alphabet distance, if an alphabet is attached.
    pub fn separation(&self) -> Option<f64> {
        self.alphabet.as_ref().map(|x| alphabet_separation(x).expect("validated"))
    }

    pub fn at(&self, n: i64) -> Option<C64> {
        if n < self.start || n >= self.end() {
            None
        } else {
            Some(self.values[(n - self.start) as usize])
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// The flipped realization ζ(n) = ξ(-n) on the mirrored index range.
    pub fn flip(&self) -> RealizationWindow {
        let mut values = self.values.clone();
        values.reverse();
        RealizationWindow {
            start: -(self.end() - 1),
            values,
            alphabet: self.alphabet.clone(),
        }
    }

    /// Partial weighted norm (Σ_m (|ξ(m)|/(1+|m|)^p)²)^{1/2} over the window.
    pub fn weighted_norm(&self, p: f64) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let m = self.start + i as i64;
                let w = crate::arc_polys::frequency_weight(m, p);
                (v.norm() / w).powi(2)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// CSV serialization: index, re, im.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{:.17e},{:.17e}\n", self.start + i as i64, v.re, v.im));
        }
        out
    }

    pub fn from_csv(text: &str, alphabet: Option<Vec<C64>>) -> Result<Self> {
        let mut entries: Vec<(i64, C64)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('n') || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() < 2 {
                return Err(Error::InvalidParameter(format!("csv line {} malformed", ln + 1)));
            }
            let idx: i64 = fields[0]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad index on line {}", ln + 1)))?;
            let re: f64 = fields[1]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad value on line {}", ln + 1)))?;
            let im: f64 = if fields.len() > 2 { fields[2].trim().parse().unwrap_or(0.0) } else { 0.0 };
            entries.push((idx, C64::new(re, im)));
        }
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty sequence csv".into()));
        }
        entries.sort_by_key(|e| e.0);
        let start = entries[0].0;
        for (i, e) in entries.iter().enumerate() {
            if e.0 != start + i as i64 {
                return Err(Error::InvalidParameter("sequence indices not contiguous".into()));
            }
        }
        RealizationWindow::new(start, entries.into_iter().map(|e| e.1).collect(), alphabet)
    }
}

/// Tail of the weighted norm: an upper bound for the contribution of
/// |m| > beyond when |ξ| <= value_bound, valid for p > 1/2.
pub fn weighted_norm_tail_bound(value_bound: f64, p: f64, beyond: u64) -> f64 {
    assert!(p > 0.5, "tail bound needs p > 1/2");
    let k = beyond as f64;
    // Σ_{m>K} (1+m)^{-2p} <= ∫_K^∞ (1+x)^{-2p} dx = (1+K)^{1-2p}/(2p-1)
    (2.0 * value_bound * value_bound * (1.0 + k).powf(1.0 - 2.0 * p) / (2.0 * p - 1.0)).sqrt()
}

fn distinct_values(word: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for v in word {
        if !out.iter().any(|u| (u - v).norm() < 1e-12) {
            out.push(*v);
        }
    }
    out.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    out
}

fn centered_start(length: usize) -> i64 {
    -((length / 2) as i64)
}

/// Shifted periodic word: ξ(n) = word[(n + u) mod N] with u uniform from the
/// seed. Exactly N-periodic, stationary over the random shift.
pub fn gen_periodic_word(word: &[C64], length: usize, seed: u64) -> Result<RealizationWindow> {
    if word.is_empty() {
        return Err(Error::InvalidParameter("word must be nonempty".into()));
    }
    let n = word.len() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = rng.random_range(0..n);
    let start = centered_start(length);
    let values = (0..length as i64)
        .map(|i| word[((start + i + shift).rem_euclid(n)) as usize])
        .collect();
    RealizationWindow::new(start, values, Some(distinct_values(word)))
}

/// Spectral measure of the shifted-word process: atoms at the N-th roots of
/// unity with masses |DFT_j(word)/N|²; zero-mass atoms dropped.
pub fn periodic_word_spectrum(word: &[C64]) -> SpectralMeasure {
    let n = word.len();
    assert!(n >= 1);
    let mut atoms = Vec::new();
    let mut max_mass: f64 = 0.0;
    let mut raw = Vec::with_capacity(n);
    for j in 0..n {
        let mut dft = C64::new(0.0, 0.0);
        for (u, w) in word.iter().enumerate() {
            dft += w * C64::from_polar(1.0, -TAU * (j * u) as f64 / n as f64);
        }
        let mass = (dft / n as f64).norm_sqr();
        max_mass = max_mass.max(mass);
        raw.push((principal(TAU * j as f64 / n as f64), mass));
    }
    for (angle, mass) in raw {
        if mass > 1e-24 * max_mass.max(1e-300) {
            atoms.push((angle, mass));
        }
    }
    SpectralMeasure::from_atoms(atoms)
}

/// Gaussian spectral sum ξ(n) = Σ_k √w_k ζ_k t_kⁿ over the quadrature nodes
/// of the measure, ζ_k independent standard complex Gaussians.
pub fn gen_gaussian(
    measure: &SpectralMeasure,
    quadrature_points: usize,
    length: usize,
    seed: u64,
) -> Result<RealizationWindow> {
    let q = quadrature(measure, quadrature_points)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<C64> = q
        .weights
        .iter()
        .map(|&w| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2) * w.max(0.0).sqrt()
        })
        .collect();
    let start = centered_start(length);
    let values = (0..length as i64)
        .map(|i| {
            let n = (start + i) as f64;
            q.nodes
                .iter()
                .zip(&coeffs)
                .map(|(&t, c)| c * C64::from_polar(1.0, n * t))
                .sum()
        })
        .collect();
    RealizationWindow::new(start, values, None)
}

/// Unimodular rotation ξ(n) = t sⁿ with s drawn from the probability measure
/// and t uniform on the circle (or on the cyclic group of the given order).
pub fn gen_unimodular_rotation(
    measure: &SpectralMeasure,
    length: usize,
    seed: u64,
    cyclic_order: Option<u64>,
) -> Result<RealizationWindow> {
    let mass = measure.total_mass();
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidMeasure(format!(
            "unimodular rotation needs a probability measure, mass = {mass}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s_angle = sample_angle(measure, &mut rng)?;
    let t_angle = match cyclic_order {
        None => rng.random_range(-PI..PI),
        Some(q) => {
            if q == 0 {
                return Err(Error::InvalidParameter("cyclic order must be positive".into()));
            }
            TAU * rng.random_range(0..q) as f64 / q as f64
        }
    };
    let start = centered_start(length);
    let values = (0..length as i64)
        .map(|i| C64::from_polar(1.0, t_angle + (start + i) as f64 * s_angle))
        .collect();
    RealizationWindow::new(start, values, None)
}

/// Draw an angle from the measure: atoms exactly, densities through a fine
/// discretization (4096 nodes per piece).
fn sample_angle(measure: &SpectralMeasure, rng: &mut ChaCha8Rng) -> Result<f64> {
    let q = quadrature(measure, 4096)?;
    let total: f64 = q.weights.iter().sum();
    let mut u = rng.random_range(0.0..total);
    for (&node, &w) in q.nodes.iter().zip(&q.weights) {
        if u < w {
            return Ok(node);
        }
        u -= w;
    }
    Ok(*q.nodes.last().expect("nonempty quadrature"))
}

/// Biased (1/L-normalized) sample autocovariance; Hermitian by construction.
pub fn sample_covariance(window: &RealizationWindow, max_lag: usize) -> Result<MomentSequence> {
    let l = window.len();
    if l < 4 * max_lag.max(1) {
        return Err(Error::WindowTooShort { have: l, need: 4 * max_lag.max(1) });
    }
    let values = (0..=max_lag)
        .map(|m| {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..(l - m) {
                acc += window.values[i] * window.values[i + m].conj();
            }
            acc / l as f64
        })
        .collect();
    Ok(MomentSequence::from_nonnegative_lags(values))
}

/// Per-lag ensemble mean of ξ(0) conj(ξ(m)) over seeded trials, with a
/// standard-error estimate (largest of the re/im component errors).
pub fn ensemble_covariance(
    mut generate: impl FnMut(u64) -> Result<RealizationWindow>,
    trials: u64,
    max_lag: usize,
) -> Result<(Vec<C64>, Vec<f64>)> {
    let mut sums = vec![C64::new(0.0, 0.0); max_lag + 1];
    let mut sq_re = vec![0.0f64; max_lag + 1];
    let mut sq_im = vec![0.0f64; max_lag + 1];
    for trial in 0..trials {
        let w = generate(trial)?;
        for (m, s) in sums.iter_mut().enumerate() {
            let x0 = w.at(0).ok_or(Error::WindowTooShort { have: w.len(), need: max_lag + 1 })?;
            let xm = w
                .at(m as i64)
                .ok_or(Error::WindowTooShort { have: w.len(), need: max_lag + 1 })?;
            let v = x0 * xm.conj();
            *s += v;
            sq_re[m] += v.re * v.re;
            sq_im[m] += v.im * v.im;
        }
    }
    let n = trials as f64;
    let means: Vec<C64> = sums.iter().map(|s| s / n).collect();
    let errs = (0..=max_lag)
        .map(|m| {
            let var_re = (sq_re[m] / n - means[m].re * means[m].re).max(0.0);
            let var_im = (sq_im[m] / n - means[m].im * means[m].im).max(0.0);
            (var_re.max(var_im) / n).sqrt()
        })
        .collect();
    Ok((means, errs))
}

/// Process description for config files and the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    PeriodicWord { word: Vec<[f64; 2]> },
    IntegerPeriodic { word: Vec<i64> },
    Gaussian { measure: MeasureSpec, quadrature_points: usize },
    UnimodularRotation {
        measure: MeasureSpec,
        #[serde(default)]
        cyclic_order: Option<u64>,
    },
}

impl ProcessSpec {
    pub fn generate(&self, length: usize, seed: u64) -> Result<RealizationWindow> {
        match self {
            ProcessSpec::PeriodicWord { word } => {
                let w: Vec<C64> = word.iter().map(|c| C64::new(c[0], c[1])).collect();
                gen_periodic_word(&w, length, seed)
            }
            ProcessSpec::IntegerPeriodic { word } => {
                let w: Vec<C64> = word.iter().map(|&v| C64::new(v as f64, 0.0)).collect();
                gen_periodic_word(&w, length, seed)
            }
            ProcessSpec::Gaussian { measure, quadrature_points } => {
                gen_gaussian(&measure.build()?, *quadrature_points, length, seed)
            }
            ProcessSpec::UnimodularRotation { measure, cyclic_order } => {
                gen_unimodular_rotation(&measure.build()?, length, seed, *cyclic_order)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn constant_word() {
        let w = gen_periodic_word(&[c(2.0)], 16, 3).unwrap();
        assert!(w.values().iter().all(|v| (v - c(2.0)).norm() == 0.0));
    }

    #[test]
    fn alternating_word_periodicity() {
        let w = gen_periodic_word(&[c(0.0), c(1.0)], 32, 11).unwrap();
        for n in w.start()..(w.end() - 2) {
            assert_eq!(w.at(n), w.at(n + 2));
        }
        assert_eq!(w.alphabet().unwrap().len(), 2);
        assert_eq!(w.separation(), Some(1.0));
    }

    #[test]
    fn word_spectrum_masses() {
        // constant word 1 -> single atom at 0 with mass 1
        let m = periodic_word_spectrum(&[c(1.0)]);
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].mass - 1.0).abs() < 1e-15);
        assert_eq!(m.atoms[0].angle, 0.0);

        // word [1,-1] -> single atom at π with mass 1
        let m = periodic_word_spectrum(&[c(1.0), c(-1.0)]);
        assert_eq!(m.atoms.len(), 1);
        assert!((m.atoms[0].angle.abs() - PI).abs() < 1e-12);
        assert!((m.atoms[0].mass - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unimodular_values_on_circle() {
        let rho = SpectralMeasure::single_atom(0.7, 1.0);
        let w = gen_unimodular_rotation(&rho, 64, 5, None).unwrap();
        for v in w.values() {
            assert!((v.norm() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn sample_covariance_constant() {
        let vals = vec![c(1.0); 64];
        let w = RealizationWindow::new(0, vals, None).unwrap();
        let r = sample_covariance(&w, 4).unwrap();
        for m in 0..=4usize {
            let want = 1.0 - m as f64 / 64.0;
            assert!((r.at(m as i64).re - want).abs() < 1e-14);
        }
    }

    #[test]
    fn sample_covariance_rotation() {
        let s = 0.9f64;
        let vals: Vec<C64> = (0..256).map(|n| C64::from_polar(1.0, s * n as f64)).collect();
        let w = RealizationWindow::new(0, vals, None).unwrap();
        let r = sample_covariance(&w, 8).unwrap();
        for m in 0..=8i64 {
            let want = C64::from_polar(1.0, -s * m as f64);
            // boundary term <= m/L
            assert!((r.at(m) - want).norm() <= m as f64 / 256.0 + 1e-12);
        }
    }

    #[test]
    fn flip_reverses_indices() {
        let w = RealizationWindow::new(-2, vec![c(1.0), c(2.0), c(3.0), c(4.0)], None).unwrap();
        let f = w.flip();
        assert_eq!(f.at(2), Some(c(1.0)));
        assert_eq!(f.at(-1), Some(c(4.0)));
        assert_eq!(f.start(), -1);
    }

    #[test]
    fn csv_roundtrip() {
        let w = RealizationWindow::new(-1, vec![c(0.5), c(1.5), c(-0.5)], None).unwrap();
        let txt = w.to_csv();
        let back = RealizationWindow::from_csv(&txt, None).unwrap();
        assert_eq!(back.start(), -1);
        assert_eq!(back.values().len(), 3);
        assert!((back.at(1).unwrap() - c(-0.5)).norm() == 0.0);
    }
}
