//! Spectrum of a single realization: the distributional pairing against
//! smooth cutoffs, gap detection, and the Carleman transform.
//!
//! Orientation convention: the pairing sums ξ(n) against the standard
//! Fourier coefficient c_n(φ) = ∫ φ e^{-inθ} dm, which localizes the
//! sequence ξ(n) = sⁿ at the point s itself. This is fixed jointly with the
//! moment convention in `measures` and pinned by tests; flipping ξ(n) ↦ ξ(-n)
//! mirrors the detected set under conjugation.

use crate::arc_polys::SmoothBump;
use crate::arcs::{ArcSet, CircleArc};
use crate::error::{Error, Result};
use crate::processes::RealizationWindow;
use crate::{C64, TAU};
use std::f64::consts::PI;

/// Result of pairing a realization with a smooth cutoff.
#[derive(Debug, Clone, Copy)]
pub struct Pairing {
    pub value: C64,
    /// Upper bound for the part of the sum outside the window (and beyond
    /// the resolved frequency band), using the observed amplitude.
    pub truncation_bound: f64,
}

fn window_reach(window: &RealizationWindow) -> i64 {
    window.start().abs().max((window.end() - 1).abs())
}

/// Truncated pairing Σ_n ξ(n) c_n(φ) over the window, with a certified-up-to-
/// grid-tolerance bound for the neglected tail.
///
/// The cutoff's Fourier coefficients are refined until the top octave holds
/// less than 1e-10 of their total absolute mass.
pub fn pairing(window: &RealizationWindow, cutoff: &SmoothBump) -> Result<Pairing> {
    let reach = window_reach(window);
    let mut size = ((4 * reach.max(1024)) as usize).next_power_of_two();
    loop {
        let coeffs = cutoff.fourier(size);
        let total_abs = coeffs.abs_sum();
        let top = coeffs.abs_tail_beyond((size / 4) as i64);
        if top > 1e-10 * total_abs {
            size *= 2;
            if size > (1 << 22) {
                return Err(Error::UnresolvedTail { grid: size / 2, tail: top / total_abs });
            }
            continue;
        }
        let mut value = C64::new(0.0, 0.0);
        for n in window.start()..window.end() {
            value += window.at(n).unwrap() * coeffs.at(n);
        }
        // coefficient mass outside the window, within the resolved band
        let mut outside = 0.0;
        let half = coeffs.max_freq();
        for m in -half..=half {
            if m < window.start() || m >= window.end() {
                outside += coeffs.at(m).norm();
            }
        }
        let amplitude = 1.5 * window.max_abs();
        let truncation_bound = amplitude * (outside + top);
        return Ok(Pairing { value, truncation_bound });
    }
}

/// One probe of the spectrum estimator.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumProbe {
    pub center: f64,
    pub magnitude: f64,
    pub threshold: f64,
    pub in_gap: bool,
}

/// Estimate the realization spectrum by covering the circle with overlapping
/// smooth bumps and keeping those where the pairing is above 10x its
/// truncation bound.
///
/// Conservative: a bump is declared "gap" only when the pairing magnitude is
/// below the detection threshold, so the returned set never under-covers at
/// the tested tolerance. The result is the union of the kept bumps' inner
/// arcs; its angular accuracy is ~2.1·(2π/resolution).
pub fn estimate_spectrum(window: &RealizationWindow, resolution: usize) -> Result<ArcSet> {
    Ok(estimate_spectrum_probes(window, resolution)?.0)
}

pub fn estimate_spectrum_probes(
    window: &RealizationWindow,
    resolution: usize,
) -> Result<(ArcSet, Vec<SpectrumProbe>)> {
    if resolution < 8 {
        return Err(Error::InvalidParameter("resolution must be >= 8".into()));
    }
    let spacing = TAU / resolution as f64;
    let base_inner = CircleArc::centered(0.0, 0.6 * spacing)?;
    let base_outer = CircleArc::centered(0.0, 1.5 * spacing)?;
    let bump = SmoothBump::new(base_inner, base_outer)?;

    // the rotated-bump pairings reuse one coefficient set: rotating the bump
    // by α twists coefficient m by e^{-imα}
    let reach = window_reach(window);
    let mut size = ((4 * reach.max(1024)) as usize).next_power_of_two();
    let coeffs = loop {
        let c = bump.fourier(size);
        if c.abs_tail_beyond((size / 4) as i64) <= 1e-10 * c.abs_sum() {
            break c;
        }
        size *= 2;
        if size > (1 << 22) {
            return Err(Error::UnresolvedTail { grid: size / 2, tail: 1.0 });
        }
    };
    let mut outside = 0.0;
    let half = coeffs.max_freq();
    for m in -half..=half {
        if m < window.start() || m >= window.end() {
            outside += coeffs.at(m).norm();
        }
    }
    let amplitude = 1.5 * window.max_abs();
    let truncation_bound =
        amplitude * (outside + coeffs.abs_tail_beyond((size / 4) as i64));
    let threshold = 10.0 * truncation_bound.max(1e-14 * (1.0 + amplitude));

    // weighted terms g_n = ξ(n) c_n; the probe values F_j = Σ g_n e^{-i n c_j}
    // at centers c_j = -π + j·2π/R reduce to an R-point transform of the
    // folded sums G_k = Σ_{n ≡ k (R)} g_n (-1)^n
    let r = resolution;
    let mut folded = vec![C64::new(0.0, 0.0); r];
    for n in window.start()..window.end() {
        let g = window.at(n).unwrap() * coeffs.at(n);
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        folded[n.rem_euclid(r as i64) as usize] += g * sign;
    }
    let mut kept = Vec::new();
    let mut probes = Vec::with_capacity(resolution);
    for j in 0..resolution {
        let center = -PI + j as f64 * spacing;
        let mut val = C64::new(0.0, 0.0);
        for (k, gk) in folded.iter().enumerate() {
            val += gk * C64::from_polar(1.0, -TAU * (j * k % r) as f64 / r as f64);
        }
        let magnitude = val.norm();
        let in_gap = magnitude < threshold;
        if !in_gap {
            kept.push(CircleArc::centered(center, 0.6 * spacing)?);
        }
        probes.push(SpectrumProbe { center, magnitude, threshold, in_gap });
    }
    Ok((ArcSet::from_parts(kept, Vec::new()), probes))
}

/// Boundary samples of the two analytic halves of the Carleman transform.
///
/// The transform is the literal power series Σ ξ(n) zⁿ; under this crate's
/// pairing orientation its boundary singularities appear at the conjugates
/// of the estimated spectrum points (ξ(n) = sⁿ blows up at conj(s)).
#[derive(Debug, Clone)]
pub struct CarlemanSample {
    pub radius: f64,
    pub angles: Vec<f64>,
    /// F⁺(r e^{iθ}) = Σ_{n>=0} ξ(n) zⁿ.
    pub plus: Vec<C64>,
    /// F⁻(r⁻¹ e^{iθ}) = -Σ_{n<=-1} ξ(n) zⁿ.
    pub minus: Vec<C64>,
    /// Geometric bound for the truncated part of either sum.
    pub tail_bound: f64,
}

impl CarlemanSample {
    pub fn max_abs_plus(&self) -> f64 {
        self.plus.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// |F⁺| at the grid angle closest to `theta`.
    pub fn plus_near(&self, theta: f64) -> C64 {
        let (mut best, mut arg) = (f64::INFINITY, 0usize);
        for (i, &a) in self.angles.iter().enumerate() {
            let d = crate::arcs::principal(a - theta).abs();
            if d < best {
                best = d;
                arg = i;
            }
        }
        self.plus[arg]
    }
}

/// Evaluate the truncated Carleman transform on a circle of radius r (inside)
/// and 1/r (outside).
pub fn carleman_transform(
    window: &RealizationWindow,
    r: f64,
    grid: usize,
) -> Result<CarlemanSample> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::InvalidParameter(format!("radius {r} not in (0,1)")));
    }
    if grid < 4 {
        return Err(Error::InvalidParameter("grid must be >= 4".into()));
    }
    let plus_extent = (window.end() - 1).max(0);
    let minus_extent = (-window.start()).max(0);
    // both truncated sums decay geometrically past the window edges
    let cover = plus_extent.min(minus_extent);
    if r.powi(cover as i32) >= 1e-12 {
        return Err(Error::RadiusTooLarge { r, cover });
    }
    let amplitude = window.max_abs();
    let tail_bound = amplitude * r.powi(cover as i32) / (1.0 - r);
    let angles: Vec<f64> = (0..grid).map(|g| -PI + TAU * g as f64 / grid as f64).collect();
    let mut plus = Vec::with_capacity(grid);
    let mut minus = Vec::with_capacity(grid);
    for &theta in &angles {
        let z = C64::from_polar(r, theta);
        let mut acc = C64::new(0.0, 0.0);
        let mut zp = C64::new(1.0, 0.0);
        for n in 0..=plus_extent {
            if let Some(v) = window.at(n) {
                acc += v * zp;
            }
            zp *= z;
        }
        plus.push(acc);
        // F⁻ at r⁻¹ e^{iθ}: z^n for n <= -1 has modulus r^{|n|}
        let zinv = C64::from_polar(r, -theta);
        let mut acc = C64::new(0.0, 0.0);
        let mut zp = zinv;
        for n in 1..=minus_extent {
            if let Some(v) = window.at(-n) {
                acc -= v * zp;
            }
            zp *= zinv;
        }
        minus.push(acc);
    }
    Ok(CarlemanSample { radius: r, angles, plus, minus, tail_bound })
}

/// CSV artifact for the CLI `spectrum` command: bump center, |pairing|,
/// threshold, gap flag.
pub fn probes_csv(probes: &[SpectrumProbe]) -> String {
    let mut out = String::from("center,magnitude,threshold,in_gap\n");
    for p in probes {
        out.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{}\n",
            p.center, p.magnitude, p.threshold, p.in_gap as u8
        ));
    }
    out
}
