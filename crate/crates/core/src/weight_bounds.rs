//! Weights W: 𝕋 → [1, ∞], their truncations W_A = min(W, e^A), exceedance
//! sets, Poisson smoothing, the outer-function upper bound for prediction
//! errors, the Nazarov ratio experiment, and the exponential-root decay
//! experiment.

use crate::arcs::{principal, ArcSet};
use crate::error::{Error, Result};
use crate::fit::{line_fit, LineFit};
use crate::measures::SpectralMeasure;
use crate::quad::{self, Panels};
use crate::{C64, TAU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// A weight W >= 1 on the circle, handled through log W.
#[derive(Debug, Clone)]
pub enum Weight {
    /// W ≡ 1.
    One,
    /// W ≡ exp(c), c >= 0.
    Const { log_value: f64 },
    /// W(e^{iθ}) = exp(1/|θ|); infinite at θ = 0.
    ExpRoot,
    /// log W sampled on a uniform grid over [-π, π), linear interpolation.
    LogSamples { values: Vec<f64> },
}

impl Weight {
    /// log W at the principal angle; may be +∞.
    pub fn log_w(&self, theta: f64) -> f64 {
        match self {
            Weight::One => 0.0,
            Weight::Const { log_value } => *log_value,
            Weight::ExpRoot => {
                let t = principal(theta).abs();
                if t == 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / t
                }
            }
            Weight::LogSamples { values } => {
                let n = values.len();
                let x = (principal(theta) + PI) / TAU * n as f64;
                let i = (x.floor() as usize).min(n - 1);
                let frac = x - i as f64;
                let a = values[i];
                let b = values[(i + 1) % n];
                a + frac * (b - a)
            }
        }
    }

    /// log W_A = min(log W, A).
    pub fn log_truncated(&self, theta: f64, a: f64) -> f64 {
        self.log_w(theta).min(a)
    }

    /// Angles where log W blows up (panel grading targets).
    fn singular_angles(&self) -> Vec<f64> {
        match self {
            Weight::ExpRoot => vec![0.0],
            _ => Vec::new(),
        }
    }

    /// Angles where the truncation min(log W, A) has a kink; quadrature
    /// panels are cut there.
    fn truncation_crossings(&self, a: f64) -> Vec<f64> {
        match self {
            Weight::ExpRoot => {
                if 1.0 / a < PI {
                    vec![1.0 / a, -1.0 / a]
                } else {
                    Vec::new()
                }
            }
            Weight::LogSamples { values } => {
                let n = values.len();
                let mut out = Vec::new();
                for i in 0..n {
                    let x0 = values[i];
                    let x1 = values[(i + 1) % n];
                    if (x0 - a) * (x1 - a) < 0.0 {
                        let frac = (a - x0) / (x1 - x0);
                        out.push(principal(-PI + TAU * (i as f64 + frac) / n as f64));
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }
}

/// Panels over [-π, π] graded toward the marked angles.
fn graded_circle_panels(marks: &[f64], floor: f64, cap: f64) -> Panels {
    let mut cuts: Vec<f64> = vec![-PI, PI];
    cuts.extend(marks.iter().map(|&m| principal(m)));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    let mut panels = Panels { cuts: Vec::new() };
    for w in cuts.windows(2) {
        if w[1] - w[0] < 1e-15 {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        panels = panels
            .concat(Panels::graded_left(w[0], mid, floor))
            .concat(Panels::graded_right(mid, w[1], floor));
    }
    panels.capped(cap)
}

/// ∫ log W_A dm by graded quadrature.
pub fn truncated_log_integral(weight: &Weight, a: f64) -> Result<f64> {
    if a <= 0.0 {
        return Err(Error::InvalidParameter("truncation level must be positive".into()));
    }
    let mut marks = weight.singular_angles();
    marks.extend(weight.truncation_crossings(a));
    let panels = graded_circle_panels(&marks, 1e-16, PI / 8.0);
    let coarse = quad::integrate(&panels, 16, |t| weight.log_truncated(t, a) / TAU);
    let fine = quad::integrate(&panels, 32, |t| weight.log_truncated(t, a) / TAU);
    if (coarse - fine).abs() > 1e-8 * (1.0 + fine.abs()) {
        return Err(Error::QuadratureNonConvergence {
            achieved: (coarse - fine).abs(),
            wanted: 1e-8 * (1.0 + fine.abs()),
        });
    }
    Ok(fine)
}

/// m{W > e^A}: Lebesgue measure of the exceedance set, by grid count with
/// bisection refinement at the indicator crossings.
pub fn exceedance_measure(weight: &Weight, a: f64) -> f64 {
    assert!(a > 0.0);
    match weight {
        Weight::One => 0.0,
        Weight::Const { log_value } => {
            if *log_value > a {
                1.0
            } else {
                0.0
            }
        }
        _ => {
            let n = 1 << 16;
            let h = TAU / n as f64;
            let above = |t: f64| weight.log_w(t) > a;
            let mut measure = 0.0;
            for i in 0..n {
                let lo = -PI + i as f64 * h;
                let hi = lo + h;
                match (above(lo + 1e-12), above(hi - 1e-12)) {
                    (true, true) => measure += h,
                    (false, false) => {}
                    (inside_lo, _) => {
                        // bisect the single crossing inside this cell
                        let (mut x0, mut x1) = (lo, hi);
                        for _ in 0..60 {
                            let mid = 0.5 * (x0 + x1);
                            if above(mid) == inside_lo {
                                x0 = mid;
                            } else {
                                x1 = mid;
                            }
                        }
                        let cross = 0.5 * (x0 + x1);
                        measure += if inside_lo { cross - lo } else { hi - cross };
                    }
                }
            }
            measure / TAU
        }
    }
}

/// Poisson kernel for the unit disk.
#[derive(Debug, Clone, Copy)]
pub struct PoissonKernel {
    pub r: f64,
}

impl PoissonKernel {
    pub fn new(r: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidParameter(format!("Poisson radius {r} not in [0,1)")));
        }
        Ok(PoissonKernel { r })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let r = self.r;
        (1.0 - r * r) / (1.0 - 2.0 * r * theta.cos() + r * r)
    }

    /// ∫ p_r dm, numerically (exactly 1 up to quadrature).
    pub fn mass(&self) -> f64 {
        let floor = (1.0 - self.r).max(1e-12) * 1e-6;
        let panels = graded_circle_panels(&[0.0], floor, PI / 8.0);
        quad::integrate(&panels, 24, |t| self.eval(t) / TAU)
    }
}

/// max over θ of [(log W_A) * P_{1-1/A}](θ) / log W(θ); the Poisson
/// convolution of the truncation against the untruncated weight.
pub fn poisson_smoothing_constant(weight: &Weight, a: f64) -> Result<f64> {
    if a <= 1.0 {
        return Err(Error::InvalidParameter("need A > 1".into()));
    }
    if matches!(weight, Weight::One) {
        return Ok(0.0);
    }
    let kernel = PoissonKernel::new(1.0 - 1.0 / a)?;
    let conv = |theta: f64| -> f64 {
        let kernel_floor = 1e-8 / a;
        let panels = graded_circle_panels(&[0.0, theta], kernel_floor, PI / 8.0);
        quad::integrate(&panels, 24, |phi| {
            weight.log_truncated(theta - phi, a) * kernel.eval(phi) / TAU
        })
    };
    // symmetric weights need only θ > 0; keep both halves for generality
    let mut grid: Vec<f64> = Vec::new();
    let mut t = PI;
    while t > 1e-3 / a {
        grid.push(t);
        grid.push(-t);
        t *= 0.94;
    }
    let mut best: f64 = 0.0;
    for &theta in &grid {
        let denom = weight.log_w(theta);
        let num = conv(theta);
        if denom <= 0.0 {
            if num > 1e-12 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        if denom.is_finite() {
            best = best.max(num / denom);
        }
    }
    Ok(best)
}

/// Outcome of the outer-function upper bound at one (A, n) pair.
#[derive(Debug, Clone, Copy)]
pub struct OuterBoundCheck {
    /// ∫ W^β dρ, the moment hypothesis constant.
    pub c_constant: f64,
    /// Whether that integral converged (hypothesis of the bound).
    pub hypothesis_met: bool,
    /// Whether n >= A²β/(2M).
    pub degree_admissible: bool,
    pub bound: f64,
    pub e_n: f64,
    /// e_n <= bound (only meaningful when the hypothesis is met).
    pub holds: bool,
}

/// Evaluate √(2C + ρ(𝕋)/2)·exp(-(β/2M)∫log W_A dm) against the computed e_n.
pub fn outer_function_bound(
    weight: &Weight,
    a: f64,
    beta: f64,
    smoothing_m: f64,
    measure: &SpectralMeasure,
    n: usize,
) -> Result<OuterBoundCheck> {
    if beta <= 0.0 || smoothing_m <= 0.0 || a <= 1.0 {
        return Err(Error::InvalidParameter("need beta, M > 0 and A > 1".into()));
    }
    let (c_constant, hypothesis_met) = moment_hypothesis_constant(weight, beta, measure);
    let degree_admissible = (n as f64) >= a * a * beta / (2.0 * smoothing_m);
    let mass = measure.total_mass();
    let log_int = truncated_log_integral(weight, a)?;
    let bound = (2.0 * c_constant + 0.5 * mass).sqrt()
        * (-(beta / (2.0 * smoothing_m)) * log_int).exp();
    let rule = crate::measures::quadrature_resolving(measure, 2 * n + 8)?;
    let seq = crate::szego::prediction_errors_from_quadrature(&rule, n);
    let e_n = seq.errors[n];
    Ok(OuterBoundCheck {
        c_constant,
        hypothesis_met,
        degree_admissible,
        bound,
        e_n,
        holds: hypothesis_met && e_n <= bound * (1.0 + 1e-9),
    })
}

/// ∫ W^β dρ with divergence detection (refinement disagreement or blow-up).
fn moment_hypothesis_constant(weight: &Weight, beta: f64, measure: &SpectralMeasure) -> (f64, bool) {
    let mut total = 0.0;
    for atom in &measure.atoms {
        let lw = weight.log_w(atom.angle);
        if !lw.is_finite() && atom.mass > 0.0 {
            return (f64::INFINITY, false);
        }
        total += atom.mass * (beta * lw).exp();
    }
    let piece_part = |floor: f64| -> f64 {
        let mut acc = 0.0;
        for piece in &measure.pieces {
            let marks = weight.singular_angles();
            let panels = graded_circle_panels(&marks, floor, PI / 16.0);
            // restrict the circle panels to this piece's arc; the integrand
            // exponent is assembled in log space so an essential zero of the
            // density can cancel a pole of the weight without inf·0
            acc += quad::integrate(&panels, 24, |t| {
                if piece.arc.contains(t) {
                    let exponent = beta * weight.log_w(t) + piece.density.log_eval(&piece.arc, t);
                    if exponent == f64::NEG_INFINITY {
                        0.0
                    } else if exponent > 700.0 {
                        f64::MAX / 1e10
                    } else {
                        exponent.exp() / TAU
                    }
                } else {
                    0.0
                }
            });
        }
        acc
    };
    let coarse = piece_part(1e-10);
    let fine = piece_part(1e-14);
    if !fine.is_finite() || fine > 1e12 || (fine - coarse).abs() > 1e-6 * (1.0 + fine.abs()) {
        return (f64::INFINITY, false);
    }
    (total + fine, true)
}

/// Empirical Nazarov ratio over random (and optionally adversarial)
/// polynomials of the given degree.
#[derive(Debug, Clone)]
pub struct NazarovOutcome {
    pub degree: usize,
    pub trials: u64,
    /// max over trials of log(∫_T |p|² / ∫_E |p|²) / (n · m(T∖E)).
    pub max_ratio_exponent: f64,
    pub mean_ratio_exponent: f64,
}

/// Quadrature nodes that integrate |p|² dm exactly over the arc set for
/// polynomials of the given degree.
fn arc_set_rule(e: &ArcSet, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for arc in &e.arcs {
        let cap = 8.0 / (2 * degree + 1) as f64;
        let count = (arc.length() / cap).ceil().max(1.0) as usize;
        let panels = Panels::uniform(0.0, arc.length(), count);
        let (ds, ws) = quad::nodes_weights(&panels, 24);
        for (&d, &w) in ds.iter().zip(&ws) {
            nodes.push(principal(arc.start() + d));
            weights.push(w / TAU);
        }
    }
    (nodes, weights)
}

/// Per-trial ratio exponents log(∫_T|p|²/∫_E|p|²)/(n·m(T∖E)): random
/// coefficient vectors are standard complex Gaussians; adversarial
/// candidates (polynomials built to be small on E) can be mixed in.
pub fn nazarov_trials(
    degree: usize,
    e: &ArcSet,
    trials: u64,
    seed: u64,
    adversarial: bool,
) -> Result<Vec<f64>> {
    let m_e = e.total_length() / TAU;
    if m_e < 1.0 / 3.0 - 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "Nazarov needs m(E) >= 1/3, got {m_e}"
        )));
    }
    let m_complement = 1.0 - m_e;
    if m_complement <= 0.0 {
        return Err(Error::InvalidParameter("E must leave a complement".into()));
    }
    let (nodes, weights) = arc_set_rule(e, degree);
    let ratio_exponent = |coeffs: &[C64]| -> f64 {
        let full: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let mut on_e = 0.0;
        for (&t, &w) in nodes.iter().zip(&weights) {
            let z = C64::from_polar(1.0, t);
            let mut acc = C64::new(0.0, 0.0);
            for c in coeffs.iter().rev() {
                acc = acc * z + c;
            }
            on_e += w * acc.norm_sqr();
        }
        if on_e <= 0.0 {
            return f64::INFINITY;
        }
        (full / on_e).ln() / (degree as f64 * m_complement)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials as usize);
    for _ in 0..trials {
        let coeffs: Vec<C64> = (0..=degree)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
            })
            .collect();
        out.push(ratio_exponent(&coeffs));
    }
    if adversarial && e.arcs.len() == 1 {
        // polynomials built to be small on E push the ratio toward the
        // extremal regime
        for target in [0.5, 0.1, 0.02] {
            if let Ok(p) = crate::arc_polys::small_on_arc(&e.arcs[0], target, degree) {
                if p.degree() <= degree && p.degree() >= 1 {
                    out.push(ratio_exponent(p.coeffs()));
                }
            }
        }
    }
    Ok(out)
}

/// Aggregate of [`nazarov_trials`].
pub fn nazarov_check(
    degree: usize,
    e: &ArcSet,
    trials: u64,
    seed: u64,
    adversarial: bool,
) -> Result<NazarovOutcome> {
    let values = nazarov_trials(degree, e, trials, seed, adversarial)?;
    let max_ratio_exponent = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean_ratio_exponent = values.iter().sum::<f64>() / values.len().max(1) as f64;
    Ok(NazarovOutcome {
        degree,
        trials: values.len() as u64,
        max_ratio_exponent,
        mean_ratio_exponent,
    })
}

/// Result of the exponential-root decay experiment.
#[derive(Debug, Clone)]
pub struct ExpRootDecay {
    pub beta: f64,
    pub errors: Vec<f64>,
    /// Log-log slope of e_n over the top half of the degree range.
    pub fitted_exponent: f64,
    pub fit: LineFit,
    /// min and max of e_n · n^{β/2π} over n in [64, n_max] (or the top half
    /// for short runs).
    pub product_min: f64,
    pub product_max: f64,
}

/// Build dρ = exp(-β/|θ|) dm, compute e_n up to n_max, fit the decay
/// exponent, and track the lower-bound product e_n·n^{β/2π}.
///
/// The errors come from the quadrature-side recursion: the moment route
/// loses the deep decay to Toeplitz ill-conditioning.
pub fn exp_root_decay_exponent(beta: f64, n_max: usize) -> Result<ExpRootDecay> {
    if n_max < 16 {
        return Err(Error::InvalidParameter("need n_max >= 16".into()));
    }
    let measure = if beta == 0.0 {
        SpectralMeasure::lebesgue()
    } else {
        SpectralMeasure::exp_root(beta)
    };
    let rule = crate::measures::quadrature_resolving(&measure, 2 * n_max + 8)?;
    let seq = crate::szego::prediction_errors_from_quadrature(&rule, n_max);
    let errors = seq.errors.clone();

    let lo = n_max / 2;
    let xs: Vec<f64> = (lo..=n_max).map(|n| (n as f64).ln()).collect();
    let ys: Vec<f64> = (lo..=n_max).map(|n| errors[n].max(1e-300).ln()).collect();
    let fit = line_fit(&xs, &ys);

    let prod_lo = 64.min(n_max / 2).max(1);
    let exponent = beta / TAU;
    let mut product_min = f64::INFINITY;
    let mut product_max: f64 = 0.0;
    for n in prod_lo..=n_max {
        let p = errors[n] * (n as f64).powf(exponent);
        product_min = product_min.min(p);
        product_max = product_max.max(p);
    }
    Ok(ExpRootDecay {
        beta,
        errors,
        fitted_exponent: fit.slope,
        fit,
        product_min,
        product_max,
    })
}
