//! Positive measures on the unit circle: atoms plus piecewise smooth
//! densities, their moments, supports, discretizations and log-integrals.
//!
//! Moment convention, used by every other module: the m-th moment of ρ is
//! r(m) = ∫ conj(t)^m dρ(t), so r(0) is the total mass and r(-m) = conj(r(m)).
//! Densities are taken with respect to the normalized Lebesgue measure
//! dm = dθ/2π, so the "lebesgue" density ≡ 1 has total mass 1.

use crate::arcs::{principal, ArcSet, CircleArc};
use crate::error::{Error, Result};
use crate::quad::{self, Panels};
use crate::{C64, TAU};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: f64,
    pub mass: f64,
}

/// Density of a smooth piece, as a function of the principal angle.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    /// Constant 1 (total mass = arc length / 2π).
    Lebesgue,
    /// exp(-beta / |θ|); an essential zero at θ = 0.
    ExpRoot { beta: f64 },
    /// Samples on the Chebyshev–Lobatto grid of the piece arc, evaluated by
    /// barycentric interpolation (clamped at 0).
    Samples { values: Vec<f64> },
}

impl Density {
    pub fn eval(&self, arc: &CircleArc, theta: f64) -> f64 {
        match self {
            Density::Lebesgue => 1.0,
            Density::ExpRoot { beta } => {
                let t = principal(theta).abs();
                if t <= 0.0 {
                    0.0
                } else {
                    (-beta / t).exp()
                }
            }
            Density::Samples { values } => barycentric_lobatto(arc, values, theta).max(0.0),
        }
    }

    /// ln(density); computed directly so essential zeros do not underflow.
    pub fn log_eval(&self, arc: &CircleArc, theta: f64) -> f64 {
        match self {
            Density::Lebesgue => 0.0,
            Density::ExpRoot { beta } => {
                let t = principal(theta).abs();
                if t <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -beta / t
                }
            }
            Density::Samples { .. } => self.eval(arc, theta).max(1e-300).ln(),
        }
    }

    /// Angles inside the arc toward which quadrature panels must be graded.
    fn grading_points(&self, arc: &CircleArc) -> Vec<f64> {
        match self {
            Density::ExpRoot { .. } => {
                if arc.contains(0.0) {
                    vec![0.0]
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        }
    }
}

/// Barycentric interpolation on the Chebyshev–Lobatto grid of an arc.
fn barycentric_lobatto(arc: &CircleArc, values: &[f64], theta: f64) -> f64 {
    let n = values.len();
    assert!(n >= 2, "sampled density needs at least 2 samples");
    // map to x in [-1, 1]; grid point j sits at x_j = -cos(jπ/(n-1))
    let d = crate::arcs::ccw_distance(arc.start(), theta).min(arc.length());
    let x = 2.0 * d / arc.length() - 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let xj = -(PI * j as f64 / (n - 1) as f64).cos();
        let diff = x - xj;
        if diff.abs() < 1e-14 {
            return v;
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == n - 1 {
            w *= 0.5;
        }
        num += w / diff * v;
        den += w / diff;
    }
    num / den
}

/// A smooth piece of a measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub arc: CircleArc,
    pub density: Density,
}

/// Atoms plus piecewise smooth density on the circle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SpectralMeasure {
    pub atoms: Vec<Atom>,
    pub pieces: Vec<Piece>,
}

impl SpectralMeasure {
    /// Normalized Lebesgue measure on the whole circle.
    pub fn lebesgue() -> Self {
        SpectralMeasure {
            atoms: Vec::new(),
            pieces: vec![Piece { arc: CircleArc::full(), density: Density::Lebesgue }],
        }
    }

    /// dρ = exp(-beta/|θ|) dm on the whole circle.
    pub fn exp_root(beta: f64) -> Self {
        SpectralMeasure {
            atoms: Vec::new(),
            pieces: vec![Piece { arc: CircleArc::full(), density: Density::ExpRoot { beta } }],
        }
    }

    /// Unit-density piece on the given arc.
    pub fn uniform_on_arc(arc: CircleArc) -> Self {
        SpectralMeasure {
            atoms: Vec::new(),
            pieces: vec![Piece { arc, density: Density::Lebesgue }],
        }
    }

    pub fn from_atoms(atoms: Vec<(f64, f64)>) -> Self {
        SpectralMeasure {
            atoms: atoms.into_iter().map(|(angle, mass)| Atom { angle, mass }).collect(),
            pieces: Vec::new(),
        }
    }

    pub fn single_atom(angle: f64, mass: f64) -> Self {
        Self::from_atoms(vec![(angle, mass)])
    }

    pub fn validate(&self) -> Result<()> {
        for a in &self.atoms {
            if !(a.mass.is_finite() && a.mass >= 0.0) {
                return Err(Error::InvalidMeasure(format!("atom mass {} invalid", a.mass)));
            }
        }
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                if principal(self.atoms[i].angle - self.atoms[j].angle).abs() < 1e-12 {
                    return Err(Error::InvalidMeasure("atoms not pairwise distinct".into()));
                }
            }
        }
        for p in &self.pieces {
            if let Density::Samples { values } = &p.density {
                if values.len() < 2 {
                    return Err(Error::InvalidMeasure("sampled density needs >= 2 samples".into()));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidMeasure("density samples must be nonnegative".into()));
                }
            }
            if let Density::ExpRoot { beta } = p.density {
                if beta.is_nan() || beta <= 0.0 {
                    return Err(Error::InvalidMeasure("exp_root needs beta > 0".into()));
                }
            }
        }
        // pieces pairwise non-overlapping (interior overlap check on midpoints
        // of pairwise intersections is enough for validation purposes)
        for i in 0..self.pieces.len() {
            for j in (i + 1)..self.pieces.len() {
                let (a, b) = (&self.pieces[i].arc, &self.pieces[j].arc);
                let probe = [b.start() + 1e-9, b.center(), b.end() - 1e-9];
                if probe.iter().any(|&t| a.contains(t) && b.contains(t))
                    && overlap_length(a, b) > 1e-9
                {
                    return Err(Error::InvalidMeasure(format!("pieces {i} and {j} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Rotate the whole measure by `alpha`: moments pick up a factor
    /// exp(-i m alpha).
    pub fn rotate(&self, alpha: f64) -> Self {
        SpectralMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { angle: principal(a.angle + alpha), mass: a.mass })
                .collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    arc: p.arc.rotate(alpha),
                    density: rotate_density(&p.density, &p.arc, alpha),
                })
                .collect(),
        }
    }

    /// Multiply the measure by `c >= 0`.
    pub fn scale(&self, c: f64) -> Self {
        assert!(c >= 0.0);
        SpectralMeasure {
            atoms: self.atoms.iter().map(|a| Atom { angle: a.angle, mass: a.mass * c }).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece { arc: p.arc, density: scale_density(&p.density, &p.arc, c) })
                .collect(),
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>()
            + self
                .pieces
                .iter()
                .map(|p| integrate_piece(p, 4, |_| 1.0))
                .sum::<f64>()
    }
}

fn overlap_length(a: &CircleArc, b: &CircleArc) -> f64 {
    // crude but sufficient: sample-based overlap estimate
    let n = 4096;
    let grid = a.uniform_grid(n);
    let inside = grid.iter().filter(|&&t| b.contains(t)).count();
    a.length() * inside as f64 / n as f64
}

fn rotate_density(d: &Density, arc: &CircleArc, alpha: f64) -> Density {
    match d {
        // closed-form densities are functions of the absolute angle; rotating
        // them faithfully requires re-sampling onto the rotated arc
        Density::Lebesgue => Density::Lebesgue,
        _ => {
            let rotated = arc.rotate(alpha);
            let n = match d {
                Density::Samples { values } => values.len().max(129),
                _ => 513,
            };
            let values = rotated
                .chebyshev_grid(n)
                .iter()
                .map(|&t| d.eval(arc, principal(t - alpha)))
                .collect();
            Density::Samples { values }
        }
    }
}

fn scale_density(d: &Density, arc: &CircleArc, c: f64) -> Density {
    match d {
        Density::Samples { values } => {
            Density::Samples { values: values.iter().map(|v| v * c).collect() }
        }
        _ => {
            let n = 513;
            let values = arc.chebyshev_grid(n).iter().map(|&t| c * d.eval(arc, t)).collect();
            Density::Samples { values }
        }
    }
}

/// Hermitian moment sequence r(m), |m| <= max_lag; stores m >= 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentSequence {
    values: Vec<C64>,
}

impl MomentSequence {
    pub fn from_nonnegative_lags(values: Vec<C64>) -> Self {
        assert!(!values.is_empty());
        MomentSequence { values }
    }

    pub fn max_lag(&self) -> usize {
        self.values.len() - 1
    }

    /// r(m) for any |m| <= max_lag, by Hermitian symmetry.
    pub fn at(&self, m: i64) -> C64 {
        let idx = m.unsigned_abs() as usize;
        assert!(idx <= self.max_lag(), "lag {m} beyond max_lag {}", self.max_lag());
        if m >= 0 {
            self.values[idx]
        } else {
            self.values[idx].conj()
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.values[0].re
    }

    /// Leading-principal-minor positive semidefiniteness check of the
    /// Toeplitz kernel G_{jk} = r(j-k), 0 <= j,k <= max_lag.
    ///
    /// LDLᴴ pivots are the minor ratios; all minors >= -tol·r(0)ⁿ requires
    /// every pivot >= -tol·r(0) until the first numerically zero pivot.
    pub fn is_toeplitz_psd(&self, rel_tol: f64) -> bool {
        let n = self.values.len();
        let scale = self.values[0].re.max(1e-300);
        let mut g = vec![vec![C64::new(0.0, 0.0); n]; n];
        for (j, row) in g.iter_mut().enumerate() {
            for (k, e) in row.iter_mut().enumerate() {
                *e = self.at(j as i64 - k as i64);
            }
        }
        // in-place LDLᴴ without pivoting; PSD input keeps it stable
        let mut d = vec![0.0; n];
        let mut l = vec![vec![C64::new(0.0, 0.0); n]; n];
        for j in 0..n {
            let mut dj = g[j][j].re;
            for k in 0..j {
                dj -= l[j][k].norm_sqr() * d[k];
            }
            d[j] = dj;
            if dj < -rel_tol * scale {
                return false;
            }
            if dj.abs() <= rel_tol * scale {
                // semidefinite boundary: the remaining block must vanish too;
                // accept and stop factorizing
                return true;
            }
            l[j][j] = C64::new(1.0, 0.0);
            for i in (j + 1)..n {
                let mut v = g[i][j];
                for k in 0..j {
                    v -= l[i][k] * l[j][k].conj() * d[k];
                }
                l[i][j] = v / dj;
            }
        }
        true
    }
}

/// Discretization of a measure: atoms verbatim plus panel Gauss–Legendre
/// nodes for each smooth piece. Node angles are principal; weights include
/// the 1/2π density normalization.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Moments of the discrete measure.
    pub fn moments(&self, max_lag: usize) -> MomentSequence {
        let values = (0..=max_lag)
            .map(|m| {
                let mut acc = C64::new(0.0, 0.0);
                for (&t, &w) in self.nodes.iter().zip(&self.weights) {
                    acc += w * C64::from_polar(1.0, -(m as f64) * t);
                }
                acc
            })
            .collect();
        MomentSequence::from_nonnegative_lags(values)
    }
}

/// Panels for one piece, graded toward density singularities and fine enough
/// to resolve exp(-i m θ) up to |m| = oscillation.
fn piece_panels(piece: &Piece, oscillation: usize, refine: usize) -> Panels {
    let arc = &piece.arc;
    let len = arc.length();
    // work in the offset coordinate d ∈ [0, len] from arc start
    let grading: Vec<f64> = piece
        .density
        .grading_points(arc)
        .into_iter()
        .map(|t| crate::arcs::ccw_distance(arc.start(), t).min(len))
        .collect();
    let floor = 1e-13 * len;
    let mut panels = Panels { cuts: Vec::new() };
    let mut marks: Vec<f64> = vec![0.0, len];
    marks.extend(grading.iter().copied());
    marks.sort_by(f64::total_cmp);
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    for w in marks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-15 {
            continue;
        }
        let grade_lo = grading.iter().any(|&g| (g - lo).abs() < 1e-14);
        let grade_hi = grading.iter().any(|&g| (g - hi).abs() < 1e-14);
        let seg = match (grade_lo, grade_hi) {
            (true, true) => {
                let mid = 0.5 * (lo + hi);
                Panels::graded_left(lo, mid, floor).concat(Panels::graded_right(mid, hi, floor))
            }
            (true, false) => Panels::graded_left(lo, hi, floor),
            (false, true) => Panels::graded_right(lo, hi, floor),
            (false, false) => Panels::uniform(lo, hi, 1),
        };
        panels = panels.concat(seg);
    }
    // oscillation cap: panel width · frequency bounded so the per-panel rule
    // stays spectrally accurate
    let max_w = (16.0 / (oscillation.max(8) as f64)).min(len) / refine as f64;
    panels.capped(max_w)
}

fn integrate_piece(piece: &Piece, refine: usize, f: impl Fn(f64) -> f64) -> f64 {
    let panels = piece_panels(piece, 8, refine);
    let start = piece.arc.start();
    quad::integrate(&panels, 24, |d| {
        let theta = principal(start + d);
        piece.density.eval(&piece.arc, theta) * f(theta) / TAU
    })
}

/// Moments r(m) = ∫ conj(t)^m dρ(t), 0 <= m <= max_lag.
///
/// Atom contributions are exact; piece integrals are panel Gauss–Legendre
/// with one refinement round, failing loudly if the two resolutions disagree.
pub fn moments(measure: &SpectralMeasure, max_lag: usize) -> Result<MomentSequence> {
    measure.validate()?;
    let mut atom_part = vec![C64::new(0.0, 0.0); max_lag + 1];
    for a in &measure.atoms {
        for (m, v) in atom_part.iter_mut().enumerate() {
            *v += a.mass * C64::from_polar(1.0, -(m as f64) * a.angle);
        }
    }
    let coarse = piece_moment_sums(measure, max_lag, 1);
    let fine = piece_moment_sums(measure, max_lag, 2);
    let scale = 1.0 + atom_part[0].re + fine[0].re.abs();
    let achieved = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (c - f).norm())
        .fold(0.0f64, f64::max);
    if achieved > 1e-11 * scale {
        return Err(Error::QuadratureNonConvergence { achieved, wanted: 1e-11 * scale });
    }
    let values = atom_part.iter().zip(&fine).map(|(a, p)| a + p).collect();
    Ok(MomentSequence::from_nonnegative_lags(values))
}

fn piece_moment_sums(measure: &SpectralMeasure, max_lag: usize, refine: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); max_lag + 1];
    for piece in &measure.pieces {
        let panels = piece_panels(piece, max_lag, refine);
        let (ds, ws) = quad::nodes_weights(&panels, 24);
        let start = piece.arc.start();
        for (&d, &w) in ds.iter().zip(&ws) {
            let theta = principal(start + d);
            let den = piece.density.eval(&piece.arc, theta) * w / TAU;
            if den == 0.0 {
                continue;
            }
            for (m, v) in out.iter_mut().enumerate() {
                *v += den * C64::from_polar(1.0, -(m as f64) * theta);
            }
        }
    }
    out
}

/// Closed support: atom singletons plus the closure of the positive-density
/// part of each piece. Conservative: only sub-arcs with a run of exactly-zero
/// samples are removed, shrunk by one grid cell on each side.
pub fn support(measure: &SpectralMeasure) -> ArcSet {
    let mut arcs = Vec::new();
    let mut extra_points: Vec<f64> = Vec::new();
    for piece in &measure.pieces {
        let n = match &piece.density {
            Density::Samples { values } => (4 * values.len()).max(64),
            _ => 256,
        };
        let grid = piece.arc.uniform_grid(n);
        let vals: Vec<f64> = grid.iter().map(|&t| piece.density.eval(&piece.arc, t)).collect();
        // maximal runs of exact zeros, shrunk by one cell each side
        let mut gaps: Vec<(usize, usize)> = Vec::new();
        let mut run_start: Option<usize> = None;
        for (i, &v) in vals.iter().enumerate() {
            if v == 0.0 {
                run_start.get_or_insert(i);
            } else if let Some(s) = run_start.take() {
                if i - s >= 3 {
                    gaps.push((s + 1, i - 2));
                }
            }
        }
        if let Some(s) = run_start {
            if n - s >= 3 {
                gaps.push((s + 1, n - 2));
            }
        }
        if gaps.is_empty() {
            arcs.push(piece.arc);
            continue;
        }
        // keep the complement of the gaps inside this piece; one-sample
        // keeps degenerate to isolated points
        let mut keep_segments: Vec<(usize, usize)> = Vec::new();
        let mut kept_from = 0usize;
        for &(gs, ge) in &gaps {
            if gs > kept_from {
                keep_segments.push((kept_from, gs - 1));
            }
            kept_from = ge + 1;
        }
        if kept_from < n {
            keep_segments.push((kept_from, n - 1));
        }
        for (from, to) in keep_segments {
            if to > from {
                arcs.push(CircleArc::from_angles(grid[from], grid[to]).expect("positive keep"));
            } else {
                extra_points.push(grid[from]);
            }
        }
    }
    let mut points: Vec<f64> =
        measure.atoms.iter().filter(|a| a.mass > 0.0).map(|a| principal(a.angle)).collect();
    points.extend(extra_points);
    ArcSet::from_parts(arcs, points)
}

/// Discretization fine enough to integrate trigonometric polynomials of the
/// given frequency exactly (up to roundoff) against the measure.
pub fn quadrature_resolving(measure: &SpectralMeasure, frequency: usize) -> Result<Quadrature> {
    measure.validate()?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for a in &measure.atoms {
        nodes.push(principal(a.angle));
        weights.push(a.mass);
    }
    for piece in &measure.pieces {
        let panels = piece_panels(piece, frequency, 1);
        let (ds, ws) = quad::nodes_weights(&panels, 24);
        let start = piece.arc.start();
        for (&d, &w) in ds.iter().zip(&ws) {
            let theta = principal(start + d);
            nodes.push(theta);
            weights.push(piece.density.eval(&piece.arc, theta) * w / TAU);
        }
    }
    Ok(Quadrature { nodes, weights })
}

/// Discretize: atoms verbatim, each piece by graded panel Gauss–Legendre
/// with roughly `points_per_piece` nodes.
pub fn quadrature(measure: &SpectralMeasure, points_per_piece: usize) -> Result<Quadrature> {
    measure.validate()?;
    if points_per_piece < 2 {
        return Err(Error::InvalidParameter("points_per_piece must be >= 2".into()));
    }
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for a in &measure.atoms {
        nodes.push(principal(a.angle));
        weights.push(a.mass);
    }
    for piece in &measure.pieces {
        if piece.arc.length() <= 1e-12 {
            return Err(Error::DegeneratePiece);
        }
        let panels = piece_panels(piece, 8, 1);
        // per-panel order never drops below 16: the mass must come out at
        // 1e-12 relative even when grading spreads the point budget thin
        let order = (points_per_piece.div_ceil(panels.cuts.len())).clamp(16, 128);
        let (ds, ws) = quad::nodes_weights(&panels, order);
        let start = piece.arc.start();
        for (&d, &w) in ds.iter().zip(&ws) {
            let theta = principal(start + d);
            nodes.push(theta);
            weights.push(piece.density.eval(&piece.arc, theta) * w / TAU);
        }
    }
    Ok(Quadrature { nodes, weights })
}

/// ∫ log ρ' dm, or -∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogIntegral {
    Finite(f64),
    NegInfinity,
}

impl LogIntegral {
    pub fn is_neg_infinity(&self) -> bool {
        matches!(self, LogIntegral::NegInfinity)
    }

    pub fn value(&self) -> f64 {
        match self {
            LogIntegral::Finite(v) => *v,
            LogIntegral::NegInfinity => f64::NEG_INFINITY,
        }
    }
}

/// Logarithmic integral ∫ log ρ' dm over the circle.
///
/// -∞ as soon as the density part leaves an arc uncovered or vanishes on a
/// run of samples; otherwise the graded quadrature is refined toward the
/// density zeros and divergence is detected by comparing refinement levels.
pub fn log_integral(measure: &SpectralMeasure) -> LogIntegral {
    let covered: ArcSet =
        ArcSet::from_parts(measure.pieces.iter().map(|p| p.arc).collect(), Vec::new());
    if covered.total_length() < TAU - 1e-9 {
        return LogIntegral::NegInfinity;
    }
    let sup = support(measure);
    if !sup.is_full() && sup.largest_gap() > 1e-6 {
        return LogIntegral::NegInfinity;
    }
    let v_mid = log_density_integral(measure, 1e-12);
    let v_fine = log_density_integral(measure, 1e-18);
    if (v_fine - v_mid).abs() > 1e-8 * (1.0 + v_fine.abs()) {
        return LogIntegral::NegInfinity;
    }
    LogIntegral::Finite(v_fine)
}

fn log_density_integral(measure: &SpectralMeasure, floor_frac: f64) -> f64 {
    let mut total = 0.0;
    for piece in &measure.pieces {
        let arc = &piece.arc;
        let len = arc.length();
        let mut grading: Vec<f64> = piece
            .density
            .grading_points(arc)
            .into_iter()
            .map(|t| crate::arcs::ccw_distance(arc.start(), t).min(len))
            .collect();
        // grade toward piece endpoints too: junctions may hide density zeros
        grading.push(0.0);
        grading.push(len);
        grading.sort_by(f64::total_cmp);
        grading.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let floor = floor_frac * len;
        let mut panels = Panels { cuts: Vec::new() };
        for w in grading.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            panels = panels
                .concat(Panels::graded_left(w[0], mid, floor))
                .concat(Panels::graded_right(mid, w[1], floor));
        }
        let start = arc.start();
        total += quad::integrate(&panels.capped(len / 8.0), 24, |d| {
            let theta = principal(start + d);
            piece.density.log_eval(arc, theta).max(-1e300) / TAU
        });
    }
    total
}

// ---------------------------------------------------------------------------
// measure spec file format
// ---------------------------------------------------------------------------

/// On-disk measure description.
///
/// ```json
/// {"atoms":[{"angle":0.0,"mass":1.0}],
///  "pieces":[{"arc":{"start":-3.14,"end":3.14},
///             "density":{"kind":"expr","name":"exp_root","beta":6.28}}]}
/// ```
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceSpec {
    pub arc: ArcAngles,
    pub density: DensitySpec,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcAngles {
    pub start: f64,
    pub end: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensitySpec {
    Expr { name: String, #[serde(default)] beta: Option<f64> },
    Samples { values: Vec<f64> },
}

impl MeasureSpec {
    pub fn parse(json: &str) -> Result<SpectralMeasure> {
        let spec: MeasureSpec = serde_json::from_str(json)
            .map_err(|e| Error::InvalidMeasure(format!("measure spec parse error: {e}")))?;
        spec.build()
    }

    pub fn build(&self) -> Result<SpectralMeasure> {
        let mut pieces = Vec::new();
        for p in &self.pieces {
            let arc = if (crate::arcs::ccw_distance(p.arc.start, p.arc.end)).abs() < 1e-12 {
                CircleArc::full()
            } else {
                CircleArc::from_angles(p.arc.start, p.arc.end)?
            };
            let density = match &p.density {
                DensitySpec::Expr { name, beta } => match name.as_str() {
                    "lebesgue" => Density::Lebesgue,
                    "exp_root" => Density::ExpRoot {
                        beta: beta.ok_or_else(|| {
                            Error::InvalidMeasure("exp_root density needs beta".into())
                        })?,
                    },
                    other => {
                        return Err(Error::InvalidMeasure(format!("unknown density '{other}'")))
                    }
                },
                DensitySpec::Samples { values } => Density::Samples { values: values.clone() },
            };
            pieces.push(Piece { arc, density });
        }
        let m = SpectralMeasure { atoms: self.atoms.clone(), pieces };
        m.validate()?;
        Ok(m)
    }
}
