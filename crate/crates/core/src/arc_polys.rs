//! Polynomials that are small on an arc, certified sup norms, smooth cutoffs
//! and the gap predictor built from them.
//!
//! The predictor construction: approximate 1/z on the conjugate of the
//! enlarged arc (a least-squares realization of the Runge step), form
//! P = 1 - zS with P(0) = 1, raise to a power, and reverse the coefficients
//! so the functional ξ(n) + Σ q_k ξ(k) pairs against sequences whose
//! spectrum sits in the original arc. The certification is a weighted
//! Parseval bound of the cutoff-localized functional.

use crate::arcs::{ccw_distance, principal, CircleArc};
use crate::error::{Error, Result};
use crate::{C64, TAU};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

/// Dense polynomial with complex coefficients, index = power of z.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C64::new(0.0, 0.0));
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![C64::new(0.0, 0.0)] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![C64::new(1.0, 0.0)] }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![C64::new(0.0, 0.0); n + 1];
        coeffs[n] = C64::new(1.0, 0.0);
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn eval_angle(&self, theta: f64) -> C64 {
        self.eval(C64::from_polar(1.0, theta))
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * (i + 1) as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![C64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn powi(&self, exp: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Coefficient reversal: z^deg · self(1/z).
    pub fn reversed(&self) -> Poly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// Conjugate-reversal: z^deg · conj(self)(1/z); same modulus on |z| = 1.
    pub fn conj_reversed(&self) -> Poly {
        let mut coeffs: Vec<C64> = self.coeffs.iter().map(|c| c.conj()).collect();
        coeffs.reverse();
        Poly::new(coeffs)
    }
}

// ---------------------------------------------------------------------------
// complex least squares (Householder QR)
// ---------------------------------------------------------------------------

/// Minimize ‖A x - b‖₂ for a tall complex matrix, in place.
fn least_squares(a: &mut [Vec<C64>], b: &mut [C64]) -> Vec<C64> {
    let rows = a.len();
    let cols = a[0].len();
    assert!(rows >= cols);
    for k in 0..cols {
        // Householder vector for column k below the diagonal
        let norm_x: f64 = (k..rows).map(|r| a[r][k].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let akk = a[k][k];
        let phase = if akk.norm() > 0.0 { akk / akk.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm_x;
        let mut v: Vec<C64> = (k..rows).map(|r| a[r][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in k..cols {
            let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * a[k + i][c]).sum();
            let f = dot * (2.0 / vnorm2);
            for (i, vi) in v.iter().enumerate() {
                a[k + i][c] -= f * vi;
            }
        }
        let dot: C64 = v.iter().enumerate().map(|(i, vi)| vi.conj() * b[k + i]).sum();
        let f = dot * (2.0 / vnorm2);
        for (i, vi) in v.iter().enumerate() {
            b[k + i] -= f * vi;
        }
    }
    // back substitution on the R factor
    let mut x = vec![C64::new(0.0, 0.0); cols];
    for r in (0..cols).rev() {
        let mut acc = b[r];
        for c in (r + 1)..cols {
            acc -= a[r][c] * x[c];
        }
        x[r] = if a[r][r].norm() > 0.0 { acc / a[r][r] } else { C64::new(0.0, 0.0) };
    }
    x
}

// ---------------------------------------------------------------------------
// sup norms
// ---------------------------------------------------------------------------

/// Sup of |P| over the full circle, inflated by the Bernstein grid-gap bound
/// so it upper-bounds the true maximum.
fn sup_norm_circle_upper(p: &Poly) -> f64 {
    let deg = p.degree().max(1);
    let n = (64 * (deg + 1)).max(256);
    let mut best: f64 = 0.0;
    for j in 0..n {
        let theta = TAU * j as f64 / n as f64;
        best = best.max(p.eval_angle(theta).norm());
    }
    // |P'| <= deg · M on the circle, so the grid can miss at most deg·h/2
    let miss = std::f64::consts::PI * deg as f64 / n as f64;
    best / (1.0 - miss)
}

/// Max of |P| over an arc, by dense grid plus zoom refinement around the
/// local maxima; certified up to grid tolerance ~1e-6 relative via the
/// derivative bound.
pub fn sup_norm_on_arc(p: &Poly, arc: &CircleArc) -> f64 {
    let deg = p.degree().max(1);
    let len = arc.length();
    let start = arc.start();
    let n = (64 * (deg + 1)).clamp(512, 1 << 20);
    let h = len / (n - 1) as f64;
    let vals: Vec<f64> = (0..n)
        .map(|j| p.eval_angle(principal(start + j as f64 * h)).norm())
        .collect();
    let mut best = 0.0f64;
    let mut candidates: Vec<f64> = Vec::new();
    for (j, &v) in vals.iter().enumerate() {
        best = best.max(v);
        let left_le = j == 0 || vals[j - 1] <= v;
        let right_le = j + 1 == n || vals[j + 1] <= v;
        if left_le && right_le {
            candidates.push(j as f64 * h);
        }
    }
    // derivative bound |dP/dθ| <= deg · sup_T |P|
    let lip = deg as f64 * sup_norm_circle_upper(p);
    for &c in &candidates {
        let mut lo = (c - h).max(0.0);
        let mut hi = (c + h).min(len);
        for _ in 0..40 {
            if lip * (hi - lo) <= 1e-9 * best.max(1e-300) {
                break;
            }
            let step = (hi - lo) / 16.0;
            let mut arg = lo;
            let mut local = -1.0f64;
            for i in 0..=16 {
                let d = lo + step * i as f64;
                let v = p.eval_angle(principal(start + d)).norm();
                if v > local {
                    local = v;
                    arg = d;
                }
            }
            best = best.max(local);
            lo = (arg - step).max(0.0);
            hi = (arg + step).min(len);
        }
    }
    best
}

/// Max of |P| over a finite union of arcs and points.
pub fn sup_norm_on_set(p: &Poly, set: &crate::arcs::ArcSet) -> f64 {
    let mut best: f64 = 0.0;
    for a in &set.arcs {
        best = best.max(sup_norm_on_arc(p, a));
    }
    for &pt in &set.points {
        best = best.max(p.eval_angle(pt).norm());
    }
    best
}

/// ‖P'‖_{C(J)} / (deg² ‖P‖_{C(J)}), the normalized arc Bernstein ratio.
pub fn videnskii_ratio(p: &Poly, arc: &CircleArc) -> f64 {
    assert!(!p.is_zero(), "ratio undefined for the zero polynomial");
    let deg = p.degree();
    if deg == 0 {
        return 0.0;
    }
    let num = sup_norm_on_arc(&p.derivative(), arc);
    let den = sup_norm_on_arc(p, arc);
    num / ((deg * deg) as f64 * den)
}

// ---------------------------------------------------------------------------
// small-on-arc polynomials
// ---------------------------------------------------------------------------

/// A polynomial P with P(0) = 1 exactly and sup |P| < delta on the arc.
///
/// Realized as P = 1 - zS with S a least-squares fit of 1/z on a Chebyshev
/// grid of the arc; the degree doubles until the verified sup norm beats
/// delta. Fails for the full circle (maximum principle) or when the degree
/// budget runs out.
pub fn small_on_arc(arc: &CircleArc, delta: f64, max_degree: usize) -> Result<Poly> {
    if arc.is_full() {
        return Err(Error::FullCircleArc);
    }
    if delta <= 0.0 {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    if delta > 1.0 {
        return Ok(Poly::one());
    }
    let mut best_sup = f64::INFINITY;
    let mut best: Option<Poly> = None;
    let mut degree = 1usize;
    while degree <= max_degree {
        let s_deg = degree - 1;
        let m = 4 * degree + 16;
        let grid = arc.chebyshev_grid(m);
        let mut a: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut b: Vec<C64> = Vec::with_capacity(m);
        for &theta in &grid {
            let z = C64::from_polar(1.0, theta);
            let mut row = Vec::with_capacity(s_deg + 1);
            let mut zp = C64::new(1.0, 0.0);
            for _ in 0..=s_deg {
                row.push(zp);
                zp *= z;
            }
            a.push(row);
            b.push(z.conj()); // 1/z on the unit circle
        }
        let s = least_squares(&mut a, &mut b);
        // P = 1 - z S; constant coefficient is exactly 1
        let mut coeffs = vec![C64::new(1.0, 0.0)];
        coeffs.extend(s.iter().map(|c| -c));
        let p = Poly::new(coeffs);
        let sup = sup_norm_on_arc(&p, arc);
        if sup < best_sup {
            best_sup = sup;
            best = Some(p);
        }
        if best_sup < delta {
            return Ok(best.unwrap());
        }
        degree *= 2;
    }
    Err(Error::MaxDegreeExhausted { budget: max_degree, best: best_sup, target: delta })
}

// ---------------------------------------------------------------------------
// smooth cutoffs
// ---------------------------------------------------------------------------

/// C^∞ cutoff: 1 on the inner arc, 0 off the outer arc, glued with the
/// standard exp(-1/x) transition raised to `order`.
#[derive(Debug, Clone)]
pub struct SmoothBump {
    pub inner: CircleArc,
    pub outer: CircleArc,
    order: u32,
    left_margin: f64,
    right_margin: f64,
}

fn transition(u: f64, order: u32) -> f64 {
    // smooth step: 0 at u<=0, 1 at u>=1
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    let t = |x: f64| (-1.0 / x.powi(order as i32)).exp();
    let a = t(u);
    let b = t(1.0 - u);
    a / (a + b)
}

impl SmoothBump {
    pub fn new(inner: CircleArc, outer: CircleArc) -> Result<Self> {
        Self::with_order(inner, outer, 1)
    }

    pub fn with_order(inner: CircleArc, outer: CircleArc, order: u32) -> Result<Self> {
        if outer.is_full() || inner.is_full() {
            return Err(Error::ArcsNotNested);
        }
        let left_margin = ccw_distance(outer.start(), inner.start());
        let right_margin = ccw_distance(inner.end(), outer.end());
        let nested = left_margin > 1e-9
            && right_margin > 1e-9
            && left_margin + inner.length() + right_margin <= outer.length() + 1e-12;
        if !nested {
            return Err(Error::ArcsNotNested);
        }
        Ok(SmoothBump { inner, outer, order: order.max(1), left_margin, right_margin })
    }

    pub fn eval(&self, theta: f64) -> f64 {
        if self.inner.contains(theta) {
            return 1.0;
        }
        if !self.outer.contains(theta) {
            return 0.0;
        }
        // in one of the two transition zones
        let from_outer_start = ccw_distance(self.outer.start(), theta);
        if from_outer_start <= self.left_margin {
            transition(from_outer_start / self.left_margin, self.order)
        } else {
            let from_inner_end = ccw_distance(self.inner.end(), theta);
            transition(1.0 - from_inner_end / self.right_margin, self.order)
        }
    }

    /// Fourier coefficients c_m = ∫ φ e^{-imθ} dm(θ) for |m| <= size/2,
    /// by FFT of `size` uniform samples (`size` a power of two).
    pub fn fourier(&self, size: usize) -> CircleFourier {
        assert!(size.is_power_of_two());
        let mut buf: Vec<C64> = (0..size)
            .map(|j| C64::new(self.eval(TAU * j as f64 / size as f64), 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(size).process(&mut buf);
        let scale = 1.0 / size as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
        CircleFourier { data: buf }
    }
}

/// FFT-sampled Fourier coefficients of a periodic function; index by signed
/// frequency.
#[derive(Debug, Clone)]
pub struct CircleFourier {
    data: Vec<C64>,
}

impl CircleFourier {
    pub fn size(&self) -> usize {
        self.data.len()
    }

    pub fn max_freq(&self) -> i64 {
        (self.data.len() / 2) as i64
    }

    /// Coefficient at signed frequency m, |m| <= size/2.
    pub fn at(&self, m: i64) -> C64 {
        let n = self.data.len() as i64;
        debug_assert!(m.abs() <= n / 2);
        self.data[m.rem_euclid(n) as usize]
    }

    /// Σ_{|m| > k} |c_m| over the resolved band (up to size/2).
    pub fn abs_tail_beyond(&self, k: i64) -> f64 {
        let half = self.max_freq();
        let mut acc = 0.0;
        let mut m = k + 1;
        while m <= half {
            acc += self.at(m).norm();
            if m != 0 {
                acc += self.at(-m).norm();
            }
            m += 1;
        }
        acc
    }

    pub fn abs_sum(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).sum()
    }
}

// ---------------------------------------------------------------------------
// certified prediction bound and the gap predictor
// ---------------------------------------------------------------------------

/// Weight (1+|m|)^p used by the weighted sequence norm and the certified
/// bound; the two must match for the Cauchy–Schwarz pairing to be valid.
pub fn frequency_weight(m: i64, p: f64) -> f64 {
    (1.0 + m.abs() as f64).powf(p)
}

/// Certified upper bound M · (Σ_m (1+|m|)^{2p} |(Qφ)^(m)|²)^{1/2} for the
/// prediction functional over all sequences with weighted norm <= M and
/// spectrum inside the cutoff's inner arc.
///
/// The grid doubles until the top-octave contribution falls below 1e-3 of
/// the total; the returned value includes that band twice as tail allowance.
pub fn certified_functional_bound(
    q: &Poly,
    cutoff: &SmoothBump,
    p: f64,
    norm_bound: f64,
) -> Result<f64> {
    certified_functional_bound_with(|theta| q.eval_angle(theta), cutoff, p, norm_bound)
}

/// Same bound with the functional supplied as a pointwise evaluator.
///
/// High powers of a base polynomial must be evaluated in factored form
/// (value^ℓ): their expanded coefficients grow geometrically and cancel
/// catastrophically exactly where the product is small.
pub fn certified_functional_bound_with(
    q_eval: impl Fn(f64) -> C64,
    cutoff: &SmoothBump,
    p: f64,
    norm_bound: f64,
) -> Result<f64> {
    assert!(p >= 0.0 && norm_bound > 0.0);
    let mut size = 4096usize;
    let mut planner = FftPlanner::new();
    while size <= (1 << 20) {
        let mut buf: Vec<C64> = (0..size)
            .map(|j| {
                let theta = TAU * j as f64 / size as f64;
                let phi = cutoff.eval(theta);
                if phi == 0.0 {
                    C64::new(0.0, 0.0)
                } else {
                    q_eval(theta) * phi
                }
            })
            .collect();
        planner.plan_fft_forward(size).process(&mut buf);
        let scale = 1.0 / size as f64;
        let half = size as i64 / 2;
        let mut total = 0.0;
        let mut top_octave = 0.0;
        for (idx, v) in buf.iter().enumerate() {
            let m = if (idx as i64) <= half { idx as i64 } else { idx as i64 - size as i64 };
            let w = frequency_weight(m, p);
            let term = (v * scale).norm_sqr() * w * w;
            total += term;
            if m.abs() >= half / 2 {
                top_octave += term;
            }
        }
        if total == 0.0 {
            return Ok(0.0);
        }
        if top_octave <= 1e-3 * total {
            return Ok(norm_bound * (total + 2.0 * top_octave).sqrt());
        }
        size *= 2;
    }
    Err(Error::UnresolvedTail { grid: 1 << 20, tail: 1.0 })
}

/// Predictor certified on an arc: the functional ξ(n) + Σ q_k ξ(k) stays
/// below `certified_delta` for every sequence with spectrum in `arc` and
/// weighted norm at most `norm_bound`.
#[derive(Debug, Clone)]
pub struct GapPredictor {
    pub degree: usize,
    /// q_0 .. q_{n-1}; the leading ξ(n) weight is exactly 1.
    pub coefficients: Vec<C64>,
    pub certified_delta: f64,
    pub arc: CircleArc,
    pub weight_power: f64,
    pub norm_bound: f64,
}

/// Search configuration for [`predictor_from_gap`].
#[derive(Debug, Clone, Copy)]
pub struct PredictorBudget {
    pub max_base_degree: usize,
    pub max_power: usize,
}

impl Default for PredictorBudget {
    fn default() -> Self {
        PredictorBudget { max_base_degree: 64, max_power: 64 }
    }
}

/// Build a certified gap predictor for sequences with spectrum in `arc`.
///
/// The arc is enlarged by half its gap to the complementary arc, the base
/// polynomial is made small on the conjugate of the enlarged arc, and the
/// power is raised until the certified bound drops below `delta`.
pub fn predictor_from_gap(
    arc: &CircleArc,
    p: f64,
    norm_bound: f64,
    delta: f64,
    budget: PredictorBudget,
) -> Result<GapPredictor> {
    if arc.is_full() {
        return Err(Error::FullCircleArc);
    }
    if delta <= 0.0 || norm_bound <= 0.0 {
        return Err(Error::InvalidParameter("delta and norm bound must be positive".into()));
    }
    let margin = (TAU - arc.length()) / 4.0;
    let enlarged = arc.inflate(margin);
    let base = small_on_arc(&enlarged.conjugate(), 0.5, budget.max_base_degree)?;
    let cutoff = SmoothBump::new(*arc, enlarged)?;

    let mut best_bound = f64::INFINITY;
    let mut best: Option<GapPredictor> = None;
    let mut power_poly = Poly::one();
    let base_degree = base.degree();
    for power in 1..=budget.max_power {
        power_poly = power_poly.mul(&base);
        let n = power * base_degree;
        // Q(e^{iθ}) = e^{inθ} · P(e^{-iθ})^power, evaluated in factored form
        let bound = certified_functional_bound_with(
            |theta| {
                let v = base.eval_angle(-theta);
                C64::from_polar(1.0, n as f64 * theta) * v.powu(power as u32)
            },
            &cutoff,
            p,
            norm_bound,
        )?;
        if bound < best_bound {
            best_bound = bound;
            let q = power_poly.reversed();
            let coefficients = q.coeffs()[..n].to_vec();
            best = Some(GapPredictor {
                degree: n,
                coefficients,
                certified_delta: bound,
                arc: *arc,
                weight_power: p,
                norm_bound,
            });
        }
        if best_bound < delta {
            return Ok(best.unwrap());
        }
    }
    Err(Error::CannotCertify { best: best_bound, target: delta })
}

// serialization mirror: {n, q[], delta, arc, p, M}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapPredictorFile {
    pub n: usize,
    pub q: Vec<[f64; 2]>,
    pub delta: f64,
    pub arc: ArcRange,
    pub p: f64,
    #[serde(rename = "M")]
    pub m: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcRange {
    pub start: f64,
    pub end: f64,
}

impl GapPredictor {
    pub fn to_file(&self) -> GapPredictorFile {
        GapPredictorFile {
            n: self.degree,
            q: self.coefficients.iter().map(|c| [c.re, c.im]).collect(),
            delta: self.certified_delta,
            arc: ArcRange { start: self.arc.start(), end: self.arc.end() },
            p: self.weight_power,
            m: self.norm_bound,
        }
    }

    pub fn from_file(f: &GapPredictorFile) -> Result<Self> {
        Ok(GapPredictor {
            degree: f.n,
            coefficients: f.q.iter().map(|c| C64::new(c[0], c[1])).collect(),
            certified_delta: f.delta,
            arc: CircleArc::from_angles(f.arc.start, f.arc.end)?,
            weight_power: f.p,
            norm_bound: f.m,
        })
    }
}
