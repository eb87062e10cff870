//! Closed arcs of the unit circle and finite unions of them.

use crate::error::{Error, Result};
use crate::TAU;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Reduce an angle to the principal branch [-π, π).
///
/// In-range angles pass through unchanged: the reduction arithmetic would
/// otherwise absorb angles below π's ulp into 0.
pub fn principal(theta: f64) -> f64 {
    if (-PI..PI).contains(&theta) {
        return theta;
    }
    let mut t = (theta + PI).rem_euclid(TAU) - PI;
    if t >= PI {
        t = -PI;
    }
    t
}

/// Nonnegative angular distance from `from` going counter-clockwise to `to`,
/// in [0, 2π).
pub fn ccw_distance(from: f64, to: f64) -> f64 {
    (to - from).rem_euclid(TAU)
}

/// An arc of the unit circle, traversed counter-clockwise from `start`.
///
/// The canonical representation stores the normalized start angle and the
/// arc length in (0, 2π]; a length of 2π is the full circle. Two arcs that
/// describe the same point set compare equal (up to 1e-12 in angle).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CircleArc {
    start: f64,
    length: f64,
    #[serde(default = "default_closed")]
    closed: bool,
}

fn default_closed() -> bool {
    true
}

const ANGLE_EQ_TOL: f64 = 1e-12;

impl CircleArc {
    /// Closed arc from `start` counter-clockwise to `end`.
    ///
    /// `end == start` (mod 2π) is rejected; use [`CircleArc::full`] for the
    /// whole circle.
    pub fn from_angles(start: f64, end: f64) -> Result<Self> {
        let length = ccw_distance(start, end);
        if length <= ANGLE_EQ_TOL {
            return Err(Error::InvalidArc(format!(
                "arc from {start} to {end} has zero length; use CircleArc::full for the whole circle"
            )));
        }
        Ok(CircleArc { start: principal(start), length, closed: true })
    }

    /// Closed arc of given `half_width` on both sides of `center`.
    pub fn centered(center: f64, half_width: f64) -> Result<Self> {
        if half_width <= 0.0 || half_width > PI {
            return Err(Error::InvalidArc(format!("half width {half_width} out of (0, π]")));
        }
        if half_width >= PI {
            return Ok(Self::full());
        }
        Self::from_angles(center - half_width, center + half_width)
    }

    /// The whole circle.
    pub fn full() -> Self {
        CircleArc { start: -PI, length: TAU, closed: true }
    }

    pub fn open(mut self) -> Self {
        self.closed = false;
        self
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        principal(self.start + self.length)
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU - ANGLE_EQ_TOL
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn center(&self) -> f64 {
        principal(self.start + 0.5 * self.length)
    }

    /// Membership test; total, handles wrap across -π.
    pub fn contains(&self, theta: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let d = ccw_distance(self.start, theta);
        if self.closed {
            d <= self.length + ANGLE_EQ_TOL || d >= TAU - ANGLE_EQ_TOL
        } else {
            d > ANGLE_EQ_TOL && d < self.length - ANGLE_EQ_TOL
        }
    }

    /// Signed angular distance from the arc: 0 inside, otherwise the distance
    /// to the nearer endpoint.
    pub fn distance(&self, theta: f64) -> f64 {
        if self.contains(theta) {
            return 0.0;
        }
        let to_start = ccw_distance(theta, self.start);
        let from_end = ccw_distance(self.start + self.length, theta);
        to_start.min(from_end)
    }

    /// Grow the arc by `margin` on each side (clipped at the full circle).
    pub fn inflate(&self, margin: f64) -> Self {
        assert!(margin >= 0.0);
        let length = self.length + 2.0 * margin;
        if length >= TAU {
            return Self::full();
        }
        CircleArc { start: principal(self.start - margin), length, closed: self.closed }
    }

    /// Mirror image under conjugation θ ↦ -θ.
    pub fn conjugate(&self) -> Self {
        if self.is_full() {
            return *self;
        }
        CircleArc {
            start: principal(-(self.start + self.length)),
            length: self.length,
            closed: self.closed,
        }
    }

    /// Rotate the arc by `alpha`.
    pub fn rotate(&self, alpha: f64) -> Self {
        CircleArc { start: principal(self.start + alpha), length: self.length, closed: self.closed }
    }

    /// `count` equispaced sample angles covering the closed arc.
    pub fn uniform_grid(&self, count: usize) -> Vec<f64> {
        assert!(count >= 2);
        let h = self.length / (count - 1) as f64;
        (0..count).map(|i| principal(self.start + i as f64 * h)).collect()
    }

    /// Chebyshev–Lobatto sample angles on the arc (clustered at endpoints).
    pub fn chebyshev_grid(&self, count: usize) -> Vec<f64> {
        assert!(count >= 2);
        let mid = self.start + 0.5 * self.length;
        let half = 0.5 * self.length;
        (0..count)
            .map(|i| {
                let x = (PI * i as f64 / (count - 1) as f64).cos();
                principal(mid - half * x)
            })
            .collect()
    }
}

impl PartialEq for CircleArc {
    fn eq(&self, other: &Self) -> bool {
        if self.is_full() && other.is_full() {
            return true;
        }
        self.closed == other.closed
            && (self.length - other.length).abs() <= ANGLE_EQ_TOL
            && ccw_distance(self.start, other.start).min(ccw_distance(other.start, self.start))
                <= ANGLE_EQ_TOL
    }
}

/// A finite union of disjoint closed arcs plus isolated points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArcSet {
    pub arcs: Vec<CircleArc>,
    pub points: Vec<f64>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::default()
    }

    pub fn full_circle() -> Self {
        ArcSet { arcs: vec![CircleArc::full()], points: Vec::new() }
    }

    /// Build from arbitrary arcs and points, merging overlaps and dropping
    /// points swallowed by arcs.
    pub fn from_parts(arcs: Vec<CircleArc>, points: Vec<f64>) -> Self {
        let mut set = ArcSet { arcs, points };
        set.normalize();
        set
    }

    fn normalize(&mut self) {
        // unroll arcs to intervals on the real line, merge, re-wrap
        if self.arcs.iter().any(|a| a.is_full()) {
            self.arcs = vec![CircleArc::full()];
            self.points.clear();
            return;
        }
        let mut intervals: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .map(|a| (a.start(), a.start() + a.length()))
            .collect();
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in intervals {
            match merged.last_mut() {
                Some(last) if lo <= last.1 + ANGLE_EQ_TOL => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        // wrap-around: tail of the last interval may reach the first
        if merged.len() >= 2 {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if last.1 - TAU >= first.0 - ANGLE_EQ_TOL {
                merged[0].0 = last.0 - TAU;
                merged[0].1 = merged[0].1.max(last.1 - TAU);
                merged.pop();
            }
        }
        let total: f64 = merged.iter().map(|(lo, hi)| hi - lo).sum();
        if total >= TAU - ANGLE_EQ_TOL {
            self.arcs = vec![CircleArc::full()];
            self.points.clear();
            return;
        }
        self.arcs = merged
            .into_iter()
            .map(|(lo, hi)| CircleArc::from_angles(lo, hi).expect("positive length"))
            .collect();

        // keep points not already covered
        let arcs = self.arcs.clone();
        self.points.retain(|&p| !arcs.iter().any(|a| a.contains(p)));
        self.points.sort_by(f64::total_cmp);
        self.points.dedup_by(|a, b| (*a - *b).abs() <= ANGLE_EQ_TOL);
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty() && self.points.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.arcs.len() == 1 && self.arcs[0].is_full()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|a| a.contains(theta))
            || self.points.iter().any(|&p| (principal(p - theta)).abs() <= ANGLE_EQ_TOL)
    }

    /// Total arc length (isolated points contribute 0).
    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.length()).sum()
    }

    /// Angular distance from `theta` to the set (0 if inside).
    pub fn distance(&self, theta: f64) -> f64 {
        let mut d = f64::INFINITY;
        for a in &self.arcs {
            d = d.min(a.distance(theta));
        }
        for &p in &self.points {
            d = d.min(principal(p - theta).abs());
        }
        d
    }

    /// True if every point of `self` lies within `eta` of `other`.
    pub fn within_neighborhood_of(&self, other: &ArcSet, eta: f64) -> bool {
        for a in &self.arcs {
            // endpoints plus a sweep of the interior
            let n = (a.length() / (eta.max(1e-3) / 8.0)).ceil() as usize + 2;
            for t in a.uniform_grid(n.max(2)) {
                if other.distance(t) > eta {
                    return false;
                }
            }
        }
        self.points.iter().all(|&p| other.distance(p) <= eta)
    }

    /// Length of the longest arc of the complement (0 if the set is the full
    /// circle, 2π if the set is empty).
    pub fn largest_gap(&self) -> f64 {
        if self.is_full() {
            return 0.0;
        }
        if self.arcs.is_empty() && self.points.is_empty() {
            return TAU;
        }
        // walk the sorted feature starts; gap between consecutive features
        let mut marks: Vec<(f64, f64)> = self
            .arcs
            .iter()
            .map(|a| (a.start(), a.length()))
            .chain(self.points.iter().map(|&p| (principal(p), 0.0)))
            .collect();
        marks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut largest: f64 = 0.0;
        for i in 0..marks.len() {
            let (s, len) = marks[i];
            let next = marks[(i + 1) % marks.len()].0;
            let gap = ccw_distance(s + len, next);
            // a full wrap of a single feature yields ~2π minus its length
            largest = largest.max(if marks.len() == 1 { TAU - len } else { gap });
        }
        largest
    }

    /// Serialization-friendly list of [start, end] angle pairs; isolated
    /// points appear as [p, p].
    pub fn to_angle_pairs(&self) -> Vec<[f64; 2]> {
        let mut out: Vec<[f64; 2]> = self.arcs.iter().map(|a| [a.start(), a.end()]).collect();
        out.extend(self.points.iter().map(|&p| [p, p]));
        out
    }
}
