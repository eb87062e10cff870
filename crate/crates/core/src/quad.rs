//! Gauss–Legendre panels with geometric grading toward marked points.
//!
//! Everything on the circle reduces to integrals over angle intervals; the
//! panel machinery here is shared by the measure moments, the Poisson-kernel
//! convolutions and the arc integrals of polynomials.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1],
/// memoized across calls.
type Rule = (Vec<f64>, Vec<f64>);

pub fn gauss_legendre(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let rule = gauss_legendre_uncached(n);
    cache.lock().unwrap().insert(n, rule.clone());
    rule
}

/// Newton iteration on the Legendre recurrence; accurate to ~1e-15.
fn gauss_legendre_uncached(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            // n == 1: p1 = x, p0 = 1
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // midpoint node of odd rules is exactly 0
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// A set of integration panels `[lo, hi]` covering an interval.
#[derive(Debug, Clone)]
pub struct Panels {
    pub cuts: Vec<(f64, f64)>,
}

impl Panels {
    /// Uniform subdivision of `[a, b]` into `count` panels.
    pub fn uniform(a: f64, b: f64, count: usize) -> Self {
        assert!(count >= 1 && b > a);
        let h = (b - a) / count as f64;
        let cuts = (0..count)
            .map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h))
            .collect();
        Panels { cuts }
    }

    /// Subdivision of `[a, b]` graded geometrically toward `a`.
    ///
    /// Panel widths halve toward `a` until the innermost panel is shorter
    /// than `floor` (the leftover stub next to `a` is kept as its own panel).
    pub fn graded_left(a: f64, b: f64, floor: f64) -> Self {
        assert!(b > a && floor > 0.0);
        let mut cuts = Vec::new();
        let mut hi = b;
        let mut w = (b - a) / 2.0;
        while hi - a > floor && cuts.len() < 2048 {
            let lo = (hi - w).max(a);
            cuts.push((lo, hi));
            hi = lo;
            w /= 2.0;
        }
        if hi > a {
            cuts.push((a, hi));
        }
        cuts.reverse();
        Panels { cuts }
    }

    /// Mirror image of [`Panels::graded_left`]: graded toward `b`.
    pub fn graded_right(a: f64, b: f64, floor: f64) -> Self {
        let left = Self::graded_left(-b, -a, floor);
        let mut cuts: Vec<(f64, f64)> = left.cuts.iter().map(|&(lo, hi)| (-hi, -lo)).collect();
        cuts.reverse();
        Panels { cuts }
    }

    /// Split every panel wider than `max_width` uniformly.
    pub fn capped(self, max_width: f64) -> Self {
        let mut cuts = Vec::new();
        for (lo, hi) in self.cuts {
            let k = ((hi - lo) / max_width).ceil().max(1.0) as usize;
            let h = (hi - lo) / k as f64;
            for i in 0..k {
                cuts.push((lo + i as f64 * h, lo + (i + 1) as f64 * h));
            }
        }
        Panels { cuts }
    }

    pub fn concat(mut self, other: Panels) -> Self {
        self.cuts.extend(other.cuts);
        self
    }
}

/// Integrate `f` over the panels with an `order`-point Gauss–Legendre rule
/// per panel.
pub fn integrate(panels: &Panels, order: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let mut total = 0.0;
    for &(lo, hi) in &panels.cuts {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (&x, &w) in xs.iter().zip(&ws) {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

/// Nodes/weights of the panel rule, flattened.
pub fn nodes_weights(panels: &Panels, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(panels.cuts.len() * order);
    let mut weights = Vec::with_capacity(panels.cuts.len() * order);
    for &(lo, hi) in &panels.cuts {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(mid + half * x);
            weights.push(half * w);
        }
    }
    (nodes, weights)
}
