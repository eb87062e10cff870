//! One-step prediction errors e_n in L²(ρ): the distance from the constant 1
//! to polynomials of degree <= n vanishing at the origin.
//!
//! Two routes are provided and kept independent on purpose: a direct dense
//! solve of the normal equations per degree, and a Levinson-type recursion on
//! the Toeplitz system that produces the whole error sequence in O(n²).

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::measures::MomentSequence;
use crate::C64;

/// Degree-n solution: monic functional ξ(n) + Σ q_k ξ(k) with expected
/// squared error e².
#[derive(Debug, Clone)]
pub struct PredictionSolution {
    pub degree: usize,
    /// q_0 .. q_{n-1}; the extremal polynomial is tⁿ + Σ q_k t^k.
    pub coefficients: Vec<C64>,
    pub error: f64,
    /// Set when the Gram system was numerically singular (measure supported
    /// on at most `degree` points).
    pub degenerate: bool,
}

impl PredictionSolution {
    /// Coefficients of the P(0)=1 extremal polynomial 1 - Σ c_k t^k, i.e. the
    /// conjugate-reversal of the monic one. Index k holds the t^k coefficient.
    pub fn constant_term_normalized(&self) -> Vec<C64> {
        let n = self.degree;
        let mut out = vec![C64::new(0.0, 0.0); n + 1];
        out[0] = C64::new(1.0, 0.0);
        for k in 1..=n {
            // b_k = conj(a_{n-k}), a_n = 1
            out[k] = if n - k < self.coefficients.len() {
                self.coefficients[n - k].conj()
            } else {
                C64::new(0.0, 0.0)
            };
        }
        out
    }
}

/// Hermitian Toeplitz Gram matrix G_{jk} = r(j-k), 0 <= j,k <= order.
#[derive(Debug, Clone)]
pub struct ToeplitzGram {
    pub order: usize,
    entries: Vec<C64>,
}

impl ToeplitzGram {
    pub fn from_moments(moments: &MomentSequence, order: usize) -> Self {
        assert!(order <= moments.max_lag());
        let n = order + 1;
        let mut entries = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for k in 0..n {
                entries[j * n + k] = moments.at(j as i64 - k as i64);
            }
        }
        ToeplitzGram { order, entries }
    }

    pub fn at(&self, j: usize, k: usize) -> C64 {
        self.entries[j * (self.order + 1) + k]
    }

    /// Normal equations for the projection of 1 onto span{t, .., t^order}:
    /// the lower-right order×order block against the first column.
    fn projection_system(&self, ridge: f64) -> (Vec<Vec<C64>>, Vec<C64>) {
        let n = self.order;
        let mut a = vec![vec![C64::new(0.0, 0.0); n]; n];
        let mut b = vec![C64::new(0.0, 0.0); n];
        for j in 1..=n {
            for k in 1..=n {
                a[j - 1][k - 1] = self.at(j, k);
            }
            a[j - 1][j - 1] += C64::new(ridge, 0.0);
            b[j - 1] = self.at(j, 0);
        }
        (a, b)
    }
}

/// Solve A x = b for a dense Hermitian system by LU with partial pivoting.
/// Returns None when a pivot collapses below `tol`.
fn lu_solve(a: &mut [Vec<C64>], b: &mut [C64], tol: f64) -> Option<Vec<C64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if mag <= tol {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let bc = b[col];
            b[r] -= f * bc;
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for r in (0..n).rev() {
        let mut acc = b[r];
        for c in (r + 1)..n {
            acc -= a[r][c] * x[c];
        }
        x[r] = acc / a[r][r];
    }
    Some(x)
}

/// Direct route: solve the normal equations for the projection of 1 onto
/// span{t, .., tⁿ} and report the residual distance.
///
/// The system is ridge-regularized by 1e-14·trace; when the unregularized
/// solve disagrees (or fails outright) the result carries a degeneracy flag.
pub fn prediction_error_direct(moments: &MomentSequence, n: usize) -> Result<PredictionSolution> {
    if moments.max_lag() < n {
        return Err(Error::InvalidParameter(format!(
            "need moments to lag {n}, have {}",
            moments.max_lag()
        )));
    }
    let r0 = moments.at(0).re;
    if n == 0 {
        return Ok(PredictionSolution {
            degree: 0,
            coefficients: Vec::new(),
            error: r0.max(0.0).sqrt(),
            degenerate: false,
        });
    }
    let gram = ToeplitzGram::from_moments(moments, n);
    let ridge = 1e-14 * (n as f64) * r0.max(1e-300);
    let (mut a_reg, mut b_reg) = gram.projection_system(ridge);
    let sol_reg = lu_solve(&mut a_reg, &mut b_reg, 0.0)
        .ok_or_else(|| Error::InvalidParameter("regularized Gram solve failed".into()))?;

    let residual = |c: &[C64]| -> f64 {
        // e² = r(0) - Re Σ c_k conj(r(k)), clamped at 0
        let mut e2 = r0;
        for (k, ck) in c.iter().enumerate() {
            e2 -= (ck * moments.at((k + 1) as i64).conj()).re;
        }
        e2.max(0.0)
    };
    let e_reg = residual(&sol_reg).sqrt();

    // the ridge exists to tame singular Gram systems; when the plain solve
    // goes through and agrees, report it (the ridge biases healthy systems
    // at the ~1e-6 level)
    let (mut a_raw, mut b_raw) = gram.projection_system(0.0);
    let raw = lu_solve(&mut a_raw, &mut b_raw, 1e-13 * r0.max(1e-300));
    let (solution, error, degenerate) = match raw {
        Some(sol_raw) => {
            let e_raw = residual(&sol_raw).sqrt();
            if (e_raw - e_reg).abs() > 1e-6 * (1.0 + e_reg) {
                (sol_reg, e_reg, true)
            } else {
                (sol_raw, e_raw, false)
            }
        }
        None => (sol_reg, e_reg, true),
    };

    // monic functional coefficients from the P(0)=1 solution:
    // q_j = -conj(c_{n-j}) for the projection coefficients c_1..c_n
    let coefficients = (0..n).map(|j| -solution[n - 1 - j].conj()).collect();
    Ok(PredictionSolution { degree: n, coefficients, error, degenerate })
}

/// Whole error sequence from the Levinson-type recursion.
#[derive(Debug, Clone)]
pub struct ErrorSequence {
    /// e_0 .. e_n.
    pub errors: Vec<f64>,
    /// Reflection coefficient produced by step n -> n+1.
    pub reflections: Vec<C64>,
    /// First degree at which the recursion hit |reflection| = 1 (measure
    /// supported on that many points); errors are exactly 0 from there on.
    pub degenerate_from: Option<usize>,
    monic: Vec<C64>,
    monic_degree: usize,
    coeffs_tracked: bool,
}

impl ErrorSequence {
    pub fn error_at(&self, n: usize) -> f64 {
        self.errors[n]
    }

    /// Monic prediction solution at the final recursion degree, or beyond a
    /// degeneracy.
    ///
    /// Past a degeneracy the exact lower-degree predictor is shifted up
    /// (multiplied by a power of t), which keeps the error at exactly 0.
    /// Coefficients below the final degree are not retained; rerun the
    /// recursion with a smaller `n_max` for those.
    pub fn solution_at(&self, n: usize) -> PredictionSolution {
        assert!(n < self.errors.len());
        assert!(
            self.coeffs_tracked,
            "this error sequence does not carry predictor coefficients"
        );
        assert!(
            n >= self.monic_degree,
            "coefficients below the final recursion degree are not retained"
        );
        let degenerate = self.degenerate_from.is_some_and(|d| n >= d);
        let coefficients = if n == self.monic_degree {
            self.monic[..n].to_vec()
        } else {
            let shift = n - self.monic_degree;
            let mut q = vec![C64::new(0.0, 0.0); n];
            q[shift..(self.monic_degree + shift)].copy_from_slice(&self.monic[..self.monic_degree]);
            q
        };
        PredictionSolution { degree: n, coefficients, error: self.errors[n], degenerate }
    }
}

/// Levinson-type recursion on the Toeplitz normal equations, giving
/// e_0 .. e_{n_max} and the reflection coefficients.
pub fn prediction_errors_levinson(moments: &MomentSequence, n_max: usize) -> Result<ErrorSequence> {
    if moments.max_lag() < n_max {
        return Err(Error::InvalidParameter(format!(
            "need moments to lag {n_max}, have {}",
            moments.max_lag()
        )));
    }
    let r0 = moments.at(0).re;
    if r0 <= 1e-300 {
        // zero measure: every distance is 0
        return Ok(ErrorSequence {
            errors: vec![0.0; n_max + 1],
            reflections: Vec::new(),
            degenerate_from: Some(0),
            monic: Vec::new(),
            monic_degree: 0,
            coeffs_tracked: true,
        });
    }
    let mut errors = Vec::with_capacity(n_max + 1);
    let mut reflections = Vec::with_capacity(n_max);
    let mut energy = r0.max(0.0);
    errors.push(energy.sqrt());
    // monic coefficients a_0..a_{n-1} of the current stage (a_n = 1 implicit)
    let mut a: Vec<C64> = Vec::new();
    let mut degenerate_from = None;
    let mut final_degree = 0usize;

    for n in 0..n_max {
        if degenerate_from.is_some() {
            errors.push(0.0);
            continue;
        }
        // Δ_n = <t·A_n, 1> = Σ_k a_k conj(r(k+1)) + conj(r(n+1))
        let mut delta = moments.at((n + 1) as i64).conj();
        for (k, ak) in a.iter().enumerate() {
            delta += ak * moments.at((k + 1) as i64).conj();
        }
        let alpha_bar = delta / energy;
        let alpha_mod = alpha_bar.norm();
        // at exact degeneracy the true modulus is 1; the computed value can
        // overshoot by roundoff, so the stored reflection is clamped
        if alpha_mod > 1.0 {
            reflections.push((alpha_bar / alpha_mod).conj());
        } else {
            reflections.push(alpha_bar.conj());
        }
        if alpha_mod >= 1.0 - 1e-12 {
            // breakdown: measure supported on n+1 points, error exactly 0
            degenerate_from = Some(n + 1);
            // A_{n+1} = t A_n - ᾱ B_n still vanishes on the support
            let b: Vec<C64> = reversed_conjugate(&a, n);
            let mut next = vec![C64::new(0.0, 0.0); n + 1];
            next[0] = -alpha_bar * b[0];
            for k in 1..=n {
                next[k] = if k - 1 < a.len() { a[k - 1] } else { C64::new(0.0, 0.0) };
                next[k] -= alpha_bar * b[k];
            }
            a = next;
            final_degree = n + 1;
            errors.push(0.0);
            continue;
        }
        let b: Vec<C64> = reversed_conjugate(&a, n);
        let mut next = vec![C64::new(0.0, 0.0); n + 1];
        next[0] = -alpha_bar * b[0];
        for k in 1..=n {
            next[k] = if k - 1 < a.len() { a[k - 1] } else { C64::new(0.0, 0.0) };
            next[k] -= alpha_bar * b[k];
        }
        a = next;
        final_degree = n + 1;
        energy *= 1.0 - alpha_mod * alpha_mod;
        energy = energy.max(0.0);
        errors.push(energy.sqrt());
    }
    Ok(ErrorSequence {
        errors,
        reflections,
        degenerate_from,
        monic: a,
        monic_degree: final_degree,
        coeffs_tracked: true,
    })
}

/// B_n coefficients b_k = conj(a_{n-k}) with a_n = 1 (k = 0..n).
fn reversed_conjugate(a: &[C64], n: usize) -> Vec<C64> {
    (0..=n)
        .map(|k| {
            if n - k == a.len() {
                C64::new(1.0, 0.0)
            } else {
                a[n - k].conj()
            }
        })
        .collect()
}

/// Error sequence computed against the measure itself: the circle recursion
/// carried on orthogonal-polynomial values at quadrature nodes.
///
/// The moment route solves a Toeplitz system whose conditioning explodes
/// like (e_0/e_n)² for arc-supported measures; here every intermediate stays
/// at the scale of e_n on the support, so deep decay (e_n ~ 1e-10) remains
/// resolvable. Breakdown to exactly 0 occurs when the quadrature has at most
/// n nodes.
pub fn prediction_errors_from_quadrature(
    rule: &crate::measures::Quadrature,
    n_max: usize,
) -> ErrorSequence {
    let node_count = rule.nodes.len();
    let zs: Vec<C64> = rule.nodes.iter().map(|&t| C64::from_polar(1.0, t)).collect();
    let e0_sq: f64 = rule.weights.iter().sum::<f64>().max(0.0);
    let mut errors = Vec::with_capacity(n_max + 1);
    let mut reflections = Vec::with_capacity(n_max);
    let mut degenerate_from: Option<usize> = None;
    // values of the monic orthogonal polynomial and its reversal at nodes
    let mut phi = vec![C64::new(1.0, 0.0); node_count];
    let mut rev = vec![C64::new(1.0, 0.0); node_count];
    for n in 0..=n_max {
        if degenerate_from.is_some() {
            errors.push(0.0);
            continue;
        }
        // E_n freshly from the quadrature; everything stays at e_n scale on
        // the support
        let mut inner = C64::new(0.0, 0.0);
        let mut energy = 0.0;
        for ((&w, &z), (&p, &r)) in rule.weights.iter().zip(&zs).zip(phi.iter().zip(&rev)) {
            inner += w * (z * p) * r.conj();
            energy += w * p.norm_sqr();
        }
        if energy <= 1e-24 * e0_sq || n >= node_count {
            degenerate_from = Some(n);
            errors.push(0.0);
            continue;
        }
        errors.push(energy.sqrt());
        if n == n_max {
            break;
        }
        let alpha_bar = inner / energy;
        reflections.push(alpha_bar.conj());
        if alpha_bar.norm_sqr() >= 1.0 {
            degenerate_from = Some(n + 1);
            continue;
        }
        for ((&z, p), r) in zs.iter().zip(phi.iter_mut()).zip(rev.iter_mut()) {
            let shifted = z * *p;
            *p = shifted - alpha_bar * *r;
            *r -= alpha_bar.conj() * shifted;
        }
    }
    ErrorSequence {
        errors,
        reflections,
        degenerate_from,
        monic: Vec::new(),
        monic_degree: 0,
        coeffs_tracked: false,
    }
}

/// Monic prediction solution at a single degree via the recursion.
pub fn levinson_predictor(moments: &MomentSequence, n: usize) -> Result<PredictionSolution> {
    let seq = prediction_errors_levinson(moments, n)?;
    if n == 0 {
        return Ok(PredictionSolution {
            degree: 0,
            coefficients: Vec::new(),
            error: seq.errors[0],
            degenerate: false,
        });
    }
    Ok(seq.solution_at(n))
}

/// Verdict on square-summability of the prediction errors.
#[derive(Debug, Clone, PartialEq)]
pub enum TailVerdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct SquareSumReport {
    pub partial_sum: f64,
    pub tail_estimate: Option<f64>,
    pub verdict: TailVerdict,
    /// "exponential", "power", "zero" or "none".
    pub tail_model: &'static str,
    pub fit_r_squared: f64,
}

/// Decide whether Σ e_n² converges, extrapolating the tail when the decay of
/// log e_n fits a line in n (exponential) or in log n (power) with R² >= 0.99.
pub fn square_summability(errors: &[f64], fit_tail: bool) -> Result<SquareSumReport> {
    if errors.len() < 16 {
        return Err(Error::InvalidParameter("need at least 16 error values".into()));
    }
    let partial_sum: f64 = errors.iter().skip(1).map(|e| e * e).sum();
    let n_max = errors.len() - 1;
    let tail: Vec<(f64, f64)> = (n_max / 2..=n_max)
        .map(|n| (n as f64, errors[n]))
        .collect();

    // exactly-zero tail: the series terminates
    if tail.iter().all(|&(_, e)| e == 0.0) {
        return Ok(SquareSumReport {
            partial_sum,
            tail_estimate: Some(0.0),
            verdict: TailVerdict::Holds,
            tail_model: "zero",
            fit_r_squared: 1.0,
        });
    }

    // no decay: last-half level comparable to the start
    let head_level = errors[1..errors.len() / 4 + 2].iter().cloned().fold(0.0f64, f64::max);
    let tail_min = tail.iter().map(|&(_, e)| e).fold(f64::INFINITY, f64::min);
    if head_level > 0.0 && tail_min >= 0.5 * head_level {
        return Ok(SquareSumReport {
            partial_sum,
            tail_estimate: None,
            verdict: TailVerdict::Fails,
            tail_model: "none",
            fit_r_squared: 0.0,
        });
    }

    if !fit_tail {
        return Ok(SquareSumReport {
            partial_sum,
            tail_estimate: None,
            verdict: TailVerdict::Inconclusive,
            tail_model: "none",
            fit_r_squared: 0.0,
        });
    }

    // fit log e_n on the last half, above the noise floor
    let pts: Vec<(f64, f64)> = tail
        .iter()
        .filter(|&&(_, e)| e > 1e-13)
        .map(|&(n, e)| (n, e.ln()))
        .collect();
    if pts.len() < 8 {
        // decayed into the noise floor: geometric-or-faster tail
        return Ok(SquareSumReport {
            partial_sum,
            tail_estimate: Some(0.0),
            verdict: TailVerdict::Holds,
            tail_model: "zero",
            fit_r_squared: 1.0,
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let lin = line_fit(&xs, &ys);
    let xs_log: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let log = line_fit(&xs_log, &ys);

    let (model, fit, x_last): (&'static str, _, f64) = if lin.r_squared >= log.r_squared {
        ("exponential", lin, *xs.last().unwrap())
    } else {
        ("power", log, xs.last().unwrap().ln())
    };
    if fit.r_squared < 0.99 {
        return Ok(SquareSumReport {
            partial_sum,
            tail_estimate: None,
            verdict: TailVerdict::Inconclusive,
            tail_model: model,
            fit_r_squared: fit.r_squared,
        });
    }
    let e_last = (fit.slope * x_last + fit.intercept).exp();
    let tail_estimate = match model {
        "exponential" if fit.slope < 0.0 => {
            let ratio = (2.0 * fit.slope).exp();
            Some(e_last * e_last * ratio / (1.0 - ratio))
        }
        "power" if 2.0 * fit.slope < -1.0 => {
            let n_last = x_last.exp();
            Some(e_last * e_last * n_last / (-2.0 * fit.slope - 1.0))
        }
        _ => None,
    };
    let verdict = if tail_estimate.is_some() { TailVerdict::Holds } else { TailVerdict::Inconclusive };
    Ok(SquareSumReport {
        partial_sum,
        tail_estimate,
        verdict,
        tail_model: model,
        fit_r_squared: fit.r_squared,
    })
}

/// Single-step failure probability bound min(1, 4 e² / δ²).
pub fn single_step_failure_bound(e_n: f64, delta_x: f64) -> f64 {
    assert!(delta_x > 0.0);
    (4.0 * e_n * e_n / (delta_x * delta_x)).min(1.0)
}

/// Whole-sequence success probability bound max(0, 1 - 8 Σ_{n>=N} e_n² / δ²).
pub fn sequence_success_bound(tail_square_sum: f64, delta_x: f64) -> f64 {
    assert!(delta_x > 0.0);
    (1.0 - 8.0 * tail_square_sum / (delta_x * delta_x)).max(0.0)
}

/// CSV with columns n, e_n, |reflection| (the CLI `szego-errors` artifact).
pub fn errors_csv(seq: &ErrorSequence) -> String {
    let mut out = String::from("n,e_n,reflection_modulus\n");
    for (n, e) in seq.errors.iter().enumerate() {
        let refl = if n == 0 {
            String::new()
        } else if n - 1 < seq.reflections.len() {
            format!("{:.12e}", seq.reflections[n - 1].norm())
        } else {
            String::new()
        };
        out.push_str(&format!("{n},{e:.12e},{refl}\n"));
    }
    out
}
