//! Small-on-arc polynomials, certified sup norms and the gap-predictor
//! machinery against brute-force grids and regression oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use szego_lab::arc_polys::{
    certified_functional_bound, certified_functional_bound_with, predictor_from_gap,
    small_on_arc, sup_norm_on_arc, videnskii_ratio, Poly, PredictorBudget, SmoothBump,
};
use szego_lab::arcs::CircleArc;
use szego_lab::fit::line_fit;
use szego_lab::{C64, TAU};

fn random_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    Poly::new(
        (0..=degree)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    )
}

#[test]
fn sup_norm_matches_million_point_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let arc = CircleArc::centered(0.7, PI / 2.0).unwrap();
    for _ in 0..5 {
        let p = random_poly(&mut rng, 10);
        let fast = sup_norm_on_arc(&p, &arc);
        let mut brute: f64 = 0.0;
        let n = 1_000_000;
        for j in 0..=n {
            let theta = arc.start() + arc.length() * j as f64 / n as f64;
            brute = brute.max(p.eval_angle(theta).norm());
        }
        assert!(
            (fast - brute).abs() <= 1e-6 * brute,
            "sup {fast} vs brute {brute}"
        );
    }
}

#[test]
fn videnskii_family_no_super_quadratic_growth() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let arc = CircleArc::centered(0.0, 1.2).unwrap();
    // max of ||P'||/||P|| per degree over a random family; fitted growth
    // exponent must stay at most quadratic (2.1 with fit slack)
    let degrees = [2usize, 4, 6, 8, 12, 16, 20];
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &deg in &degrees {
        let mut worst: f64 = 0.0;
        for _ in 0..75 {
            let p = random_poly(&mut rng, deg);
            let num = sup_norm_on_arc(&p.derivative(), &arc);
            let den = sup_norm_on_arc(&p, &arc);
            worst = worst.max(num / den);
        }
        xs.push((deg as f64).ln());
        ys.push(worst.ln());
    }
    let fit = line_fit(&xs, &ys);
    assert!(fit.slope <= 2.1, "growth exponent {}", fit.slope);

    // the normalized ratio itself stays bounded across the family
    let p = Poly::monomial(9);
    let ratio = videnskii_ratio(&p, &arc);
    assert!((ratio - 1.0 / 9.0).abs() < 1e-9, "monomial ratio {ratio}");
    // constants have zero ratio
    let c = Poly::new(vec![C64::new(2.5, -1.0)]);
    assert_eq!(videnskii_ratio(&c, &arc), 0.0);
}

#[test]
fn small_poly_submultiplicative_powers() {
    let arc = CircleArc::centered(0.0, 2.0 * PI / 3.0).unwrap();
    let p = small_on_arc(&arc, 0.5, 128).unwrap();
    let sup = sup_norm_on_arc(&p, &arc);
    for ell in [2usize, 3, 4] {
        let sup_pow = sup_norm_on_arc(&p.powi(ell), &arc);
        // both sides certified to ~1e-6 relative; the slack inherits that
        let rhs = sup.powi(ell as i32);
        assert!(
            sup_pow <= rhs * (1.0 + 2e-6) + 1e-12,
            "ell={ell}: {sup_pow} vs {rhs}"
        );
    }
}

#[test]
fn bump_fourier_tail_beats_polynomial_decay() {
    let inner = CircleArc::centered(0.0, 0.5).unwrap();
    let outer = CircleArc::centered(0.0, 1.0).unwrap();
    let bump = SmoothBump::new(inner, outer).unwrap();
    let coeffs = bump.fourier(1 << 14);
    // decay faster than |m|^{-p-2} for p = 2: |c_m|·m^4 must shrink by
    // orders of magnitude across the resolved band
    let level = |m: i64| coeffs.at(m).norm() * (m as f64).powi(4);
    let early = (64..128).map(level).fold(0.0f64, f64::max);
    let late = (2048..4096).map(level).fold(0.0f64, f64::max);
    assert!(late < 1e-3 * early, "early {early:.3e}, late {late:.3e}");
}

#[test]
fn parseval_identity_at_weight_zero() {
    let inner = CircleArc::centered(0.3, 0.4).unwrap();
    let outer = CircleArc::centered(0.3, 0.9).unwrap();
    let bump = SmoothBump::new(inner, outer).unwrap();
    // (Σ |(1·φ)^(m)|²)^{1/2} with unit weight equals ||φ||_{L²(dm)}
    let bound = certified_functional_bound(&Poly::one(), &bump, 0.0, 1.0).unwrap();
    let n = 1 << 16;
    let norm_sq: f64 =
        (0..n).map(|j| bump.eval(TAU * j as f64 / n as f64).powi(2)).sum::<f64>() / n as f64;
    let reference = norm_sq.sqrt();
    assert!(
        (bound - reference).abs() <= 2e-3 * reference,
        "bound {bound} vs L2 norm {reference}"
    );
}

#[test]
fn certified_bound_decays_along_powers() {
    let arc = CircleArc::centered(0.0, 1.0).unwrap();
    let margin = (TAU - arc.length()) / 4.0;
    let enlarged = arc.inflate(margin);
    let base = small_on_arc(&enlarged.conjugate(), 0.5, 64).unwrap();
    let cutoff = SmoothBump::new(arc, enlarged).unwrap();
    let mut bounds = Vec::new();
    let mut degrees = Vec::new();
    for ell in 1..=20usize {
        let n = ell * base.degree();
        let bound = certified_functional_bound_with(
            |theta| {
                let v = base.eval_angle(-theta);
                C64::from_polar(1.0, n as f64 * theta) * v.powu(ell as u32)
            },
            &cutoff,
            1.0,
            1.0,
        )
        .unwrap();
        degrees.push(n as f64);
        bounds.push(bound);
    }
    // monotone non-increasing along the power
    for w in bounds.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{} -> {}", w[0], w[1]);
    }
    // eventually affine in n with negative slope on the log scale
    let tail = bounds.len() / 2;
    let xs = &degrees[tail..];
    let ys: Vec<f64> = bounds[tail..].iter().map(|b| b.ln()).collect();
    let fit = line_fit(xs, &ys);
    assert!(fit.slope < 0.0, "slope {}", fit.slope);
    assert!(fit.r_squared > 0.99, "R² {}", fit.r_squared);
}

#[test]
fn predictor_certifies_rotation_sequence() {
    // ξ(n) = e^{inπ/8} has spectrum {e^{iπ/8}} inside |θ| <= π/4
    let arc = CircleArc::centered(0.0, PI / 4.0).unwrap();
    let p = 2.0;
    // ||ξ||_p² = Σ (1/(1+|m|)²)² summed exactly enough
    let norm = {
        let mut s: f64 = 0.0;
        for m in -200_000i64..=200_000 {
            s += (1.0 / (1.0 + m.abs() as f64).powi(2)).powi(2);
        }
        s.sqrt() + 1e-9
    };
    let predictor =
        predictor_from_gap(&arc, p, norm, 0.2, PredictorBudget::default()).unwrap();
    assert!(predictor.certified_delta < 0.2);
    // the monic functional evaluated on the realization
    let n = predictor.degree;
    let mut functional = C64::from_polar(1.0, n as f64 * PI / 8.0);
    for (k, q) in predictor.coefficients.iter().enumerate() {
        functional += q * C64::from_polar(1.0, k as f64 * PI / 8.0);
    }
    assert!(
        functional.norm() <= predictor.certified_delta,
        "functional {:.3e} vs certified {:.3e}",
        functional.norm(),
        predictor.certified_delta
    );
}

#[test]
fn predictor_degree_monotone_in_arc() {
    // same margin policy, nested arcs: the certified degree cannot shrink
    // when the arc grows
    let small = CircleArc::centered(0.0, 0.5).unwrap();
    let large = CircleArc::centered(0.0, 1.1).unwrap();
    let budget = PredictorBudget { max_base_degree: 64, max_power: 64 };
    let a = predictor_from_gap(&small, 1.0, 2.0, 0.05, budget).unwrap();
    let b = predictor_from_gap(&large, 1.0, 2.0, 0.05, budget).unwrap();
    assert!(
        a.degree <= b.degree,
        "degree {} on the small arc vs {} on the large",
        a.degree,
        b.degree
    );
}

#[test]
fn predictor_serialization_roundtrip() {
    let arc = CircleArc::centered(0.1, 0.4).unwrap();
    let pred = predictor_from_gap(&arc, 1.0, 2.0, 0.3, PredictorBudget::default()).unwrap();
    let json = serde_json::to_string(&pred.to_file()).unwrap();
    let parsed: szego_lab::arc_polys::GapPredictorFile = serde_json::from_str(&json).unwrap();
    let back = szego_lab::arc_polys::GapPredictor::from_file(&parsed).unwrap();
    assert_eq!(back.degree, pred.degree);
    assert_eq!(back.coefficients.len(), pred.coefficients.len());
    assert!((back.certified_delta - pred.certified_delta).abs() == 0.0);
}

#[test]
fn bump_order_parameter_stays_smooth() {
    let inner = CircleArc::centered(0.0, 0.4).unwrap();
    let outer = CircleArc::centered(0.0, 0.8).unwrap();
    let sharp = SmoothBump::with_order(inner, outer, 3).unwrap();
    assert_eq!(sharp.eval(0.0), 1.0);
    assert_eq!(sharp.eval(PI), 0.0);
    let mid = sharp.eval(0.6);
    assert!(mid > 0.0 && mid < 1.0);
}
