//! Release gate: one test per criterion, each printing its pass/fail line.

use szego_lab::acceptance as ac;

const SEED: u64 = 20260808;

fn check(result: ac::CriterionResult) {
    println!("{}", result.line());
    assert!(result.passed, "{}", result.line());
}

#[test]
fn criterion_01_oracle_equivalence() {
    let r = ac::criterion_01_oracle_equivalence(SEED);
    assert!(r.seconds < 30.0, "runtime {:.1}s over 30s budget", r.seconds);
    check(r);
}

#[test]
fn criterion_02_exact_values() {
    check(ac::criterion_02_exact_values());
}

#[test]
fn criterion_03_gap_exponential_decay() {
    let r = ac::criterion_03_gap_exponential_decay();
    assert!(r.seconds < 10.0, "runtime {:.1}s over 10s budget", r.seconds);
    check(r);
}

#[test]
fn criterion_04_exp_root_bracket() {
    let r = ac::criterion_04_exp_root_bracket();
    assert!(r.seconds < 300.0, "runtime {:.1}s over 5min budget", r.seconds);
    check(r);
}

#[test]
fn criterion_05_helson_roundtrip() {
    let r = ac::criterion_05_helson_roundtrip(SEED);
    assert!(r.seconds < 120.0, "runtime {:.1}s over 2min budget", r.seconds);
    check(r);
}

#[test]
fn criterion_06_probability_bound() {
    check(ac::criterion_06_probability_bound(SEED));
}

#[test]
fn criterion_07_cyclotomic() {
    let r = ac::criterion_07_cyclotomic(SEED);
    assert!(r.seconds < 60.0, "runtime {:.1}s over 1min budget", r.seconds);
    check(r);
}

#[test]
fn criterion_08_realization_spectrum() {
    check(ac::criterion_08_realization_spectrum(SEED));
}

#[test]
fn criterion_09_unimodular_covariance() {
    check(ac::criterion_09_unimodular_covariance(SEED));
}

#[test]
fn criterion_10_poisson_smoothing() {
    check(ac::criterion_10_poisson_smoothing());
}

#[test]
fn criterion_11_nazarov_stability() {
    check(ac::criterion_11_nazarov_stability(SEED));
}

#[test]
fn criterion_12_determinism() {
    check(ac::criterion_12_determinism(SEED));
}
