//! Acceptance suite as a test target: one test per criterion, printing the
//! same pass/fail detail line as `riemna-bench selftest`.

use riemna_bench::acceptance::{self, Criterion};

fn check(c: Criterion) {
    println!(
        "{}  {} — {}",
        if c.passed { "PASS" } else { "FAIL" },
        c.name,
        c.detail
    );
    assert!(c.passed, "{} — {}", c.name, c.detail);
}

#[test]
fn acceptance_1_coefficient_solver_matches_kkt_oracle() {
    check(acceptance::criterion_1_coefficient_oracle());
}

#[test]
fn acceptance_2_flat_reduction_of_averaging_schemes() {
    check(acceptance::criterion_2_flat_reduction());
}

#[test]
fn acceptance_3_asymptotic_rate_within_chebyshev_envelope() {
    check(acceptance::criterion_3_asymptotic_rate());
}

#[test]
fn acceptance_4_cubic_averaging_error_slope() {
    check(acceptance::criterion_4_cubic_averaging_slope());
}

#[test]
fn acceptance_5_linearization_slope() {
    check(acceptance::criterion_5_linearization_slope());
}

#[test]
fn acceptance_6_desk_scale_experiment_reproduction() {
    check(acceptance::criterion_6_experiment_reproduction());
}

#[test]
fn acceptance_7_robustness_across_lambda_and_memory() {
    check(acceptance::criterion_7_robustness_sweep());
}

#[test]
fn acceptance_8_manifold_property_suite() {
    check(acceptance::criterion_8_manifold_properties());
}

#[test]
fn acceptance_9_counter_accounting() {
    check(acceptance::criterion_9_counter_accounting());
}
