//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`). Criteria
//! with stated runtime budgets assert them.

use std::time::Instant;

use apcircle::verify::{self, CheckResult};

const SEED: u64 = apcircle::cli::DEFAULT_SEED;

fn report(criterion: &str, checks: Vec<CheckResult>, budget_secs: Option<f64>, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    let all_passed = checks.iter().all(|c| c.passed);
    let in_budget = budget_secs.is_none_or(|b| elapsed < b);
    println!(
        "[{}] {criterion} ({elapsed:.2}s{})",
        if all_passed && in_budget { "PASS" } else { "FAIL" },
        budget_secs.map_or(String::new(), |b| format!(" / budget {b:.0}s")),
    );
    for c in &checks {
        println!("    {} {}: {}", if c.passed { "ok " } else { "FAIL" }, c.name, c.detail);
    }
    for c in &checks {
        assert!(c.passed, "{criterion}: {} failed: {}", c.name, c.detail);
    }
    if let Some(b) = budget_secs {
        assert!(elapsed < b, "{criterion}: {elapsed:.2}s exceeds the {b:.0}s budget");
    }
}

#[test]
fn criterion_01_counting_oracle() {
    let t = Instant::now();
    report(
        "criterion 1: counting oracle (exhaustive + 300 random triples)",
        vec![
            verify::check_count_oracle_exhaustive(),
            verify::check_count_oracle_random(SEED),
        ],
        Some(60.0),
        t,
    );
}

#[test]
fn criterion_02_exact_decomposition_identities() {
    let t = Instant::now();
    report(
        "criterion 2: exact decomposition identities on 50 seeded triples",
        vec![verify::check_exact_identities(SEED)],
        Some(120.0),
        t,
    );
}

#[test]
fn criterion_03_gauss_closed_form() {
    let t = Instant::now();
    report(
        "criterion 3: gauss closed form vs direct, q <= 512",
        vec![verify::check_gauss_closed_oracle(SEED)],
        Some(120.0),
        t,
    );
}

#[test]
fn criterion_04_h_fast_path() {
    let t = Instant::now();
    report(
        "criterion 4: h fast path vs direct + eta agreement at zero frequencies",
        vec![
            verify::check_h_fast_oracle(SEED),
            verify::check_h_zero_frequency_eta(),
        ],
        None,
        t,
    );
}

#[test]
fn criterion_05_weil_and_h_bounds() {
    let t = Instant::now();
    report(
        "criterion 5: Weil bound exhaustive q <= 300 + H bounds on 2000 queries",
        vec![
            verify::check_weil_exhaustive(SEED),
            verify::check_h_bounds_random(SEED),
        ],
        None,
        t,
    );
}

#[test]
fn criterion_06_eta_omega_bounds_and_row_sums() {
    let t = Instant::now();
    report(
        "criterion 6: eta/omega bound constants <= 4 and exact row sums",
        vec![verify::check_eta_omega_bounds(), verify::check_row_sums()],
        None,
        t,
    );
}

#[test]
fn criterion_07_fourier_truncation_constant() {
    let t = Instant::now();
    report(
        "criterion 7: sawtooth truncation constant C_rho <= 2",
        vec![verify::check_rho_truncation_constant(SEED)],
        None,
        t,
    );
}

#[test]
fn criterion_08_arc_reconstruction() {
    let t = Instant::now();
    report(
        "criterion 8: S1^(0) reconstruction through the arc integrals",
        vec![verify::check_arc_reconstruction(SEED)],
        None,
        t,
    );
}

#[test]
fn criterion_09_theorem_regression_sweep() {
    let t = Instant::now();
    report(
        "criterion 9: theorem regression sweep with frozen baseline",
        vec![verify::check_theorem_regression_sweep()],
        Some(600.0),
        t,
    );
}

#[test]
fn criterion_10_bound_comparison_claims() {
    let t = Instant::now();
    report(
        "criterion 10: dominance over the mid conditional bound",
        vec![verify::check_dominance_claims()],
        None,
        t,
    );
}

#[test]
fn criterion_11_performance() {
    let t = Instant::now();
    report(
        "criterion 11: single-threaded performance budgets",
        vec![
            verify::check_count_performance(),
            verify::check_h_fast_performance(),
        ],
        None,
        t,
    );
}
