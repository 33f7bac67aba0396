//! Named property suites for every module, runnable through
//! `apcircle verify --module <name>` and reused verbatim by the acceptance
//! test target. Each check returns a pass/fail verdict plus a one-line
//! detail (usually the recorded empirical constant or the worst offender).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith;
use crate::bounds::{self, ARule, QRule, SweepConfig};
use crate::counting::{self, EtaMethod, SqrtTable};
use crate::decomposition::{self, rho, rho_truncated};
use crate::expsums::{self, HBoundMode, HSumQuery, KloostermanTable};
use crate::{Error, Result};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

/// All checks of one module.
#[derive(Debug, Clone)]
pub struct ModuleReport {
    pub module: &'static str,
    pub checks: Vec<CheckResult>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn pass_count(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn fail_count(&self) -> usize {
        self.checks.len() - self.pass_count()
    }
}

pub const MODULES: &[&str] = &["arith", "counting", "expsums", "decomposition", "bounds"];

/// Run the property suite of a named module.
pub fn run_module(module: &str, seed: u64) -> Result<ModuleReport> {
    let checks = match module {
        "arith" => vec![
            check_factorization_against_sieves(),
            check_jacobi_euler_criterion(),
            check_gcd_sum_constants(seed),
        ],
        "counting" => vec![
            check_count_oracle_exhaustive(),
            check_count_oracle_random(seed),
            check_eta_consistency(seed),
            check_eta_omega_bounds(),
            check_row_sums(),
            check_count_performance(),
        ],
        "expsums" => vec![
            check_gauss_closed_oracle(seed),
            check_gauss_magnitude(),
            check_gauss_reduction(),
            check_kloosterman_reality(seed),
            check_weil_exhaustive(seed),
            check_h_fast_oracle(seed),
            check_h_zero_frequency_eta(),
            check_h_bounds_random(seed),
            check_h_multiplicativity(seed),
            check_b_sum_kloosterman_form(),
            check_h_fast_performance(),
        ],
        "decomposition" => vec![
            check_exact_identities(seed),
            check_rho_truncation_constant(seed),
            check_arc_reconstruction(seed),
            check_sign_weighted_axis_bound(seed),
            check_gamma_series_agreement(),
            check_pipeline_bound_constants(seed),
        ],
        "bounds" => vec![
            check_theorem_regression_sweep(),
            check_dominance_claims(),
            check_conditional_dominance(),
            check_sweep_invariants(seed),
        ],
        _ => {
            return Err(Error::Domain(format!(
                "unknown module {module:?}; expected one of {MODULES:?}"
            )))
        }
    };
    Ok(ModuleReport {
        module: match module {
            "arith" => "arith",
            "counting" => "counting",
            "expsums" => "expsums",
            "decomposition" => "decomposition",
            _ => "bounds",
        },
        checks,
    })
}

// ---------------------------------------------------------------------------
// arith
// ---------------------------------------------------------------------------

/// factorize/tau/phi against independent sieves up to 10^6 (divisor-increment
/// sieve for τ, totient sieve for φ), plus literal coprimality enumeration of
/// φ(n) for n ≤ 5000.
pub fn check_factorization_against_sieves() -> CheckResult {
    const N: usize = 1_000_000;
    let mut tau_sieve = vec![0u32; N + 1];
    for d in 1..=N {
        for m in (d..=N).step_by(d) {
            tau_sieve[m] += 1;
        }
    }
    let mut phi_sieve: Vec<u32> = (0..=N as u32).collect();
    for p in 2..=N {
        if phi_sieve[p] == p as u32 {
            for m in (p..=N).step_by(p) {
                phi_sieve[m] -= phi_sieve[m] / p as u32;
            }
        }
    }
    for n in 1..=N as u64 {
        let f = arith::Factorization::of(n);
        if f.value() != n {
            return CheckResult::new(
                "factorization_against_sieves",
                false,
                format!("factorize({n}) reconstructs to {}", f.value()),
            );
        }
        if f.tau() != tau_sieve[n as usize] as u64 || f.phi() != phi_sieve[n as usize] as u64 {
            return CheckResult::new(
                "factorization_against_sieves",
                false,
                format!(
                    "n={n}: tau {} vs sieve {}, phi {} vs sieve {}",
                    f.tau(),
                    tau_sieve[n as usize],
                    f.phi(),
                    phi_sieve[n as usize]
                ),
            );
        }
    }
    for n in 1..=5000u64 {
        let direct = (1..=n).filter(|&k| arith::gcd(k, n) == 1).count() as u64;
        if direct != arith::euler_phi(n) {
            return CheckResult::new(
                "factorization_against_sieves",
                false,
                format!("phi({n}): enumeration {direct} vs {}", arith::euler_phi(n)),
            );
        }
    }
    CheckResult::new(
        "factorization_against_sieves",
        true,
        format!("n <= {N}: reconstruction, tau, phi all match"),
    )
}

/// Jacobi symbol against the Euler criterion for every odd prime p ≤ 100.
pub fn check_jacobi_euler_criterion() -> CheckResult {
    for p in (3u64..=100).filter(|&p| arith::is_prime(p)) {
        for k in 0..p {
            let mut e = 1u64;
            for _ in 0..(p - 1) / 2 {
                e = e * k % p;
            }
            let expect = if e == 0 {
                0
            } else if e == 1 {
                1
            } else {
                -1
            };
            if arith::jacobi(k as i64, p).unwrap() != expect {
                return CheckResult::new(
                    "jacobi_euler_criterion",
                    false,
                    format!("(k/p) mismatch at k={k}, p={p}"),
                );
            }
        }
    }
    CheckResult::new(
        "jacobi_euler_criterion",
        true,
        "all primes p <= 100, all residues".into(),
    )
}

/// Empirical constants of the gcd-sum estimates: the head sum against
/// τ(q)·ln y, and the two tail sums against τ(q)/y and τ(q)/√y. All three
/// recorded constants must stay ≤ 4.
pub fn check_gcd_sum_constants(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_head: f64 = 0.0;
    let mut c_tail2: f64 = 0.0;
    let mut c_tail32: f64 = 0.0;
    for _ in 0..40 {
        let q = rng.random_range(1..=10_000u64);
        let tau = arith::tau(q) as f64;
        for &y in &[100u64, 1000, 10_000] {
            let mut head = 0.0;
            let mut tail2 = 0.0;
            let mut tail32 = 0.0;
            for n in 1..=1_000_000u64 {
                let g = (arith::gcd(q, n) as f64).sqrt();
                if n <= y {
                    head += g / n as f64;
                } else {
                    let nf = n as f64;
                    tail2 += g / (nf * nf);
                    tail32 += g / (nf * nf.sqrt());
                }
            }
            c_head = c_head.max(head / (tau * (y as f64).ln()));
            c_tail2 = c_tail2.max(y as f64 * tail2 / tau);
            c_tail32 = c_tail32.max((y as f64).sqrt() * tail32 / tau);
        }
    }
    let passed = c_head <= 4.0 && c_tail2 <= 4.0 && c_tail32 <= 4.0;
    CheckResult::new(
        "gcd_sum_constants",
        passed,
        format!("recorded C_head={c_head:.4} C_tail2={c_tail2:.4} C_tail3/2={c_tail32:.4} (<= 4)"),
    )
}

// ---------------------------------------------------------------------------
// counting
// ---------------------------------------------------------------------------

/// count_progression ≡ count_brute, exhaustively for x ≤ 200, q ≤ 20, all a.
pub fn check_count_oracle_exhaustive() -> CheckResult {
    let mut cells = 0u64;
    for q in 1..=20u64 {
        let table = SqrtTable::build(q).unwrap();
        for x in 0..=200u64 {
            for a in 0..q as i64 {
                let brute = counting::count_brute(x, q, a).unwrap();
                let fast = counting::count_progression_with(&table, x, a).unwrap();
                if brute != fast {
                    return CheckResult::new(
                        "count_oracle_exhaustive",
                        false,
                        format!("mismatch at (x={x}, q={q}, a={a}): {brute:?} vs {fast:?}"),
                    );
                }
                cells += 1;
            }
        }
    }
    CheckResult::new(
        "count_oracle_exhaustive",
        true,
        format!("{cells} cells, all four fields equal"),
    )
}

/// count_progression ≡ count_brute on 300 seeded random triples.
pub fn check_count_oracle_random(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..300 {
        let x = rng.random_range(0..=100_000u64);
        let q = rng.random_range(1..=500u64);
        let a = rng.random_range(-(q as i64)..2 * q as i64);
        let brute = counting::count_brute(x, q, a).unwrap();
        let fast = counting::count_progression(x, q, a).unwrap();
        if brute != fast {
            return CheckResult::new(
                "count_oracle_random",
                false,
                format!("triple #{i} (x={x}, q={q}, a={a}): {brute:?} vs {fast:?}"),
            );
        }
    }
    CheckResult::new("count_oracle_random", true, "300 seeded triples".into())
}

/// η by convolution ≡ brute for all q ≤ 300 and all a; multiplicative ≡
/// convolution on 500 seeded (q ≤ 10^5, a).
pub fn check_eta_consistency(seed: u64) -> CheckResult {
    for q in 1..=300u64 {
        let table = SqrtTable::build(q).unwrap();
        // One brute pass fills every residue class at once.
        let mut brute_all = vec![0u64; q as usize];
        for alpha in 1..=q {
            for beta in 1..=q {
                brute_all[((alpha * alpha + beta * beta) % q) as usize] += 1;
            }
        }
        for a in 0..q as i64 {
            if table.eta(a) != brute_all[a as usize] {
                return CheckResult::new(
                    "eta_consistency",
                    false,
                    format!("convolution vs brute at (q={q}, a={a})"),
                );
            }
        }
    }
    // Exercise the public brute entry point on a sample.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..25 {
        let q = rng.random_range(1..=issue_free_brute_cap());
        let a = rng.random_range(0..q) as i64;
        if counting::eta(q, a, EtaMethod::Brute).unwrap()
            != counting::eta(q, a, EtaMethod::Convolution).unwrap()
        {
            return CheckResult::new(
                "eta_consistency",
                false,
                format!("brute entry point differs at (q={q}, a={a})"),
            );
        }
    }
    for _ in 0..500 {
        let q = rng.random_range(1..=100_000u64);
        let a = rng.random_range(-(q as i64)..q as i64);
        let conv = counting::eta(q, a, EtaMethod::Convolution).unwrap();
        let mult = counting::eta(q, a, EtaMethod::Multiplicative).unwrap();
        if conv != mult {
            return CheckResult::new(
                "eta_consistency",
                false,
                format!("multiplicative vs convolution at (q={q}, a={a}): {mult} vs {conv}"),
            );
        }
    }
    CheckResult::new(
        "eta_consistency",
        true,
        "brute (q <= 300, all a) and multiplicative (500 samples) agree".into(),
    )
}

fn issue_free_brute_cap() -> u64 {
    counting::ETA_BRUTE_LIMIT.min(400)
}

/// η_a(q) ≤ C·qτ(q) and ω_a(q) ≤ C·(q,a)^{1/2}τ(q) over all q ≤ 2000 and
/// all a, with both recorded constants ≤ 4.
pub fn check_eta_omega_bounds() -> CheckResult {
    let mut c_eta: f64 = 0.0;
    let mut c_omega: f64 = 0.0;
    let (mut arg_eta, mut arg_omega) = ((0u64, 0u64), (0u64, 0u64));
    for q in 1..=2000u64 {
        let table = SqrtTable::build(q).unwrap();
        let counts = table.root_counts();
        let tau = arith::tau(q) as f64;
        let qs = q as usize;
        // Cyclic autocorrelation of root counts = η over every residue.
        let mut eta_all = vec![0u64; qs];
        for r in 0..qs {
            let n1 = counts[r] as u64;
            if n1 == 0 {
                continue;
            }
            for s in 0..qs {
                eta_all[(r + s) % qs] += n1 * counts[s] as u64;
            }
        }
        for a in 0..qs {
            let ce = eta_all[a] as f64 / (q as f64 * tau);
            if ce > c_eta {
                c_eta = ce;
                arg_eta = (q, a as u64);
            }
            let co = counts[a] as f64 / ((arith::gcd(q, a as u64) as f64).sqrt() * tau);
            if co > c_omega {
                c_omega = co;
                arg_omega = (q, a as u64);
            }
        }
    }
    let passed = c_eta <= 4.0 && c_omega <= 4.0;
    CheckResult::new(
        "eta_omega_bounds",
        passed,
        format!(
            "recorded C_eta={c_eta:.4} at (q={}, a={}); C_omega={c_omega:.4} at (q={}, a={}) (<= 4)",
            arg_eta.0, arg_eta.1, arg_omega.0, arg_omega.1
        ),
    )
}

/// Σ_a η_a(q) = q² and Σ_a ω_a(q) = q, exactly, for all q ≤ 500.
pub fn check_row_sums() -> CheckResult {
    for q in 1..=500u64 {
        let table = SqrtTable::build(q).unwrap();
        let mut eta_sum = 0u64;
        let mut omega_sum = 0u64;
        for a in 0..q as i64 {
            eta_sum += table.eta(a);
            omega_sum += table.omega(a);
        }
        if eta_sum != q * q || omega_sum != q {
            return CheckResult::new(
                "row_sums",
                false,
                format!("q={q}: sum eta={eta_sum} (want {}), sum omega={omega_sum}", q * q),
            );
        }
    }
    CheckResult::new("row_sums", true, "q <= 500 exact".into())
}

/// count_progression at x = 10^10, q = 10^4 inside the 5 s budget.
pub fn check_count_performance() -> CheckResult {
    let start = std::time::Instant::now();
    let res = counting::count_progression(10_000_000_000, 10_000, 1).unwrap();
    let elapsed = start.elapsed();
    CheckResult::new(
        "count_performance",
        elapsed.as_secs_f64() < 5.0,
        format!(
            "x=1e10 q=1e4: total={} in {:.3}s (budget 5s)",
            res.total,
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// expsums
// ---------------------------------------------------------------------------

/// |gauss_closed − gauss_direct| ≤ 1e−8·(1+√q) for all q ≤ 512, 200 seeded
/// (k, m) per q.
pub fn check_gauss_closed_oracle(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for q in 1..=512u64 {
        let circle = expsums::UnitCircle::new(q);
        for _ in 0..200 {
            let k = rng.random_range(-(2 * q as i64)..=2 * q as i64);
            let m = rng.random_range(-(2 * q as i64)..=2 * q as i64);
            let direct = expsums::gauss_direct_with(&circle, k, m);
            let closed = expsums::gauss_closed(q, k, m);
            let err = (direct - closed).norm();
            let tol = 1e-8 * (1.0 + (q as f64).sqrt());
            if err > tol {
                return CheckResult::new(
                    "gauss_closed_oracle",
                    false,
                    format!("q={q} k={k} m={m}: |closed-direct|={err:e} > {tol:e}"),
                );
            }
            worst = worst.max(err / tol);
        }
    }
    CheckResult::new(
        "gauss_closed_oracle",
        true,
        format!("q <= 512, 200 pairs each; worst error at {worst:.3} of tolerance"),
    )
}

/// |S(d; 1)|² = d for all odd d ≤ 999.
pub fn check_gauss_magnitude() -> CheckResult {
    for d in (1..=999u64).step_by(2) {
        let s = expsums::gauss_direct(d, 1, 0).norm_sqr();
        if (s - d as f64).abs() > 1e-6 {
            return CheckResult::new(
                "gauss_magnitude_odd",
                false,
                format!("|S({d};1)|^2 = {s}, want {d}"),
            );
        }
    }
    CheckResult::new("gauss_magnitude_odd", true, "odd d <= 999".into())
}

/// S(q; k, n) vanishes whenever (k, q) ∤ n, exhaustively for q ≤ 200.
pub fn check_gauss_reduction() -> CheckResult {
    for q in 1..=200u64 {
        let circle = expsums::UnitCircle::new(q);
        for k in 0..q {
            let d = arith::gcd(k, q);
            if d == 1 {
                continue; // every n is divisible by 1
            }
            for n in 0..q {
                if n % d == 0 {
                    continue;
                }
                let s = expsums::gauss_direct_with(&circle, k as i64, n as i64);
                if s.norm() > 1e-9 * (1.0 + q as f64) {
                    return CheckResult::new(
                        "gauss_reduction_vanishing",
                        false,
                        format!("S({q};{k},{n}) = {s}, want 0"),
                    );
                }
            }
        }
    }
    CheckResult::new(
        "gauss_reduction_vanishing",
        true,
        "q <= 200 exhaustive".into(),
    )
}

/// Kloosterman sums are real: pairing α ↔ q−α conjugates terms.
pub fn check_kloosterman_reality(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..300 {
        let q = rng.random_range(1..=500u64);
        let k = rng.random_range(-(q as i64)..=q as i64);
        let n = rng.random_range(-(q as i64)..=q as i64);
        worst = worst.max(expsums::kloosterman_direct(q, k, n).im.abs());
    }
    CheckResult::new(
        "kloosterman_reality",
        worst <= 1e-9,
        format!("max |Im K| = {worst:e} over 300 samples"),
    )
}

/// Weil's bound on every (k, n) ∈ [0,q)² for every q ≤ 300. The grid is
/// evaluated by an incremental-index accumulation over the reduced residue
/// system, cross-validated against `kloosterman_direct` on samples.
pub fn check_weil_exhaustive(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_slack = f64::INFINITY;
    for q in 1..=300u64 {
        let qs = q as usize;
        let table = KloostermanTable::new(q);
        let cos: Vec<f64> = (0..q)
            .map(|j| (std::f64::consts::TAU * j as f64 / q as f64).cos())
            .collect();
        // grid[k*q + n] = K(q; k, n), real by the reality check.
        let mut grid = vec![0.0f64; qs * qs];
        for &(alpha, inv) in table.pairs() {
            for k in 0..qs {
                let row = k * qs;
                let mut s = (k as u64 * alpha % q) as usize;
                for cell in &mut grid[row..row + qs] {
                    *cell += cos[s];
                    s += inv as usize;
                    if s >= qs {
                        s -= qs;
                    }
                }
            }
        }
        let tau = arith::tau(q) as f64;
        let root_q = (q as f64).sqrt();
        let gq: Vec<u64> = (0..q).map(|k| arith::gcd(q, k)).collect();
        for k in 0..qs {
            for n in 0..qs {
                let bound = root_q * tau * (arith::gcd(gq[k], n as u64) as f64).sqrt();
                let slack = bound + 1e-9 - grid[k * qs + n].abs();
                if slack < 0.0 {
                    return CheckResult::new(
                        "weil_bound_exhaustive",
                        false,
                        format!("violation at q={q} k={k} n={n}: |K|={} bound={bound}", grid[k * qs + n].abs()),
                    );
                }
                min_slack = min_slack.min(slack);
            }
        }
        // Spot-check the fast grid against the plain evaluator.
        for _ in 0..10 {
            let k = rng.random_range(0..q) as usize;
            let n = rng.random_range(0..q) as usize;
            let direct = table.eval(k as i64, n as i64);
            if (grid[k * qs + n] - direct.re).abs() > 1e-8 * (1.0 + direct.norm()) {
                return CheckResult::new(
                    "weil_bound_exhaustive",
                    false,
                    format!("grid disagrees with direct eval at q={q} k={k} n={n}"),
                );
            }
        }
    }
    CheckResult::new(
        "weil_bound_exhaustive",
        true,
        format!("q <= 300, all (k,n); min slack {min_slack:.3e}"),
    )
}

/// |h_fast − h_direct| ≤ 1e−6·(1+√q·τ²(q)) on 500 seeded queries, q ≤ 400.
pub fn check_h_fast_oracle(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let q = rng.random_range(1..=400u64);
        let query = HSumQuery::new(
            q,
            rng.random_range(-(q as i64)..2 * q as i64),
            rng.random_range(-(q as i64)..2 * q as i64),
            rng.random_range(-(q as i64)..2 * q as i64),
        );
        let direct = expsums::h_direct(query);
        let fast = expsums::h_fast(query);
        let tol = 1e-6 * (1.0 + (q as f64).sqrt() * (arith::tau(q) as f64).powi(2));
        let err = (direct - fast).norm();
        if err > tol {
            return CheckResult::new(
                "h_fast_oracle",
                false,
                format!("{query:?}: |fast-direct|={err:e} > {tol:e}"),
            );
        }
        worst = worst.max(err / tol);
    }
    CheckResult::new(
        "h_fast_oracle",
        true,
        format!("500 queries, worst at {worst:.3} of tolerance"),
    )
}

/// h_fast at h = n = 0 reproduces η_a(q) exactly (rounded) for all q ≤ 200,
/// all a.
pub fn check_h_zero_frequency_eta() -> CheckResult {
    for q in 1..=200u64 {
        let table = SqrtTable::build(q).unwrap();
        for a in 0..q as i64 {
            let eta = table.eta(a) as f64;
            let h = expsums::h_fast(HSumQuery::new(q, a, 0, 0));
            let tol = 1e-6 * (1.0 + (q as f64).sqrt() * (arith::tau(q) as f64).powi(2));
            if (h.re - eta).abs() > tol || h.im.abs() > tol || h.re.round() != eta {
                return CheckResult::new(
                    "h_zero_frequency_eta",
                    false,
                    format!("q={q} a={a}: h_fast={h} vs eta={eta}"),
                );
            }
        }
    }
    CheckResult::new("h_zero_frequency_eta", true, "q <= 200, all residues".into())
}

/// |H| against both bound forms on 2000 seeded queries with q ≤ 1000.
pub fn check_h_bounds_random(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_fill: f64 = 0.0;
    for _ in 0..2000 {
        let q = rng.random_range(1..=1000u64);
        let query = HSumQuery::new(
            q,
            rng.random_range(-(q as i64)..2 * q as i64),
            rng.random_range(-(q as i64)..2 * q as i64),
            rng.random_range(-(q as i64)..2 * q as i64),
        );
        let value = expsums::h_direct(query).norm();
        let full = expsums::h_bound_value(query, HBoundMode::Full);
        let simplified = expsums::h_bound_value(query, HBoundMode::Simplified);
        if value > full + 1e-9 || value > simplified + 1e-9 || full > simplified + 1e-9 {
            return CheckResult::new(
                "h_bounds_random",
                false,
                format!("{query:?}: |H|={value} full={full} simplified={simplified}"),
            );
        }
        max_fill = max_fill.max(value / full.max(1e-300));
    }
    CheckResult::new(
        "h_bounds_random",
        true,
        format!("2000 queries; max |H|/bound = {max_fill:.4}"),
    )
}

/// The coprime-factor identity with cross-inverse-twisted frequencies, on
/// seeded coprime pairs q₁, q₂ ≤ 50.
pub fn check_h_multiplicativity(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < 50 {
        let q1 = rng.random_range(1..=50u64);
        let q2 = rng.random_range(1..=50u64);
        if arith::gcd(q1, q2) != 1 {
            continue;
        }
        done += 1;
        let q = q1 * q2;
        let a = rng.random_range(0..q) as i64;
        let h = rng.random_range(0..q) as i64;
        let n = rng.random_range(0..q) as i64;
        let whole = expsums::h_direct(HSumQuery::new(q, a, h, n));
        let q2_inv = arith::mod_inverse(q2 as i64, q1).unwrap() as i64;
        let q1_inv = arith::mod_inverse(q1 as i64, q2).unwrap() as i64;
        let left = expsums::h_direct(HSumQuery::new(q1, a, h * q2_inv, n * q2_inv));
        let right = expsums::h_direct(HSumQuery::new(q2, a, h * q1_inv, n * q1_inv));
        if (whole - left * right).norm() > 1e-9 * (1.0 + whole.norm()) {
            return CheckResult::new(
                "h_multiplicativity",
                false,
                format!("q1={q1} q2={q2} a={a} h={h} n={n}: {whole} vs {}", left * right),
            );
        }
    }
    CheckResult::new("h_multiplicativity", true, "50 coprime pairs".into())
}

/// For 2-power moduli and even frequencies, B collapses to a single
/// Kloosterman value: B(2^ν; a, m, t) = 2^{ν+1} K(2^ν; 2^{ν−2} − a, −(m²+t²)/4).
pub fn check_b_sum_kloosterman_form() -> CheckResult {
    for nu in 2..=8u32 {
        let q = 1u64 << nu;
        let table = KloostermanTable::new(q);
        for a in [0i64, 1, 3, (q / 2) as i64, (q - 1) as i64] {
            for (m, t) in [(0i64, 0i64), (2, 0), (2, 4), (6, 2), (4, 4)] {
                let b = expsums::b_sum(q, a, m, t);
                let k = table.eval((q / 4) as i64 - a, -(m * m + t * t) / 4);
                let rhs = k * (2.0 * q as f64);
                if (b - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
                    return CheckResult::new(
                        "b_sum_kloosterman_form",
                        false,
                        format!("nu={nu} a={a} m={m} t={t}: B={b} vs 2^(nu+1)K={rhs}"),
                    );
                }
            }
        }
    }
    CheckResult::new(
        "b_sum_kloosterman_form",
        true,
        "2-power moduli, nu in 2..=8, even frequencies".into(),
    )
}

/// h_fast at a prime modulus near 10^6 inside the 5 s budget.
pub fn check_h_fast_performance() -> CheckResult {
    let q = 999_983u64; // prime
    let start = std::time::Instant::now();
    let value = expsums::h_fast(HSumQuery::new(q, 1, 3, 7));
    let elapsed = start.elapsed();
    let bound = expsums::h_bound_value(HSumQuery::new(q, 1, 3, 7), HBoundMode::Full);
    let sane = value.norm() <= bound + 1e-6;
    CheckResult::new(
        "h_fast_performance",
        elapsed.as_secs_f64() < 5.0 && sane,
        format!(
            "q={q}: H={value} in {:.3}s (budget 5s), |H| <= bound: {sane}",
            elapsed.as_secs_f64()
        ),
    )
}

// ---------------------------------------------------------------------------
// decomposition
// ---------------------------------------------------------------------------

fn identity_tolerances_ok(rep: &decomposition::DecompositionReport) -> std::result::Result<(), String> {
    use decomposition::*;
    let exact = [RES_QUADRANT_ASSEMBLY, RES_QUADRANT_SPLIT];
    for key in exact {
        if rep.residuals[key] != 0.0 {
            return Err(format!("{key} residual {} != 0", rep.residuals[key]));
        }
    }
    if rep.residuals[RES_S1_SPLIT] > 1e-6 * (1.0 + rep.s1 as f64) {
        return Err(format!("{RES_S1_SPLIT} residual {}", rep.residuals[RES_S1_SPLIT]));
    }
    if rep.residuals[RES_S2_SPLIT] > 1e-6 * (1.0 + rep.s2 as f64) {
        return Err(format!("{RES_S2_SPLIT} residual {}", rep.residuals[RES_S2_SPLIT]));
    }
    if rep.residuals[RES_AXIS_HALF] > 1e-9 {
        return Err(format!("{RES_AXIS_HALF} residual {}", rep.residuals[RES_AXIS_HALF]));
    }
    Ok(())
}

/// The exact identity residuals on 50 seeded triples with x ≤ 10^5, q ≤ 100.
pub fn check_exact_identities(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..50 {
        let x = rng.random_range(0..=100_000u64);
        let q = rng.random_range(1..=100u64);
        let a = rng.random_range(-(q as i64)..2 * q as i64);
        let rep =
            decomposition::decompose(x, q, a, decomposition::default_quadrature_tol(x)).unwrap();
        if let Err(msg) = identity_tolerances_ok(&rep) {
            return CheckResult::new(
                "exact_identities",
                false,
                format!("triple #{i} (x={x}, q={q}, a={a}): {msg}"),
            );
        }
    }
    CheckResult::new("exact_identities", true, "50 seeded triples".into())
}

/// Empirical constant of the truncated Fourier expansion:
/// |ρ(y) − ρ_M(y)| · max(1, M‖y‖) ≤ C_ρ with C_ρ ≤ 2, over
/// M ∈ {4, 16, 64, 256, 1024} and 10^4 seeded y per M.
pub fn check_rho_truncation_constant(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c_rho: f64 = 0.0;
    for &m in &[4u32, 16, 64, 256, 1024] {
        for _ in 0..10_000 {
            let y: f64 = rng.random_range(-8.0..8.0);
            if (y - y.round()).abs() < 1e-9 {
                continue; // the expansion excludes integers
            }
            let err = (rho(y) - rho_truncated(y, m)).abs();
            let norm_dist = (y - y.round()).abs();
            c_rho = c_rho.max(err * (m as f64 * norm_dist).max(1.0));
        }
    }
    CheckResult::new(
        "rho_truncation_constant",
        c_rho <= 2.0,
        format!("recorded C_rho = {c_rho:.4} (<= 2)"),
    )
}

/// The Abel-summation reconstruction of S₁⁽⁰⁾ through 𝔑, 𝔑₀ and the arc
/// integrals, on 20 seeded triples with x ≤ 10^4, q ≤ 50.
pub fn check_arc_reconstruction(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let x = rng.random_range(1..=10_000u64);
        let q = rng.random_range(1..=50u64);
        let a = rng.random_range(0..q) as i64;
        let tol = decomposition::default_quadrature_tol(x);
        let rep = decomposition::decompose(x, q, a, tol).unwrap();
        let residual = rep.residuals[decomposition::RES_ARC_RECONSTRUCTION];
        let budget = 10.0 * tol * (1.0 + x as f64);
        if residual > budget {
            return CheckResult::new(
                "arc_reconstruction",
                false,
                format!("triple #{i} (x={x}, q={q}, a={a}): residual {residual:e} > {budget:e}"),
            );
        }
        worst = worst.max(residual / budget);
    }
    CheckResult::new(
        "arc_reconstruction",
        true,
        format!("20 seeded triples; worst at {worst:.3} of budget"),
    )
}

/// |Σ ρ(−α/q) ξ_β| ≤ ω_a(q) for random sign choices ξ_β ∈ {−1, +1}.
pub fn check_sign_weighted_axis_bound(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..20 {
        let q = rng.random_range(1..=200u64);
        let a = rng.random_range(0..q) as i64;
        let table = SqrtTable::build(q).unwrap();
        let signs: Vec<f64> = (0..=q).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect();
        let a_red = arith::reduce_mod(a, q);
        let mut sum = 0.0;
        for alpha in 1..=q {
            let r = (a_red + q - (alpha * alpha) % q) % q;
            for &beta in table.roots(r as i64) {
                sum += rho(-(alpha as f64) / q as f64) * signs[beta as usize];
            }
        }
        let omega = table.omega(a) as f64;
        if sum.abs() > omega + 1e-9 {
            return CheckResult::new(
                "sign_weighted_axis_bound",
                false,
                format!("q={q} a={a}: |sum|={} > omega={omega}", sum.abs()),
            );
        }
    }
    CheckResult::new("sign_weighted_axis_bound", true, "20 sign choices".into())
}

/// ΣΓ_α quadrature against its sine-series expansion, plus the vanishing
/// sine sums over the solution set.
pub fn check_gamma_series_agreement() -> CheckResult {
    for (x, q, a, n_terms) in [(100u64, 5u64, 1i64, 200u32), (2000, 12, 4, 300), (500, 7, 3, 250)] {
        let residual = decomposition::verify_gamma_series(x, q, a, n_terms).unwrap();
        if residual > 1e-3 * q as f64 {
            return CheckResult::new(
                "gamma_series_agreement",
                false,
                format!("(x={x}, q={q}, a={a}, N={n_terms}): residual {residual:e}"),
            );
        }
        for n in 1..=16 {
            let s = decomposition::solution_sine_sum(q, a, n).unwrap();
            if s.abs() > 1e-9 {
                return CheckResult::new(
                    "gamma_series_agreement",
                    false,
                    format!("sine sum (q={q}, a={a}, n={n}) = {s:e}"),
                );
            }
        }
    }
    CheckResult::new(
        "gamma_series_agreement",
        true,
        "3 configurations, sine sums vanish".into(),
    )
}

/// Empirical constants of the proof-pipeline bounds for S₁⁽¹⁾, 𝔇 and ΣΓ_α
/// over a sampled grid. Recorded and regression-tracked against frozen
/// ceilings measured on the seeded grid.
pub fn check_pipeline_bound_constants(seed: u64) -> CheckResult {
    // Ceilings frozen from the first recorded run (seed-stable grid below);
    // a regression fails if any constant grows past them.
    const C_S11_CEILING: f64 = 0.05;
    const C_D_CEILING: f64 = 0.05;
    const C_GAMMA_CEILING: f64 = 0.05;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut c_s11: f64 = 0.0;
    let mut c_d: f64 = 0.0;
    let mut c_gamma: f64 = 0.0;
    for &x in &[10_000u64, 100_000, 1_000_000] {
        for _ in 0..8 {
            let q = rng.random_range(2..=1000u64);
            let a = rng.random_range(0..q) as i64;
            let rep = decomposition::decompose(x, q, a, decomposition::default_quadrature_tol(x))
                .unwrap();
            let tau = arith::tau(q) as f64;
            let gcd_aq = (arith::gcd(q, arith::reduce_mod(a, q)) as f64).sqrt();
            let lnx4 = (x as f64).ln().powi(4);
            let s11_bound =
                ((q as f64).sqrt() + (x as f64).cbrt()) * tau.powi(4) * gcd_aq * lnx4;
            let d_bound = (q as f64).sqrt() * tau.powi(3) * gcd_aq * lnx4;
            let gamma_bound = (q as f64).powf(1.5) * tau.powi(3) * gcd_aq;
            c_s11 = c_s11.max(rep.s1_1.abs() / s11_bound);
            c_d = c_d.max(rep.frak_d.abs() / d_bound);
            c_gamma = c_gamma.max(rep.gamma_sum.abs() / gamma_bound);
        }
    }
    let passed = c_s11 <= C_S11_CEILING && c_d <= C_D_CEILING && c_gamma <= C_GAMMA_CEILING;
    CheckResult::new(
        "pipeline_bound_constants",
        passed,
        format!(
            "recorded C_s1_1={c_s11:.3e} (ceil {C_S11_CEILING}), C_D={c_d:.3e} (ceil {C_D_CEILING}), C_gamma={c_gamma:.3e} (ceil {C_GAMMA_CEILING})"
        ),
    )
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

/// Seed of the regression grid; fixed so the recorded baseline is meaningful.
pub const REGRESSION_SEED: u64 = 20_110_816;

/// Baseline max ratio_tolev of the regression grid, recorded on the first
/// run and asserted bit-stable afterwards.
pub const REGRESSION_BASELINE_MAX_RATIO: f64 = 1.812_356_855_103_990_5e-6;

/// The regression grid of the main theorem: x ∈ {10^4..10^7}, eight
/// log-spaced q per x, residues {0, 1, seeded}.
pub fn regression_sweep_config() -> SweepConfig {
    SweepConfig {
        x_values: vec![10_000, 100_000, 1_000_000, 10_000_000],
        q_rule: QRule::LogSpaced { count: 8 },
        a_rule: ARule::ZeroOneRandom {
            seed: REGRESSION_SEED,
        },
        smith_xi: 0.1,
        workers: 1,
        output_path: String::new(),
    }
}

/// Criterion: max ratio_tolev finite; per-decade maxima grow by less than
/// 3× between consecutive decades; the recorded baseline reproduces within
/// 1e−12 on reruns.
pub fn check_theorem_regression_sweep() -> CheckResult {
    let records = match bounds::run_sweep(&regression_sweep_config()) {
        Ok(r) => r,
        Err(e) => return CheckResult::new("theorem_regression_sweep", false, e.to_string()),
    };
    if let Some(bad) = records.iter().find(|r| r.error.is_some()) {
        return CheckResult::new(
            "theorem_regression_sweep",
            false,
            format!("cell (x={}, q={}, a={}) errored: {:?}", bad.x, bad.q, bad.a, bad.error),
        );
    }
    let report = bounds::report_constants(&records).unwrap();
    let tolev = &report.bounds[0];
    if !tolev.max_ratio.is_finite() {
        return CheckResult::new("theorem_regression_sweep", false, "max ratio not finite".into());
    }
    let decades: Vec<(u32, f64)> = tolev.per_decade_max.iter().map(|(d, m)| (*d, *m)).collect();
    for w in decades.windows(2) {
        let (d0, m0) = w[0];
        let (d1, m1) = w[1];
        if m1 >= 3.0 * m0 {
            return CheckResult::new(
                "theorem_regression_sweep",
                false,
                format!("upward trend: decade 1e{d1} max {m1} >= 3 x decade 1e{d0} max {m0}"),
            );
        }
    }
    let drift = (tolev.max_ratio - REGRESSION_BASELINE_MAX_RATIO).abs();
    let per_decade = decades
        .iter()
        .map(|(d, m)| format!("1e{d}:{m:.6e}"))
        .collect::<Vec<_>>()
        .join(" ");
    CheckResult::new(
        "theorem_regression_sweep",
        drift <= 1e-12,
        format!(
            "max ratio_tolev {:.17e} (baseline drift {drift:.3e}); per-decade {per_decade}",
            tolev.max_ratio
        ),
    )
}

/// The dominance claim against the mid conditional bound on every
/// applicable cell of the regression grid with q ≤ x^{2/3−0.05}, compared
/// with the ε-factors cancelled.
pub fn check_dominance_claims() -> CheckResult {
    let records = match bounds::run_sweep(&regression_sweep_config()) {
        Ok(r) => r,
        Err(e) => return CheckResult::new("dominance_mid", false, e.to_string()),
    };
    let mut applicable = 0;
    for rec in &records {
        if rec.error.is_some() {
            continue;
        }
        match bounds::dominance_mid_holds(rec.x, rec.q, rec.a) {
            Some(true) => applicable += 1,
            Some(false) => {
                return CheckResult::new(
                    "dominance_mid",
                    false,
                    format!("dominance fails at (x={}, q={}, a={})", rec.x, rec.q, rec.a),
                );
            }
            None => {}
        }
    }
    CheckResult::new(
        "dominance_mid",
        applicable > 0,
        format!("holds on all {applicable} applicable cells (non-vacuous)"),
    )
}

/// Conditional dominance against the strong bound on a prime-power grid
/// with q ≤ x^{1/3} ξ(q)², with the ε-realization mismatch recorded.
pub fn check_conditional_dominance() -> CheckResult {
    let mut cells = 0;
    let mut c_mismatch: f64 = 0.0;
    for &x in &[100_000u64, 1_000_000, 10_000_000] {
        for base in [2u64, 3, 5, 7] {
            let mut q = base;
            loop {
                q = match q.checked_mul(base) {
                    Some(v) => v,
                    None => break,
                };
                let rad = arith::radical(q);
                if (q as u128).pow(3) > (x as u128).pow(2) {
                    break;
                }
                // Strong-bound validity plus the comparison range.
                if (rad as u128).pow(4) >= q as u128 {
                    continue;
                }
                if (q as u128).pow(3) > (x as u128) * (rad as u128).pow(6) {
                    continue;
                }
                let strong = bounds::bound_varbanets(x, q, 1, bounds::VarbanetsVariant::Strong)
                    .expect("validity checked above");
                let tolev = bounds::bound_tolev(x, q, 1).unwrap();
                // ε-normalized skeletons must dominate outright.
                let lhs = (q as f64).sqrt() + (x as f64).cbrt();
                let rhs = (q as f64).sqrt() + (x as f64).sqrt() / (q as f64).sqrt() * rad as f64;
                if lhs > rhs * (1.0 + 1e-12) {
                    return CheckResult::new(
                        "conditional_dominance_strong",
                        false,
                        format!("skeleton dominance fails at (x={x}, q={q})"),
                    );
                }
                // Raw ratio records the ε-realization mismatch (the τ⁴ factor).
                c_mismatch = c_mismatch.max(tolev / strong);
                cells += 1;
            }
        }
    }
    CheckResult::new(
        "conditional_dominance_strong",
        cells > 0,
        format!("{cells} prime-power cells; recorded mismatch C = {c_mismatch:.3}"),
    )
}

/// Determinism and internal consistency of sweep records: recomputation is
/// bit-identical, r = total − main, ratios finite and non-negative.
pub fn check_sweep_invariants(seed: u64) -> CheckResult {
    let config = SweepConfig {
        x_values: vec![1000, 30_000],
        q_rule: QRule::RandomSample {
            count: 6,
            seed,
        },
        a_rule: ARule::ZeroOneRandom { seed },
        smith_xi: 0.2,
        workers: 3,
        output_path: String::new(),
    };
    let first = match bounds::run_sweep(&config) {
        Ok(r) => r,
        Err(e) => return CheckResult::new("sweep_invariants", false, e.to_string()),
    };
    let second = bounds::run_sweep(&config).unwrap();
    if first != second {
        return CheckResult::new("sweep_invariants", false, "recomputation differs".into());
    }
    for rec in &first {
        let expect_r = rec.s_total as f64 - rec.main;
        if (rec.r - expect_r).abs() > 1e-9 * (1.0 + rec.main.abs()) {
            return CheckResult::new(
                "sweep_invariants",
                false,
                format!("r mismatch at (x={}, q={}, a={})", rec.x, rec.q, rec.a),
            );
        }
        for ratio in [rec.ratio_tolev, rec.ratio_smith, rec.ratio_v_mid, rec.ratio_v_strong] {
            if !ratio.is_finite() || ratio < 0.0 {
                return CheckResult::new(
                    "sweep_invariants",
                    false,
                    format!("bad ratio {ratio} at (x={}, q={}, a={})", rec.x, rec.q, rec.a),
                );
            }
        }
    }
    CheckResult::new(
        "sweep_invariants",
        true,
        format!("{} records, deterministic and consistent", first.len()),
    )
}
