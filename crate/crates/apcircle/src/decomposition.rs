//! The sawtooth layer: splits the quadrant count S' into the weighted sums
//! S₁⁽⁰⁾ … S₂⁽¹⁾, the boundary sums 𝔑, 𝔑₀, 𝔇, and the arc integrals Γ_α,
//! and verifies every exact identity connecting them for one (x, q, a).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::arith;
use crate::counting::{self, SqrtTable};
use crate::expsums::ComplexValue;
use crate::{Error, Result};

/// Guard for [`decompose`]: all sums are direct.
pub const DECOMPOSE_X_LIMIT: u64 = 100_000_000;
pub const DECOMPOSE_Q_LIMIT: u64 = 10_000;

/// Guard for [`t_sum`] and [`f_sum`].
pub const T_SUM_X_LIMIT: u64 = 10_000_000_000;

/// Sawtooth ρ(y) = 1/2 − {y}; at integers {y} = 0, so ρ = 1/2.
pub fn rho(y: f64) -> f64 {
    0.5 - (y - y.floor())
}

/// Truncated Fourier expansion of ρ: Σ_{n=1..M} sin(2πny)/(πn).
/// Vanishes identically at every y ∈ ½ℤ, documenting the integer exclusion.
pub fn rho_truncated(y: f64, m: u32) -> f64 {
    assert!(m >= 2, "the truncated expansion needs M >= 2");
    let mut sum = 0.0;
    for n in 1..=m {
        sum += (std::f64::consts::TAU * n as f64 * y).sin() / (std::f64::consts::PI * n as f64);
    }
    sum
}

/// Number of naturals u ≤ y with u ≡ γ (mod q), γ ∈ [1, q], plus the
/// residual of the closed form y/q + ρ((y−γ)/q) − ρ(−γ/q).
pub fn ap_interval_count(y: f64, q: u64, gamma: u64) -> (u64, f64) {
    assert!(y >= 0.0);
    assert!((1..=q).contains(&gamma));
    let count = if y < gamma as f64 {
        0
    } else {
        ((y - gamma as f64) / q as f64).floor() as u64 + 1
    };
    let closed = y / q as f64 + rho((y - gamma as f64) / q as f64) - rho(-(gamma as f64) / q as f64);
    (count, (count as f64 - closed).abs())
}

/// Largest natural u with 2u² ≤ x.
fn u_cutoff(x: u64) -> u64 {
    (x / 2).isqrt()
}

/// T_{h,n}(q) = Σ_{u ≤ √(x/2)} e((n√(x−u²) + hu)/q) by direct summation.
pub fn t_sum(x: u64, q: u64, h: i64, n: i64) -> Result<ComplexValue> {
    assert!(q >= 1);
    if x > T_SUM_X_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: T_SUM_X_LIMIT,
        });
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for u in 1..=u_cutoff(x) {
        let w = ((x - u * u) as f64).sqrt();
        let phase = (n as f64 * w + (h as i128 * u as i128) as f64) / q as f64;
        let (s, c) = (std::f64::consts::TAU * (phase - phase.floor())).sin_cos();
        sum += Complex64::new(c, s);
    }
    Ok(sum)
}

/// F_n = Σ over solution pairs (α, β) and u ≤ √(x/2) with u ≡ α (q) of
/// e(n(√(x−u²) − β)/q), walked through the root table.
pub fn f_sum(x: u64, q: u64, a: i64, n: i64) -> Result<ComplexValue> {
    if x > T_SUM_X_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: T_SUM_X_LIMIT,
        });
    }
    if q > DECOMPOSE_Q_LIMIT {
        return Err(Error::InputTooLarge {
            name: "q",
            value: q,
            limit: DECOMPOSE_Q_LIMIT,
        });
    }
    let table = SqrtTable::build(q)?;
    let a_red = arith::reduce_mod(a, q);
    let mut sum = Complex64::new(0.0, 0.0);
    for u in 1..=u_cutoff(x) {
        let w = ((x - u * u) as f64).sqrt();
        let r = (a_red + q - (u * u) % q) % q;
        for &beta in table.roots(r as i64) {
            let phase = n as f64 * (w - beta as f64) / q as f64;
            let (s, c) = (std::f64::consts::TAU * (phase - phase.floor())).sin_cos();
            sum += Complex64::new(c, s);
        }
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

const MAX_SIMPSON_DEPTH: u32 = 40;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    estimate: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let fm = f(m);
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            estimate: simpson(fa, fm, fb, b - a),
        }
    }
}

fn adaptive_simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    panel: Panel,
    tol: f64,
    depth: u32,
) -> Result<(f64, f64)> {
    let m = 0.5 * (panel.a + panel.b);
    let left = Panel::new(f, panel.a, m, panel.fa, panel.fm);
    let right = Panel::new(f, m, panel.b, panel.fm, panel.fb);
    let delta = left.estimate + right.estimate - panel.estimate;
    if delta.abs() <= 15.0 * tol || panel.b - panel.a < 1e-14 * (1.0 + panel.b.abs()) {
        return Ok((left.estimate + right.estimate + delta / 15.0, delta.abs() / 15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure {
            estimate: delta.abs() / 15.0,
            tolerance: tol,
        });
    }
    let (lv, le) = adaptive_simpson_rec(f, left, 0.5 * tol, depth - 1)?;
    let (rv, re) = adaptive_simpson_rec(f, right, 0.5 * tol, depth - 1)?;
    Ok((lv + rv, le + re))
}

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`. The integrand
/// must be smooth on the closed interval; callers split at discontinuities.
fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)> {
    if b <= a {
        return Ok((0.0, 0.0));
    }
    let panel = Panel::new(f, a, b, f(a), f(b));
    adaptive_simpson_rec(f, panel, tol, MAX_SIMPSON_DEPTH)
}

/// Γ_α = ∫₀^√(x/2) ρ((t−α)/q) · t/√(x−t²) dt, split at the jump points
/// t = α + kq so every panel integrates a smooth (affine × algebraic)
/// branch. Returns (value, error estimate).
fn gamma_alpha(x: u64, q: u64, alpha: u64, tol: f64) -> Result<(f64, f64)> {
    let t_end = (x as f64 / 2.0).sqrt();
    if t_end <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let mut cuts = vec![0.0];
    // Jumps sit at t = α + kq; for α = q the k = −1 jump is the boundary 0.
    let mut t = alpha as f64;
    while t < t_end {
        if t > 0.0 {
            cuts.push(t);
        }
        t += q as f64;
    }
    cuts.push(t_end);

    let xf = x as f64;
    let per_panel = tol / cuts.len() as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        // Fix the affine branch of ρ from the panel midpoint, so endpoint
        // evaluations take the interior limit rather than the jump value.
        let k = ((0.5 * (lo + hi) - alpha as f64) / q as f64).floor();
        let branch = move |t: f64| {
            (0.5 - ((t - alpha as f64) / q as f64 - k)) * t / (xf - t * t).sqrt()
        };
        let (v, e) = adaptive_simpson(&branch, lo, hi, per_panel)?;
        total += v;
        err += e;
    }
    Ok((total, err))
}

/// 𝓓_n = Σ over solution pairs (α, β) of cos(2πnα/q).
pub fn solution_cosine_sum(q: u64, a: i64, n: u64) -> Result<f64> {
    let table = SqrtTable::build(q)?;
    let a_red = arith::reduce_mod(a, q);
    let mut sum = 0.0;
    for alpha in 1..=q {
        let weight = table.roots(((a_red + q - (alpha * alpha) % q) % q) as i64).len() as f64;
        if weight > 0.0 {
            sum += weight * (std::f64::consts::TAU * (((n % q) * alpha) % q) as f64 / q as f64).cos();
        }
    }
    Ok(sum)
}

/// Σ over solution pairs (α, β) of sin(2πnα/q); vanishes by the α ↔ q−α
/// symmetry of the solution set.
pub fn solution_sine_sum(q: u64, a: i64, n: u64) -> Result<f64> {
    let table = SqrtTable::build(q)?;
    let a_red = arith::reduce_mod(a, q);
    let mut sum = 0.0;
    for alpha in 1..=q {
        let weight = table.roots(((a_red + q - (alpha * alpha) % q) % q) as i64).len() as f64;
        if weight > 0.0 {
            sum += weight * (std::f64::consts::TAU * (((n % q) * alpha) % q) as f64 / q as f64).sin();
        }
    }
    Ok(sum)
}

/// Default quadrature tolerance used by the CLI: 1e−8·√x.
pub fn default_quadrature_tol(x: u64) -> f64 {
    1e-8 * (x as f64).sqrt().max(1.0)
}

/// Residual keys of [`DecompositionReport::residuals`].
pub const RES_QUADRANT_ASSEMBLY: &str = "quadrant_assembly";
pub const RES_QUADRANT_SPLIT: &str = "quadrant_inclusion_exclusion";
pub const RES_S1_SPLIT: &str = "s1_sawtooth_split";
pub const RES_S2_SPLIT: &str = "s2_sawtooth_split";
pub const RES_AXIS_HALF: &str = "axis_half_count";
pub const RES_ARC_RECONSTRUCTION: &str = "arc_reconstruction";

/// Every intermediate sum of the decomposition for one (x, q, a), plus the
/// residuals of the exact identities tying them together.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    pub x: u64,
    pub q: u64,
    pub a: i64,
    /// Pairs u ≤ √(x/2), v ≤ √(x−u²) on the congruence class.
    pub s1: u64,
    /// Pairs u, v ≤ √(x/2) on the congruence class.
    pub s2: u64,
    pub s1_0: f64,
    pub s1_1: f64,
    pub s1_2: f64,
    pub s2_0: f64,
    pub s2_1: f64,
    pub frak_n: f64,
    pub frak_n0: f64,
    pub frak_d: f64,
    pub gamma_sum: f64,
    pub gamma_error: f64,
    pub residuals: BTreeMap<&'static str, f64>,
}

/// Compute every sum of the decomposition directly and fill the identity
/// residuals. `quadrature_tol` controls the Γ_α integrals.
pub fn decompose(x: u64, q: u64, a: i64, quadrature_tol: f64) -> Result<DecompositionReport> {
    if x > DECOMPOSE_X_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: DECOMPOSE_X_LIMIT,
        });
    }
    if q > DECOMPOSE_Q_LIMIT {
        return Err(Error::InputTooLarge {
            name: "q",
            value: q,
            limit: DECOMPOSE_Q_LIMIT,
        });
    }
    let table = SqrtTable::build(q)?;
    let a_red = arith::reduce_mod(a, q);
    let u_max = u_cutoff(x);
    let t_end = (x as f64 / 2.0).sqrt();

    // Exact counts by direct double loops.
    let mut s1 = 0u64;
    let mut s2 = 0u64;
    for u in 1..=u_max {
        let uu = u * u;
        let y1 = (x - uu).isqrt();
        for v in 1..=y1 {
            if (uu + v * v) % q == a_red {
                s1 += 1;
            }
        }
        for v in 1..=u_max {
            if (uu + v * v) % q == a_red {
                s2 += 1;
            }
        }
    }

    // Weighted sums over the solution set.
    let (mut s1_0, mut s1_1, mut s1_2, mut s2_0, mut s2_1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for u in 1..=u_max {
        let w = ((x - u * u) as f64).sqrt();
        let r = (a_red + q - (u * u) % q) % q;
        let roots = table.roots(r as i64);
        s1_0 += w * roots.len() as f64;
        s2_0 += roots.len() as f64;
        for &beta in roots {
            let b = beta as f64;
            s1_1 += rho((w - b) / q as f64);
            s1_2 += rho(-b / q as f64);
            s2_1 += rho((t_end - b) / q as f64);
        }
    }

    // Boundary sums over α ∈ [1, q] with weight b_α = ω_{a−α²}(q).
    let (mut frak_n, mut frak_n0, mut frak_d) = (0.0, 0.0, 0.0);
    let mut weights = vec![0u64; q as usize + 1];
    for alpha in 1..=q {
        let r = (a_red + q - (alpha * alpha) % q) % q;
        let roots = table.roots(r as i64);
        weights[alpha as usize] = roots.len() as u64;
        if roots.is_empty() {
            continue;
        }
        let rn = rho((t_end - alpha as f64) / q as f64);
        frak_n += roots.len() as f64 * rn;
        frak_n0 += roots.len() as f64 * rho(-(alpha as f64) / q as f64);
        for &beta in roots {
            frak_d += rn * rho((t_end - beta as f64) / q as f64);
        }
    }

    // Arc integrals.
    let total_weight: u64 = weights.iter().sum();
    let per_alpha_tol = quadrature_tol / (total_weight.max(1) as f64);
    let mut gamma_sum = 0.0;
    let mut gamma_error = 0.0;
    for alpha in 1..=q {
        let w = weights[alpha as usize];
        if w == 0 {
            continue;
        }
        let (v, e) = gamma_alpha(x, q, alpha, per_alpha_tol)?;
        gamma_sum += w as f64 * v;
        gamma_error += w as f64 * e;
    }

    // Independent pieces for the assembly identities.
    let progression = counting::count_progression_with(&table, x, a)?;
    let x_root = x.isqrt();
    let mut axis_direct = 0u64;
    for u in 1..=x_root {
        if (u * u) % q == a_red {
            axis_direct += 1;
        }
    }
    let origin = (a_red == 0) as u64;
    let s_prime = 2 * s1 as i128 - s2 as i128;
    let eta = table.eta(a) as f64;
    let omega = table.omega(a) as f64;

    let mut residuals = BTreeMap::new();
    residuals.insert(
        RES_QUADRANT_ASSEMBLY,
        (progression.total as i128 - (4 * s_prime + 4 * axis_direct as i128 + origin as i128))
            .unsigned_abs() as f64,
    );
    residuals.insert(
        RES_QUADRANT_SPLIT,
        (s_prime - progression.quadrant as i128).unsigned_abs() as f64,
    );
    residuals.insert(
        RES_S1_SPLIT,
        (s1 as f64 - (s1_0 / q as f64 + s1_1 - s1_2)).abs(),
    );
    residuals.insert(
        RES_S2_SPLIT,
        (s2 as f64 - (t_end / q as f64 * s2_0 + s2_1 - s1_2)).abs(),
    );
    residuals.insert(RES_AXIS_HALF, (frak_n0 - omega / 2.0).abs());
    let reconstruction = (std::f64::consts::PI / 8.0 + 0.25) * eta / q as f64 * x as f64
        + t_end * frak_n
        - (x as f64).sqrt() * frak_n0
        + gamma_sum;
    residuals.insert(RES_ARC_RECONSTRUCTION, (s1_0 - reconstruction).abs());

    Ok(DecompositionReport {
        x,
        q,
        a,
        s1,
        s2,
        s1_0,
        s1_1,
        s1_2,
        s2_0,
        s2_1,
        frak_n,
        frak_n0,
        frak_d,
        gamma_sum,
        gamma_error,
        residuals,
    })
}

/// Cross-check ΣΓ_α between quadrature and the truncated sine series
/// Σ_{n≤N} 𝓓_n 𝓔_n / (πn). Returns the discrepancy, which shrinks as N
/// grows.
pub fn verify_gamma_series(x: u64, q: u64, a: i64, n_terms: u32) -> Result<f64> {
    if x > DECOMPOSE_X_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: DECOMPOSE_X_LIMIT,
        });
    }
    if q > DECOMPOSE_Q_LIMIT {
        return Err(Error::InputTooLarge {
            name: "q",
            value: q,
            limit: DECOMPOSE_Q_LIMIT,
        });
    }
    let table = SqrtTable::build(q)?;
    let a_red = arith::reduce_mod(a, q);
    let t_end = (x as f64 / 2.0).sqrt();
    let xf = x as f64;

    // Quadrature side.
    let mut weights = vec![0u64; q as usize + 1];
    for alpha in 1..=q {
        let r = (a_red + q - (alpha * alpha) % q) % q;
        weights[alpha as usize] = table.roots(r as i64).len() as u64;
    }
    let total_weight: u64 = weights.iter().sum();
    let tol = default_quadrature_tol(x) / (total_weight.max(1) as f64);
    let mut by_quadrature = 0.0;
    for alpha in 1..=q {
        if weights[alpha as usize] == 0 {
            continue;
        }
        let (v, _) = gamma_alpha(x, q, alpha, tol)?;
        by_quadrature += weights[alpha as usize] as f64 * v;
    }

    // Series side: E_n integrated over half-period panels.
    let mut by_series = 0.0;
    for n in 1..=n_terms as u64 {
        let mut d_n = 0.0;
        for alpha in 1..=q {
            let w = weights[alpha as usize];
            if w > 0 {
                d_n += w as f64
                    * (std::f64::consts::TAU * (((n % q) * alpha) % q) as f64 / q as f64).cos();
            }
        }
        if d_n == 0.0 {
            continue;
        }
        let freq = std::f64::consts::TAU * n as f64 / q as f64;
        let half_period = q as f64 / (2.0 * n as f64);
        let mut cuts = vec![0.0];
        let mut t = half_period;
        while t < t_end {
            cuts.push(t);
            t += half_period;
        }
        cuts.push(t_end);
        let mut e_n = 0.0;
        let panel_tol = 1e-11 * (1.0 + t_end) / cuts.len() as f64;
        for w in cuts.windows(2) {
            let f = move |t: f64| (freq * t).sin() * t / (xf - t * t).sqrt();
            let (v, _) = adaptive_simpson(&f, w[0], w[1], panel_tol)?;
            e_n += v;
        }
        by_series += d_n * e_n / (std::f64::consts::PI * n as f64);
    }

    Ok((by_quadrature - by_series).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsums::{h_direct, HSumQuery};

    #[test]
    fn rho_examples() {
        assert!((rho(0.3) - 0.2).abs() < 1e-15);
        assert_eq!(rho(0.0), 0.5);
        assert!((rho(1.75) + 0.25).abs() < 1e-15);
        assert_eq!(rho(-1.0), 0.5);
        assert!((rho(-0.25) - (-0.25)).abs() < 1e-15);
    }

    #[test]
    fn rho_truncated_examples() {
        for m in [2u32, 7, 64, 1000] {
            assert!(rho_truncated(0.5, m).abs() < 1e-10);
            assert!(rho_truncated(0.0, m).abs() < 1e-10);
        }
        assert!((rho_truncated(0.25, 1000) - 0.25).abs() < 1e-3);
    }

    #[test]
    fn interval_count_examples() {
        let (c, r) = ap_interval_count(10.0, 3, 2);
        assert_eq!(c, 3);
        assert!(r < 1e-12);
        let (c, r) = ap_interval_count(0.5, 3, 2);
        assert_eq!(c, 0);
        assert!(r < 1e-12);
        let (c, r) = ap_interval_count(7.0, 7, 7);
        assert_eq!(c, 1);
        assert!(r < 1e-12);
    }

    #[test]
    fn t_sum_examples() {
        let v = t_sum(200, 5, 0, 0).unwrap();
        assert!((v.re - 10.0).abs() < 1e-12 && v.im.abs() < 1e-12);

        // Triangle inequality against the term count.
        for (x, q, h, n) in [(500u64, 7u64, 3i64, 2i64), (1000, 11, -4, 5)] {
            let cap = (x / 2).isqrt() as f64;
            assert!(t_sum(x, q, h, n).unwrap().norm() <= cap + 1e-9);
        }

        // Linear phase: geometric series oracle.
        let (x, q, h) = (200u64, 5u64, 1i64);
        let u_max = (x / 2).isqrt();
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * h as f64 / q as f64);
        let geometric = z * (z.powu(u_max as u32) - 1.0) / (z - 1.0);
        assert!((t_sum(x, q, h, 0).unwrap() - geometric).norm() < 1e-9);
    }

    #[test]
    fn f_sum_matches_h_t_identity() {
        let (x, q, a, n) = (500u64, 3u64, 1i64, 1i64);
        let direct = f_sum(x, q, a, n).unwrap();
        let mut by_identity = Complex64::new(0.0, 0.0);
        for h in 0..q {
            by_identity += h_direct(HSumQuery::new(q, a, h as i64, n))
                * t_sum(x, q, h as i64, n).unwrap();
        }
        by_identity /= q as f64;
        assert!(
            (direct - by_identity).norm() <= 1e-6 * q as f64,
            "direct={direct} identity={by_identity}"
        );
    }

    #[test]
    fn f_sum_zero_cases() {
        assert_eq!(f_sum(0, 7, 3, 2).unwrap(), Complex64::new(0.0, 0.0));
        // n = 0 reduces to the S₂⁽⁰⁾ count.
        let rep = decompose(300, 5, 2, default_quadrature_tol(300)).unwrap();
        let f0 = f_sum(300, 5, 2, 0).unwrap();
        assert!((f0.re - rep.s2_0).abs() < 1e-9 && f0.im.abs() < 1e-12);
    }

    #[test]
    fn decompose_hand_count() {
        let rep = decompose(5, 1, 0, default_quadrature_tol(5)).unwrap();
        assert_eq!(rep.s1, 2);
        assert_eq!(rep.s2, 1);
        assert_eq!(rep.residuals[RES_QUADRANT_SPLIT], 0.0);
        assert_eq!(rep.residuals[RES_QUADRANT_ASSEMBLY], 0.0);
        assert!((rep.frak_n0 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn decompose_self_consistency() {
        let rep = decompose(100, 3, 1, default_quadrature_tol(100)).unwrap();
        assert_eq!(rep.residuals[RES_QUADRANT_ASSEMBLY], 0.0);
        assert_eq!(rep.residuals[RES_QUADRANT_SPLIT], 0.0);
        assert!(rep.residuals[RES_S1_SPLIT] <= 1e-6 * (1.0 + rep.s1 as f64));
        assert!(rep.residuals[RES_S2_SPLIT] <= 1e-6 * (1.0 + rep.s2 as f64));
        assert!(rep.residuals[RES_AXIS_HALF] <= 1e-9);
        assert!(rep.residuals[RES_ARC_RECONSTRUCTION] <= 1e-6 * 100.0);
    }

    #[test]
    fn decompose_empty_solution_set() {
        // η_3(4) = 0: every solution-set sum vanishes.
        let rep = decompose(400, 4, 3, default_quadrature_tol(400)).unwrap();
        assert_eq!(rep.s1, 0);
        assert_eq!(rep.s2, 0);
        assert_eq!(rep.s1_0, 0.0);
        assert_eq!(rep.gamma_sum, 0.0);
        for v in rep.residuals.values() {
            assert!(*v <= 1e-9);
        }
    }

    #[test]
    fn gamma_series_agreement() {
        let residual = verify_gamma_series(100, 5, 1, 200).unwrap();
        assert!(residual <= 1e-3 * 5.0, "residual={residual}");
    }

    #[test]
    fn fourier_weight_examples() {
        assert!((solution_cosine_sum(5, 1, 0).unwrap() - 4.0).abs() < 1e-12);
        assert!(solution_sine_sum(5, 1, 1).unwrap().abs() < 1e-9);
        for n in 1..=10 {
            assert!(solution_sine_sum(12, 1, n).unwrap().abs() < 1e-9);
        }
    }

    mod properties {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rho_range_and_period(y in -1e6f64..1e6) {
                let r = rho(y);
                prop_assert!((-0.5..=0.5).contains(&r));
                prop_assert!((rho(y + 1.0) - r).abs() < 1e-9);
            }

            // The closed form of the progression count holds for every
            // y ≥ 0 and γ ∈ [1, q], including y exactly at class members.
            #[test]
            fn interval_count_identity(
                y in 0f64..10_000.0,
                q in 1u64..=500,
                gamma_offset in 0u64..500,
                snap in proptest::bool::ANY,
            ) {
                let gamma = gamma_offset % q + 1;
                let y = if snap { (y.floor() / q as f64).floor() * q as f64 + gamma as f64 } else { y };
                let (count, residual) = ap_interval_count(y, q, gamma);
                let direct = (1..=y.floor() as u64)
                    .filter(|u| u % q == gamma % q)
                    .count() as u64;
                prop_assert_eq!(count, direct);
                prop_assert!(residual <= 1e-9 * (1.0 + y));
            }
        }
    }

    #[test]
    fn guards_fire() {
        assert!(matches!(
            decompose(DECOMPOSE_X_LIMIT + 1, 3, 1, 1e-6),
            Err(Error::InputTooLarge { name: "x", .. })
        ));
        assert!(matches!(
            decompose(10, DECOMPOSE_Q_LIMIT + 1, 1, 1e-6),
            Err(Error::InputTooLarge { name: "q", .. })
        ));
        assert!(matches!(
            t_sum(T_SUM_X_LIMIT + 1, 3, 1, 1),
            Err(Error::InputTooLarge { .. })
        ));
    }
}
