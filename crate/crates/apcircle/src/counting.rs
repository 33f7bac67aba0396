//! Exact computation of η_a(q), ω_a(q), the lattice count S_{q,a}(x), the
//! main term and the remainder R_{q,a}(x).
//!
//! The count S_{q,a}(x) is the number of integer pairs (u, v), signs and
//! zeros included, with u² + v² ≤ x and u² + v² ≡ a (mod q). The origin is
//! counted when q | a.

use crate::arith::{self, Factorization};
use crate::{Error, Result};

/// Memory guard for [`SqrtTable`]: tables above this modulus are refused.
pub const SQRT_TABLE_LIMIT: u64 = 10_000_000;

/// Guard for [`count_brute`].
pub const BRUTE_COUNT_LIMIT: u64 = 100_000_000;

/// Guard for [`count_progression`].
pub const PROGRESSION_X_LIMIT: u64 = 10_000_000_000_000_000;

/// Guard for [`eta`] with [`EtaMethod::Brute`].
pub const ETA_BRUTE_LIMIT: u64 = 3000;

/// For a modulus q, the square roots of every residue: residue r maps to the
/// sorted list of β ∈ [1, q] with β² ≡ r (mod q). The root β = q represents
/// residue 0, so every β ∈ [1, q] appears in exactly one bucket.
#[derive(Debug, Clone)]
pub struct SqrtTable {
    q: u64,
    offsets: Vec<u32>,
    roots: Vec<u32>,
}

impl SqrtTable {
    /// Build the table by a single pass over β = 1..q.
    pub fn build(q: u64) -> Result<Self> {
        if q == 0 || q > SQRT_TABLE_LIMIT {
            return Err(Error::ModulusTooLarge {
                q,
                limit: SQRT_TABLE_LIMIT,
            });
        }
        let qs = q as usize;
        let mut counts = vec![0u32; qs];
        for beta in 1..=q {
            counts[((beta * beta) % q) as usize] += 1;
        }
        let mut offsets = vec![0u32; qs + 1];
        for r in 0..qs {
            offsets[r + 1] = offsets[r] + counts[r];
        }
        let mut cursor: Vec<u32> = offsets[..qs].to_vec();
        let mut roots = vec![0u32; qs];
        for beta in 1..=q {
            let r = ((beta * beta) % q) as usize;
            roots[cursor[r] as usize] = beta as u32;
            cursor[r] += 1;
        }
        Ok(SqrtTable { q, offsets, roots })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Sorted roots of the residue class of `a`.
    pub fn roots(&self, a: i64) -> &[u32] {
        let r = arith::reduce_mod(a, self.q) as usize;
        &self.roots[self.offsets[r] as usize..self.offsets[r + 1] as usize]
    }

    fn roots_of_residue(&self, r: u64) -> &[u32] {
        debug_assert!(r < self.q);
        let r = r as usize;
        &self.roots[self.offsets[r] as usize..self.offsets[r + 1] as usize]
    }

    /// ω_a(q): the number of α ∈ [1, q] with α² ≡ a (mod q).
    pub fn omega(&self, a: i64) -> u64 {
        self.roots(a).len() as u64
    }

    /// η_a(q) by cyclic convolution of the root counts, O(q).
    pub fn eta(&self, a: i64) -> u64 {
        let q = self.q as usize;
        let a_red = arith::reduce_mod(a, self.q) as usize;
        let mut total = 0u64;
        for r in 0..q {
            let n1 = (self.offsets[r + 1] - self.offsets[r]) as u64;
            if n1 == 0 {
                continue;
            }
            let s = (a_red + q - r) % q;
            let n2 = (self.offsets[s + 1] - self.offsets[s]) as u64;
            total += n1 * n2;
        }
        total
    }

    /// Root counts for every residue at once (index r -> ω_r(q)).
    pub fn root_counts(&self) -> Vec<u32> {
        (0..self.q as usize)
            .map(|r| self.offsets[r + 1] - self.offsets[r])
            .collect()
    }
}

/// Build the root table for modulus `q` (guarded at [`SQRT_TABLE_LIMIT`]).
pub fn build_sqrt_table(q: u64) -> Result<SqrtTable> {
    SqrtTable::build(q)
}

/// ω_a(q) = #{α ∈ [1, q] : α² ≡ a (mod q)} by direct enumeration.
pub fn omega(q: u64, a: i64) -> u64 {
    assert!(q >= 1);
    let a_red = arith::reduce_mod(a, q);
    (1..=q).filter(|&alpha| (alpha * alpha) % q == a_red).count() as u64
}

/// Evaluation strategy for [`eta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    /// O(q) convolution of square-root counts.
    Convolution,
    /// O(q²) double loop; guarded at [`ETA_BRUTE_LIMIT`].
    Brute,
    /// Factor q and multiply the prime-power block values.
    Multiplicative,
}

/// η_a(q) = #{(α, β) ∈ [1, q]² : α² + β² ≡ a (mod q)}.
pub fn eta(q: u64, a: i64, method: EtaMethod) -> Result<u64> {
    assert!(q >= 1);
    match method {
        EtaMethod::Convolution => Ok(SqrtTable::build(q)?.eta(a)),
        EtaMethod::Brute => {
            if q > ETA_BRUTE_LIMIT {
                return Err(Error::BruteTooLarge {
                    q,
                    limit: ETA_BRUTE_LIMIT,
                });
            }
            let a_red = arith::reduce_mod(a, q);
            let mut count = 0u64;
            for alpha in 1..=q {
                for beta in 1..=q {
                    if (alpha * alpha + beta * beta) % q == a_red {
                        count += 1;
                    }
                }
            }
            Ok(count)
        }
        EtaMethod::Multiplicative => {
            let mut total = 1u64;
            for block in Factorization::of(q).prime_power_blocks() {
                total *= SqrtTable::build(block)?.eta(a);
            }
            Ok(total)
        }
    }
}

/// One exact lattice count, split into the quadrant/axis/origin classes of
/// the four-fold symmetry: `total = 4*quadrant + 4*axis + origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub x: u64,
    pub q: u64,
    pub a: i64,
    /// S_{q,a}(x): all integer pairs.
    pub total: u64,
    /// S': pairs of positive integers.
    pub quadrant: u64,
    /// S'': positive u ≤ √x with u² ≡ a (mod q).
    pub axis: u64,
    /// 1 iff q | a (the pair (0, 0)).
    pub origin: u64,
}

/// Brute-force oracle: enumerates every integer pair (u, v) with
/// u² + v² ≤ x and classifies it directly. O(x) work, guarded.
pub fn count_brute(x: u64, q: u64, a: i64) -> Result<CountResult> {
    assert!(q >= 1);
    if x > BRUTE_COUNT_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: BRUTE_COUNT_LIMIT,
        });
    }
    let a_red = arith::reduce_mod(a, q);
    let (mut total, mut quadrant, mut axis, mut origin) = (0u64, 0u64, 0u64, 0u64);
    let xr = x.isqrt() as i64;
    for u in -xr..=xr {
        let uu = (u * u) as u64;
        let vb = (x - uu).isqrt() as i64;
        for v in -vb..=vb {
            let n = uu + (v * v) as u64;
            if n % q != a_red {
                continue;
            }
            total += 1;
            if u > 0 && v > 0 {
                quadrant += 1;
            } else if u > 0 && v == 0 {
                axis += 1;
            } else if u == 0 && v == 0 {
                origin += 1;
            }
        }
    }
    Ok(CountResult {
        x,
        q,
        a,
        total,
        quadrant,
        axis,
        origin,
    })
}

/// Exact S_{q,a}(x) in O(√x · avg-roots + q): for each u the admissible v
/// form arithmetic progressions β + kq over the square roots β of a − u².
pub fn count_progression(x: u64, q: u64, a: i64) -> Result<CountResult> {
    let table = SqrtTable::build(q)?;
    count_progression_with(&table, x, a)
}

/// [`count_progression`] against a prebuilt table (shared across sweeps).
pub fn count_progression_with(table: &SqrtTable, x: u64, a: i64) -> Result<CountResult> {
    let q = table.modulus();
    if x > PROGRESSION_X_LIMIT {
        return Err(Error::InputTooLarge {
            name: "x",
            value: x,
            limit: PROGRESSION_X_LIMIT,
        });
    }
    let a_red = arith::reduce_mod(a, q);
    let xr = x.isqrt();
    debug_assert!(xr * xr <= x && (xr + 1).checked_mul(xr + 1).is_none_or(|s| s > x));

    let mut axis = 0u64;
    for &beta in table.roots_of_residue(a_red) {
        let beta = beta as u64;
        if beta <= xr {
            axis += (xr - beta) / q + 1;
        }
    }

    let mut quadrant = 0u64;
    let u_max = x.saturating_sub(1).isqrt();
    for u in 1..=u_max {
        let y = (x - u * u).isqrt();
        let r = (a_red + q - (u * u) % q) % q;
        for &beta in table.roots_of_residue(r) {
            let beta = beta as u64;
            if beta > y {
                break;
            }
            quadrant += (y - beta) / q + 1;
        }
    }

    let origin = (a_red == 0) as u64;
    Ok(CountResult {
        x,
        q,
        a,
        total: 4 * quadrant + 4 * axis + origin,
        quadrant,
        axis,
        origin,
    })
}

/// Main term π · η_a(q) · x / q².
pub fn main_term(x: u64, q: u64, a: i64) -> Result<f64> {
    let eta = eta(q, a, EtaMethod::Convolution)?;
    Ok(main_term_with_eta(x, q, eta))
}

pub(crate) fn main_term_with_eta(x: u64, q: u64, eta: u64) -> f64 {
    std::f64::consts::PI * eta as f64 * x as f64 / (q as f64 * q as f64)
}

/// Remainder R_{q,a}(x) = S_{q,a}(x) − main term.
pub fn remainder_value(x: u64, q: u64, a: i64) -> Result<f64> {
    let count = count_progression(x, q, a)?;
    let main = main_term(x, q, a)?;
    Ok(remainder_from_parts(count.total, main))
}

/// total − main without losing integer precision when total exceeds 2^53.
pub(crate) fn remainder_from_parts(total: u64, main: f64) -> f64 {
    let main_int = main.trunc();
    (total as i128 - main_int as i128) as f64 - (main - main_int)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sqrt_table_small_moduli() {
        let t = SqrtTable::build(5).unwrap();
        assert_eq!(t.roots(0), &[5]);
        assert_eq!(t.roots(1), &[1, 4]);
        assert_eq!(t.roots(4), &[2, 3]);
        assert_eq!(t.roots(2), &[] as &[u32]);
        assert_eq!(t.roots(3), &[] as &[u32]);

        let t1 = SqrtTable::build(1).unwrap();
        assert_eq!(t1.roots(0), &[1]);

        let t4 = SqrtTable::build(4).unwrap();
        assert_eq!(t4.roots(0), &[2, 4]);
        assert_eq!(t4.roots(1), &[1, 3]);
        assert_eq!(t4.roots(2), &[] as &[u32]);
        assert_eq!(t4.roots(3), &[] as &[u32]);
    }

    #[test]
    fn sqrt_table_guard() {
        assert!(matches!(
            SqrtTable::build(SQRT_TABLE_LIMIT + 1),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn omega_cases() {
        assert_eq!(omega(8, 1), 4);
        assert_eq!(omega(4, 2), 0);
        assert_eq!(omega(1, 0), 1);
        assert_eq!(omega(5, -4), 2); // -4 ≡ 1 (mod 5)
    }

    #[test]
    fn eta_cases() {
        assert_eq!(eta(5, 1, EtaMethod::Brute).unwrap(), 4);
        assert_eq!(eta(1, 7, EtaMethod::Convolution).unwrap(), 1);
        assert_eq!(eta(2, 0, EtaMethod::Brute).unwrap(), 2);
        assert_eq!(eta(4, 1, EtaMethod::Convolution).unwrap(), 8);
        assert!(matches!(
            eta(ETA_BRUTE_LIMIT + 1, 0, EtaMethod::Brute),
            Err(Error::BruteTooLarge { .. })
        ));
    }

    #[test]
    fn count_brute_cases() {
        let c = count_brute(5, 1, 0).unwrap();
        assert_eq!((c.total, c.quadrant, c.axis, c.origin), (21, 3, 2, 1));

        let c = count_brute(25, 4, 1).unwrap();
        assert_eq!((c.total, c.quadrant, c.axis, c.origin), (44, 8, 3, 0));

        let c = count_brute(0, 3, 6).unwrap();
        assert_eq!(c.total, 1);
        let c = count_brute(0, 3, 2).unwrap();
        assert_eq!(c.total, 0);
    }

    #[test]
    fn count_progression_matches_examples() {
        assert_eq!(count_progression(5, 1, 0).unwrap().total, 21);
        assert_eq!(count_progression(25, 4, 1).unwrap().total, 44);
        let brute = count_brute(1_000_000, 1, 0).unwrap();
        let fast = count_progression(1_000_000, 1, 0).unwrap();
        assert_eq!(brute, fast);
    }

    #[test]
    fn main_term_and_remainder() {
        let m = main_term(100, 5, 1).unwrap();
        assert!((m - 16.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(main_term(0, 7, 3).unwrap(), 0.0);

        let r = remainder_value(5, 1, 0).unwrap();
        assert!((r - (21.0 - 5.0 * std::f64::consts::PI)).abs() < 1e-12);
        assert_eq!(remainder_value(0, 1, 0).unwrap(), 1.0);

        // η_1(4) = 8, so R = 44 − 12.5π.
        let r = remainder_value(25, 4, 1).unwrap();
        assert!((r - (44.0 - 12.5 * std::f64::consts::PI)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn decomposition_identity_and_oracle(
            x in 0u64..=2000,
            q in 1u64..=40,
            a in -50i64..=50,
        ) {
            let b = count_brute(x, q, a).unwrap();
            prop_assert_eq!(b.total, 4 * b.quadrant + 4 * b.axis + b.origin);
            prop_assert_eq!(b.origin, (arith::reduce_mod(a, q) == 0) as u64);
            let p = count_progression(x, q, a).unwrap();
            prop_assert_eq!(b, p);
        }

        #[test]
        fn sqrt_table_partitions(q in 1u64..=400) {
            let t = SqrtTable::build(q).unwrap();
            let mut seen = 0u64;
            for r in 0..q {
                for &b in t.roots_of_residue(r) {
                    prop_assert_eq!((b as u64 * b as u64) % q, r);
                    seen += 1;
                }
            }
            prop_assert_eq!(seen, q);
        }
    }
}
