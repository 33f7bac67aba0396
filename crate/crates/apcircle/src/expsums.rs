//! Exact and identity-accelerated evaluation of the Gauss sum S(q; k, m),
//! the Kloosterman sum K(q; k, n), the B-sum over a reduced residue system,
//! and the bilinear solution-set sum H_{h,n}(q, a), together with the bound
//! values each of them satisfies.
//!
//! Every direct evaluator reduces integer phase numerators mod q before any
//! trigonometry, so the arguments passed to sin/cos are exact rationals in
//! [0, 1) and the accumulated error stays at the rounding level.

use num_complex::Complex64;

use crate::arith::{self, Factorization};
use crate::counting::SqrtTable;

/// Value type of all exponential sums.
pub type ComplexValue = Complex64;

/// Moduli up to this size get a precomputed table of the q-th roots of unity.
const UNIT_TABLE_LIMIT: u64 = 1_000_000;

/// e(j/q) for integer j, with a per-modulus lookup table for small q.
pub(crate) struct UnitCircle {
    q: u64,
    table: Vec<Complex64>,
}

impl UnitCircle {
    pub(crate) fn new(q: u64) -> Self {
        assert!(q >= 1);
        let table = if q <= UNIT_TABLE_LIMIT {
            let step = std::f64::consts::TAU / q as f64;
            (0..q)
                .map(|j| {
                    let (s, c) = (j as f64 * step).sin_cos();
                    Complex64::new(c, s)
                })
                .collect()
        } else {
            Vec::new()
        };
        UnitCircle { q, table }
    }

    /// e(r/q) for an already-reduced numerator r ∈ [0, q).
    #[inline]
    pub(crate) fn phase_reduced(&self, r: u64) -> Complex64 {
        debug_assert!(r < self.q);
        if !self.table.is_empty() {
            self.table[r as usize]
        } else {
            let (s, c) = (std::f64::consts::TAU * r as f64 / self.q as f64).sin_cos();
            Complex64::new(c, s)
        }
    }

    /// e(num/q) for any integer numerator.
    #[inline]
    pub(crate) fn phase(&self, num: i64) -> Complex64 {
        self.phase_reduced(arith::reduce_mod(num, self.q))
    }
}

/// e(num/q) without a table; num is reduced mod q first.
fn unit_phase(num: u64, q: u64) -> Complex64 {
    let r = num % q;
    let (s, c) = (std::f64::consts::TAU * r as f64 / q as f64).sin_cos();
    Complex64::new(c, s)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Gauss sum S(q; k, m) = Σ_{α mod q} e((kα² + mα)/q) by direct summation.
pub fn gauss_direct(q: u64, k: i64, m: i64) -> ComplexValue {
    assert!(q >= 1);
    let circle = UnitCircle::new(q);
    gauss_direct_with(&circle, k, m)
}

pub(crate) fn gauss_direct_with(circle: &UnitCircle, k: i64, m: i64) -> ComplexValue {
    let q = circle.q;
    let k_red = arith::reduce_mod(k, q);
    let m_red = arith::reduce_mod(m, q);
    let mut sum = Complex64::new(0.0, 0.0);
    for alpha in 0..q {
        let aa = mul_mod(alpha, alpha, q);
        let num = (mul_mod(k_red, aa, q) + mul_mod(m_red, alpha, q)) % q;
        sum += circle.phase_reduced(num);
    }
    sum
}

/// S(q; 1, 0) for odd q: √q when q ≡ 1 (mod 4), i√q when q ≡ 3 (mod 4).
fn gauss_unit_odd(q: u64) -> Complex64 {
    debug_assert!(q % 2 == 1);
    let root = (q as f64).sqrt();
    if q % 4 == 1 {
        Complex64::new(root, 0.0)
    } else {
        Complex64::new(0.0, root)
    }
}

/// S(q; k, m) for odd q with (q, k) = 1, via the quadratic-completion
/// identity: e(−(4k)⁻¹ m² / q) · (k/q) · S(q; 1).
fn gauss_odd_closed(q: u64, k: u64, m: u64) -> Complex64 {
    debug_assert!(q % 2 == 1 && arith::gcd(k, q) == 1);
    if q == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let inv4k = arith::mod_inverse(mul_mod(4 % q, k % q, q) as i64, q)
        .expect("4k invertible for odd q");
    let z = mul_mod(inv4k, mul_mod(m % q, m % q, q), q);
    let chi = arith::jacobi(k as i64, q).expect("odd modulus") as f64;
    unit_phase(q - z, q) * chi * gauss_unit_odd(q)
}

/// S(2^ν; r, t) for odd r. Closed form for ν ≥ 2; direct for ν ∈ {0, 1}.
fn gauss_two_power_closed(nu: u32, r: u64, t: u64) -> Complex64 {
    let q = 1u64 << nu;
    debug_assert!(r % 2 == 1 || nu == 0);
    if nu <= 1 {
        // Outside the closed form's range: sum the ≤ 2 terms directly.
        let circle = UnitCircle::new(q);
        return gauss_direct_with(&circle, (r % q) as i64, (t % q) as i64);
    }
    if t % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let rbar = arith::mod_inverse(r as i64, q).expect("odd r invertible mod 2^nu");
    let half_t = (t % q) / 2;
    let z = mul_mod(rbar, mul_mod(half_t, half_t, q), q);
    let phase = unit_phase(q - z, q);
    let scale = ((2u64 << nu) as f64).sqrt(); // 2^{(ν+1)/2}
    let unit = if nu.is_multiple_of(2) {
        // (1 + i^r)/√2 = e(±1/8) according to r mod 4.
        if r % 4 == 1 {
            Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)
        } else {
            Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)
        }
    } else {
        Complex64::from_polar(1.0, std::f64::consts::TAU * (r % 8) as f64 / 8.0)
    };
    phase * scale * unit
}

/// Gauss sum by closed form: reduce by d = (k, q), split off the 2-power
/// part, evaluate each coprime factor in closed form, and recombine with
/// cross-inverse-twisted arguments.
pub fn gauss_closed(q: u64, k: i64, m: i64) -> ComplexValue {
    assert!(q >= 1);
    let k_red = arith::reduce_mod(k, q);
    let m_red = arith::reduce_mod(m, q);
    let d = arith::gcd(k_red, q);
    if !m_red.is_multiple_of(d) {
        return Complex64::new(0.0, 0.0);
    }
    let q1 = q / d;
    if q1 == 1 {
        return Complex64::new(d as f64, 0.0);
    }
    let k1 = k_red / d; // already < q1, coprime to q1
    let m1 = (m_red / d) % q1;
    let nu = q1.trailing_zeros();
    let odd = q1 >> nu;
    let two = 1u64 << nu;
    let value = if odd == 1 {
        gauss_two_power_closed(nu, k1, m1)
    } else if two == 1 {
        gauss_odd_closed(odd, k1, m1)
    } else {
        let inv_two = arith::mod_inverse(two as i64, odd).expect("coprime");
        let inv_odd = arith::mod_inverse(odd as i64, two).expect("coprime");
        let odd_part = gauss_odd_closed(
            odd,
            mul_mod(k1 % odd, inv_two, odd),
            mul_mod(m1 % odd, inv_two, odd),
        );
        let two_part = gauss_two_power_closed(
            nu,
            mul_mod(k1 % two, inv_odd, two),
            mul_mod(m1 % two, inv_odd, two),
        );
        odd_part * two_part
    };
    value * d as f64
}

/// Coprime residues of q paired with their inverses, plus the root-of-unity
/// table: supports evaluating many Kloosterman sums for one modulus.
pub struct KloostermanTable {
    q: u64,
    circle: UnitCircle,
    pairs: Vec<(u64, u64)>,
}

impl KloostermanTable {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1);
        let pairs = (0..q.max(1))
            .filter(|&alpha| arith::gcd(alpha, q) == 1 || (q == 1 && alpha == 0))
            .map(|alpha| {
                let inv = arith::mod_inverse(alpha as i64, q).expect("coprime");
                (alpha, inv)
            })
            .collect();
        KloostermanTable {
            q,
            circle: UnitCircle::new(q),
            pairs,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// (α, α⁻¹ mod q) over the reduced residue system.
    pub fn pairs(&self) -> &[(u64, u64)] {
        &self.pairs
    }

    pub fn eval(&self, k: i64, n: i64) -> ComplexValue {
        let k_red = arith::reduce_mod(k, self.q);
        let n_red = arith::reduce_mod(n, self.q);
        let mut sum = Complex64::new(0.0, 0.0);
        for &(alpha, inv) in &self.pairs {
            let num = (mul_mod(k_red, alpha, self.q) + mul_mod(n_red, inv, self.q)) % self.q;
            sum += self.circle.phase_reduced(num);
        }
        sum
    }
}

/// Kloosterman sum K(q; k, n) = Σ*_{α mod q} e((kα + nᾱ)/q).
pub fn kloosterman_direct(q: u64, k: i64, n: i64) -> ComplexValue {
    KloostermanTable::new(q).eval(k, n)
}

/// Weil's bound value q^{1/2} τ(q) (q, k, n)^{1/2}, on residues reduced to
/// [0, q) with (q, 0) = q.
pub fn weil_bound_value(q: u64, k: i64, n: i64) -> f64 {
    assert!(q >= 1);
    let g = arith::gcd3(q, arith::reduce_mod(k, q), arith::reduce_mod(n, q));
    (q as f64).sqrt() * arith::tau(q) as f64 * (g as f64).sqrt()
}

/// Arguments of the bilinear sum H_{h,n}(q, a); a, h, n are reduced mod q
/// internally before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HSumQuery {
    pub q: u64,
    pub a: i64,
    pub h: i64,
    pub n: i64,
}

impl HSumQuery {
    pub fn new(q: u64, a: i64, h: i64, n: i64) -> Self {
        assert!(q >= 1);
        HSumQuery { q, a, h, n }
    }
}

/// H_{h,n}(q, a) = Σ over (α, β) ∈ [1,q]² with α² + β² ≡ a (q) of
/// e((−αh − βn)/q), walking the solution set through a root table in
/// O(q + #solutions).
pub fn h_direct(query: HSumQuery) -> ComplexValue {
    let table = SqrtTable::build(query.q).expect("modulus within table guard");
    h_direct_with(&table, query)
}

/// [`h_direct`] against a prebuilt root table.
pub fn h_direct_with(table: &SqrtTable, query: HSumQuery) -> ComplexValue {
    let q = table.modulus();
    debug_assert_eq!(q, query.q);
    let circle = UnitCircle::new(q);
    let a_red = arith::reduce_mod(query.a, q);
    let h_red = arith::reduce_mod(query.h, q);
    let n_red = arith::reduce_mod(query.n, q);
    let mut sum = Complex64::new(0.0, 0.0);
    for alpha in 1..=q {
        let r = (a_red + q - mul_mod(alpha, alpha, q)) % q;
        for &beta in table.roots(r as i64) {
            let num = (mul_mod(h_red, alpha, q) + mul_mod(n_red, beta as u64, q)) % q;
            sum += circle.phase(-(num as i64));
        }
    }
    sum
}

/// B(d; a, m, t) = Σ*_{l mod d} e(−al/d) S(d; l, m) S(d; l, t), with each
/// Gauss factor from [`gauss_closed`].
pub fn b_sum(d: u64, a: i64, m: i64, t: i64) -> ComplexValue {
    assert!(d >= 1);
    let circle = UnitCircle::new(d);
    let a_red = arith::reduce_mod(a, d);
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..d.max(1) {
        if d > 1 && arith::gcd(l, d) != 1 {
            continue;
        }
        let phase = circle.phase_reduced((d - mul_mod(a_red, l, d)) % d);
        sum += phase * gauss_closed(d, l as i64, m) * gauss_closed(d, l as i64, t);
    }
    sum
}

/// H_{h,n}(q, a) for a single prime-power modulus, through the divisor
/// decomposition over d | q with q/d | (h, n).
fn h_prime_power(q: u64, a: u64, h: u64, n: u64) -> ComplexValue {
    let g = arith::gcd(h, n); // 0 when h = n = 0; everything divides 0
    let mut sum = Complex64::new(0.0, 0.0);
    for d in Factorization::of(q).divisors() {
        let e = q / d;
        if !g.is_multiple_of(e) {
            continue;
        }
        let m = h / e;
        let t = n / e;
        let b = b_sum(d, a as i64, m as i64, t as i64);
        sum += b / (d as f64 * d as f64);
    }
    sum * q as f64
}

/// H_{h,n}(q, a) by the fast route: factor q into coprime prime-power
/// blocks, twist the frequencies by the inverse of the complementary
/// factor, and evaluate each block through [`b_sum`]. O(q^{1+ε}) total,
/// dominated by the reduced-residue loops.
pub fn h_fast(query: HSumQuery) -> ComplexValue {
    let q = query.q;
    let a_red = arith::reduce_mod(query.a, q);
    let h_red = arith::reduce_mod(query.h, q);
    let n_red = arith::reduce_mod(query.n, q);
    let mut acc = Complex64::new(1.0, 0.0);
    for block in Factorization::of(q).prime_power_blocks() {
        let co = q / block;
        let co_inv = arith::mod_inverse((co % block) as i64, block).expect("coprime blocks");
        let hb = mul_mod(h_red % block, co_inv, block);
        let nb = mul_mod(n_red % block, co_inv, block);
        acc *= h_prime_power(block, a_red % block, hb, nb);
    }
    acc
}

/// Which form of the H bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HBoundMode {
    /// 4 q^{1/2} τ²(q) (q,h,n)^{1/2} (q,a,h²+n²)^{1/2}.
    Full,
    /// 4 q^{1/2} τ²(q) (q,h,n)^{1/2} (q,a)^{1/2}.
    Simplified,
}

/// Bound value for |H_{h,n}(q, a)|; gcds on residues reduced to [0, q)
/// with (q, 0) = q.
pub fn h_bound_value(query: HSumQuery, mode: HBoundMode) -> f64 {
    let q = query.q;
    let a_red = arith::reduce_mod(query.a, q);
    let h_red = arith::reduce_mod(query.h, q);
    let n_red = arith::reduce_mod(query.n, q);
    let tau = arith::tau(q) as f64;
    let g_hn = arith::gcd3(q, h_red, n_red) as f64;
    let second = match mode {
        HBoundMode::Full => {
            let hh_nn = ((h_red as u128 * h_red as u128 + n_red as u128 * n_red as u128)
                % q as u128) as u64;
            arith::gcd3(q, a_red, hh_nn) as f64
        }
        HBoundMode::Simplified => arith::gcd(q, a_red) as f64,
    };
    4.0 * (q as f64).sqrt() * tau * tau * g_hn.sqrt() * second.sqrt()
}
