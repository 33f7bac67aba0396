//! Elementary number-theoretic primitives shared by all other modules.

use crate::{Error, Result};

/// Greatest common divisor, with `gcd(0, 0) = 0` and `gcd(q, 0) = q`.
pub fn gcd(mut u: u64, mut v: u64) -> u64 {
    while v != 0 {
        (u, v) = (v, u % v);
    }
    u
}

/// Greatest common divisor of three arguments.
pub fn gcd3(u: u64, v: u64, w: u64) -> u64 {
    gcd(gcd(u, v), w)
}

/// Reduce a signed integer to the residue range `[0, q)`.
pub fn reduce_mod(a: i64, q: u64) -> u64 {
    debug_assert!(q >= 1);
    a.rem_euclid(q as i64) as u64
}

/// Modular inverse of `a` modulo `q`. For `q = 1` the inverse is 0.
pub fn mod_inverse(a: i64, q: u64) -> Result<u64> {
    if q == 1 {
        return Ok(0);
    }
    let r = reduce_mod(a, q);
    // Extended Euclid on (r, q).
    let (mut old_r, mut cur_r) = (r as i128, q as i128);
    let (mut old_s, mut cur_s) = (1i128, 0i128);
    while cur_r != 0 {
        let quot = old_r / cur_r;
        (old_r, cur_r) = (cur_r, old_r - quot * cur_r);
        (old_s, cur_s) = (cur_s, old_s - quot * cur_s);
    }
    if old_r != 1 {
        return Err(Error::NotCoprime { a, q });
    }
    Ok(old_s.rem_euclid(q as i128) as u64)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin primality test, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    // This witness set is deterministic for every n < 3.3 * 10^24.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Brent cycling. Expects `n` composite, odd, and not a
/// prime power of a tiny prime (trial division has already run).
fn pollard_brent(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n));
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut ys) = (2u64, 2u64);
        let mut y = 2u64;
        let mut d = 1u64;
        let (mut power, mut lam) = (1u64, 1u64);
        // Brent: advance y in powers of two, batch gcds via products.
        while d == 1 {
            x = y;
            for _ in 0..lam {
                y = f(y);
            }
            let mut k = 0;
            while k < lam && d == 1 {
                ys = y;
                let mut prod = 1u64;
                let batch = 128.min(lam - k);
                for _ in 0..batch {
                    y = f(y);
                    prod = mul_mod(prod, x.abs_diff(y), n);
                }
                d = gcd(prod, n);
                k += batch;
            }
            lam *= 2;
            let _ = power;
            power = lam;
        }
        if d == n {
            // Batched gcd overshot; replay one step at a time.
            d = 1;
            while d == 1 {
                ys = f(ys);
                d = gcd(x.abs_diff(ys), n);
            }
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as a sorted list of `(prime, exponent)` pairs.
///
/// The product of `p^e` over the entries reconstructs the input exactly;
/// `Factorization::of(1)` is the empty product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn of(n: u64) -> Self {
        assert!(n >= 1, "factorize requires n >= 1");
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        for p in [2u64, 3, 5] {
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        // Wheel over numbers coprime to 30, up to the 2^20 trial bound.
        const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
        let mut d = 7u64;
        let mut w = 0usize;
        while d <= 1 << 20 && d as u128 * d as u128 <= m as u128 {
            if m.is_multiple_of(d) {
                let mut e = 0;
                while m.is_multiple_of(d) {
                    m /= d;
                    e += 1;
                }
                factors.push((d, e));
            }
            d += WHEEL[w];
            w = (w + 1) & 7;
        }
        if m > 1 {
            if m <= (1 << 40) || is_prime(m) {
                // After trial division to 2^20 a cofactor below 2^40 is prime.
                factors.push((m, 1));
            } else {
                let mut stack = vec![m];
                let mut large: Vec<u64> = Vec::new();
                while let Some(v) = stack.pop() {
                    if is_prime(v) {
                        large.push(v);
                    } else {
                        let d = pollard_brent(v);
                        stack.push(d);
                        stack.push(v / d);
                    }
                }
                large.sort_unstable();
                let mut i = 0;
                while i < large.len() {
                    let p = large[i];
                    let mut e = 0;
                    while i < large.len() && large[i] == p {
                        e += 1;
                        i += 1;
                    }
                    factors.push((p, e));
                }
            }
        }
        factors.sort_unstable_by_key(|&(p, _)| p);
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Reconstruct the factored integer.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }

    /// Number of positive divisors, `Π (e_i + 1)`.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// Euler totient.
    pub fn phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Product of the distinct prime divisors.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    /// The coprime prime-power blocks `p^e` of the factored integer.
    pub fn prime_power_blocks(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = divs.len();
            let mut pw = 1u64;
            for _ in 0..e {
                pw *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pw);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Complete prime factorization of `n >= 1`.
pub fn factorize(n: u64) -> Factorization {
    Factorization::of(n)
}

/// Divisor function τ(n).
pub fn tau(n: u64) -> u64 {
    Factorization::of(n).tau()
}

/// Euler totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    Factorization::of(n).phi()
}

/// Radical ξ(q): the product of the distinct primes dividing q; 1 for q = 1.
pub fn radical(q: u64) -> u64 {
    Factorization::of(q).radical()
}

/// Jacobi symbol `(k/q)` for odd positive q, with `(k/1) = 1`.
pub fn jacobi(k: i64, q: u64) -> Result<i32> {
    if q.is_multiple_of(2) {
        return Err(Error::EvenModulus { q });
    }
    let mut n = q;
    let mut a = reduce_mod(k, q);
    let mut sign = 1i32;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(10, 0), 10);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn gcd3_cases() {
        assert_eq!(gcd3(12, 6, 9), 3);
        assert_eq!(gcd3(0, 0, 5), 5);
        assert_eq!(gcd3(7, 11, 13), 1);
    }

    #[test]
    fn mod_inverse_cases() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(
            mod_inverse(4, 8),
            Err(Error::NotCoprime { a: 4, q: 8 })
        );
        assert_eq!(mod_inverse(1, 1).unwrap(), 0);
        assert_eq!(mod_inverse(-1, 5).unwrap(), 4);
    }

    #[test]
    fn factorize_cases() {
        assert_eq!(
            Factorization::of(360).factors(),
            &[(2, 3), (3, 2), (5, 1)]
        );
        assert!(Factorization::of(1).factors().is_empty());
        assert_eq!(Factorization::of(1).value(), 1);
        assert_eq!(
            Factorization::of(10403).factors(),
            &[(101, 1), (103, 1)]
        );
    }

    #[test]
    fn factorize_large_semiprime() {
        // 64-bit stress for the rho path: product of two 31-bit primes.
        let p = 2147483647u64; // 2^31 - 1
        let q = 2147483629u64;
        let f = Factorization::of(p * q);
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
    }

    #[test]
    fn tau_phi_radical_cases() {
        assert_eq!(tau(12), 6);
        assert_eq!(tau(1), 1);
        assert_eq!(tau(1024), 11);
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(radical(12), 6);
        assert_eq!(radical(8), 2);
        assert_eq!(radical(30), 30);
        assert_eq!(radical(1), 1);
    }

    #[test]
    fn jacobi_cases() {
        assert_eq!(jacobi(1, 9).unwrap(), 1);
        assert_eq!(jacobi(3, 5).unwrap(), -1);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(5, 1).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(2, 4), Err(Error::EvenModulus { q: 4 }));
    }

    #[test]
    fn jacobi_euler_criterion_small_primes() {
        for p in (3u64..=100).filter(|&p| is_prime(p)) {
            for k in 0..p {
                let euler = pow_mod(k, (p - 1) / 2, p);
                let expect = if euler == 0 {
                    0
                } else if euler == 1 {
                    1
                } else {
                    assert_eq!(euler, p - 1);
                    -1
                };
                assert_eq!(jacobi(k as i64, p).unwrap(), expect, "k={k} p={p}");
            }
        }
    }

    #[test]
    fn is_prime_known_values() {
        assert!(is_prime(2));
        assert!(is_prime(999983));
        assert!(!is_prime(1));
        assert!(!is_prime(10403));
        // Strong pseudoprime to several small bases.
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn divisors_of_60() {
        assert_eq!(
            Factorization::of(60).divisors(),
            vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]
        );
    }

    proptest! {
        #[test]
        fn factorization_reconstructs(n in 1u64..=1_000_000_000_000) {
            let f = Factorization::of(n);
            prop_assert_eq!(f.value(), n);
            for &(p, e) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert!(e >= 1);
            }
        }

        #[test]
        fn gcd_divides_both(u in 0u64..=u64::MAX / 2, v in 0u64..=u64::MAX / 2) {
            let g = gcd(u, v);
            if g != 0 {
                prop_assert_eq!(u % g, 0);
                prop_assert_eq!(v % g, 0);
            } else {
                prop_assert_eq!((u, v), (0, 0));
            }
        }

        #[test]
        fn mod_inverse_is_inverse(a in 1i64..=1_000_000, q in 2u64..=1_000_000) {
            match mod_inverse(a, q) {
                Ok(inv) => {
                    prop_assert_eq!(gcd(reduce_mod(a, q), q), 1);
                    prop_assert_eq!(mul_mod(reduce_mod(a, q), inv, q), 1 % q);
                }
                Err(_) => prop_assert!(gcd(reduce_mod(a, q), q) > 1),
            }
        }
    }
}
