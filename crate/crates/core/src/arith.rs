//! Small-integer modular arithmetic, primality and prime sieving.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 && old_r != -1 {
        return None;
    }
    let inv = (old_s * old_r).rem_euclid(m as i128);
    Some(inv as u64)
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Reduce a big integer into `[0, m)`.
pub fn big_mod(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= limit`, via a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Exponent of `p` in `n` (n nonzero) and the cofactor.
pub fn valuation(n: &BigInt, p: u64) -> (u32, BigInt) {
    let bp = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    if m.is_zero() {
        return (u32::MAX, m);
    }
    loop {
        let (q, r) = m.div_rem(&bp);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    (v, m)
}

/// Partial factorization of a nonzero integer by trial division up to `bound`.
///
/// Returns the prime factors found with exponents and the unfactored cofactor
/// (positive, free of primes `<= bound`).
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(u64, u32)>, BigInt) {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return (out, m);
    }
    let mut p = 2u64;
    while p <= bound {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let (v, rest) = valuation(&m, p);
        if v > 0 {
            out.push((p, v));
            m = rest;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() && m <= BigInt::from(bound) * BigInt::from(bound) {
        // what remains is a single prime
        let q = m.to_u64();
        if let Some(q) = q {
            if let Some(pos) = out.iter().position(|(r, _)| *r == q) {
                out[pos].1 += 1;
            } else {
                out.push((q, 1));
            }
            out.sort();
            return (out, BigInt::one());
        }
    }
    (out, m)
}

/// Integer square root of a nonnegative big integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Round-half-even rendering of a rational `num/den` with `places` decimals.
pub fn render_decimal(num: &BigInt, den: &BigInt, places: u32) -> String {
    assert!(den.is_positive());
    let scale = BigInt::from(10u32).pow(places);
    let scaled = num * &scale;
    let (mut q, r) = scaled.div_mod_floor(den);
    let twice = &r * 2;
    if twice > *den || (twice == *den && q.is_odd()) {
        q += 1;
    }
    let neg = q.is_negative();
    let q = q.abs();
    let s = q.to_string();
    let body = if places == 0 {
        s
    } else {
        let p = places as usize;
        let padded = if s.len() <= p {
            format!("{}{}", "0".repeat(p + 1 - s.len()), s)
        } else {
            s
        };
        let (int_part, frac) = padded.split_at(padded.len() - p);
        format!("{int_part}.{frac}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_power() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(pow_mod(11, 6, 49), 15);
        assert_eq!(pow_mod(3, 10, 121), 1);
    }

    #[test]
    fn prime_counts() {
        assert_eq!(primes_up_to(100_000).len(), 9592);
        assert!(is_prime_u64(1_162_223));
        assert!(!is_prime_u64(1_162_221));
    }

    #[test]
    fn trial_division() {
        let (f, rest) = trial_factor(&BigInt::from(5_035_261_952i64), 1000);
        assert_eq!(f, vec![(2, 21), (7, 4)]);
        assert_eq!(rest, BigInt::one());
        let (f, rest) = trial_factor(&BigInt::from(49_960_857i64), 100);
        assert_eq!(f, vec![(3, 1)]);
        assert_eq!(rest, BigInt::from(16_653_619));
    }

    #[test]
    fn half_even_rounding() {
        let r = |n: i64, d: i64, k| render_decimal(&BigInt::from(n), &BigInt::from(d), k);
        assert_eq!(r(25, 10, 0), "2");
        assert_eq!(r(35, 10, 0), "4");
        assert_eq!(r(91617, 10, 1), "9161.7");
        assert_eq!(r(1, 20, 1), "0.0");
        assert_eq!(r(3, 20, 1), "0.2");
        assert_eq!(r(-3, 20, 1), "-0.2");
    }
}
