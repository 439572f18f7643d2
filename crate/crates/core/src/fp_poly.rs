//! Polynomials over F_p with word-size p: arithmetic, squarefree
//! decomposition, distinct-degree and Cantor–Zassenhaus equal-degree
//! factorization.
//!
//! Coefficients are ascending and trimmed; the zero polynomial is empty.
//! Factor lists come back in canonical order (degree, then coefficients) so
//! results never depend on the random splits taken along the way.

use crate::arith::{add_mod, inv_mod, mul_mod, pow_mod, sub_mod};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FpPoly = Vec<u64>;

const SPLIT_SEED: u64 = 0x5eed_cafe_f00d_0001;

pub fn trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0] == 1
}

pub fn reduce(a: &[i64], p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    trim(&mut out);
    out
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out: FpPoly = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
        .collect();
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], c: u64, p: u64) -> FpPoly {
    let mut out: FpPoly = a.iter().map(|&x| mul_mod(x, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let m = p as u128;
    // accumulate in u128 and reduce lazily; p < 2^63 keeps products below 2^126
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = acc[i + j] + x as u128 * y as u128;
            acc[i + j] = if t >= m * m { t % m } else { t };
        }
    }
    let mut out: FpPoly = acc.into_iter().map(|t| (t % m) as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly) {
    let db = deg(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r: FpPoly = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = mul_mod(r[k], inv, p);
        if c == 0 {
            continue;
        }
        let shift = k - db;
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, bc, p), p);
        }
    }
    trim(&mut q);
    trim(&mut r);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> FpPoly {
    match deg(a) {
        None => Vec::new(),
        Some(d) => scale(a, inv_mod(a[d], p).expect("nonzero lead"), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> FpPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Extended gcd: `(g, s, t)` with `s·a + t·b = g`, `g` monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    match deg(&r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = inv_mod(r0[d], p).expect("nonzero lead");
            (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
        }
    }
}

pub fn derivative(a: &[u64], p: u64) -> FpPoly {
    let mut out: FpPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(&mut out);
    out
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> FpPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> FpPoly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

/// Square-free decomposition: monic `(s_i, i)` with `f = lc · ∏ s_i^i`.
pub fn squarefree_decomposition(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let f = monic(f, p);
    let mut out = Vec::new();
    sqf_rec(&f, p, 1, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| canonical_cmp(&a.0, &b.0)));
    out
}

fn sqf_rec(f: &[u64], p: u64, mult: u32, out: &mut Vec<(FpPoly, u32)>) {
    if deg(f).unwrap_or(0) == 0 {
        return;
    }
    let df = derivative(f, p);
    if df.is_empty() {
        // f is a p-th power: take the p-th root coefficientwise
        let root: FpPoly = f.iter().step_by(p as usize).copied().collect();
        sqf_rec(&root, p, mult * p as u32, out);
        return;
    }
    // Yun-style loop
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z).unwrap_or(0) > 0 {
            out.push((z, mult * i));
        }
        i += 1;
        w = y;
        c = divrem(&c, &w, p).0;
    }
    if deg(&c).unwrap_or(0) > 0 {
        let root: FpPoly = c.iter().step_by(p as usize).copied().collect();
        sqf_rec(&root, p, mult * p as u32, out);
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// pairs `(d, product of all irreducible factors of degree d)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, FpPoly)> {
    let mut out = Vec::new();
    let mut rest = monic(f, p);
    let x: FpPoly = vec![0, 1];
    let mut h = rem(&x, &rest, p);
    let mut d = 0;
    while let Some(dr) = deg(&rest) {
        if dr == 0 {
            break;
        }
        d += 1;
        if 2 * d > dr {
            out.push((dr, rest.clone()));
            break;
        }
        h = powmod(&h, p, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if !is_one(&g) {
            out.push((d, g.clone()));
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    out
}

/// Equal-degree splitting of a monic squarefree `f` whose irreducible
/// factors all have degree `d`.
pub fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = deg(f).unwrap_or(0);
    if n == d {
        return vec![f.to_vec()];
    }
    if n == 0 {
        return Vec::new();
    }
    loop {
        let mut r: FpPoly = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut r);
        if deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let w = if p == 2 {
            // trace map r + r^2 + ... + r^{2^{d-1}}
            let mut acc = r.clone();
            let mut t = r.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            // r^{(p^d - 1)/2} = (r^{1 + p + ... + p^{d-1}})^{(p-1)/2}
            let mut norm = r.clone();
            let mut t = r.clone();
            for _ in 1..d {
                t = powmod(&t, p, f, p);
                norm = mulmod(&norm, &t, f, p);
            }
            let s = powmod(&norm, (p - 1) / 2, f, p);
            sub(&s, &[1], p)
        };
        let g = gcd(f, &w, p);
        let dg = deg(&g).unwrap_or(0);
        if dg == 0 || dg == n {
            continue;
        }
        let other = divrem(f, &g, p).0;
        let mut out = equal_degree(&g, d, p, rng);
        out.extend(equal_degree(&monic(&other, p), d, p, rng));
        return out;
    }
}

pub fn canonical_cmp(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// Complete factorization of a nonzero polynomial into monic irreducibles
/// with multiplicities, in canonical order.
pub fn factor(f: &[u64], p: u64) -> Vec<(FpPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ p);
    let mut out = Vec::new();
    for (s, m) in squarefree_decomposition(f, p) {
        for (d, g) in distinct_degree(&s, p) {
            for h in equal_degree(&g, d, p, &mut rng) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| canonical_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
    out
}

pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let df = derivative(f, p);
    !df.is_empty() && deg(&gcd(f, &df, p)) == Some(0)
}

/// Degrees of the irreducible factors of a squarefree `f` (sorted), without
/// splitting equal-degree parts.
pub fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        let k = deg(&g).unwrap_or(0) / d;
        out.extend(std::iter::repeat(d).take(k));
    }
    out.sort();
    out
}

pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = deg(f).unwrap_or(0);
    n >= 1 && is_squarefree(f, p) && factor_degrees(f, p) == vec![n]
}

/// `x^e mod f` evaluated at a scalar; convenience for tests.
pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p))
}

pub fn pow_scalar(x: u64, e: u64, p: u64) -> u64 {
    pow_mod(x, e, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn product(fs: &[(FpPoly, u32)], p: u64) -> FpPoly {
        let mut acc = vec![1u64];
        for (g, e) in fs {
            for _ in 0..*e {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn splits_x2_plus_1() {
        let f = vec![1, 0, 1];
        assert_eq!(factor(&f, 5), vec![(vec![2, 1], 1), (vec![3, 1], 1)]);
        assert_eq!(factor(&f, 3), vec![(vec![1, 0, 1], 1)]);
    }

    #[test]
    fn repeated_factors_and_char_p_roots() {
        // (x+1)^2 (x-2) over F_7
        let f = mul(&mul(&[1, 1], &[1, 1], 7), &[5, 1], 7);
        let fs = factor(&f, 7);
        assert_eq!(product(&fs, 7), f);
        assert!(fs.contains(&(vec![1, 1], 2)));
        // x^3 - 1 = (x - 1)^3 over F_3
        assert_eq!(factor(&[2, 0, 0, 1], 3), vec![(vec![2, 1], 3)]);
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        assert_eq!(factor(&[1, 0, 1, 0, 1], 2), vec![(vec![1, 1, 1], 2)]);
    }

    #[test]
    fn char_two_equal_degree() {
        // x^4 + x mod 2 = x (x + 1) (x^2 + x + 1)
        let fs = factor(&[0, 1, 0, 0, 1], 2);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs, 2), vec![0, 1, 0, 0, 1]);
    }

    #[test]
    fn quartic_mod_19_brute_force() {
        let p = 19;
        let f = reduce(&[-11, 0, 0, 0, 1], p);
        let fs = factor(&f, p);
        assert_eq!(product(&fs, p), f);
        let roots: Vec<u64> = (0..p).filter(|&x| eval(&f, x, p) == 0).collect();
        let linear = fs.iter().filter(|(g, _)| g.len() == 2).count();
        assert_eq!(linear, roots.len());
        for (g, _) in &fs {
            assert!(is_irreducible(g, p));
        }
    }
}
