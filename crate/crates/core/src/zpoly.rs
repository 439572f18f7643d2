//! Dense univariate polynomials over ℤ and ℚ (ascending coefficients).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree, with the zero polynomial reported as `None`.
pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn from_i64(c: &[i64]) -> ZPoly {
    c.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    let mut d: ZPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    trim(&mut d);
    d
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub fn eval(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn to_q(p: &[BigInt]) -> QPoly {
    p.iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

/// Remainder of `a` modulo `b` over ℚ (`b` nonzero).
pub fn q_rem(a: &[BigRational], b: &[BigRational]) -> QPoly {
    let db = degree(b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r: QPoly = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * bc;
        }
        trim(&mut r);
    }
    r
}

fn sign_at_pos_inf(p: &[BigRational]) -> i32 {
    match degree(p) {
        None => 0,
        Some(d) => {
            if p[d].is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn sign_at_neg_inf(p: &[BigRational]) -> i32 {
    match degree(p) {
        None => 0,
        Some(d) => {
            let s = if p[d].is_positive() { 1 } else { -1 };
            if d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

/// Sturm chain of a squarefree polynomial.
pub fn sturm_chain(p: &[BigInt]) -> Vec<QPoly> {
    let mut chain = vec![to_q(p), to_q(&derivative(p))];
    loop {
        let n = chain.len();
        if degree(&chain[n - 1]).is_none() {
            chain.pop();
            break;
        }
        if degree(&chain[n - 1]) == Some(0) {
            break;
        }
        let r = q_rem(&chain[n - 2], &chain[n - 1]);
        let neg: QPoly = r.into_iter().map(|c| -c).collect();
        chain.push(neg);
    }
    chain
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a squarefree integer polynomial.
pub fn count_real_roots(p: &[BigInt]) -> usize {
    let chain = sturm_chain(p);
    let at_neg = sign_changes(chain.iter().map(|q| sign_at_neg_inf(q)));
    let at_pos = sign_changes(chain.iter().map(|q| sign_at_pos_inf(q)));
    at_neg - at_pos
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (Some(m), Some(n)) = (degree(a), degree(b)) else {
        return BigInt::zero();
    };
    if m == 0 && n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for r in 0..n {
        for (i, c) in a.iter().enumerate().take(m + 1) {
            s[r][r + m - i] = c.clone();
        }
    }
    for r in 0..m {
        for (i, c) in b.iter().enumerate().take(n + 1) {
            s[n + r][r + n - i] = c.clone();
        }
    }
    crate::matrix::det_bareiss(&s)
}

/// Discriminant of a monic polynomial: (−1)^{n(n−1)/2} · Res(f, f').
pub fn discriminant_monic(f: &[BigInt]) -> BigInt {
    let n = degree(f).unwrap_or(0);
    let r = resultant(f, &derivative(f));
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Render a polynomial as text in the variable `var`.
pub fn render(p: &[BigInt], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let sign = if c.is_negative() { "-" } else { "+" };
        let body = match i {
            0 => mag.to_string(),
            _ => {
                let mono = if i == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{i}")
                };
                if mag.is_one() {
                    mono
                } else {
                    format!("{mag}*{mono}")
                }
            }
        };
        parts.push((sign, body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (sign, body)) in parts.into_iter().enumerate() {
        if k == 0 {
            if sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(if sign == "-" { " - " } else { " + " });
        }
        s.push_str(&body);
    }
    s
}
