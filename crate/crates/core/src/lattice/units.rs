//! Best-effort unit discovery.
//!
//! Real quadratic orders get the exact fundamental unit from the continued
//! fraction of their generator ω. Other fields are searched: short
//! vectors of the order under randomly weighted Minkowski embeddings are
//! bucketed by absolute norm, and quotients of equal-norm pairs that land
//! in the order are kept whenever they raise the logarithmic rank.

use super::reduce::{fincke_pohst, lll_reduce};
use super::NfContext;
use crate::nf::NFElement;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

/// Tolerance for the floating-point rank of logarithmic vectors.
pub const LOG_RANK_TOL: f64 = 1e-8;

/// Rank of a family of real vectors by Gram–Schmidt, with a residual
/// tolerance relative to each vector's length.
pub fn log_rank(vectors: &[Vec<f64>]) -> usize {
    independent_subset(vectors).len()
}

/// Indices of a greedily chosen maximal independent subfamily.
pub fn independent_subset(vectors: &[Vec<f64>]) -> Vec<usize> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut keep = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut w = v.clone();
        for b in &basis {
            let c: f64 = w.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in w.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let res = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if res > LOG_RANK_TOL * (1.0 + len) {
            for x in w.iter_mut() {
                *x /= res;
            }
            basis.push(w);
            keep.push(idx);
        }
    }
    keep
}

/// Weighted log embedding w_i·log|σ_i(a)|.
pub fn log_vector(ctx: &NfContext, a: &NFElement) -> Vec<f64> {
    ctx.emb
        .log_abs(a)
        .iter()
        .enumerate()
        .map(|(i, l)| ctx.emb.weight(i) * l)
        .collect()
}

pub fn is_unit(ctx: &NfContext, a: &NFElement) -> bool {
    if a.is_zero() || ctx.o.int_coords(a).is_none() {
        return false;
    }
    let n = ctx.k.norm(a);
    n.is_integer() && n.to_integer().abs().is_one()
}

pub fn find_units(ctx: &NfContext, effort: u64) -> Vec<NFElement> {
    let rank = ctx.emb.r() - 1;
    if rank == 0 {
        return Vec::new();
    }
    if ctx.k.n == 2 {
        if let Some(u) = real_quadratic_unit(ctx, effort) {
            return vec![u];
        }
        return Vec::new();
    }
    search_units(ctx, effort)
}

/// ω = (s + √d)/2 generating an order of discriminant d, written in θ.
fn omega(ctx: &NfContext, d: &BigInt) -> (NFElement, BigInt) {
    let k = &ctx.k;
    // f = x² + b x + c, √disc_f = 2θ + b, √d = √disc_f / index
    let b = k.poly[1].clone();
    let idx = ctx.o.index.clone();
    let s = if (d % 2u32).is_zero() {
        BigInt::zero()
    } else {
        BigInt::one()
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c0 = (BigRational::from_integer(s.clone()) + BigRational::new(b, idx.clone())) * &half;
    let c1 = BigRational::new(BigInt::from(2), idx) * &half;
    (NFElement::from_rational_coords(&[c0, c1]), s)
}

/// Fundamental unit of a real quadratic order, normalized to exceed 1 at
/// the largest real root.
fn real_quadratic_unit(ctx: &NfContext, max_steps: u64) -> Option<NFElement> {
    let d = ctx.o.discriminant(&ctx.k);
    if !d.is_positive() {
        return None;
    }
    let (w, s) = omega(ctx, &d);
    let sq = d.sqrt();
    let four = BigInt::from(4);
    let cst = (&s * &s - &d) / &four;
    // convergents of (P + √d)/Q with P = s, Q = 2
    let (mut pp, mut qq) = (s.clone(), BigInt::from(2));
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..max_steps.max(16) {
        let a = (&pp + &sq).div_floor(&qq);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let norm = &h1 * &h1 - &s * &h1 * &k1 + &k1 * &k1 * &cst;
        if norm.abs().is_one() {
            // ε = h − k·ω
            let kw = NFElement::from_rational_coords(
                &w.num
                    .iter()
                    .map(|x| BigRational::new(x * &k1, w.den.clone()))
                    .collect::<Vec<_>>(),
            );
            let eps = ctx.k.sub(&NFElement::from_int(2, h1.clone()), &kw);
            return Some(normalize_quadratic(ctx, eps));
        }
        let p2 = &a * &qq - &pp;
        let q2 = (&d - &p2 * &p2) / &qq;
        pp = p2;
        qq = q2;
    }
    None
}

fn normalize_quadratic(ctx: &NfContext, eps: NFElement) -> NFElement {
    let k = &ctx.k;
    let inv = k.inverse(&eps).expect("unit is invertible");
    let cands = [eps.clone(), k.neg(&eps), inv.clone(), k.neg(&inv)];
    let last = ctx.emb.r1 - 1;
    cands
        .into_iter()
        .find(|c| ctx.emb.eval(c)[last].re > 1.0)
        .expect("one associate exceeds 1")
}

fn search_units(ctx: &NfContext, effort: u64) -> Vec<NFElement> {
    let k = &ctx.k;
    let n = k.n;
    let r = ctx.emb.r();
    let target = r - 1;
    let mut units: Vec<NFElement> = Vec::new();
    let mut logs: Vec<Vec<f64>> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0417_5eed);
    let mut buckets: BTreeMap<BigInt, Vec<NFElement>> = BTreeMap::new();
    let per_round = (effort / 64).clamp(200, 20_000);
    let rounds = (effort / per_round).max(1);
    let covol = ctx.k.disc_f.abs().to_f64().unwrap_or(f64::MAX).sqrt()
        / ctx.o.index.to_f64().unwrap_or(1.0);
    let consider = |a: NFElement, units: &mut Vec<NFElement>, logs: &mut Vec<Vec<f64>>| {
        if !is_unit(ctx, &a) {
            return;
        }
        let lv = log_vector(ctx, &a);
        let mut trial = logs.clone();
        trial.push(lv.clone());
        if log_rank(&trial) > logs.len() {
            logs.push(lv);
            units.push(a);
        }
    };
    for round in 0..rounds {
        if units.len() >= target {
            break;
        }
        // weight direction in the trace-zero hyperplane; round 0 is unweighted
        let mut v: Vec<f64> = (0..r)
            .map(|_| {
                if round == 0 {
                    0.0
                } else {
                    rng.gen_range(-1.0..1.0)
                }
            })
            .collect();
        let scale = if round == 0 {
            0.0
        } else {
            rng.gen_range(0.5..6.0)
        };
        let tot: f64 = (0..r).map(|i| ctx.emb.weight(i) * v[i]).sum::<f64>() / n as f64;
        for x in v.iter_mut() {
            *x = (*x - tot) * scale;
        }
        let rows: Vec<Vec<f64>> = ctx
            .basis_emb
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| x * (-v[ctx.emb.coord_owner(j)]).exp())
                    .collect()
            })
            .collect();
        let Ok((red, u)) = lll_reduce(&rows, 0.99) else {
            continue;
        };
        // radius giving roughly per_round points
        let vol_unit = std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n + 2);
        let rad = (per_round as f64 * covol / vol_unit).powf(1.0 / n as f64);
        let bound = rad * rad;
        let mut found: Vec<Vec<BigInt>> = Vec::new();
        fincke_pohst(&red, bound, per_round * 4, |x| {
            let mut c = vec![BigInt::zero(); n];
            for (xi, ui) in x.iter().zip(&u) {
                if *xi == 0 {
                    continue;
                }
                for (cj, uij) in c.iter_mut().zip(ui) {
                    *cj += BigInt::from(*xi) * BigInt::from(*uij);
                }
            }
            found.push(c);
            false
        });
        for c in found {
            let a = ctx.o.elem(k, &c);
            let nm = k.norm(&a).to_integer().abs();
            if nm.is_zero() {
                continue;
            }
            if nm.is_one() {
                consider(a, &mut units, &mut logs);
                continue;
            }
            let bucket = buckets.entry(nm).or_default();
            if bucket.len() < 24 {
                for b in bucket.iter() {
                    if let Some(binv) = k.inverse(b) {
                        consider(k.mul(&a, &binv), &mut units, &mut logs);
                    }
                }
                bucket.push(a);
            }
            if units.len() >= target {
                break;
            }
        }
    }
    units
}

/// Γ(m/2).
fn gamma_half(m: usize) -> f64 {
    if m % 2 == 0 {
        (1..m / 2).map(|i| i as f64).product()
    } else {
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < m as f64 / 2.0 - 0.25 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::order::Order;

    fn ctx(c: &[i64]) -> NfContext {
        let k = NumberField::from_i64(c).unwrap();
        let o = Order::equation_order(&k);
        NfContext::new(k, o)
    }

    #[test]
    fn pell_units() {
        let c = ctx(&[-2, 0, 1]);
        assert_eq!(find_units(&c, 1000), vec![c.k.elem(&[1, 1])]);
        let c = ctx(&[-3, 0, 1]);
        assert_eq!(find_units(&c, 1000), vec![c.k.elem(&[2, 1])]);
    }

    #[test]
    fn imaginary_quadratic_has_no_units() {
        assert!(find_units(&ctx(&[5, 0, 1]), 1000).is_empty());
    }

    #[test]
    fn golden_ratio_order() {
        // x² − x − 1: ω = θ, fundamental unit θ
        let c = ctx(&[-1, -1, 1]);
        let u = find_units(&c, 1000);
        assert_eq!(u.len(), 1);
        assert!(is_unit(&c, &u[0]));
        let l = log_vector(&c, &u[0]);
        assert!((l[1].abs() - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn large_pell_period() {
        // ℤ[√94]: fundamental unit 2143295 + 221064√94
        let c = ctx(&[-94, 0, 1]);
        let u = find_units(&c, 1000);
        assert_eq!(u, vec![c.k.elem(&[2143295, 221064])]);
    }

    #[test]
    fn simplest_cubic_units() {
        // λ = 1 in X³ + λX² + (λ−3)X − 1
        let c = ctx(&[-1, -2, 1, 1]);
        let u = find_units(&c, 20_000);
        assert_eq!(u.len(), 2);
        assert!(u.iter().all(|a| is_unit(&c, a)));
    }

    #[test]
    fn rank_of_dependent_logs() {
        assert_eq!(log_rank(&[vec![1.0, -1.0], vec![-2.0, 2.0]]), 1);
        assert_eq!(log_rank(&[vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]]), 2);
    }
}
