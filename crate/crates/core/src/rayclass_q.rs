//! Generalized ray class groups of ℚ and the ray-class criterion for the
//! S-class Hilbert 90 property with base field ℚ.
//!
//! cl^S_𝔪(ℚ) = ((ℤ/m₀)^× × {±1}^inf) / ⟨image of −1, images of ℓ ∈ S⟩,
//! where a rational x maps to (x mod m₀, sign x). The unit group mod m₀ is
//! split into cyclic CRT factors; coordinates are discrete logarithms.

use crate::abgroup::{relation_invariants, FinAbGroup};
use crate::arith::{gcd_u64, is_prime_u64, mul_mod, pow_mod};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::HashMap;

pub const MAX_MODULUS: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayClassInputQ {
    pub m0: u64,
    pub inf: bool,
    pub s: Vec<u64>,
}

fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// One cyclic factor of (ℤ/m₀)^×: the subgroup generated by `gen` modulo
/// the prime power `modulus`, of order `order`.
#[derive(Clone, Debug)]
struct CyclicFactor {
    modulus: u64,
    gen: u64,
    order: u64,
    /// for 2^a with a ≥ 3 the group is ⟨−1⟩ × ⟨5⟩; this marks the ⟨5⟩ part
    two_adic: bool,
}

fn primitive_root(q: u64, qa: u64) -> u64 {
    let phi_q = q - 1;
    let fs = factor(phi_q);
    let phi = qa / q * (q - 1);
    let pf = factor(phi);
    for g in 2..q.max(3) {
        if fs.iter().all(|&(r, _)| pow_mod(g, phi_q / r, q) != 1) {
            // a primitive root mod q stays primitive mod q^a unless g^{q−1} ≡ 1 mod q²
            let g = if qa > q && pow_mod(g, q - 1, q * q) == 1 {
                g + q
            } else {
                g
            };
            debug_assert!(pf.iter().all(|&(r, _)| pow_mod(g, phi / r, qa) != 1));
            return g;
        }
    }
    unreachable!("every odd prime power has a primitive root")
}

fn cyclic_factors(m0: u64) -> Vec<CyclicFactor> {
    let mut out = Vec::new();
    for (q, a) in factor(m0) {
        let qa = q.pow(a);
        if q == 2 {
            match a {
                1 => {}
                2 => out.push(CyclicFactor {
                    modulus: 4,
                    gen: 3,
                    order: 2,
                    two_adic: false,
                }),
                _ => {
                    out.push(CyclicFactor {
                        modulus: qa,
                        gen: qa - 1,
                        order: 2,
                        two_adic: false,
                    });
                    out.push(CyclicFactor {
                        modulus: qa,
                        gen: 5,
                        order: qa / 4,
                        two_adic: true,
                    });
                }
            }
        } else {
            out.push(CyclicFactor {
                modulus: qa,
                gen: primitive_root(q, qa),
                order: qa / q * (q - 1),
                two_adic: false,
            });
        }
    }
    out
}

/// k with g^k ≡ x (mod m), 0 ≤ k < order, by baby-step giant-step.
fn bsgs(g: u64, x: u64, order: u64, m: u64) -> Option<u64> {
    let step = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = 1;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, g, m);
    }
    // g^{−step}
    let ginv = pow_mod(g, order - 1, m);
    let giant = pow_mod(ginv, step, m);
    let mut y = x % m;
    for i in 0..=step {
        if let Some(&j) = baby.get(&y) {
            let k = i * step + j;
            if k < order {
                return Some(k);
            }
        }
        y = mul_mod(y, giant, m);
    }
    None
}

/// Exponent vector of x ∈ (ℤ/m₀)^× in the cyclic factors.
fn coordinates(x: u64, factors: &[CyclicFactor]) -> Vec<u64> {
    let mut out = Vec::with_capacity(factors.len());
    let mut i = 0;
    while i < factors.len() {
        let f = &factors[i];
        let r = x % f.modulus;
        if f.modulus >= 8 && f.modulus.is_power_of_two() {
            // ±5^k
            let neg = r % 4 == 3;
            out.push(u64::from(neg));
            let pos = if neg { f.modulus - r } else { r };
            let g5 = &factors[i + 1];
            debug_assert!(g5.two_adic);
            out.push(
                bsgs(g5.gen, pos, g5.order, g5.modulus).expect("5 generates the +1 mod 4 part"),
            );
            i += 2;
        } else {
            out.push(bsgs(f.gen, r, f.order, f.modulus).expect("primitive root"));
            i += 1;
        }
    }
    out
}

/// Cyclic orders of the generators of (ℤ/m₀)^× × {±1}^inf followed by the
/// relation rows contributed by −1 and S.
fn ray_relations(inp: &RayClassInputQ) -> Result<Vec<Vec<BigInt>>> {
    if inp.m0 == 0 {
        return Err(Error::Invalid("m0 must be positive".into()));
    }
    if inp.m0 > MAX_MODULUS {
        return Err(Error::ModulusTooLarge(inp.m0));
    }
    for &l in &inp.s {
        if !is_prime_u64(l) {
            return Err(Error::Invalid(format!("{l} is not prime")));
        }
        if gcd_u64(l, inp.m0) != 1 {
            return Err(Error::NotCoprime);
        }
    }
    let factors = cyclic_factors(inp.m0);
    let mut orders: Vec<u64> = factors.iter().map(|f| f.order).collect();
    if inp.inf {
        orders.push(2);
    }
    let k = orders.len();
    let mut rels = Vec::new();
    for (i, &d) in orders.iter().enumerate() {
        let mut r = vec![BigInt::from(0); k];
        r[i] = BigInt::from(d);
        rels.push(r);
    }
    let image = |x: u64, negative: bool| -> Vec<BigInt> {
        let mut v: Vec<BigInt> = coordinates(x, &factors)
            .into_iter()
            .map(BigInt::from)
            .collect();
        if inp.inf {
            v.push(BigInt::from(u64::from(negative)));
        }
        v
    };
    if k > 0 {
        rels.push(image(inp.m0 - 1, true));
        for &l in &inp.s {
            rels.push(image(l % inp.m0, false));
        }
    }
    Ok(rels)
}

pub fn ray_class_group_q(inp: &RayClassInputQ) -> Result<FinAbGroup> {
    let rels = ray_relations(inp)?;
    if rels.is_empty() {
        return Ok(FinAbGroup::trivial());
    }
    Ok(relation_invariants(&rels))
}

/// Ramification of one finite prime of S in a cyclic extension L/ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RamData {
    pub prime: u64,
    pub e: u64,
    pub f: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub v0: u64,
    pub holds: bool,
    /// cl^{S_s'}_{𝔣'}(ℚ)
    pub group: FinAbGroup,
    pub s_s: Vec<u64>,
    pub f_prime: u64,
}

/// Conditions of the ray-class criterion over ℚ for one choice of v₀.
/// Condition (1) is automatic because cl(ℚ) = 0; condition (2) asks that
/// cl^{S_s'}_{𝔣'}(ℚ) has trivial p-part, where 𝔣' is 𝔣 with the v₀-part
/// removed and S_s' = {v ∈ S finite : p ∤ e_v f_v} ∪ {v₀}.
pub fn criterion_over_q(
    f0: u64,
    f_inf: bool,
    ram: &[RamData],
    p: u64,
    v0: u64,
) -> Result<CriterionOutcome> {
    if !is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if !ram.iter().any(|r| r.prime == v0) {
        return Err(Error::V0NotInS);
    }
    let mut f_prime = f0;
    while f_prime % v0 == 0 {
        f_prime /= v0;
    }
    let mut s_s: Vec<u64> = ram
        .iter()
        .filter(|r| r.prime == v0 || (r.e * r.f) % p != 0)
        .map(|r| r.prime)
        .collect();
    s_s.sort_unstable();
    s_s.dedup();
    let group = ray_class_group_q(&RayClassInputQ {
        m0: f_prime,
        inf: f_inf,
        s: s_s.clone(),
    })?;
    Ok(CriterionOutcome {
        v0,
        holds: group.p_part(p).is_trivial(),
        group,
        s_s,
        f_prime,
    })
}
