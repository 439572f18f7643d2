//! Twenty real quadratic fields with internally computed fundamental units,
//! shared by the τ property tests and the acceptance run.

#![allow(dead_code)]

use h90::arith::is_prime_u64;
use h90::config::Config;
use h90::lattice::units::find_units;
use h90::lattice::{prime_power_generator, NfContext};
use h90::nf::NFElement;
use h90::prime_split::{split_type, PrimeSplitType};
use h90::tau::{rank_fp, tau_coordinate, tau_matrix};
use h90::NumberField;
use num_bigint::BigInt;
use num_traits::One;
use std::sync::OnceLock;

pub const DS: [i64; 20] = [
    2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30, 31, 33,
];

pub struct Field {
    pub d: i64,
    pub ctx: NfContext,
    pub units: Vec<NFElement>,
}

pub fn fields() -> &'static Vec<Field> {
    static F: OnceLock<Vec<Field>> = OnceLock::new();
    F.get_or_init(|| {
        DS.iter()
            .map(|&d| {
                let k = NumberField::from_i64(&[-d, 0, 1]).unwrap();
                let ctx = NfContext::maximal(k, 1000);
                let units = find_units(&ctx, Config::default().unit_effort);
                assert_eq!(units.len(), 1, "no fundamental unit for d = {d}");
                Field { d, ctx, units }
            })
            .collect()
    })
}

/// Odd split primes up to `bound`.
pub fn split_primes(f: &Field, bound: u64) -> Vec<PrimeSplitType> {
    (3..=bound)
        .filter(|&p| is_prime_u64(p))
        .filter_map(|p| split_type(&f.ctx.k, p, Some(&f.ctx.o)).ok())
        .filter(|st| st.unramified && st.primes.len() == 2)
        .collect()
}

pub fn tau(st: &PrimeSplitType, q: usize, a: &NFElement) -> Option<Vec<u64>> {
    tau_coordinate(st.model.as_ref().unwrap(), &st.primes[q], a).ok()
}

pub fn small_elem(k: &NumberField, a: i64, b: i64) -> NFElement {
    k.elem(&[a, b])
}

#[derive(Debug, Default)]
pub struct SuiteTally {
    pub primes: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

/// Every invariant at every split p ≤ 200 of every field: additivity and
/// vanishing on p-th powers over a fixed grid of elements, rank monotonicity
/// under generator subsets, and equal ranks for both choices of 𝔭.
pub fn tau_invariant_suite() -> SuiteTally {
    let bounds = Config::default().bounds();
    let mut t = SuiteTally::default();
    let grid: Vec<(i64, i64)> = [(3, 1), (1, 5), (7, -2), (-4, 3), (11, 6), (2, -9)].to_vec();
    for f in fields() {
        let k = &f.ctx.k;
        let mut elems: Vec<NFElement> = grid.iter().map(|&(a, b)| small_elem(k, a, b)).collect();
        elems.push(f.units[0].clone());
        for st in split_primes(f, 200) {
            t.primes += 1;
            let p = st.p;
            let mut fail = |what: &str| t.violations.push(format!("d = {} p = {p}: {what}", f.d));
            let mut checks = 0;
            for q in 0..2 {
                for (i, x) in elems.iter().enumerate() {
                    let Some(tx) = tau(&st, q, x) else { continue };
                    checks += 1;
                    match tau(&st, q, &k.pow(x, p)) {
                        Some(v) if v.iter().all(|&c| c == 0) => {}
                        _ => fail("p-th power"),
                    }
                    for y in &elems[i..] {
                        let Some(ty) = tau(&st, q, y) else { continue };
                        checks += 1;
                        let sum: Vec<u64> = tx.iter().zip(&ty).map(|(u, v)| (u + v) % p).collect();
                        if tau(&st, q, &k.mul(x, y)) != Some(sum) {
                            fail("additivity");
                        }
                    }
                }
                if tau(&st, q, &NFElement::from_int(2, BigInt::one())) != Some(vec![0]) {
                    fail("τ(1) ≠ 0");
                }
            }
            let mut ranks = Vec::new();
            for c in 0..2 {
                let Ok(g) = prime_power_generator(&f.ctx, &st, &st.primes[c], &f.units, &bounds)
                else {
                    fail("generator search failed");
                    continue;
                };
                let Some(g) = g.gen else {
                    fail("no generator");
                    continue;
                };
                let all = vec![f.units[0].clone(), g];
                let full = rank_fp(&tau_matrix(&st, c, &all).unwrap().entries, p);
                for sub in [&all[..1], &all[1..], &all[..0]] {
                    checks += 1;
                    if rank_fp(&tau_matrix(&st, c, sub).unwrap().entries, p) > full {
                        fail("monotonicity");
                    }
                }
                ranks.push(full);
            }
            checks += 1;
            if ranks.len() == 2 && ranks[0] != ranks[1] {
                fail("choice of 𝔭");
            }
            t.checks += checks;
        }
    }
    t
}
