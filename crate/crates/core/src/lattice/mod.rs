//! Ideal lattices, Minkowski embedding and principal generator search.
//!
//! A generator search is certified: if the supplied units have full
//! logarithmic rank, every generator of I has an associate whose log
//! vector lies within a known distance of one of finitely many cell
//! centres, and each cell is enumerated completely under a weighted
//! embedding. Exhausting all cells proves I is not principal. With
//! fewer units the search is only a heuristic and failure is inconclusive.

pub mod embed;
pub mod ideal;
pub mod reduce;
pub mod units;

pub use embed::Embedding;
pub use ideal::IdealHNF;
pub use units::find_units;

use crate::error::{Error, Result};
use crate::nf::{NFElement, NumberField};
use crate::order::Order;
use crate::prime_split::{LocalPrime, PrimeSplitType};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use reduce::{fincke_pohst, lll_reduce, EnumOutcome};
use serde::Serialize;

/// A field together with a working order and its embedding data.
#[derive(Clone, Debug)]
pub struct NfContext {
    pub k: NumberField,
    pub o: Order,
    pub emb: Embedding,
    /// Minkowski vectors of the order basis
    pub basis_emb: Vec<Vec<f64>>,
}

impl NfContext {
    pub fn new(k: NumberField, o: Order) -> NfContext {
        let emb = Embedding::new(&k);
        let basis_emb = (0..o.n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); o.n];
                e[i] = BigInt::one();
                emb.minkowski(&o.elem(&k, &e))
            })
            .collect();
        NfContext {
            k,
            o,
            emb,
            basis_emb,
        }
    }

    /// Context over the maximal order (as far as trial division of the
    /// discriminant up to `trial_bound` can certify it).
    pub fn maximal(k: NumberField, trial_bound: u64) -> NfContext {
        let o = Order::maximal(&k, trial_bound);
        NfContext::new(k, o)
    }

    fn ideal_rows(&self, ideal: &IdealHNF) -> Vec<Vec<f64>> {
        ideal
            .mat
            .iter()
            .map(|row| {
                let mut v = vec![0.0; self.o.n];
                for (c, b) in row.iter().zip(&self.basis_emb) {
                    if c.is_zero() {
                        continue;
                    }
                    let cf = c.to_f64().unwrap_or(f64::NAN);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += cf * y;
                    }
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorStatus {
    Found,
    CertifiedNotPrincipal,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct GeneratorResult {
    pub status: GeneratorStatus,
    pub gen: Option<NFElement>,
    pub k_used: u32,
    /// lattice vectors visited
    pub enumerated: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub lll_delta: f64,
    pub hmax: u32,
    pub enum_cap: u64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            lll_delta: 0.99,
            hmax: 12,
            enum_cap: 10_000_000,
        }
    }
}

const CELL_DELTA: f64 = 0.35;
const MAX_CELLS: usize = 20_000;

/// Cell centres in log space, nearest the origin first, and the shared
/// bound δ on how far a log vector in a cell can stray from its centre.
fn cells(unit_logs: &[Vec<f64>], r: usize) -> (Vec<Vec<f64>>, f64) {
    let d = unit_logs.len();
    if d == 0 {
        return (vec![vec![0.0; r]], 0.0);
    }
    let spread = (0..r)
        .map(|i| unit_logs.iter().map(|l| l[i].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut m = (spread / (2.0 * CELL_DELTA)).ceil().max(1.0) as usize;
    while m > 1 && m.pow(d as u32) > MAX_CELLS {
        m -= 1;
    }
    let delta = spread / (2.0 * m as f64);
    let total = m.pow(d as u32);
    let mut out: Vec<(f64, usize, Vec<f64>)> = (0..total)
        .map(|idx| {
            let mut t = vec![0.0; d];
            let mut rest = idx;
            for tj in t.iter_mut() {
                *tj = -0.5 + ((rest % m) as f64 + 0.5) / m as f64;
                rest /= m;
            }
            let v: Vec<f64> = (0..r)
                .map(|i| t.iter().zip(unit_logs).map(|(tj, l)| tj * l[i]).sum())
                .collect();
            (t.iter().map(|x| x * x).sum(), idx, v)
        })
        .collect();
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    (out.into_iter().map(|c| c.2).collect(), delta)
}

/// Search for γ with (γ) = I.
pub fn principal_generator(
    ctx: &NfContext,
    ideal: &IdealHNF,
    units: &[NFElement],
    bounds: &SearchBounds,
) -> GeneratorResult {
    let n = ctx.o.n;
    let r = ctx.emb.r();
    // unweighted log|σ_i(u)|; the owners of Minkowski coordinates are scaled by e^{-v_i}
    let logs: Vec<Vec<f64>> = units.iter().map(|u| ctx.emb.log_abs(u)).collect();
    let weighted: Vec<Vec<f64>> = units.iter().map(|u| units::log_vector(ctx, u)).collect();
    let keep = units::independent_subset(&weighted);
    let complete = keep.len() == r - 1;
    let basis_logs: Vec<Vec<f64>> = keep.iter().map(|&i| logs[i].clone()).collect();
    let (centres, delta) = if complete {
        cells(&basis_logs, r)
    } else {
        // heuristic: a single cell with some slack for unbalanced generators
        (vec![vec![0.0; r]], 1.0)
    };
    let norm = ideal.norm.clone();
    let norm_f = norm.to_f64().unwrap_or(f64::INFINITY);
    let bound = n as f64 * norm_f.powf(2.0 / n as f64) * (2.0 * delta).exp() * (1.0 + 1e-6);
    let base = ctx.ideal_rows(ideal);
    let mut used = 0u64;
    let mut result = GeneratorResult {
        status: if complete {
            GeneratorStatus::CertifiedNotPrincipal
        } else {
            GeneratorStatus::Inconclusive
        },
        gen: None,
        k_used: 1,
        enumerated: 0,
    };
    for v in &centres {
        let rows: Vec<Vec<f64>> = base
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| x * (-v[ctx.emb.coord_owner(j)]).exp())
                    .collect()
            })
            .collect();
        let Ok((red, u)) = lll_reduce(&rows, bounds.lll_delta) else {
            result.status = GeneratorStatus::Inconclusive;
            break;
        };
        let mut hit: Option<NFElement> = None;
        let remaining = bounds.enum_cap.saturating_sub(used);
        let (outcome, count) = fincke_pohst(&red, bound, remaining, |x| {
            // cheap floating-point norm filter before the exact check
            let w: Vec<f64> = (0..n)
                .map(|j| {
                    x.iter()
                        .zip(&red)
                        .map(|(xi, b)| *xi as f64 * b[j])
                        .sum::<f64>()
                        * v[ctx.emb.coord_owner(j)].exp()
                })
                .collect();
            let mut lognorm: f64 = w[..ctx.emb.r1].iter().map(|xi| xi.abs().ln()).sum();
            for c in 0..ctx.emb.r2 {
                let (a, b) = (w[ctx.emb.r1 + 2 * c], w[ctx.emb.r1 + 2 * c + 1]);
                lognorm += ((a * a + b * b) / 2.0).ln();
            }
            if (lognorm - norm_f.ln()).abs() > 1e-3 * (1.0 + norm_f.ln().abs()) {
                return false;
            }
            let coeffs = combine_exact(x, &u, &ideal.mat);
            if verify_generator(ctx, ideal, &coeffs) {
                hit = Some(ctx.o.elem(&ctx.k, &coeffs));
                return true;
            }
            false
        });
        used += count.min(remaining);
        if let Some(g) = hit {
            result.status = GeneratorStatus::Found;
            result.gen = Some(g);
            break;
        }
        if outcome == EnumOutcome::Capped {
            result.status = GeneratorStatus::Inconclusive;
            break;
        }
    }
    result.enumerated = used;
    result
}

/// Order coordinates of Σ x_i (u · I)_i.
fn combine_exact(x: &[i64], u: &[Vec<i128>], mat: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = mat.len();
    let mut lat = vec![BigInt::zero(); n];
    for (xi, ui) in x.iter().zip(u) {
        if *xi == 0 {
            continue;
        }
        for (l, uij) in lat.iter_mut().zip(ui) {
            *l += BigInt::from(*xi) * BigInt::from(*uij);
        }
    }
    crate::matrix::vec_mul(&lat, mat)
}

/// Exact check that the element with order coordinates `c` generates I.
pub fn verify_generator(ctx: &NfContext, ideal: &IdealHNF, c: &[BigInt]) -> bool {
    if c.iter().all(|x| x.is_zero()) {
        return false;
    }
    let det = crate::matrix::det_bareiss(&ctx.o.mult_matrix(c)).abs();
    if det != ideal.norm {
        return false;
    }
    IdealHNF::principal(&ctx.o, c) == *ideal
}

/// The prime 𝔮 = pO + g(α)O of a split type, where α is θ or the local
/// model's primitive element.
pub fn prime_ideal(ctx: &NfContext, split: &PrimeSplitType, q: &LocalPrime) -> Result<IdealHNF> {
    let p = split.p;
    let g = q.g_bar.as_ref().ok_or(Error::UnsupportedP {
        p,
        reason: "no polynomial model for this prime",
    })?;
    let alpha = match split.model.as_ref().and_then(|m| m.alpha.clone()) {
        Some(a) => a,
        None => ctx.k.theta(),
    };
    let mut val = NFElement::from_int(ctx.k.n, BigInt::zero());
    for c in g.iter().rev() {
        val = ctx.k.mul(&val, &alpha);
        val = ctx
            .k
            .add(&val, &NFElement::from_int(ctx.k.n, BigInt::from(*c)));
    }
    let coords = ctx
        .o
        .int_coords(&val)
        .ok_or_else(|| Error::Invalid("prime generator outside the working order".into()))?;
    let ideal = IdealHNF::two_element(&ctx.o, &BigInt::from(p), &coords);
    if ideal.norm != BigInt::from(p).pow(q.f_deg) {
        return Err(Error::NotPMaximal { p });
    }
    Ok(ideal)
}

/// Smallest k ≤ hmax with 𝔮^k principal, and a generator.
pub fn prime_power_generator(
    ctx: &NfContext,
    split: &PrimeSplitType,
    q: &LocalPrime,
    units: &[NFElement],
    bounds: &SearchBounds,
) -> Result<GeneratorResult> {
    let prime = prime_ideal(ctx, split, q)?;
    let mut power = prime.clone();
    let mut enumerated = 0;
    for k in 1..=bounds.hmax {
        if k > 1 {
            power = power.mul(&ctx.o, &prime);
        }
        let mut res = principal_generator(ctx, &power, units, bounds);
        enumerated += res.enumerated;
        res.k_used = k;
        res.enumerated = enumerated;
        match res.status {
            GeneratorStatus::Found | GeneratorStatus::Inconclusive => return Ok(res),
            GeneratorStatus::CertifiedNotPrincipal => {}
        }
    }
    Ok(GeneratorResult {
        status: GeneratorStatus::Inconclusive,
        gen: None,
        k_used: bounds.hmax,
        enumerated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime_split::split_type;

    fn ctx(c: &[i64]) -> NfContext {
        let k = NumberField::from_i64(c).unwrap();
        let o = Order::equation_order(&k);
        NfContext::new(k, o)
    }

    fn coords(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn generator_above_seven_in_sqrt2() {
        let c = ctx(&[-2, 0, 1]);
        let units = find_units(&c, 1000);
        let i = IdealHNF::two_element(&c.o, &BigInt::from(7), &coords(&[-3, 1]));
        let res = principal_generator(&c, &i, &units, &SearchBounds::default());
        assert_eq!(res.status, GeneratorStatus::Found);
        let g = res.gen.unwrap();
        assert_eq!(c.k.norm(&g).to_integer().abs(), BigInt::from(7));
        assert!(i.contains(&c.o.int_coords(&g).unwrap()));
    }

    #[test]
    fn non_principal_in_sqrt_minus5() {
        let c = ctx(&[5, 0, 1]);
        let i = IdealHNF::two_element(&c.o, &BigInt::from(2), &coords(&[1, 1]));
        let res = principal_generator(&c, &i, &[], &SearchBounds::default());
        assert_eq!(res.status, GeneratorStatus::CertifiedNotPrincipal);
    }

    #[test]
    fn principal_by_construction() {
        let c = ctx(&[-11, 0, 0, 0, 1]);
        let units = vec![c.k.elem(&[10, 0, 3]), c.k.elem(&[17522, 9621, 5283, 2901])];
        let gamma = coords(&[5, -2, 1, 0]);
        let i = IdealHNF::principal(&c.o, &gamma);
        let res = principal_generator(&c, &i, &units, &SearchBounds::default());
        assert_eq!(res.status, GeneratorStatus::Found);
        let g = res.gen.unwrap();
        let q = c.k.mul(&g, &c.k.inverse(&c.o.elem(&c.k, &gamma)).unwrap());
        assert!(units::is_unit(&c, &q));
    }

    #[test]
    fn class_number_two_power() {
        let c = ctx(&[5, 0, 1]);
        let st = split_type(&c.k, 3, Some(&c.o)).unwrap();
        let q = &st.primes[0];
        let b = SearchBounds::default();
        let res = prime_power_generator(&c, &st, q, &[], &b).unwrap();
        assert_eq!(res.status, GeneratorStatus::Found);
        assert_eq!(res.k_used, 2);
        assert_eq!(
            c.k.norm(res.gen.as_ref().unwrap()).to_integer().abs(),
            BigInt::from(9)
        );
        let one = SearchBounds { hmax: 1, ..b };
        let res = prime_power_generator(&c, &st, q, &[], &one).unwrap();
        assert_eq!(res.status, GeneratorStatus::Inconclusive);
    }

    #[test]
    fn sqrt2_prime_power_is_one() {
        let c = ctx(&[-2, 0, 1]);
        let units = find_units(&c, 1000);
        let st = split_type(&c.k, 7, Some(&c.o)).unwrap();
        for q in &st.primes {
            let res = prime_power_generator(&c, &st, q, &units, &SearchBounds::default()).unwrap();
            assert_eq!(res.status, GeneratorStatus::Found);
            assert_eq!(res.k_used, 1);
            assert_eq!(
                c.k.norm(res.gen.as_ref().unwrap()).to_integer().abs(),
                BigInt::from(7)
            );
        }
    }

    #[test]
    fn enumeration_cap_is_inconclusive() {
        let c = ctx(&[-11, 0, 0, 0, 1]);
        let units = vec![c.k.elem(&[10, 0, 3]), c.k.elem(&[17522, 9621, 5283, 2901])];
        let st = split_type(&c.k, 19, Some(&c.o)).unwrap();
        let i = prime_ideal(&c, &st, &st.primes[0]).unwrap();
        let b = SearchBounds {
            enum_cap: 1,
            ..SearchBounds::default()
        };
        let res = principal_generator(&c, &i, &units, &b);
        assert_ne!(res.status, GeneratorStatus::CertifiedNotPrincipal);
    }
}
