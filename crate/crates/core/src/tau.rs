//! The map τ^𝔭 from S-units to ⊕_{𝔮≠𝔭} U_𝔮 ⊗ F_p and its surjectivity.
//!
//! For an unramified 𝔮 of degree f and α prime to 𝔮, u = α^{p^f−1} is a
//! principal unit, and the class of α in U_𝔮 ⊗ F_p is (p^f−1)^{-1}·[u]
//! = −[u]. Because log(1+py) ≡ py mod p², the class of u in U_𝔮 ⊗ F_p is
//! read off from y = (u−1)/p mod 𝔮, so arithmetic modulo p² suffices.
//! Coordinates are taken in the basis 1, x, …, x^{f−1} of (ℤ/p²)[x]/(g_lift).

use crate::error::{Error, Result};
use crate::fp_linalg;
use crate::fp_poly;
use crate::lattice::{self, GeneratorStatus, NfContext, SearchBounds};
use crate::nf::NFElement;
use crate::prime_split::{LocalModel, LocalPrime, PrimeSplitType};
use serde::Serialize;

/// τ-coordinate of `alpha` at `q`, a vector in F_p^{f_q}.
pub fn tau_coordinate(model: &LocalModel, q: &LocalPrime, alpha: &NFElement) -> Result<Vec<u64>> {
    let p = model.p;
    if p == 2 {
        return Err(Error::UnsupportedP { p, reason: "p = 2" });
    }
    let glift = q.g_lift.as_ref().ok_or(Error::UnsupportedP {
        p,
        reason: "no lifted factor (ramified prime)",
    })?;
    let pp = model.pp;
    let f = q.f_deg as usize;
    let a = model
        .reduce(alpha)
        .ok_or(Error::NotUnitAtQ { p, index: q.index })?;
    match model.residue(q, alpha) {
        Some(r) if !r.is_empty() => {}
        _ => return Err(Error::NotUnitAtQ { p, index: q.index }),
    }
    // α^{p^f − 1} = ∏_{i<f} (α^{p^i})^{p−1}
    let mut b = fp_poly::rem(&a, glift, pp);
    let mut u = vec![1u64];
    for _ in 0..f {
        u = fp_poly::mulmod(&u, &fp_poly::powmod(&b, p - 1, glift, pp), glift, pp);
        b = fp_poly::powmod(&b, p, glift, pp);
    }
    u.resize(f, 0);
    let mut out = vec![0u64; f];
    for (i, c) in u.iter().enumerate() {
        let v = if i == 0 { (c + pp - 1) % pp } else { *c };
        assert_eq!(v % p, 0, "Frobenius power is not a principal unit");
        out[i] = (p - (v / p) % p) % p;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauMatrix {
    pub p: u64,
    /// (n − f_𝔭) rows, one column per generator
    pub entries: Vec<Vec<u64>>,
    /// (prime index, basis exponent)
    pub row_labels: Vec<(usize, u32)>,
    pub col_labels: Vec<usize>,
}

pub fn tau_matrix(split: &PrimeSplitType, choice: usize, gens: &[NFElement]) -> Result<TauMatrix> {
    let p = split.p;
    let model = split.model.as_ref().ok_or(Error::UnsupportedP {
        p,
        reason: "no local model",
    })?;
    let mut row_labels = Vec::new();
    let mut cols: Vec<Vec<u64>> = vec![Vec::new(); gens.len()];
    for q in split.primes.iter().filter(|q| q.index != choice) {
        for e in 0..q.f_deg {
            row_labels.push((q.index, e));
        }
        for (j, g) in gens.iter().enumerate() {
            cols[j].extend(tau_coordinate(model, q, g)?);
        }
    }
    let entries = (0..row_labels.len())
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    Ok(TauMatrix {
        p,
        entries,
        row_labels,
        col_labels: (0..gens.len()).collect(),
    })
}

pub fn rank_fp(m: &[Vec<u64>], p: u64) -> usize {
    fp_linalg::rank(m, p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStatus {
    Surjective,
    NotSurjective,
    ImpossibleShape,
    InconclusiveData,
    Unsupported,
}

impl TauStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TauStatus::Surjective => "surjective",
            TauStatus::NotSurjective => "not_surjective",
            TauStatus::ImpossibleShape => "impossible_shape",
            TauStatus::InconclusiveData => "inconclusive_data",
            TauStatus::Unsupported => "unsupported",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauVerdict {
    pub status: TauStatus,
    pub rank: usize,
    pub target_dim: usize,
    /// index of the prime 𝔭 the verdict refers to
    pub choice: Option<usize>,
    pub h_p: Option<u32>,
}

/// Which primes above p are tried as 𝔭.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CandidatePolicy {
    /// only primes of maximal residue degree
    #[default]
    MaxF,
    /// every prime, in decreasing residue degree
    All,
}

/// Unit data for a verdict: a fixed list, or an internal search.
#[derive(Clone, Copy, Debug)]
pub enum GensSource<'a> {
    Units(&'a [NFElement]),
    Search { effort: u64 },
}

pub fn tau_verdict(
    ctx: &NfContext,
    split: &PrimeSplitType,
    source: GensSource<'_>,
    bounds: &SearchBounds,
    policy: CandidatePolicy,
) -> Result<TauVerdict> {
    let p = split.p;
    if p == 2 {
        return Err(Error::UnsupportedP { p, reason: "p = 2" });
    }
    if !split.unramified {
        return Err(Error::UnsupportedP {
            p,
            reason: "ramified",
        });
    }
    let n = ctx.k.n;
    let r2 = ctx.k.r2;
    if (split.max_f as usize) < r2 {
        return Ok(TauVerdict {
            status: TauStatus::ImpossibleShape,
            rank: 0,
            target_dim: n - split.max_f as usize,
            choice: None,
            h_p: None,
        });
    }
    if split.model.is_none() {
        return Ok(TauVerdict {
            status: TauStatus::Unsupported,
            rank: 0,
            target_dim: n - split.max_f as usize,
            choice: None,
            h_p: None,
        });
    }
    let units = match source {
        GensSource::Units(u) => u.to_vec(),
        GensSource::Search { effort } => lattice::find_units(ctx, effort),
    };
    let units_complete = units.len() + 1 >= ctx.k.r();
    let mut cands: Vec<&LocalPrime> = split.primes.iter().collect();
    cands.sort_by(|a, b| b.f_deg.cmp(&a.f_deg).then(a.index.cmp(&b.index)));
    if policy == CandidatePolicy::MaxF {
        cands.retain(|q| q.f_deg == split.max_f);
    }
    let mut blocked = false;
    let mut first: Option<TauVerdict> = None;
    for q in cands {
        let target = n - q.f_deg as usize;
        if target == 0 {
            return Ok(TauVerdict {
                status: TauStatus::Surjective,
                rank: 0,
                target_dim: 0,
                choice: Some(q.index),
                h_p: None,
            });
        }
        let res = lattice::prime_power_generator(ctx, split, q, &units, bounds)?;
        let mut gens = units.clone();
        let h_p = if res.status == GeneratorStatus::Found {
            gens.push(res.gen.clone().expect("found carries a generator"));
            Some(res.k_used)
        } else {
            None
        };
        let m = tau_matrix(split, q.index, &gens)?;
        let rank = rank_fp(&m.entries, p);
        let v = TauVerdict {
            status: TauStatus::NotSurjective,
            rank,
            target_dim: target,
            choice: Some(q.index),
            h_p,
        };
        if rank == target {
            return Ok(TauVerdict {
                status: TauStatus::Surjective,
                ..v
            });
        }
        if h_p.is_none() || !units_complete {
            blocked = true;
        }
        first.get_or_insert(v);
    }
    let mut v = first.expect("at least one candidate prime");
    if blocked {
        v.status = TauStatus::InconclusiveData;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;
    use crate::order::Order;
    use crate::prime_split::split_type;

    fn ctx(c: &[i64]) -> NfContext {
        let k = NumberField::from_i64(c).unwrap();
        let o = Order::equation_order(&k);
        NfContext::new(k, o)
    }

    fn prime_with_root(st: &PrimeSplitType, root: u64) -> &LocalPrime {
        // g_bar = x − root
        let p = st.p;
        st.primes
            .iter()
            .find(|q| q.g_bar.as_ref().unwrap() == &vec![(p - root % p) % p, 1])
            .unwrap()
    }

    #[test]
    fn unit_coordinate_sqrt2() {
        let c = ctx(&[-2, 0, 1]);
        let st = split_type(&c.k, 7, Some(&c.o)).unwrap();
        let model = st.model.as_ref().unwrap();
        // q = (7, θ − 10): θ ≡ 10 mod 49, 1 + θ ≡ 11
        let q = prime_with_root(&st, 3);
        assert_eq!(q.g_lift.as_ref().unwrap(), &vec![49 - 10, 1]);
        assert_eq!(
            tau_coordinate(model, q, &c.k.elem(&[1, 1])).unwrap(),
            vec![5]
        );
        assert_eq!(tau_coordinate(model, q, &c.k.one()).unwrap(), vec![0]);
    }

    #[test]
    fn rational_cube_has_zero_coordinate() {
        // 3^10 ≡ 1 mod 121
        let k = NumberField::from_i64(&[-3, 0, 1]).unwrap();
        let st = split_type(&k, 11, None).unwrap();
        let model = st.model.as_ref().unwrap();
        assert_eq!(st.primes[0].f_deg, 1);
        assert_eq!(
            tau_coordinate(model, &st.primes[0], &k.elem(&[3, 0])).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn matrix_and_verdict_sqrt2() {
        let c = ctx(&[-2, 0, 1]);
        let st = split_type(&c.k, 7, Some(&c.o)).unwrap();
        // 𝔭 = (θ − 39 lift) = (θ + 10 mod 49): the other prime is θ − 10
        let other = prime_with_root(&st, 3);
        let chosen = 1 - other.index;
        let m = tau_matrix(&st, chosen, &[c.k.elem(&[1, 1]), c.k.elem(&[3, 1])]).unwrap();
        assert_eq!(m.entries.len(), 1);
        assert_eq!(m.entries[0][0], 5);
        let v = tau_verdict(
            &c,
            &st,
            GensSource::Search { effort: 1000 },
            &SearchBounds::default(),
            CandidatePolicy::MaxF,
        )
        .unwrap();
        assert_eq!(v.status, TauStatus::Surjective);
        assert_eq!((v.rank, v.target_dim), (1, 1));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            rank_fp(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 5),
            3
        );
        assert_eq!(rank_fp(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank_fp(&[vec![0, 0], vec![0, 0]], 5), 0);
    }

    #[test]
    fn inert_prime_is_vacuous() {
        // x⁴ − 11 has r2 = 1; take a prime with f = 4
        let c = ctx(&[-11, 0, 0, 0, 1]);
        let p = crate::arith::primes_up_to(200)
            .into_iter()
            .find(|&p| {
                p > 2
                    && split_type(&c.k, p, None)
                        .map(|s| s.max_f == 4)
                        .unwrap_or(false)
            })
            .unwrap();
        let st = split_type(&c.k, p, Some(&c.o)).unwrap();
        let v = tau_verdict(
            &c,
            &st,
            GensSource::Units(&[]),
            &SearchBounds::default(),
            CandidatePolicy::MaxF,
        )
        .unwrap();
        assert_eq!(v.status, TauStatus::Surjective);
        assert_eq!(v.target_dim, 0);
    }

    #[test]
    fn p2_refused() {
        let c = ctx(&[-2, 0, 1]);
        let st = split_type(&c.k, 7, Some(&c.o)).unwrap();
        let mut st2 = st.clone();
        st2.p = 2;
        assert!(matches!(
            tau_verdict(
                &c,
                &st2,
                GensSource::Units(&[]),
                &SearchBounds::default(),
                CandidatePolicy::MaxF
            ),
            Err(Error::UnsupportedP { .. })
        ));
    }
}
