mod common;

use common::{fields, small_elem, split_primes, tau, tau_invariant_suite};
use h90::arith::pow_mod;
use h90::config::Config;
use h90::lattice::{prime_power_generator, GeneratorStatus};
use h90::nf::NFElement;
use h90::sunits::load_fixture;
use h90::tau::{rank_fp, tau_matrix, tau_verdict, CandidatePolicy, GensSource, TauStatus};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;
use std::path::Path;

#[test]
fn internal_units_agree_with_fixtures() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quadratic");
    for f in fields() {
        let fx = load_fixture(&dir.join(format!("d{}.json", f.d))).unwrap();
        let k = &f.ctx.k;
        let (u, v) = (&f.units[0], &fx.units[0]);
        // u = ±v^{±1}
        let same = [v.clone(), k.inverse(v).unwrap()]
            .iter()
            .any(|w| u == w || *u == k.neg(w));
        assert!(same, "d = {}", f.d);
    }
}

#[test]
fn fixture_and_internal_verdicts_match() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/quadratic");
    let bounds = Config::default().bounds();
    for f in fields() {
        let fx = load_fixture(&dir.join(format!("d{}.json", f.d))).unwrap();
        for st in split_primes(f, 200) {
            let a = tau_verdict(
                &f.ctx,
                &st,
                GensSource::Units(&f.units),
                &bounds,
                CandidatePolicy::MaxF,
            )
            .unwrap();
            let b = tau_verdict(
                &f.ctx,
                &st,
                GensSource::Units(&fx.units),
                &bounds,
                CandidatePolicy::MaxF,
            )
            .unwrap();
            assert_eq!(a.status, b.status, "d = {} p = {}", f.d, st.p);
            assert_ne!(a.status, TauStatus::InconclusiveData);
        }
    }
}

#[test]
fn verdict_does_not_depend_on_the_chosen_prime() {
    let bounds = Config::default().bounds();
    let mut checked = 0;
    for f in fields() {
        for st in split_primes(f, 200) {
            let ranks: Vec<usize> = (0..2)
                .map(|c| {
                    let g = prime_power_generator(&f.ctx, &st, &st.primes[c], &f.units, &bounds)
                        .unwrap();
                    assert_eq!(g.status, GeneratorStatus::Found);
                    let mut gens = f.units.clone();
                    gens.push(g.gen.unwrap());
                    rank_fp(&tau_matrix(&st, c, &gens).unwrap().entries, st.p)
                })
                .collect();
            assert_eq!(ranks[0], ranks[1], "d = {} p = {}", f.d, st.p);
            checked += 1;
        }
    }
    assert!(checked > 300, "only {checked} split primes");
}

#[test]
fn invariant_suite_has_no_violations() {
    let t = tau_invariant_suite();
    assert!(t.primes > 300 && t.checks > 10_000, "{t:?}");
    assert!(t.violations.is_empty(), "{:?}", t.violations);
}

#[test]
fn rank_is_monotone_in_the_generators() {
    let bounds = Config::default().bounds();
    for f in fields() {
        for st in split_primes(f, 200) {
            let g = prime_power_generator(&f.ctx, &st, &st.primes[0], &f.units, &bounds).unwrap();
            let all = vec![f.units[0].clone(), g.gen.unwrap()];
            let full = rank_fp(&tau_matrix(&st, 0, &all).unwrap().entries, st.p);
            for sub in [&all[..1], &all[1..], &all[..0]] {
                let r = rank_fp(&tau_matrix(&st, 0, sub).unwrap().entries, st.p);
                assert!(r <= full);
            }
        }
    }
}

/// Independent coordinate at a degree-one prime: evaluate α at the Hensel
/// root modulo p³ and take log(α^{p−1})/p mod p through the p-adic series.
fn coordinate_mod_p3(d: i64, p: u64, root: u64, a: &NFElement) -> Option<u64> {
    let m = p * p * p;
    let dm = (d.rem_euclid(m as i64)) as u64;
    // Newton lift of r² = d
    let mut r = root as u128;
    let mm = m as u128;
    for _ in 0..3 {
        let fr = (r * r + mm - dm as u128) % mm;
        let inv = h90::arith::inv_mod(((2 * r) % mm) as u64, m)? as u128;
        r = (r + mm - fr * inv % mm) % mm;
    }
    let big_m = BigInt::from(m);
    let ev = |c: &[BigInt]| -> u64 {
        let mut acc = BigInt::from(0);
        for x in c.iter().rev() {
            acc = (acc * BigInt::from(r as u64) + x) % &big_m;
        }
        ((acc + &big_m) % &big_m).to_u64().unwrap()
    };
    let num = ev(&a.num);
    let den = (((&a.den % &big_m) + &big_m) % &big_m).to_u64().unwrap();
    let x = (num as u128 * h90::arith::inv_mod(den, m)? as u128 % mm) as u64;
    if x % p == 0 {
        return None;
    }
    let u = pow_mod(x, p - 1, m) as u128;
    // log(1 + z) = z − z²/2 mod p³ for z ∈ pℤ/p³, p ≥ 3
    let z = (u + mm - 1) % mm;
    let inv2 = h90::arith::inv_mod(2, m)? as u128;
    let l = (z + mm - z * z % mm * inv2 % mm) % mm;
    // τ = −log(α^{p−1})/p, since p^f − 1 ≡ −1
    let t = (l / p as u128) as u64 % p;
    Some((p - t) % p)
}

#[test]
fn coordinates_agree_with_series_at_higher_precision() {
    let mut checked = 0;
    for f in fields() {
        let k = &f.ctx.k;
        for st in split_primes(f, 200).into_iter().take(8) {
            let p = st.p;
            for q in 0..2 {
                let g = st.primes[q].g_bar.as_ref().unwrap();
                if g.len() != 2 || st.model.as_ref().unwrap().to_model.is_some() {
                    continue;
                }
                let root = (p - g[0]) % p;
                for a in [
                    f.units[0].clone(),
                    small_elem(k, 3, 1),
                    small_elem(k, 1, 5),
                    small_elem(k, 7, -2),
                ] {
                    if let (Some(c), Some(o)) =
                        (tau(&st, q, &a), coordinate_mod_p3(f.d, p, root, &a))
                    {
                        assert_eq!(c, vec![o], "d = {} p = {p}", f.d);
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 500, "only {checked} coordinates compared");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tau_is_additive(fi in 0usize..20, pi in 0usize..6, a in -40i64..40, b in -40i64..40, c in -40i64..40, e in -40i64..40) {
        let f = &fields()[fi];
        let sts = split_primes(f, 200);
        let st = &sts[pi % sts.len()];
        let k = &f.ctx.k;
        let (x, y) = (small_elem(k, a, b), small_elem(k, c, e));
        if let (Some(tx), Some(ty)) = (tau(st, 0, &x), tau(st, 0, &y)) {
            let txy = tau(st, 0, &k.mul(&x, &y)).unwrap();
            let sum: Vec<u64> = tx.iter().zip(&ty).map(|(u, v)| (u + v) % st.p).collect();
            prop_assert_eq!(txy, sum);
        }
    }

    #[test]
    fn p_th_powers_vanish(fi in 0usize..20, pi in 0usize..6, a in -40i64..40, b in -40i64..40) {
        let f = &fields()[fi];
        let sts = split_primes(f, 200);
        let st = &sts[pi % sts.len()];
        let k = &f.ctx.k;
        let x = small_elem(k, a, b);
        if tau(st, 1, &x).is_some() {
            let t = tau(st, 1, &k.pow(&x, st.p)).unwrap();
            prop_assert!(t.iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn units_and_their_inverses(fi in 0usize..20, pi in 0usize..6) {
        let f = &fields()[fi];
        let sts = split_primes(f, 200);
        let st = &sts[pi % sts.len()];
        let k = &f.ctx.k;
        let u = &f.units[0];
        let t = tau(st, 0, u).unwrap();
        let ti = tau(st, 0, &k.inverse(u).unwrap()).unwrap();
        prop_assert!(t.iter().zip(&ti).all(|(a, b)| (a + b) % st.p == 0));
        prop_assert_eq!(tau(st, 0, &NFElement::from_int(2, BigInt::one())).unwrap(), vec![0]);
    }
}
