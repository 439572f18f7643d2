//! Factorization of rational primes in K: Dedekind's criterion, splitting
//! via f mod p, Hensel lifts to ℤ/p², and local models at primes dividing
//! the index of ℤ[θ].
//!
//! When ℤ[θ] is p-maximal the local model is (ℤ/p²)[x]/(f) itself. When it
//! is not, a p-maximal order is computed and an element α of it with
//! squarefree characteristic polynomial mod p replaces θ: then ℤ_p[α] is
//! the full p-adic completion ring and elements are rewritten in powers of α.

use crate::arith::{big_mod, inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::fp_poly::{self, FpPoly};
use crate::matrix::{self, QMat};
use crate::nf::{NFElement, NumberField};
use crate::order::Order;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPrime {
    pub index: usize,
    /// irreducible factor of the model polynomial mod p (absent for
    /// ramified primes in a non-monogenic order, or common index divisors)
    pub g_bar: Option<FpPoly>,
    pub f_deg: u32,
    pub e_exp: u32,
    /// monic lift of `g_bar` to ℤ/p²
    pub g_lift: Option<Vec<u64>>,
}

/// Polynomial model of O ⊗ ℤ_p modulo p².
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub p: u64,
    pub pp: u64,
    /// monic model polynomial (f itself, or the characteristic polynomial
    /// of α) reduced mod p²
    pub g: Vec<u64>,
    /// θ-coordinates → α-coordinates, when the model is not θ itself
    pub to_model: Option<QMat>,
    pub alpha: Option<NFElement>,
}

#[derive(Clone, Debug)]
pub struct PrimeSplitType {
    pub p: u64,
    pub primes: Vec<LocalPrime>,
    pub unramified: bool,
    pub max_f: u32,
    /// Dedekind's criterion certified ℤ[θ] p-maximal
    pub maximal_order_certified: bool,
    pub model: Option<LocalModel>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitShape {
    /// (e, f) per prime, sorted
    pub ef: Vec<(u32, u32)>,
    pub equation_order_maximal: bool,
}

impl SplitShape {
    pub fn unramified(&self) -> bool {
        self.ef.iter().all(|&(e, _)| e == 1)
    }

    pub fn max_f(&self) -> u32 {
        self.ef.iter().map(|&(_, f)| f).max().unwrap_or(0)
    }

    /// Signature string such as `1^1·3^1`.
    pub fn render(&self) -> String {
        render_shape(&self.ef)
    }
}

pub fn render_shape(ef: &[(u32, u32)]) -> String {
    ef.iter()
        .map(|(e, f)| format!("{f}^{e}"))
        .collect::<Vec<_>>()
        .join("·")
}

impl PrimeSplitType {
    pub fn shape(&self) -> SplitShape {
        let mut ef: Vec<(u32, u32)> = self.primes.iter().map(|q| (q.e_exp, q.f_deg)).collect();
        ef.sort();
        SplitShape {
            ef,
            equation_order_maximal: self.maximal_order_certified,
        }
    }

    pub fn render(&self) -> String {
        self.shape().render()
    }
}

pub fn poly_mod(f: &[BigInt], m: u64) -> Vec<u64> {
    let mut v: Vec<u64> = f.iter().map(|c| big_mod(c, m)).collect();
    fp_poly::trim(&mut v);
    v
}

pub fn factor_mod_p(f: &[BigInt], p: u64) -> Vec<(FpPoly, u32)> {
    fp_poly::factor(&poly_mod(f, p), p)
}

/// Dedekind's criterion: is ℤ[θ] maximal at p?
pub fn dedekind_is_p_maximal(k: &NumberField, p: u64) -> bool {
    let bp = BigInt::from(p);
    if !(&k.disc_f % &bp).is_zero() {
        return true;
    }
    // f ≡ ∏ g_i^{e_i}; F = (f − ∏ g_i^{e_i}) / p with lifts in [0, p)
    let fac = factor_mod_p(&k.poly, p);
    let mut prod: Vec<BigInt> = vec![BigInt::one()];
    let mut h_bar: FpPoly = vec![1];
    for (g, e) in &fac {
        let gz: Vec<BigInt> = g.iter().map(|&c| BigInt::from(c)).collect();
        for _ in 0..*e {
            prod = crate::zpoly::mul(&prod, &gz);
        }
        for _ in 1..*e {
            h_bar = fp_poly::mul(&h_bar, g, p);
        }
    }
    let mut diff: Vec<BigInt> = (0..k.poly.len().max(prod.len()))
        .map(|i| {
            k.poly.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default()
        })
        .collect();
    crate::zpoly::trim(&mut diff);
    let big_f: Vec<BigInt> = diff.iter().map(|c| c / &bp).collect();
    let f_bar = poly_mod(&big_f, p);
    if fp_poly::deg(&h_bar) == Some(0) {
        return true;
    }
    fp_poly::deg(&fp_poly::gcd(&f_bar, &h_bar, p)) == Some(0)
}

/// Lift the factor `g_bar` of `f` (mod p, f squarefree mod p) to a factor
/// modulo p^k. Returns the lift and its cofactor.
pub fn hensel_lift_factor(
    g_bar: &[u64],
    f: &[BigInt],
    p: u64,
    k: u32,
) -> Result<(Vec<u64>, Vec<u64>)> {
    let fp = poly_mod(f, p);
    if !fp_poly::is_squarefree(&fp, p) {
        return Err(Error::NotSquarefree { p });
    }
    let modulus = (p as u128).pow(k);
    if modulus > u64::MAX as u128 {
        return Err(Error::UnsupportedP {
            p,
            reason: "p^k exceeds 64 bits",
        });
    }
    let g_bar = fp_poly::monic(g_bar, p);
    let (h_bar, r) = fp_poly::divrem(&fp, &g_bar, p);
    if !r.is_empty() {
        return Err(Error::Invalid("g_bar does not divide f mod p".into()));
    }
    let (one, s, t) = fp_poly::xgcd(&g_bar, &h_bar, p);
    debug_assert!(fp_poly::is_one(&one));
    let (mut g, mut h) = (g_bar.clone(), h_bar.clone());
    let mut pj = p;
    for _ in 1..k {
        let next = pj * p;
        let fm = poly_mod(f, next);
        let gh = fp_poly::mul(&g, &h, next);
        let diff = fp_poly::sub(&fm, &gh, next);
        // (f − g h) / p^j mod p
        let e: FpPoly = {
            let mut v: Vec<u64> = diff.iter().map(|&c| (c / pj) % p).collect();
            fp_poly::trim(&mut v);
            v
        };
        let dg = fp_poly::rem(&fp_poly::mul(&t, &e, p), &g_bar, p);
        let dh = fp_poly::rem(&fp_poly::mul(&s, &e, p), &h_bar, p);
        g = fp_poly::add(&g, &fp_poly::scale(&dg, pj, next), next);
        h = fp_poly::add(&h, &fp_poly::scale(&dh, pj, next), next);
        pj = next;
    }
    // exact check: g · h ≡ f mod p^k
    let fm = poly_mod(f, pj);
    if fp_poly::mul(&g, &h, pj) != fm {
        return Err(Error::Invalid("Hensel lift failed verification".into()));
    }
    Ok((g, h))
}

/// Cheap shape of pO: DDF degrees when p ∤ disc(f), Dedekind factorization
/// when ℤ[θ] is p-maximal, otherwise the idempotent decomposition in a
/// p-maximal order (computed on demand unless one is supplied).
pub fn split_shape(k: &NumberField, p: u64, order: Option<&Order>) -> SplitShape {
    let bp = BigInt::from(p);
    if !(&k.disc_f % &bp).is_zero() {
        let fp = poly_mod(&k.poly, p);
        let mut ef: Vec<(u32, u32)> = fp_poly::factor_degrees(&fp, p)
            .into_iter()
            .map(|d| (1, d as u32))
            .collect();
        ef.sort();
        return SplitShape {
            ef,
            equation_order_maximal: true,
        };
    }
    if dedekind_is_p_maximal(k, p) {
        let mut ef: Vec<(u32, u32)> = factor_mod_p(&k.poly, p)
            .into_iter()
            .map(|(g, e)| (e, (g.len() - 1) as u32))
            .collect();
        ef.sort();
        return SplitShape {
            ef,
            equation_order_maximal: true,
        };
    }
    let o = p_maximal_order(k, p, order);
    SplitShape {
        ef: o.split_shape(p),
        equation_order_maximal: false,
    }
}

fn p_maximal_order(k: &NumberField, p: u64, order: Option<&Order>) -> Order {
    match order {
        Some(o) if o.is_p_maximal(k, p) => o.clone(),
        Some(o) => o.p_maximal(k, p),
        None => Order::equation_order(k).p_maximal(k, p),
    }
}

/// Characteristic polynomial of an algebraic integer, monic and integral.
pub fn charpoly(k: &NumberField, a: &NFElement) -> Vec<BigInt> {
    let n = k.n;
    let den = BigRational::from_integer(a.den.clone());
    let m: QMat = k
        .mult_matrix(&a.num)
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::from_integer(x) / &den)
                .collect()
        })
        .collect();
    // Faddeev–LeVerrier
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk: QMat = vec![vec![BigRational::zero(); n]; n];
    for step in 1..=n {
        // M_k = M · M_{k−1} + c_{n−k+1} I
        let mut next: QMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|l| &m[i][l] * &mk[l][j]).sum::<BigRational>())
                    .collect()
            })
            .collect();
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - step + 1];
        }
        let tr: BigRational = (0..n)
            .map(|i| (0..n).map(|l| &m[i][l] * &next[l][i]).sum::<BigRational>())
            .sum();
        coeffs[n - step] = -tr / BigRational::from_integer(BigInt::from(step));
        mk = next;
    }
    coeffs
        .into_iter()
        .map(|c| {
            assert!(
                c.is_integer(),
                "characteristic polynomial of an integer is integral"
            );
            c.to_integer()
        })
        .collect()
}

impl LocalModel {
    /// Coefficients mod p² of `a` in the model basis, if `a` is p-integral.
    pub fn reduce(&self, a: &NFElement) -> Option<Vec<u64>> {
        let pp = self.pp;
        match &self.to_model {
            None => {
                let d = big_mod(&a.den, pp);
                let inv = inv_mod(d, pp)?;
                Some(
                    a.num
                        .iter()
                        .map(|c| mul_mod(big_mod(c, pp), inv, pp))
                        .collect(),
                )
            }
            Some(t) => {
                let v: Vec<BigRational> = a
                    .num
                    .iter()
                    .map(|c| BigRational::new(c.clone(), a.den.clone()))
                    .collect();
                let c = matrix::q_vec_mul(&v, t);
                c.iter()
                    .map(|x| {
                        let d = big_mod(x.denom(), pp);
                        let inv = inv_mod(d, pp)?;
                        Some(mul_mod(big_mod(x.numer(), pp), inv, pp))
                    })
                    .collect()
            }
        }
    }
}

impl LocalModel {
    /// Image of `a` in the residue field F_p[x]/(g_bar) of `q`.
    pub fn residue(&self, q: &LocalPrime, a: &NFElement) -> Option<FpPoly> {
        let g = q.g_bar.as_ref()?;
        let c: Vec<u64> = self.reduce(a)?.iter().map(|x| x % self.p).collect();
        Some(fp_poly::rem(&c, g, self.p))
    }
}

fn lift_all(g: &[BigInt], p: u64, fac: &[(FpPoly, u32)]) -> Option<Vec<Vec<u64>>> {
    if p == 2 || (p as u128) * (p as u128) > u64::MAX as u128 {
        return None;
    }
    let lifts: Vec<Vec<u64>> = fac
        .iter()
        .map(|(gb, _)| hensel_lift_factor(gb, g, p, 2).ok().map(|x| x.0))
        .collect::<Option<_>>()?;
    // ∏ g_lift ≡ g mod p²
    let pp = p * p;
    let prod = lifts
        .iter()
        .fold(vec![1u64], |acc, l| fp_poly::mul(&acc, l, pp));
    if prod != poly_mod(g, pp) {
        return None;
    }
    Some(lifts)
}

/// Full splitting data at p, with local models for τ when available.
pub fn split_type(k: &NumberField, p: u64, order: Option<&Order>) -> Result<PrimeSplitType> {
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if dedekind_is_p_maximal(k, p) {
        let fac = factor_mod_p(&k.poly, p);
        let unramified = fac.iter().all(|(_, e)| *e == 1);
        let lifts = if unramified {
            lift_all(&k.poly, p, &fac)
        } else {
            None
        };
        let primes = fac
            .iter()
            .enumerate()
            .map(|(i, (g, e))| LocalPrime {
                index: i,
                g_bar: Some(g.clone()),
                f_deg: (g.len() - 1) as u32,
                e_exp: *e,
                g_lift: lifts.as_ref().map(|l| l[i].clone()),
            })
            .collect::<Vec<_>>();
        let model = lifts.as_ref().map(|_| LocalModel {
            p,
            pp: p * p,
            g: poly_mod(&k.poly, p * p),
            to_model: None,
            alpha: None,
        });
        let max_f = primes.iter().map(|q| q.f_deg).max().unwrap_or(0);
        let out = PrimeSplitType {
            p,
            primes,
            unramified,
            max_f,
            maximal_order_certified: true,
            model,
        };
        debug_assert_eq!(
            out.primes
                .iter()
                .map(|q| (q.e_exp * q.f_deg) as usize)
                .sum::<usize>(),
            k.n
        );
        return Ok(out);
    }
    let o = p_maximal_order(k, p, order);
    let shape = o.split_shape(p);
    let unramified = shape.iter().all(|&(e, _)| e == 1);
    let max_f = shape.iter().map(|&(_, f)| f).max().unwrap_or(0);
    let bare = |shape: &[(u32, u32)]| {
        shape
            .iter()
            .enumerate()
            .map(|(i, &(e, f))| LocalPrime {
                index: i,
                g_bar: None,
                f_deg: f,
                e_exp: e,
                g_lift: None,
            })
            .collect::<Vec<_>>()
    };
    if !unramified || p == 2 {
        return Ok(PrimeSplitType {
            p,
            primes: bare(&shape),
            unramified,
            max_f,
            maximal_order_certified: false,
            model: None,
        });
    }
    match find_primitive_model(k, &o, p) {
        Some((alpha, chi, tinv)) => {
            let fac = factor_mod_p(&chi, p);
            let lifts = lift_all(&chi, p, &fac);
            let primes = fac
                .iter()
                .enumerate()
                .map(|(i, (g, e))| LocalPrime {
                    index: i,
                    g_bar: Some(g.clone()),
                    f_deg: (g.len() - 1) as u32,
                    e_exp: *e,
                    g_lift: lifts.as_ref().map(|l| l[i].clone()),
                })
                .collect();
            let model = lifts.map(|_| LocalModel {
                p,
                pp: p * p,
                g: poly_mod(&chi, p * p),
                to_model: Some(tinv),
                alpha: Some(alpha),
            });
            Ok(PrimeSplitType {
                p,
                primes,
                unramified,
                max_f,
                maximal_order_certified: false,
                model,
            })
        }
        None => Ok(PrimeSplitType {
            p,
            primes: bare(&shape),
            unramified,
            max_f,
            maximal_order_certified: false,
            model: None,
        }),
    }
}

type Model = (NFElement, Vec<BigInt>, QMat);

/// Search small combinations of the order basis for α with squarefree
/// characteristic polynomial mod p.
fn find_primitive_model(k: &NumberField, o: &Order, p: u64) -> Option<Model> {
    let n = k.n;
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut c = vec![0i64; n];
        c[i] = 1;
        candidates.push(c);
    }
    for i in 0..n {
        for j in i + 1..n {
            for s in [1, -1, 2] {
                let mut c = vec![0i64; n];
                c[i] = 1;
                c[j] = s;
                candidates.push(c);
            }
        }
    }
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xa1fa ^ p);
    for _ in 0..200 {
        candidates.push((0..n).map(|_| rng.gen_range(-4i64..=4)).collect());
    }
    for c in candidates {
        let cb: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        let alpha = o.elem(k, &cb);
        let chi = charpoly(k, &alpha);
        let chi_p = poly_mod(&chi, p);
        if !fp_poly::is_squarefree(&chi_p, p) {
            continue;
        }
        // rows α^i in θ-coordinates; invert to rewrite elements in powers of α
        let mut rows: QMat = Vec::with_capacity(n);
        let mut cur = k.one();
        for _ in 0..n {
            rows.push(
                cur.num
                    .iter()
                    .map(|x| BigRational::new(x.clone(), cur.den.clone()))
                    .collect(),
            );
            cur = k.mul(&cur, &alpha);
        }
        let tinv = matrix::q_inverse(&rows)?;
        return Some((alpha, chi, tinv));
    }
    None
}

pub fn to_u64(p: &BigInt) -> Option<u64> {
    if p.is_negative() {
        None
    } else {
        p.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedekind_examples() {
        let k5 = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        assert!(!dedekind_is_p_maximal(&k5, 2));
        let k2 = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        assert!(dedekind_is_p_maximal(&k2, 2));
        assert!(dedekind_is_p_maximal(&k2, 7));
    }

    #[test]
    fn hensel_examples() {
        let f = crate::zpoly::from_i64(&[1, 0, 1]);
        // x + 3 lifts to x + 18 (18² ≡ −1 mod 25) with cofactor x + 7
        let (g, h) = hensel_lift_factor(&[3, 1], &f, 5, 2).unwrap();
        assert_eq!(g, vec![18, 1]);
        assert_eq!(h, vec![7, 1]);
        let (g, _) = hensel_lift_factor(&[2, 1], &f, 5, 2).unwrap();
        assert_eq!(g, vec![7, 1]);
        let f = crate::zpoly::from_i64(&[-2, 0, 1]);
        assert_eq!(
            hensel_lift_factor(&[4, 1], &f, 7, 2).unwrap().0,
            vec![39, 1]
        );
        assert_eq!(
            hensel_lift_factor(&[3, 1], &f, 7, 2).unwrap().0,
            vec![10, 1]
        );
        let sq = crate::zpoly::from_i64(&[1, 2, 1]);
        assert!(matches!(
            hensel_lift_factor(&[1, 1], &sq, 5, 2),
            Err(Error::NotSquarefree { p: 5 })
        ));
    }

    #[test]
    fn split_types_of_sqrt2() {
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let s7 = split_type(&k, 7, None).unwrap();
        assert_eq!(s7.primes.len(), 2);
        assert!(s7.unramified);
        let s3 = split_type(&k, 3, None).unwrap();
        assert_eq!((s3.primes.len(), s3.max_f), (1, 2));
        let s2 = split_type(&k, 2, None).unwrap();
        assert!(!s2.unramified);
        assert_eq!(s2.primes[0].e_exp, 2);
    }

    #[test]
    fn non_monogenic_prime_gets_a_model() {
        // x^2 - 5 at 2 is handled by the half-integral order; 2 is inert in ℚ(√5)
        let k = NumberField::from_i64(&[-5, 0, 1]).unwrap();
        let s = split_type(&k, 2, None).unwrap();
        assert!(s.unramified);
        assert_eq!(s.max_f, 2);
        // x^3 + x^2 - 2x + 8: even index, 2 splits completely
        let k = NumberField::from_i64(&[8, -2, 1, 1]).unwrap();
        let s = split_shape(&k, 2, None);
        assert_eq!(s.ef, vec![(1, 1), (1, 1), (1, 1)]);
        assert!(!s.equation_order_maximal);
    }

    #[test]
    fn charpoly_of_theta_is_f() {
        let k = NumberField::from_i64(&[-11, 0, 0, 0, 1]).unwrap();
        assert_eq!(charpoly(&k, &k.theta()), k.poly);
    }
}
