//! Number fields ℚ[x]/(f) for monic integral f, and their elements.

use crate::arith::{is_prime_u64, primes_up_to, trial_factor};
use crate::error::{Error, Result};
use crate::fp_poly;
use crate::matrix::{det_bareiss, q_inverse, q_vec_mul};
use crate::zpoly::{self, ZPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Primes tried for degree ≥ 5 irreducibility certificates.
pub fn default_cert_primes() -> Vec<u64> {
    primes_up_to(200)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Irreducibility {
    Proven,
    /// f mod the given prime carries an irreducibility certificate
    Certified(u64),
    UnverifiedIrreducible,
}

#[derive(Clone, Debug)]
pub struct NumberField {
    pub poly: ZPoly,
    pub n: usize,
    pub disc_f: BigInt,
    pub r1: usize,
    pub r2: usize,
    pub irreducibility: Irreducibility,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Unknown,
}

impl NumberField {
    pub fn new(coeffs: &[BigInt]) -> Result<Self> {
        Self::with_cert_primes(coeffs, &default_cert_primes())
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(&zpoly::from_i64(coeffs))
    }

    pub fn with_cert_primes(coeffs: &[BigInt], cert_primes: &[u64]) -> Result<Self> {
        let mut poly = coeffs.to_vec();
        zpoly::trim(&mut poly);
        if poly.len() < 3 {
            return Err(Error::DegreeTooSmall);
        }
        if !poly.last().is_some_and(|c| c.is_one()) {
            return Err(Error::NonMonic);
        }
        let n = poly.len() - 1;
        let disc_f = zpoly::discriminant_monic(&poly);
        if disc_f.is_zero() {
            return Err(Error::Inseparable);
        }
        let irreducibility = match irreducibility_certificate(&poly, &disc_f, cert_primes) {
            (Tri::False, _) => return Err(Error::ProvablyReducible),
            (Tri::True, Some(p)) if n > 4 => Irreducibility::Certified(p),
            (Tri::True, _) => Irreducibility::Proven,
            (Tri::Unknown, _) => {
                log::warn!(
                    "could not certify irreducibility of {}",
                    zpoly::render(&poly, "x")
                );
                Irreducibility::UnverifiedIrreducible
            }
        };
        let r1 = zpoly::count_real_roots(&poly);
        let r2 = (n - r1) / 2;
        Ok(NumberField {
            poly,
            n,
            disc_f,
            r1,
            r2,
            irreducibility,
        })
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }

    /// Unit rank plus one: r1 + r2.
    pub fn r(&self) -> usize {
        self.r1 + self.r2
    }

    pub fn poly_i64(&self) -> Option<Vec<i64>> {
        self.poly.iter().map(|c| c.to_i64()).collect()
    }

    pub fn render(&self) -> String {
        zpoly::render(&self.poly, "x")
    }

    pub fn one(&self) -> NFElement {
        NFElement::from_int(self.n, BigInt::one())
    }

    pub fn theta(&self) -> NFElement {
        let mut num = vec![BigInt::zero(); self.n];
        num[1] = BigInt::one();
        NFElement {
            num,
            den: BigInt::one(),
        }
    }

    pub fn elem(&self, num: &[i64]) -> NFElement {
        NFElement::new(
            self,
            num.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
        )
    }

    /// Reduce an integer polynomial modulo f (f monic, so exact over ℤ).
    pub fn reduce_poly(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut r = a.to_vec();
        while r.len() > n {
            let c = r.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = r.len() - n;
            for i in 0..n {
                r[shift + i] -= &c * &self.poly[i];
            }
        }
        r.resize(n, BigInt::zero());
        r
    }

    pub fn mul(&self, a: &NFElement, b: &NFElement) -> NFElement {
        let prod = zpoly::mul(&a.num, &b.num);
        NFElement::new(self, self.reduce_poly(&prod), &a.den * &b.den)
    }

    pub fn add(&self, a: &NFElement, b: &NFElement) -> NFElement {
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        NFElement::new(self, num, &a.den * &b.den)
    }

    pub fn neg(&self, a: &NFElement) -> NFElement {
        NFElement {
            num: a.num.iter().map(|x| -x).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &NFElement, b: &NFElement) -> NFElement {
        self.add(a, &self.neg(b))
    }

    pub fn pow(&self, a: &NFElement, mut e: u64) -> NFElement {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Matrix of multiplication by the integral numerator of `a` on the
    /// power basis (row i = coefficients of a·θ^i).
    pub fn mult_matrix(&self, num: &[BigInt]) -> Vec<Vec<BigInt>> {
        let mut rows = Vec::with_capacity(self.n);
        let mut cur = num.to_vec();
        for _ in 0..self.n {
            rows.push(cur.clone());
            let mut shifted = vec![BigInt::zero()];
            shifted.extend(cur);
            cur = self.reduce_poly(&shifted);
        }
        rows
    }

    /// N_{K/ℚ}(a), exact.
    pub fn norm(&self, a: &NFElement) -> BigRational {
        let d = det_bareiss(&self.mult_matrix(&a.num));
        BigRational::new(d, a.den.pow(self.n as u32))
    }

    pub fn trace(&self, a: &NFElement) -> BigRational {
        let m = self.mult_matrix(&a.num);
        let t: BigInt = (0..self.n).map(|i| m[i][i].clone()).sum();
        BigRational::new(t, a.den.clone())
    }

    pub fn inverse(&self, a: &NFElement) -> Option<NFElement> {
        let m: Vec<Vec<BigRational>> = self
            .mult_matrix(&a.num)
            .into_iter()
            .map(|r| r.into_iter().map(BigRational::from_integer).collect())
            .collect();
        let inv = q_inverse(&m)?;
        // 1 = x · M, with the result scaled by den
        let mut e1 = vec![BigRational::zero(); self.n];
        e1[0] = BigRational::one();
        let coords = q_vec_mul(&e1, &inv);
        let coords: Vec<BigRational> = coords
            .into_iter()
            .map(|c| c * BigRational::from_integer(a.den.clone()))
            .collect();
        Some(NFElement::from_rational_coords(&coords))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NFElement {
    pub num: Vec<BigInt>,
    pub den: BigInt,
}

impl NFElement {
    pub fn new(k: &NumberField, mut num: Vec<BigInt>, den: BigInt) -> Self {
        if num.len() > k.n {
            num = k.reduce_poly(&num);
        }
        num.resize(k.n, BigInt::zero());
        let mut e = NFElement { num, den };
        e.canonicalize();
        e
    }

    pub fn from_int(n: usize, c: BigInt) -> Self {
        let mut num = vec![BigInt::zero(); n];
        num[0] = c;
        NFElement {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_rational_coords(c: &[BigRational]) -> Self {
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let num = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let mut e = NFElement { num, den };
        e.canonicalize();
        e
    }

    pub fn canonicalize(&mut self) {
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in self.num.iter_mut() {
                *c = -&*c;
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            self.den = &self.den / &g;
            for c in self.num.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_integral_power_basis(&self) -> bool {
        self.den.is_one()
    }
}

fn divisors_of(n: &BigInt) -> Option<Vec<BigInt>> {
    let (fs, rest) = trial_factor(n, 1_000_000);
    if !rest.is_one() {
        // cofactor free of primes up to 10^6; below 10^12 it is prime
        if rest > BigInt::from(1_000_000_000_000u64) {
            return None;
        }
    }
    let mut divs = vec![BigInt::one()];
    let mut all = fs
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e))
        .collect::<Vec<_>>();
    if !rest.is_one() {
        all.push((rest, 1));
    }
    for (p, e) in all {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Some(divs)
}

/// Monic integral polynomial with the same splitting behaviour: for
/// a_n x^n + …, substitute x = y / a_n and clear denominators.
fn monicize(p: &[BigInt]) -> ZPoly {
    let n = p.len() - 1;
    let lead = p[n].clone();
    let mut out = Vec::with_capacity(n + 1);
    for (i, c) in p.iter().enumerate() {
        if i == n {
            out.push(BigInt::one());
        } else {
            out.push(c * lead.pow((n - 1 - i) as u32));
        }
    }
    out
}

fn has_integer_root(f: &[BigInt]) -> Option<bool> {
    if f[0].is_zero() {
        return Some(true);
    }
    let divs = divisors_of(&f[0])?;
    for d in divs {
        for cand in [d.clone(), -d] {
            if zpoly::eval(f, &cand).is_zero() {
                return Some(true);
            }
        }
    }
    Some(false)
}

/// Monic quartic with no rational root: does it factor into two monic
/// integral quadratics?
fn quartic_has_quadratic_factor(f: &[BigInt]) -> Option<bool> {
    let (a0, a1, a2, a3) = (&f[0], &f[1], &f[2], &f[3]);
    let divs = divisors_of(a0)?;
    for d in divs {
        for c in [d.clone(), -d] {
            let c2 = a0 / &c;
            // b + b' = a3, b·b' = a2 − c − c'
            let prod = a2 - &c - &c2;
            let disc: BigInt = a3 * a3 - 4 * &prod;
            if disc.is_negative() {
                continue;
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                continue;
            }
            for sg in [s.clone(), -s.clone()] {
                let twice_b = a3 + &sg;
                if twice_b.is_odd() {
                    continue;
                }
                let b = &twice_b / 2;
                let b2 = a3 - &b;
                if &b * &c2 + &b2 * &c == *a1 {
                    return Some(true);
                }
            }
        }
    }
    Some(false)
}

fn irreducibility_certificate(
    poly: &[BigInt],
    disc: &BigInt,
    cert_primes: &[u64],
) -> (Tri, Option<u64>) {
    let mut f = poly.to_vec();
    zpoly::trim(&mut f);
    let Some(n) = zpoly::degree(&f) else {
        return (Tri::Unknown, None);
    };
    if n == 0 {
        return (Tri::False, None);
    }
    if n == 1 {
        return (Tri::True, None);
    }
    let content = f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let f: ZPoly = f.iter().map(|c| c / &content).collect();
    let m = monicize(&f);
    match has_integer_root(&m) {
        Some(true) => return (Tri::False, None),
        Some(false) if n <= 3 => return (Tri::True, None),
        Some(false) if n == 4 => {
            return match quartic_has_quadratic_factor(&m) {
                Some(true) => (Tri::False, None),
                Some(false) => (Tri::True, None),
                None => (Tri::Unknown, None),
            }
        }
        _ => {}
    }
    // degree ≥ 5 (or unfactorable constant term): modular certificates,
    // intersecting the sets of achievable factor degrees
    let mut possible: Vec<bool> = vec![true; n + 1];
    for &p in cert_primes {
        if !is_prime_u64(p) {
            continue;
        }
        let bp = BigInt::from(p);
        if (disc % &bp).is_zero() || (&m[n] % &bp).is_zero() {
            continue;
        }
        let fp: fp_poly::FpPoly = {
            let mut v: Vec<u64> = m.iter().map(|c| crate::arith::big_mod(c, p)).collect();
            fp_poly::trim(&mut v);
            v
        };
        let degs = fp_poly::factor_degrees(&fp, p);
        if degs == vec![n] {
            return (Tri::True, Some(p));
        }
        // subset sums of the factor degrees
        let mut reach = vec![false; n + 1];
        reach[0] = true;
        for d in &degs {
            for s in (0..=n - d).rev() {
                if reach[s] {
                    reach[s + d] = true;
                }
            }
        }
        for k in 1..n {
            possible[k] &= reach[k];
        }
        if (1..n).all(|k| !possible[k]) {
            return (Tri::True, Some(p));
        }
    }
    (Tri::Unknown, None)
}

/// Irreducibility over ℚ of a nonconstant integer polynomial.
pub fn irreducible_over_q(poly: &[BigInt], cert_primes: &[u64]) -> Tri {
    let mut f = poly.to_vec();
    zpoly::trim(&mut f);
    let m = if f.last().is_some_and(|c| c.is_one()) {
        f.clone()
    } else {
        monicize(&f)
    };
    let disc = if zpoly::degree(&m).unwrap_or(0) >= 1 {
        zpoly::discriminant_monic(&m)
    } else {
        BigInt::zero()
    };
    if disc.is_zero() && zpoly::degree(&m).unwrap_or(0) >= 2 {
        // repeated factor over ℚ
        return Tri::False;
    }
    irreducibility_certificate(&f, &disc, cert_primes).0
}
