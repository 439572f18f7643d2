//! Orders of K given by a ℤ-basis, p-maximal enlargement by the Round 2
//! algorithm, and the shape of pO in a p-maximal order.
//!
//! An order is stored as `basis / den`, rows in power-basis coordinates.
//! Ideals elsewhere in the crate are lattices in the coordinates of an order.

use crate::arith::{add_mod, big_mod, is_prime_u64, mul_mod, trial_factor};
use crate::error::{Error, Result};
use crate::fp_linalg::{self, FpMat};
use crate::fp_poly;
use crate::matrix::{self, QMat, ZMat};
use crate::nf::{NFElement, NumberField};
use crate::prime_split::dedekind_is_p_maximal;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Order {
    pub n: usize,
    pub basis: ZMat,
    pub den: BigInt,
    /// [O : ℤ[θ]]
    pub index: BigInt,
    /// table[i][j] = coordinates of ω_i·ω_j
    table: Vec<Vec<Vec<BigInt>>>,
    binv: QMat,
    /// primes at which this order is known to be maximal (beyond those not
    /// dividing the discriminant)
    pub certified_maximal: bool,
}

impl Order {
    pub fn equation_order(k: &NumberField) -> Order {
        Order::from_basis(k, matrix::identity(k.n), BigInt::one()).expect("power basis is an order")
    }

    pub fn from_basis(k: &NumberField, basis: ZMat, den: BigInt) -> Result<Order> {
        let n = k.n;
        if basis.len() != n || basis.iter().any(|r| r.len() != n) || !den.is_positive() {
            return Err(Error::Invalid(
                "integral basis must be n rows of n integers".into(),
            ));
        }
        // normalize: HNF rows and strip common factors with den
        let mut basis = matrix::hnf(&basis);
        if basis.len() != n {
            return Err(Error::Invalid("integral basis is singular".into()));
        }
        let g = basis
            .iter()
            .flatten()
            .fold(den.clone(), |acc, x| acc.gcd(x));
        let den = &den / &g;
        for x in basis.iter_mut().flatten() {
            *x = &*x / &g;
        }
        let det = matrix::det_bareiss(&basis).abs();
        let dn = den.pow(n as u32);
        if !(&dn % &det).is_zero() {
            return Err(Error::Invalid("basis does not contain Z[theta]".into()));
        }
        let index = &dn / &det;
        let binv = matrix::q_inverse(&matrix::to_q(&basis)).expect("nonsingular");
        let mut o = Order {
            n,
            basis,
            den,
            index,
            table: Vec::new(),
            binv,
            certified_maximal: false,
        };
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in i..n {
                let a = o.element_of_row(k, i);
                let b = o.element_of_row(k, j);
                let c = o.int_coords(&k.mul(&a, &b)).ok_or_else(|| {
                    Error::Invalid("basis is not closed under multiplication".into())
                })?;
                table[i][j] = c.clone();
                table[j][i] = c;
            }
        }
        o.table = table;
        if o.int_coords(&k.one()).is_none() || o.int_coords(&k.theta()).is_none() {
            return Err(Error::Invalid("basis does not contain Z[theta]".into()));
        }
        Ok(o)
    }

    fn element_of_row(&self, k: &NumberField, i: usize) -> NFElement {
        NFElement::new(k, self.basis[i].clone(), self.den.clone())
    }

    pub fn is_equation_order(&self) -> bool {
        self.index.is_one()
    }

    /// Rational coordinates of `a` in this order's basis.
    pub fn coords(&self, a: &NFElement) -> Vec<BigRational> {
        let scale = BigRational::new(self.den.clone(), a.den.clone());
        let v: Vec<BigRational> = a
            .num
            .iter()
            .map(|x| BigRational::from_integer(x.clone()) * &scale)
            .collect();
        matrix::q_vec_mul(&v, &self.binv)
    }

    pub fn int_coords(&self, a: &NFElement) -> Option<Vec<BigInt>> {
        self.coords(a)
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Some(c.to_integer())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn elem(&self, k: &NumberField, c: &[BigInt]) -> NFElement {
        let num = matrix::vec_mul(c, &self.basis);
        NFElement::new(k, num, self.den.clone())
    }

    pub fn one_coords(&self) -> Vec<BigInt> {
        // 1 is the first HNF row scaled, but compute it to stay basis-agnostic
        let mut num = vec![BigInt::zero(); self.n];
        num[0] = BigInt::one();
        let e = NFElement {
            num,
            den: BigInt::one(),
        };
        self.int_coords(&e).expect("1 lies in every order")
    }

    pub fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n;
        let mut out = vec![BigInt::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let s = &a[i] * &b[j];
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    if !t.is_zero() {
                        *o += &s * t;
                    }
                }
            }
        }
        out
    }

    /// Matrix of multiplication by `a` (coordinates) on the basis.
    pub fn mult_matrix(&self, a: &[BigInt]) -> ZMat {
        (0..self.n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); self.n];
                e[i] = BigInt::one();
                self.mul_coords(&e, a)
            })
            .collect()
    }

    pub fn table_mod(&self, p: u64) -> Vec<Vec<Vec<u64>>> {
        self.table
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| c.iter().map(|x| big_mod(x, p)).collect())
                    .collect()
            })
            .collect()
    }

    /// Discriminant of the order: disc(f) / index².
    pub fn discriminant(&self, k: &NumberField) -> BigInt {
        &k.disc_f / (&self.index * &self.index)
    }

    /// Round 2: enlarge until p-maximal.
    pub fn p_maximal(&self, k: &NumberField, p: u64) -> Order {
        let mut cur = self.clone();
        loop {
            match cur.round2_step(k, p) {
                Some(next) => cur = next,
                None => return cur,
            }
        }
    }

    /// Radical of pO modulo p, as F_p coordinate vectors.
    fn p_radical_mod(&self, t: &[Vec<Vec<u64>>], p: u64) -> FpMat {
        let n = self.n;
        let mut q = 1u64;
        let mut k = 0u32;
        while (q as usize) < n {
            q = q.saturating_mul(p);
            k += 1;
        }
        let frob: FpMat = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                let mut x = e;
                for _ in 0..k {
                    x = alg_pow(&x, p, t, p);
                }
                x
            })
            .collect();
        fp_linalg::left_kernel(&frob, p)
    }

    fn round2_step(&self, k: &NumberField, p: u64) -> Option<Order> {
        let n = self.n;
        let t = self.table_mod(p);
        let rad = self.p_radical_mod(&t, p);
        // I_p as an integer lattice in O-coordinates
        let mut rows: ZMat = rad
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let bp = BigInt::from(p);
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = bp.clone();
            rows.push(r);
        }
        let ip = matrix::hnf(&rows);
        // x ↦ (x·γ_j mod p·I_p)_j as an F_p-linear map on O/pO
        let mut big: FpMat = vec![Vec::with_capacity(n * n); n];
        for (kk, row) in big.iter_mut().enumerate() {
            let mut e = vec![BigInt::zero(); n];
            e[kk] = BigInt::one();
            for gamma in &ip {
                let prod = self.mul_coords(&e, gamma);
                let y = matrix::solve_integral(&ip, &prod).expect("I_p is an ideal");
                row.extend(y.iter().map(|c| big_mod(c, p)));
            }
        }
        let ker = fp_linalg::left_kernel(&big, p);
        if ker.is_empty() {
            return None;
        }
        let mut rows: ZMat = ker
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        for i in 0..n {
            let mut r = vec![BigInt::zero(); n];
            r[i] = bp.clone();
            rows.push(r);
        }
        let b = matrix::hnf(&rows);
        let new_basis = matrix::mat_mul(&b, &self.basis);
        let new_den = &self.den * &bp;
        let o = Order::from_basis(k, new_basis, new_den).expect("Round 2 yields an order");
        debug_assert!(o.index > self.index);
        Some(o)
    }

    /// Is the order p-maximal?
    pub fn is_p_maximal(&self, k: &NumberField, p: u64) -> bool {
        if self.is_equation_order() {
            return dedekind_is_p_maximal(k, p);
        }
        self.round2_step(k, p).is_none()
    }

    /// The maximal order, via Round 2 at every prime whose square divides
    /// disc(f). The flag reports whether the discriminant was factored far
    /// enough to be sure.
    pub fn maximal(k: &NumberField, trial_bound: u64) -> Order {
        let mut o = Order::equation_order(k);
        let (fs, rest) = trial_factor(&k.disc_f, trial_bound);
        let mut certified = true;
        let mut primes: Vec<u64> = fs
            .iter()
            .filter(|(_, e)| *e >= 2)
            .map(|(p, _)| *p)
            .collect();
        if !rest.is_one() {
            let b = BigInt::from(trial_bound);
            let bound2 = &b * &b;
            let s = rest.sqrt();
            if &s * &s == rest {
                match s.to_u64() {
                    Some(q) if is_prime_u64(q) => primes.push(q),
                    _ => certified = false,
                }
            } else if rest > &bound2 * &b {
                // possibly a square of a large prime times another large prime
                certified = false;
            }
        }
        for p in primes {
            if !o.is_p_maximal(k, p) {
                o = o.p_maximal(k, p);
            }
        }
        o.certified_maximal = certified;
        o
    }

    /// Shape of pO in a p-maximal order: `(e, f)` per prime, sorted.
    pub fn split_shape(&self, p: u64) -> Vec<(u32, u32)> {
        let n = self.n;
        let t = self.table_mod(p);
        let rad = self.p_radical_mod(&t, p);
        let phi_minus_one: FpMat = (0..n)
            .map(|i| {
                let mut e = vec![0u64; n];
                e[i] = 1;
                let mut x = alg_pow(&e, p, &t, p);
                x[i] = (x[i] + p - 1) % p;
                x
            })
            .collect();
        let fixed = fp_linalg::left_kernel(&phi_minus_one, p);
        let g = fixed.len();
        let one: Vec<u64> = self.one_coords().iter().map(|x| big_mod(x, p)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de_0b07 ^ p);
        let mut idems = vec![one];
        let mut guard = 0;
        while idems.len() < g {
            guard += 1;
            assert!(guard < 10_000, "idempotent splitting did not converge");
            let mut next = Vec::new();
            for eps in &idems {
                let sub: FpMat = fixed.iter().map(|b| alg_mul(eps, b, &t, p)).collect();
                if fp_linalg::rank(&sub, p) <= 1 {
                    next.push(eps.clone());
                    continue;
                }
                let mut y = vec![0u64; n];
                for b in &sub {
                    let c = rng.gen_range(0..p);
                    for (yy, bb) in y.iter_mut().zip(b) {
                        *yy = add_mod(*yy, mul_mod(c, *bb, p), p);
                    }
                }
                next.extend(split_idempotent(eps, &y, &t, p));
            }
            idems = next;
        }
        let mut out: Vec<(u32, u32)> = idems
            .iter()
            .map(|eps| {
                let whole: FpMat = (0..n)
                    .map(|i| {
                        let mut e = vec![0u64; n];
                        e[i] = 1;
                        alg_mul(eps, &e, &t, p)
                    })
                    .collect();
                let ef = fp_linalg::rank(&whole, p);
                let in_rad: FpMat = rad.iter().map(|r| alg_mul(eps, r, &t, p)).collect();
                let f = ef - fp_linalg::rank(&in_rad, p);
                ((ef / f) as u32, f as u32)
            })
            .collect();
        out.sort();
        out
    }
}

pub(crate) fn alg_mul(a: &[u64], b: &[u64], t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        if a[i] == 0 {
            continue;
        }
        for j in 0..n {
            if b[j] == 0 {
                continue;
            }
            let s = mul_mod(a[i], b[j], p);
            for (o, &c) in out.iter_mut().zip(&t[i][j]) {
                if c != 0 {
                    *o = add_mod(*o, mul_mod(s, c, p), p);
                }
            }
        }
    }
    out
}

fn alg_pow(a: &[u64], mut e: u64, t: &[Vec<Vec<u64>>], p: u64) -> Vec<u64> {
    // the unit of O/pO need not be a basis vector, so start from a itself
    let mut acc: Option<Vec<u64>> = None;
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => b.clone(),
                Some(x) => alg_mul(&x, &b, t, p),
            });
        }
        e >>= 1;
        if e > 0 {
            b = alg_mul(&b, &b, t, p);
        }
    }
    acc.unwrap_or_else(|| vec![0u64; a.len()])
}

/// Split the idempotent `eps` using `y ∈ eps·A` with y^p = y: returns the
/// idempotents attached to the distinct eigenvalues of y (or `eps` itself).
fn split_idempotent(eps: &[u64], y: &[u64], t: &[Vec<Vec<u64>>], p: u64) -> Vec<Vec<u64>> {
    // minimal polynomial of y in eps·A via the Krylov sequence eps, y, y², …
    let mut powers: FpMat = vec![eps.to_vec()];
    let minpoly: Vec<u64> = loop {
        let last = powers.last().unwrap().clone();
        let next = alg_mul(&last, y, t, p);
        // solve next = Σ c_i powers[i]
        let k = powers.len();
        let mut aug: FpMat = powers.clone();
        aug.push(next.clone());
        let ker = fp_linalg::left_kernel(&aug, p);
        if let Some(v) = ker.into_iter().find(|v| v[k] != 0) {
            let inv = crate::arith::inv_mod(v[k], p).unwrap();
            break v.iter().map(|&c| mul_mod(c, inv, p)).collect();
        }
        powers.push(next);
    };
    let factors = fp_poly::factor(&minpoly, p);
    if factors.len() <= 1 {
        return vec![eps.to_vec()];
    }
    let roots: Vec<u64> = factors
        .iter()
        .map(|(g, _)| {
            debug_assert_eq!(g.len(), 2, "y^p = y forces linear factors");
            (p - g[0] % p) % p
        })
        .collect();
    roots
        .iter()
        .enumerate()
        .map(|(j, &cj)| {
            let mut acc = eps.to_vec();
            for (l, &cl) in roots.iter().enumerate() {
                if l == j {
                    continue;
                }
                let scale = crate::arith::inv_mod((cj + p - cl) % p, p).unwrap();
                let shifted: Vec<u64> = y
                    .iter()
                    .zip(eps)
                    .map(|(&a, &e)| {
                        let v = (a + p - mul_mod(cl, e, p)) % p;
                        mul_mod(v, scale, p)
                    })
                    .collect();
                acc = alg_mul(&acc, &shifted, t, p);
            }
            acc
        })
        .collect()
}
