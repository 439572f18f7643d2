//! Cohomological Mackey functors over a cyclic group G = ⟨σ⟩ of order d.
//!
//! A functor is given by a G-module X₁, a group X_G, the norm N: X₁ → X_G
//! and the induction I: X_G → X₁. Groups are presented as ℤ^n / R and maps
//! act on row vectors, so "I∘N" is the matrix product N·I.

use crate::abgroup::{FinAbGroup, Lattice, Presented, Subquotient};
use crate::error::{Error, Result};
use crate::matrix::{identity, mat_mul, ZMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMFPresentation {
    pub d: u64,
    pub x1: Presented,
    pub sigma: ZMat,
    pub xg: Presented,
    pub n_map: ZMat,
    pub i_map: ZMat,
}

fn scalar(n: usize, c: &BigInt) -> ZMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { c.clone() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn sub(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect())
        .collect()
}

fn add(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMat {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u + v).collect())
        .collect()
}

fn dims_ok(m: &[Vec<BigInt>], rows: usize, cols: usize) -> bool {
    m.len() == rows && m.iter().all(|r| r.len() == cols)
}

/// Σ_{j<d} σ^j.
pub fn norm_element(sigma: &[Vec<BigInt>], d: u64) -> ZMat {
    let n = sigma.len();
    let mut acc = scalar(n, &BigInt::zero());
    let mut pw = identity(n);
    for _ in 0..d {
        acc = add(&acc, &pw);
        pw = mat_mul(&pw, sigma);
    }
    acc
}

fn power(sigma: &[Vec<BigInt>], d: u64) -> ZMat {
    (0..d).fold(identity(sigma.len()), |acc, _| mat_mul(&acc, sigma))
}

pub fn make_cmf(
    d: u64,
    x1: Presented,
    sigma: ZMat,
    xg: Presented,
    n_map: ZMat,
    i_map: ZMat,
) -> Result<CMFPresentation> {
    if d == 0 {
        return Err(Error::Invalid("group order must be positive".into()));
    }
    if x1.n == 0 || xg.n == 0 {
        return Err(Error::Invalid(
            "present the zero group with one generator and relation 1".into(),
        ));
    }
    let (n1, ng) = (x1.n, xg.n);
    if !dims_ok(&sigma, n1, n1) || !dims_ok(&n_map, n1, ng) || !dims_ok(&i_map, ng, n1) {
        return Err(Error::Invalid(
            "matrix dimensions do not match the groups".into(),
        ));
    }
    let fail = |w: &str| Err(Error::AxiomViolation(w.into()));
    if !x1.is_hom(&sigma, &x1) {
        return fail("σ is not an endomorphism of X1");
    }
    if !x1.is_hom(&n_map, &xg) {
        return fail("N is not a homomorphism");
    }
    if !xg.is_hom(&i_map, &x1) {
        return fail("I is not a homomorphism");
    }
    if !x1.maps_equal(&power(&sigma, d), &identity(n1), &x1) {
        return fail("σ^d ≠ id");
    }
    if !x1.maps_equal(&mat_mul(&sigma, &n_map), &n_map, &xg) {
        return fail("N∘σ ≠ N");
    }
    if !xg.maps_equal(&mat_mul(&i_map, &sigma), &i_map, &x1) {
        return fail("σ∘I ≠ I");
    }
    if !x1.maps_equal(&mat_mul(&n_map, &i_map), &norm_element(&sigma, d), &x1) {
        return fail("I∘N ≠ Σσ^j");
    }
    if !xg.maps_equal(&mat_mul(&i_map, &n_map), &scalar(ng, &BigInt::from(d)), &xg) {
        return fail("N∘I ≠ |G|·id");
    }
    Ok(CMFPresentation {
        d,
        x1,
        sigma,
        xg,
        n_map,
        i_map,
    })
}

/// The six subquotients, in the order c1, Ĥ⁻¹, k0, c0, Ĥ⁰, k1 of the exact
/// sequence 0 → c1 → Ĥ⁻¹ → k0 → c0 → Ĥ⁰ → k1 → 0.
#[derive(Clone, Debug)]
pub struct SectionLattices {
    pub c1: Subquotient,
    pub h_minus1: Subquotient,
    pub k0: Subquotient,
    pub c0: Subquotient,
    pub h_0: Subquotient,
    pub k1: Subquotient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionCohomology {
    pub c0: FinAbGroup,
    pub c1: FinAbGroup,
    pub k0: FinAbGroup,
    pub k1: FinAbGroup,
    pub h_minus1: FinAbGroup,
    pub h_0: FinAbGroup,
}

impl SectionCohomology {
    pub fn p_part(&self, p: u64) -> SectionCohomology {
        SectionCohomology {
            c0: self.c0.p_part(p),
            c1: self.c1.p_part(p),
            k0: self.k0.p_part(p),
            k1: self.k1.p_part(p),
            h_minus1: self.h_minus1.p_part(p),
            h_0: self.h_0.p_part(p),
        }
    }

    pub fn is_trivial(&self) -> bool {
        [
            &self.c0,
            &self.c1,
            &self.k0,
            &self.k1,
            &self.h_minus1,
            &self.h_0,
        ]
        .iter()
        .all(|g| g.is_trivial())
    }

    pub fn to_json(&self) -> Value {
        let g = |x: &FinAbGroup| {
            json!(x
                .invariants
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>())
        };
        json!({
            "c0": g(&self.c0),
            "c1": g(&self.c1),
            "k0": g(&self.k0),
            "k1": g(&self.k1),
            "h_minus1": g(&self.h_minus1),
            "h_0": g(&self.h_0),
        })
    }
}

impl CMFPresentation {
    fn sigma_minus_one(&self) -> ZMat {
        sub(&self.sigma, &identity(self.x1.n))
    }

    pub fn section_lattices(&self) -> SectionLattices {
        let (x1, xg) = (&self.x1, &self.xg);
        let s1 = self.sigma_minus_one();
        let nu = norm_element(&self.sigma, self.d);
        let omega = x1.image(&s1, x1);
        let fixed = x1.kernel(&s1, x1);
        SectionLattices {
            c1: Subquotient {
                top: x1.kernel(&self.n_map, xg),
                bottom: omega.clone(),
            },
            h_minus1: Subquotient {
                top: x1.kernel(&nu, x1),
                bottom: omega,
            },
            k0: Subquotient {
                top: xg.kernel(&self.i_map, x1),
                bottom: xg.rels.clone(),
            },
            c0: Subquotient {
                top: Lattice::whole(xg.n),
                bottom: x1.image(&self.n_map, xg),
            },
            h_0: Subquotient {
                top: fixed.clone(),
                bottom: x1.image(&nu, x1),
            },
            k1: Subquotient {
                top: fixed,
                bottom: xg.image(&self.i_map, x1),
            },
        }
    }

    pub fn section_cohomology(&self) -> SectionCohomology {
        let l = self.section_lattices();
        SectionCohomology {
            c0: l.c0.group(),
            c1: l.c1.group(),
            k0: l.k0.group(),
            k1: l.k1.group(),
            h_minus1: l.h_minus1.group(),
            h_0: l.h_0.group(),
        }
    }

    /// Exactness of 0 → c1 → Ĥ⁻¹ → k0 → c0 → Ĥ⁰ → k1 → 0 at each of the
    /// six nodes, in that order. The maps are inclusion, N, inclusion, I and
    /// projection.
    pub fn six_term_check(&self) -> SixTermReport {
        let l = self.section_lattices();
        let (n1, ng) = (self.x1.n, self.xg.n);
        let nodes = [&l.c1, &l.h_minus1, &l.k0, &l.c0, &l.h_0, &l.k1];
        let maps: [ZMat; 5] = [
            identity(n1),
            self.n_map.clone(),
            identity(ng),
            self.i_map.clone(),
            identity(n1),
        ];
        let dims = [n1, n1, ng, ng, n1, n1];
        let mut well_defined = true;
        for (i, m) in maps.iter().enumerate() {
            let (a, b) = (nodes[i], nodes[i + 1]);
            if !b.top.contains(&a.top.image(m, dims[i + 1]).sum(&b.bottom))
                || !b
                    .bottom
                    .contains(&a.bottom.image(m, dims[i + 1]).sum(&b.bottom))
            {
                well_defined = false;
            }
        }
        let mut exact = [false; 6];
        for (k, node) in nodes.iter().enumerate() {
            let image = if k == 0 {
                node.bottom.clone()
            } else {
                nodes[k - 1]
                    .top
                    .image(&maps[k - 1], dims[k])
                    .sum(&node.bottom)
            };
            let kernel = if k == 5 {
                node.top.clone()
            } else {
                node.top.preimage(&maps[k], &nodes[k + 1].bottom)
            };
            exact[k] = image == kernel;
        }
        SixTermReport {
            well_defined,
            exact,
        }
    }

    /// The p-primary sub-functor, presented on the p-primary sublattices.
    pub fn p_part(&self, p: u64) -> CMFPresentation {
        let pb = BigInt::from(p);
        let mut m = self.x1.exponent().lcm(&self.xg.exponent());
        while (&m % &pb).is_zero() {
            m /= &pb;
        }
        let restrict = |g: &Presented| -> (Lattice, Presented) {
            let l = Lattice::span(g.n, &scalar(g.n, &m)).sum(&g.rels);
            let rels: ZMat = g
                .rels
                .basis
                .iter()
                .map(|r| l.coords(r).expect("R ⊆ mX + R"))
                .collect();
            let pres = Presented::new(l.rank(), &rels).expect("full rank");
            (l, pres)
        };
        let (l1, x1) = restrict(&self.x1);
        let (lg, xg) = restrict(&self.xg);
        let transport = |src: &Lattice, dst: &Lattice, map: &ZMat| -> ZMat {
            mat_mul(&src.basis, map)
                .iter()
                .map(|v| dst.coords(v).expect("maps preserve p-parts"))
                .collect()
        };
        CMFPresentation {
            d: self.d,
            sigma: transport(&l1, &l1, &self.sigma),
            n_map: transport(&l1, &lg, &self.n_map),
            i_map: transport(&lg, &l1, &self.i_map),
            x1,
            xg,
        }
    }

    pub fn direct_sum(&self, other: &CMFPresentation) -> Result<CMFPresentation> {
        if self.d != other.d {
            return Err(Error::Invalid("direct sum needs the same group".into()));
        }
        let x1 = block_group(&self.x1, &other.x1);
        let xg = block_group(&self.xg, &other.xg);
        make_cmf(
            self.d,
            x1,
            block(&self.sigma, &other.sigma),
            xg,
            block(&self.n_map, &other.n_map),
            block(&self.i_map, &other.i_map),
        )
    }

    pub fn to_json(&self) -> Value {
        let m = |a: &ZMat| {
            json!(a
                .iter()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        };
        json!({
            "d": self.d,
            "x1": {"gens": self.x1.n, "rels": m(&self.x1.rels.basis)},
            "sigma": m(&self.sigma),
            "xg": {"gens": self.xg.n, "rels": m(&self.xg.rels.basis)},
            "N": m(&self.n_map),
            "I": m(&self.i_map),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTermReport {
    pub well_defined: bool,
    /// exactness at c1, Ĥ⁻¹, k0, c0, Ĥ⁰, k1
    pub exact: [bool; 6],
}

impl SixTermReport {
    pub const NODES: [&'static str; 6] = ["c1", "h_minus1", "k0", "c0", "h_0", "k1"];

    pub fn ok(&self) -> bool {
        self.well_defined && self.exact.iter().all(|&b| b)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        Self::NODES
            .iter()
            .zip(self.exact)
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| *n)
            .collect()
    }
}

fn block(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMat {
    let (ca, cb) = (
        a.first().map_or(0, |r| r.len()),
        b.first().map_or(0, |r| r.len()),
    );
    let mut out = Vec::with_capacity(a.len() + b.len());
    for r in a {
        let mut row = r.clone();
        row.extend(std::iter::repeat_n(BigInt::zero(), cb));
        out.push(row);
    }
    for r in b {
        let mut row = vec![BigInt::zero(); ca];
        row.extend(r.iter().cloned());
        out.push(row);
    }
    out
}

fn block_group(a: &Presented, b: &Presented) -> Presented {
    Presented::new(a.n + b.n, &block(&a.rels.basis, &b.rels.basis)).expect("finite")
}

/// XG = X₁^G, N = Σσ^j, I = inclusion.
pub fn fixed_point_functor(d: u64, x1: Presented, sigma: ZMat) -> Result<CMFPresentation> {
    let s1 = sub(&sigma, &identity(x1.n));
    let fixed = x1.kernel(&s1, &x1);
    let rels: ZMat = x1
        .rels
        .basis
        .iter()
        .map(|r| fixed.coords(r).expect("R ⊆ X^G"))
        .collect();
    let xg = Presented::new(fixed.rank(), &rels)?;
    let nu = norm_element(&sigma, d);
    let n_map: ZMat = nu
        .iter()
        .map(|r| {
            fixed
                .coords(r)
                .ok_or_else(|| Error::AxiomViolation("σ^d ≠ id".into()))
        })
        .collect::<Result<_>>()?;
    let i_map = fixed.basis.clone();
    make_cmf(d, x1, sigma, xg, n_map, i_map)
}

/// XG = (X₁)_G, N = projection, I induced by Σσ^j.
pub fn orbit_functor(d: u64, x1: Presented, sigma: ZMat) -> Result<CMFPresentation> {
    let n = x1.n;
    let s1 = sub(&sigma, &identity(n));
    let rels = x1.image(&s1, &x1);
    let xg = Presented::new(n, &rels.basis)?;
    let nu = norm_element(&sigma, d);
    make_cmf(d, x1, sigma, xg, identity(n), nu)
}

/// A random G-module: a direct sum of ℤ/m with σ acting by a unit u with
/// u^d ≡ 1, and permutation modules ℤ/m[G/H] with σ a cyclic shift.
pub fn random_module<R: Rng>(rng: &mut R, d: u64, max_order: u64) -> (Presented, ZMat) {
    loop {
        let parts = rng.gen_range(1..=3);
        let mut orders: Vec<u64> = Vec::new();
        let mut blocks: Vec<ZMat> = Vec::new();
        for _ in 0..parts {
            let m = rng.gen_range(2..=12u64);
            let divisors: Vec<u64> = (1..=d).filter(|k| d % k == 0).collect();
            if rng.gen_bool(0.5) {
                let units: Vec<u64> = (1..m)
                    .filter(|&u| {
                        crate::arith::gcd_u64(u, m) == 1 && crate::arith::pow_mod(u, d, m) == 1
                    })
                    .collect();
                let u = units[rng.gen_range(0..units.len())];
                orders.push(m);
                blocks.push(vec![vec![BigInt::from(u)]]);
            } else {
                let k = divisors[rng.gen_range(0..divisors.len())] as usize;
                let mut shift = vec![vec![BigInt::zero(); k]; k];
                for (i, row) in shift.iter_mut().enumerate() {
                    row[(i + 1) % k] = BigInt::one();
                }
                orders.extend(std::iter::repeat_n(m, k));
                blocks.push(shift);
            }
        }
        let size = orders.iter().try_fold(1u64, |a, &b| a.checked_mul(b));
        if size.is_none_or(|s| s > max_order) {
            continue;
        }
        let sigma = blocks.iter().fold(Vec::new(), |acc: ZMat, b| {
            if acc.is_empty() {
                b.clone()
            } else {
                block(&acc, b)
            }
        });
        let d_big: Vec<BigInt> = orders.iter().map(|&m| BigInt::from(m)).collect();
        let x1 = Presented::cyclic_sum(&d_big).expect("finite");
        return (x1, sigma);
    }
}

fn json_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Invalid(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Invalid(format!("not an integer: {s:?}"))),
        _ => Err(Error::Invalid(format!("not an integer: {v}"))),
    }
}

fn json_matrix(v: &Value, what: &str) -> Result<ZMat> {
    v.as_array()
        .ok_or_else(|| Error::Invalid(format!("{what} must be a matrix")))?
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Invalid(format!("{what} must be a matrix")))?
                .iter()
                .map(json_int)
                .collect()
        })
        .collect()
}

fn json_group(v: &Value, what: &str) -> Result<Presented> {
    if let Some(inv) = v.get("invariants") {
        let d: Vec<BigInt> = inv
            .as_array()
            .ok_or_else(|| Error::Invalid(format!("{what}.invariants must be a list")))?
            .iter()
            .map(json_int)
            .collect::<Result<_>>()?;
        return Presented::cyclic_sum(&d);
    }
    let n = v
        .get("gens")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Invalid(format!("{what} needs gens and rels, or invariants")))?
        as usize;
    let rels = json_matrix(
        v.get("rels").unwrap_or(&Value::Null),
        &format!("{what}.rels"),
    )?;
    Presented::new(n, &rels)
}

/// Parse {"d", "x1", "sigma", "xg", "N", "I"}; groups are either
/// {"invariants": [...]} or {"gens": n, "rels": [[...]]}.
pub fn cmf_from_json(v: &Value) -> Result<CMFPresentation> {
    let d = v
        .get("d")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Invalid("d must be a positive integer".into()))?;
    let field = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Invalid(format!("missing field {k}")))
    };
    make_cmf(
        d,
        json_group(field("x1")?, "x1")?,
        json_matrix(field("sigma")?, "sigma")?,
        json_group(field("xg")?, "xg")?,
        json_matrix(field("N")?, "N")?,
        json_matrix(field("I")?, "I")?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::from_i64;

    fn cyc(d: &[i64]) -> Presented {
        Presented::cyclic_sum(&d.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>()).unwrap()
    }

    fn inv(g: &FinAbGroup) -> Vec<u64> {
        g.invariants_u64()
    }

    #[test]
    fn trivial_action_example() {
        let c = make_cmf(
            2,
            cyc(&[2]),
            from_i64(&[vec![1]]),
            cyc(&[2]),
            from_i64(&[vec![1]]),
            from_i64(&[vec![0]]),
        )
        .unwrap();
        let h = c.section_cohomology();
        assert!(h.c0.is_trivial() && h.c1.is_trivial());
        assert_eq!(inv(&h.k0), vec![2]);
        assert_eq!(inv(&h.k1), vec![2]);
        assert_eq!(inv(&h.h_minus1), vec![2]);
        assert_eq!(inv(&h.h_0), vec![2]);
        assert!(c.six_term_check().ok());
    }

    #[test]
    fn axiom_violation() {
        let e = make_cmf(
            2,
            cyc(&[2]),
            from_i64(&[vec![1]]),
            cyc(&[2]),
            from_i64(&[vec![1]]),
            from_i64(&[vec![1]]),
        );
        assert!(matches!(e, Err(Error::AxiomViolation(_))));
    }

    #[test]
    fn sign_action_on_z4() {
        let c = make_cmf(
            2,
            cyc(&[4]),
            from_i64(&[vec![-1]]),
            cyc(&[2]),
            from_i64(&[vec![0]]),
            from_i64(&[vec![2]]),
        )
        .unwrap();
        let h = c.section_cohomology();
        assert_eq!(inv(&h.c1), vec![2]);
        assert!(h.k0.is_trivial());
        assert!(c.six_term_check().ok());
        // the same functor from the fixed-point construction
        let f = fixed_point_functor(2, cyc(&[4]), from_i64(&[vec![-1]])).unwrap();
        assert_eq!(f.section_cohomology(), h);
    }

    #[test]
    fn trivial_group_has_no_cohomology() {
        let c = make_cmf(
            1,
            cyc(&[6]),
            from_i64(&[vec![1]]),
            cyc(&[6]),
            from_i64(&[vec![1]]),
            from_i64(&[vec![1]]),
        )
        .unwrap();
        assert!(c.section_cohomology().is_trivial());
    }

    #[test]
    fn coprime_part_has_no_c0_or_k1() {
        let c = fixed_point_functor(2, cyc(&[6]), from_i64(&[vec![1]])).unwrap();
        let h3 = c.p_part(3).section_cohomology();
        assert!(h3.c0.is_trivial() && h3.k1.is_trivial());
        assert_eq!(h3, c.section_cohomology().p_part(3));
        assert!(c.p_part(5).section_cohomology().is_trivial());
        assert_eq!(c.p_part(5).x1.group(), FinAbGroup::trivial());
    }

    #[test]
    fn json_round_trip() {
        let c = fixed_point_functor(2, cyc(&[4]), from_i64(&[vec![-1]])).unwrap();
        assert_eq!(cmf_from_json(&c.to_json()).unwrap(), c);
        let v: Value = serde_json::from_str(
            r#"{"d":2,"x1":{"invariants":[4]},"sigma":[[-1]],"xg":{"invariants":[2]},"N":[[0]],"I":[[2]]}"#,
        )
        .unwrap();
        assert_eq!(
            inv(&cmf_from_json(&v).unwrap().section_cohomology().c1),
            vec![2]
        );
    }

    #[test]
    fn free_module_is_cohomologically_trivial() {
        // ℤ/6[C3] with the cyclic shift
        let shift = from_i64(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        let c = fixed_point_functor(3, cyc(&[6, 6, 6]), shift).unwrap();
        let h = c.section_cohomology();
        assert!(h.h_minus1.is_trivial() && h.h_0.is_trivial());
    }
}
