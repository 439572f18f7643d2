//! Finite abelian groups given by generators and relations.
//!
//! A presented group is ℤ^n / R with R a full-rank row lattice. Subgroups
//! are lattices L with R ⊆ L ⊆ ℤ^n, stored as canonical HNF bases, and
//! homomorphisms act on row vectors: x ↦ x·M.

use crate::error::{Error, Result};
use crate::matrix::{hnf, left_kernel, mat_mul, smith, ZMat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// Invariant factors d₁ | d₂ | … with every dᵢ ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    pub invariants: Vec<BigInt>,
}

impl FinAbGroup {
    pub fn trivial() -> FinAbGroup {
        FinAbGroup {
            invariants: Vec::new(),
        }
    }

    pub fn from_u64(inv: &[u64]) -> FinAbGroup {
        FinAbGroup::from_diagonal(&inv.iter().map(|&d| BigInt::from(d)).collect::<Vec<_>>())
    }

    /// Normalize an arbitrary list of cyclic orders (0 is not allowed).
    pub fn from_diagonal(d: &[BigInt]) -> FinAbGroup {
        let n = d.len();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (i, x) in d.iter().enumerate() {
            m[i][i] = x.clone();
        }
        relation_invariants(&m)
    }

    pub fn order(&self) -> BigInt {
        self.invariants.iter().fold(BigInt::one(), |a, b| a * b)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// p-primary part.
    pub fn p_part(&self, p: u64) -> FinAbGroup {
        let pb = BigInt::from(p);
        let d: Vec<BigInt> = self
            .invariants
            .iter()
            .map(|x| {
                let mut q = BigInt::one();
                let mut r = x.clone();
                while (&r % &pb).is_zero() {
                    r /= &pb;
                    q *= &pb;
                }
                q
            })
            .collect();
        FinAbGroup::from_diagonal(&d)
    }

    pub fn invariants_u64(&self) -> Vec<u64> {
        self.invariants
            .iter()
            .map(|x| u64::try_from(x).unwrap_or(u64::MAX))
            .collect()
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariants.iter().map(|d| format!("C{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Invariants of ℤ^n / rowspan(rels); the quotient must be finite.
pub fn relation_invariants(rels: &[Vec<BigInt>]) -> FinAbGroup {
    if rels.is_empty() {
        return FinAbGroup::trivial();
    }
    let (d, _, _) = smith(rels);
    let mut inv: Vec<BigInt> = d.into_iter().filter(|x| !x.is_one()).collect();
    debug_assert!(inv.iter().all(|x| !x.is_zero()), "infinite quotient");
    inv.sort();
    FinAbGroup { invariants: inv }
}

/// Canonical basis of a full-rank lattice in ℤ^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub basis: ZMat,
}

impl Lattice {
    pub fn span(n: usize, rows: &[Vec<BigInt>]) -> Lattice {
        let rows: ZMat = rows
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let basis = if rows.is_empty() {
            Vec::new()
        } else {
            hnf(&rows)
        };
        debug_assert!(basis.iter().all(|r| r.len() == n));
        Lattice { basis }
    }

    pub fn whole(n: usize) -> Lattice {
        Lattice {
            basis: crate::matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.first().map_or(0, |r| r.len())
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let n = self.dim().max(other.dim());
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Lattice::span(n, &rows)
    }

    pub fn contains_vec(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|r| self.contains_vec(r))
    }

    /// Image under x ↦ x·m.
    pub fn image(&self, m: &[Vec<BigInt>], target_dim: usize) -> Lattice {
        if self.basis.is_empty() {
            return Lattice::span(target_dim, &[]);
        }
        Lattice::span(target_dim, &mat_mul(&self.basis, m))
    }

    /// {x ∈ self : x·m ∈ target}.
    pub fn preimage(&self, m: &[Vec<BigInt>], target: &Lattice) -> Lattice {
        let a = self.basis.len();
        let n = self.dim();
        if a == 0 {
            return self.clone();
        }
        let bm = mat_mul(&self.basis, m);
        let mut stacked = bm;
        for r in &target.basis {
            stacked.push(r.iter().map(|x| -x).collect());
        }
        if stacked.first().is_none_or(|r| r.is_empty()) {
            return self.clone();
        }
        let ker = left_kernel(&stacked);
        let coeffs: ZMat = ker.into_iter().map(|r| r[..a].to_vec()).collect();
        if coeffs.is_empty() {
            return Lattice::span(n, &[]);
        }
        Lattice::span(n, &mat_mul(&coeffs, &self.basis))
    }

    /// Coordinates of v in the HNF basis, if v lies in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut y = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let c = row.iter().position(|x| !x.is_zero())?;
            let (q, r) = rest[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
            y.push(q);
        }
        rest.iter().all(|x| x.is_zero()).then_some(y)
    }

    /// Invariants of self / sub for sub ⊆ self, both of full rank.
    pub fn quotient(&self, sub: &Lattice) -> FinAbGroup {
        let coords: ZMat = sub
            .basis
            .iter()
            .map(|v| self.coords(v).expect("sublattice"))
            .collect();
        if self.basis.is_empty() || coords.is_empty() {
            return FinAbGroup::trivial();
        }
        relation_invariants(&coords)
    }
}

/// Subquotient A/B of ℤ^n with B ⊆ A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subquotient {
    pub top: Lattice,
    pub bottom: Lattice,
}

impl Subquotient {
    pub fn group(&self) -> FinAbGroup {
        self.top.quotient(&self.bottom)
    }
}

/// A finite abelian group ℤ^n / R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presented {
    pub n: usize,
    pub rels: Lattice,
}

impl Presented {
    pub fn new(n: usize, rels: &[Vec<BigInt>]) -> Result<Presented> {
        if rels.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("relation has the wrong length".into()));
        }
        let rels = Lattice::span(n, rels);
        if rels.rank() != n {
            return Err(Error::Invalid("presented group is infinite".into()));
        }
        Ok(Presented { n, rels })
    }

    /// ⊕ ℤ/dᵢ.
    pub fn cyclic_sum(d: &[BigInt]) -> Result<Presented> {
        let n = d.len();
        let rels: ZMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { d[i].clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Presented::new(n, &rels)
    }

    pub fn group(&self) -> FinAbGroup {
        Lattice::whole(self.n).quotient(&self.rels)
    }

    pub fn exponent(&self) -> BigInt {
        self.group()
            .invariants
            .last()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    /// Is x ↦ x·m a well-defined map to `target`?
    pub fn is_hom(&self, m: &[Vec<BigInt>], target: &Presented) -> bool {
        m.len() == self.n
            && m.iter().all(|r| r.len() == target.n)
            && self
                .rels
                .basis
                .iter()
                .all(|r| target.rels.contains_vec(&vec_mat(r, m)))
    }

    /// Do two matrices define the same map into `target`?
    pub fn maps_equal(&self, a: &[Vec<BigInt>], b: &[Vec<BigInt>], target: &Presented) -> bool {
        a.iter().zip(b).all(|(ra, rb)| {
            let d: Vec<BigInt> = ra.iter().zip(rb).map(|(x, y)| x - y).collect();
            target.rels.contains_vec(&d)
        })
    }

    pub fn kernel(&self, m: &[Vec<BigInt>], target: &Presented) -> Lattice {
        Lattice::whole(self.n).preimage(m, &target.rels)
    }

    pub fn image(&self, m: &[Vec<BigInt>], target: &Presented) -> Lattice {
        Lattice::whole(self.n).image(m, target.n).sum(&target.rels)
    }
}

pub fn vec_mat(v: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::from_i64;

    #[test]
    fn invariants_normalize() {
        assert_eq!(FinAbGroup::from_u64(&[4, 6]).invariants_u64(), vec![2, 12]);
        assert_eq!(FinAbGroup::from_u64(&[1, 1]), FinAbGroup::trivial());
        assert_eq!(
            FinAbGroup::from_u64(&[2, 3, 4]).invariants_u64(),
            vec![2, 12]
        );
        assert_eq!(
            FinAbGroup::from_u64(&[2, 2, 12]).to_string(),
            "C2 x C2 x C12"
        );
        assert_eq!(
            FinAbGroup::from_u64(&[2, 12]).p_part(2).invariants_u64(),
            vec![2, 4]
        );
        assert_eq!(
            FinAbGroup::from_u64(&[2, 12]).p_part(5),
            FinAbGroup::trivial()
        );
    }

    #[test]
    fn kernel_and_image_of_doubling() {
        // multiplication by 2 on ℤ/4
        let g = Presented::cyclic_sum(&[BigInt::from(4)]).unwrap();
        let m = from_i64(&[vec![2]]);
        assert!(g.is_hom(&m, &g));
        let ker = g.kernel(&m, &g);
        assert_eq!(ker.quotient(&g.rels).invariants_u64(), vec![2]);
        let im = g.image(&m, &g);
        assert_eq!(im.quotient(&g.rels).invariants_u64(), vec![2]);
    }

    #[test]
    fn not_a_hom() {
        let a = Presented::cyclic_sum(&[BigInt::from(2)]).unwrap();
        let b = Presented::cyclic_sum(&[BigInt::from(3)]).unwrap();
        assert!(!a.is_hom(&from_i64(&[vec![1]]), &b));
        assert!(a.is_hom(&from_i64(&[vec![0]]), &b));
    }
}
