//! Ideals of an order as Hermite-normal-form lattices in its coordinates.

use crate::matrix::{self, ZMat};
use crate::order::Order;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealHNF {
    pub mat: ZMat,
    pub norm: BigInt,
}

impl IdealHNF {
    fn from_rows_mod(rows: &[Vec<BigInt>], d: &BigInt) -> IdealHNF {
        let mat = matrix::hnf_mod(rows, d);
        let norm = (0..mat.len()).map(|i| mat[i][i].clone()).product();
        IdealHNF { mat, norm }
    }

    /// The unit ideal O.
    pub fn whole(o: &Order) -> IdealHNF {
        IdealHNF {
            mat: matrix::identity(o.n),
            norm: BigInt::one(),
        }
    }

    /// γ·O for γ given by order coordinates (nonzero).
    pub fn principal(o: &Order, gamma: &[BigInt]) -> IdealHNF {
        let rows = o.mult_matrix(gamma);
        let d = matrix::det_bareiss(&rows).abs();
        assert!(!d.is_zero(), "principal ideal of zero");
        Self::from_rows_mod(&rows, &d)
    }

    /// a·O + γ·O for a nonzero integer a.
    pub fn two_element(o: &Order, a: &BigInt, gamma: &[BigInt]) -> IdealHNF {
        let a = a.abs();
        let rows = o.mult_matrix(gamma);
        Self::from_rows_mod(&rows, &a)
    }

    pub fn mul(&self, o: &Order, other: &IdealHNF) -> IdealHNF {
        let mut rows = Vec::with_capacity(o.n * o.n);
        for a in &self.mat {
            for b in &other.mat {
                rows.push(o.mul_coords(a, b));
            }
        }
        let d = &self.norm * &other.norm;
        Self::from_rows_mod(&rows, &d)
    }

    pub fn pow(&self, o: &Order, mut k: u32) -> IdealHNF {
        let mut acc = IdealHNF::whole(o);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(o, &b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(o, &b);
            }
        }
        acc
    }

    pub fn contains(&self, coords: &[BigInt]) -> bool {
        matrix::solve_integral(&self.mat, coords).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nf::NumberField;

    fn coords(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn primes_above_seven_in_sqrt2() {
        let k = NumberField::from_i64(&[-2, 0, 1]).unwrap();
        let o = Order::equation_order(&k);
        let seven = BigInt::from(7);
        let a = IdealHNF::two_element(&o, &seven, &coords(&[-3, 1]));
        let b = IdealHNF::two_element(&o, &seven, &coords(&[-4, 1]));
        assert_eq!(a.norm, seven);
        let prod = a.mul(&o, &b);
        assert_eq!(prod, IdealHNF::principal(&o, &coords(&[7, 0])));
        assert_eq!(prod.norm, BigInt::from(49));
        assert_eq!(a.mul(&o, &IdealHNF::whole(&o)), a);
    }

    #[test]
    fn ramified_square_in_sqrt_minus5() {
        let k = NumberField::from_i64(&[5, 0, 1]).unwrap();
        let o = Order::equation_order(&k);
        let q = IdealHNF::two_element(&o, &BigInt::from(2), &coords(&[1, 1]));
        assert_eq!(q.norm, BigInt::from(2));
        assert_eq!(q.pow(&o, 2), IdealHNF::principal(&o, &coords(&[2, 0])));
    }
}
