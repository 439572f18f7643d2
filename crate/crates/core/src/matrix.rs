//! Exact integer and rational matrix routines: Bareiss determinants,
//! Hermite and Smith normal forms, integer kernels and rational solves.
//!
//! Matrices are `Vec<Vec<BigInt>>` in row-major order. Lattices are spanned
//! by rows throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type ZMat = Vec<Vec<BigInt>>;
pub type QMat = Vec<Vec<BigRational>>;

pub fn zeros(r: usize, c: usize) -> ZMat {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn identity(n: usize) -> ZMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn from_i64(rows: &[Vec<i64>]) -> ZMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> ZMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigInt::zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !m[k][j].is_zero() {
                out[j] += x * &m[k][j];
            }
        }
    }
    out
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: ZMat = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Hermite normal form with row transform: returns `(h, u)` with `h = u · m`,
/// `u` unimodular, `h` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sit at the bottom.
pub fn hnf_with_transform(m: &[Vec<BigInt>]) -> (ZMat, ZMat) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut h: ZMat = m.to_vec();
    let mut u = identity(rows);
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        // fold every row below into the pivot row via extended gcd
        for r in pivot_row + 1..rows {
            if h[r][c].is_zero() {
                continue;
            }
            if h[pivot_row][c].is_zero() {
                h.swap(pivot_row, r);
                u.swap(pivot_row, r);
                continue;
            }
            let a = h[pivot_row][c].clone();
            let b = h[r][c].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let ag = &a / &g;
            let bg = &b / &g;
            let (hp, hr) = (h[pivot_row].clone(), h[r].clone());
            let (up, ur) = (u[pivot_row].clone(), u[r].clone());
            for j in 0..cols {
                h[pivot_row][j] = &x * &hp[j] + &y * &hr[j];
                h[r][j] = &ag * &hr[j] - &bg * &hp[j];
            }
            for j in 0..rows {
                u[pivot_row][j] = &x * &up[j] + &y * &ur[j];
                u[r][j] = &ag * &ur[j] - &bg * &up[j];
            }
        }
        if h[pivot_row][c].is_zero() {
            continue;
        }
        if h[pivot_row][c].is_negative() {
            for v in h[pivot_row].iter_mut() {
                *v = -&*v;
            }
            for v in u[pivot_row].iter_mut() {
                *v = -&*v;
            }
        }
        pivots.push((pivot_row, c));
        pivot_row += 1;
    }
    // reduce entries above pivots
    for &(pr, c) in &pivots {
        let piv = h[pr][c].clone();
        for r in 0..pr {
            let q = h[r][c].div_floor(&piv);
            if q.is_zero() {
                continue;
            }
            let (hp, up) = (h[pr].clone(), u[pr].clone());
            for j in 0..cols {
                h[r][j] -= &q * &hp[j];
            }
            for j in 0..rows {
                u[r][j] -= &q * &up[j];
            }
        }
    }
    (h, u)
}

/// Nonzero rows of the Hermite normal form.
pub fn hnf(m: &[Vec<BigInt>]) -> ZMat {
    let (h, _) = hnf_with_transform(m);
    h.into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}

/// HNF of the full-rank lattice spanned by `m` together with `d·ℤ^n`,
/// keeping entries bounded by working modulo `d`.
pub fn hnf_mod(m: &[Vec<BigInt>], d: &BigInt) -> ZMat {
    let n = m.first().map_or(0, |r| r.len());
    let mut rows: ZMat = m
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(d)).collect())
        .collect();
    let mut out = zeros(n, n);
    // process column by column, keeping a working set reduced mod d
    for c in 0..n {
        let mut pivot: Vec<BigInt> = vec![BigInt::zero(); n];
        pivot[c] = d.clone();
        for r in rows.iter_mut() {
            if r[c].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&pivot[c], &r[c]);
            let a = &pivot[c] / &g;
            let b = &r[c] / &g;
            let new_pivot: Vec<BigInt> = (0..n)
                .map(|j| (&x * &pivot[j] + &y * &r[j]).mod_floor(d))
                .collect();
            let new_r: Vec<BigInt> = (0..n)
                .map(|j| (&a * &r[j] - &b * &pivot[j]).mod_floor(d))
                .collect();
            pivot = new_pivot;
            pivot[c] = g.clone();
            *r = new_r;
            r[c] = BigInt::zero();
        }
        if pivot[c].is_zero() {
            pivot[c] = d.clone();
        }
        // the pivot row multiplied by d/pivot lands in the remaining rows
        let mult = d / &pivot[c];
        let extra: Vec<BigInt> = pivot.iter().map(|x| (x * &mult).mod_floor(d)).collect();
        if extra.iter().any(|x| !x.is_zero()) {
            rows.push(extra);
        }
        out[c] = pivot;
        for j in 0..c {
            out[c][j] = BigInt::zero();
        }
    }
    // make upper triangular and reduce above the diagonal
    for c in 0..n {
        let piv = out[c][c].clone();
        for r in 0..c {
            let q = out[r][c].div_floor(&piv);
            if !q.is_zero() {
                let pr = out[c].clone();
                for j in c..n {
                    out[r][j] -= &q * &pr[j];
                }
            }
        }
    }
    out
}

/// Basis (rows) of the left integer kernel `{x : x · m = 0}`.
pub fn left_kernel(m: &[Vec<BigInt>]) -> ZMat {
    let (h, u) = hnf_with_transform(m);
    h.iter()
        .zip(u)
        .filter(|(r, _)| r.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect()
}

/// Smith normal form: returns `(d, u, v)` with `u · m · v = diag(d)` and
/// `d` a divisibility chain of nonnegative integers of length `min(r, c)`.
pub fn smith(m: &[Vec<BigInt>]) -> (Vec<BigInt>, ZMat, ZMat) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: ZMat = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let k = rows.min(cols);
    for t in 0..k {
        // find a nonzero entry of smallest magnitude in the remaining block
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let mut clean = true;
            let piv = a[t][t].clone();
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&piv);
                if !q.is_zero() {
                    let (at, ut) = (a[t].clone(), u[t].clone());
                    for j in 0..cols {
                        a[i][j] -= &q * &at[j];
                    }
                    for j in 0..rows {
                        u[i][j] -= &q * &ut[j];
                    }
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&piv);
                if !q.is_zero() {
                    for i in 0..rows {
                        let x = a[i][t].clone();
                        a[i][j] -= &q * &x;
                    }
                    for i in 0..cols {
                        let x = v[i][t].clone();
                        v[i][j] -= &q * &x;
                    }
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: the pivot must divide the rest of the block
            let mut bad = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&a[i][j] % &piv).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    let (ai, ui) = (a[i].clone(), u[i].clone());
                    for j in 0..cols {
                        a[t][j] += &ai[j];
                    }
                    for j in 0..rows {
                        u[t][j] += &ui[j];
                    }
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -&a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -&u[t][j];
            }
        }
    }
    let d = (0..k).map(|i| a[i][i].clone()).collect();
    (d, u, v)
}

pub fn to_q(m: &[Vec<BigInt>]) -> QMat {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Inverse of a square rational matrix, `None` if singular.
pub fn q_inverse(m: &[Vec<BigRational>]) -> Option<QMat> {
    let n = m.len();
    let mut a: QMat = m.to_vec();
    let mut inv: QMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        inv.swap(c, p);
        let piv = a[c][c].clone();
        for j in 0..n {
            a[c][j] = &a[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..n {
                let (x, y) = (a[c][j].clone(), inv[c][j].clone());
                a[r][j] -= &f * x;
                inv[r][j] -= &f * y;
            }
        }
    }
    Some(inv)
}

pub fn q_vec_mul(v: &[BigRational], m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![BigRational::zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..cols {
            out[j] += x * &m[k][j];
        }
    }
    out
}

/// Coordinates `y` with `y · basis = v` for a square nonsingular integer basis,
/// when they are integral.
pub fn solve_integral(basis: &[Vec<BigInt>], v: &[BigInt]) -> Option<Vec<BigInt>> {
    // basis is square and (typically) upper triangular from an HNF; use
    // back-substitution when triangular, otherwise fall back to a rational solve
    let n = basis.len();
    let upper = (0..n).all(|i| (0..i).all(|j| basis[i][j].is_zero()));
    if upper {
        let mut rest = v.to_vec();
        let mut y = vec![BigInt::zero(); n];
        for i in 0..n {
            if basis[i][i].is_zero() {
                return None;
            }
            let (q, r) = rest[i].div_rem(&basis[i][i]);
            if !r.is_zero() {
                return None;
            }
            for j in i..n {
                rest[j] -= &q * &basis[i][j];
            }
            y[i] = q;
        }
        if rest.iter().all(|x| x.is_zero()) {
            Some(y)
        } else {
            None
        }
    } else {
        let inv = q_inverse(&to_q(basis))?;
        let vq: Vec<BigRational> = v
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let y = q_vec_mul(&vq, &inv);
        y.into_iter()
            .map(|x| {
                if x.is_integer() {
                    Some(x.to_integer())
                } else {
                    None
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[&[i64]]) -> ZMat {
        from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn bareiss_matches_small_dets() {
        assert_eq!(det_bareiss(&z(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(det_bareiss(&z(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            det_bareiss(&z(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
    }

    #[test]
    fn hnf_transform_is_consistent() {
        let m = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (h, u) = hnf_with_transform(&m);
        assert_eq!(mat_mul(&u, &m), h);
        assert_eq!(det_bareiss(&u).abs(), BigInt::one());
        let nz = hnf(&m);
        assert_eq!(nz[0][0], BigInt::from(2));
    }

    #[test]
    fn hnf_mod_agrees_with_plain_hnf() {
        let m = z(&[&[7, 0], &[-3, 1]]);
        let d = BigInt::from(7);
        let a = hnf_mod(&m, &d);
        let mut with_d = m.clone();
        with_d.push(vec![BigInt::from(7), BigInt::zero()]);
        with_d.push(vec![BigInt::zero(), BigInt::from(7)]);
        assert_eq!(a, hnf(&with_d));
    }

    #[test]
    fn smith_of_classic_example() {
        let m = z(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let (d, u, v) = smith(&m);
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let prod = mat_mul(&mat_mul(&u, &m), &v);
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { d[i].clone() } else { BigInt::zero() };
                assert_eq!(prod[i][j], expect);
            }
        }
    }

    #[test]
    fn kernel_annihilates() {
        let m = z(&[&[1, 2], &[2, 4], &[3, 7]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 1);
        let prod = vec_mul(&k[0], &m);
        assert!(prod.iter().all(|x| x.is_zero()));
    }
}
