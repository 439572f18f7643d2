//! Dense linear algebra over F_p (word-size p).

use crate::arith::{inv_mod, mul_mod, sub_mod};

pub type FpMat = Vec<Vec<u64>>;

/// Row-reduce in place; returns pivot columns. Pivot search is in row
/// order, so the result is deterministic.
pub fn row_reduce(m: &mut FpMat, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| m[i][c] % p != 0) else {
            continue;
        };
        m.swap(r, sel);
        let inv = inv_mod(m[r][c] % p, p).expect("pivot invertible");
        for x in m[r].iter_mut() {
            *x = mul_mod(*x % p, inv, p);
        }
        for i in 0..rows {
            if i == r || m[i][c] % p == 0 {
                continue;
            }
            let f = m[i][c] % p;
            for j in 0..cols {
                let t = mul_mod(f, m[r][j], p);
                m[i][j] = sub_mod(m[i][j] % p, t, p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<u64>], p: u64) -> usize {
    let mut a = m.to_vec();
    row_reduce(&mut a, p).len()
}

/// Basis of the right kernel `{v : m · v = 0}`.
pub fn right_kernel(m: &[Vec<u64>], cols: usize, p: u64) -> FpMat {
    let mut a = m.to_vec();
    let pivots = row_reduce(&mut a, p);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][free] % p) % p;
        }
        out.push(v);
    }
    out
}

/// Basis of the left kernel `{v : v · m = 0}`.
pub fn left_kernel(m: &[Vec<u64>], p: u64) -> FpMat {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let t: FpMat = (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j]).collect())
        .collect();
    right_kernel(&t, rows, p)
}

/// Row-space basis (reduced echelon, nonzero rows).
pub fn row_space(m: &[Vec<u64>], p: u64) -> FpMat {
    let mut a = m.to_vec();
    let k = row_reduce(&mut a, p).len();
    a.truncate(k);
    a
}
