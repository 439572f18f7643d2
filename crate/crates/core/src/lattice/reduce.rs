//! Floating-point LLL with an exact integer transform, and Fincke–Pohst
//! enumeration of short vectors.

use crate::error::{Error, Result};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Combine rows: Σ_j u[j]·rows[j].
pub fn combine(u: &[i128], rows: &[Vec<f64>]) -> Vec<f64> {
    let dim = rows.first().map_or(0, |r| r.len());
    let mut out = vec![0.0; dim];
    for (c, r) in u.iter().zip(rows) {
        if *c == 0 {
            continue;
        }
        let cf = *c as f64;
        for (o, x) in out.iter_mut().zip(r) {
            *o += cf * x;
        }
    }
    out
}

fn gram_schmidt(b: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&b[i], &bstar[j]) / norms[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        bstar.push(v);
    }
    (mu, norms)
}

/// LLL-reduce the rows of `basis`. Returns the reduced rows (recomputed
/// from the original rows through the transform) and the unimodular
/// transform `u` with reduced = u · basis.
pub fn lll_reduce(basis: &[Vec<f64>], delta: f64) -> Result<(Vec<Vec<f64>>, Vec<Vec<i128>>)> {
    let n = basis.len();
    if !(delta > 0.25 && delta < 1.0) {
        return Err(Error::Invalid(format!(
            "LLL delta {delta} outside (0.25, 1)"
        )));
    }
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| {
            let mut r = vec![0i128; n];
            r[i] = 1;
            r
        })
        .collect();
    let mut b: Vec<Vec<f64>> = basis.to_vec();
    let (_, norms0) = gram_schmidt(&b);
    let scale = norms0.iter().cloned().fold(0.0, f64::max).max(1e-300);
    if norms0.iter().any(|&x| !(x > 1e-24 * scale)) {
        return Err(Error::DependentInput);
    }
    let mut k = 1;
    let mut iterations = 0u64;
    while k < n {
        iterations += 1;
        if iterations > 200_000 {
            return Err(Error::Invalid("LLL did not converge".into()));
        }
        let (mut mu, _) = gram_schmidt(&b);
        // size reduction of row k
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i128;
                let (bj, uj) = (b[j].clone(), u[j].clone());
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                for (x, y) in u[k].iter_mut().zip(&uj) {
                    *x -= qi * y;
                }
                for i in 0..j {
                    mu[k][i] -= q * mu[j][i];
                }
                mu[k][j] -= q;
            }
        }
        let (mu, norms) = gram_schmidt(&b);
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    // re-embed through the exact transform to shed accumulated drift
    let reduced = u.iter().map(|row| combine(row, basis)).collect();
    Ok((reduced, u))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumOutcome {
    Complete,
    Capped,
    Stopped,
}

/// Enumerate nonzero integer vectors x (one of each ±x pair) with
/// ‖Σ x_i b_i‖² ≤ bound, calling `visit` on each; `visit` returns true to
/// stop early. At most `cap` vectors are visited.
pub fn fincke_pohst<F>(b: &[Vec<f64>], bound: f64, cap: u64, mut visit: F) -> (EnumOutcome, u64)
where
    F: FnMut(&[i64]) -> bool,
{
    let n = b.len();
    // Cholesky-style decomposition of the Gram matrix: Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = dot(&b[i], &b[j]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let mut x = vec![0i64; n];
    let mut count = 0u64;
    let mut outcome = EnumOutcome::Complete;
    let mut stopped = false;
    enumerate_level(
        n as isize - 1,
        &q,
        bound,
        &mut x,
        &mut count,
        cap,
        &mut visit,
        &mut stopped,
        &mut outcome,
    );
    (outcome, count)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level<F>(
    level: isize,
    q: &[Vec<f64>],
    remaining: f64,
    x: &mut Vec<i64>,
    count: &mut u64,
    cap: u64,
    visit: &mut F,
    stopped: &mut bool,
    outcome: &mut EnumOutcome,
) where
    F: FnMut(&[i64]) -> bool,
{
    if *stopped {
        return;
    }
    let n = x.len();
    if level < 0 {
        // skip zero and keep the representative whose last nonzero entry is positive
        match x.iter().rev().find(|&&c| c != 0) {
            Some(&c) if c > 0 => {}
            _ => return,
        }
        *count += 1;
        if *count > cap {
            *outcome = EnumOutcome::Capped;
            *stopped = true;
            return;
        }
        if visit(x) {
            *outcome = EnumOutcome::Stopped;
            *stopped = true;
        }
        return;
    }
    let i = level as usize;
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let qii = q[i][i];
    let radius = (remaining.max(0.0) / qii).sqrt();
    let lo = (center - radius - 1e-9).ceil() as i64;
    let hi = (center + radius + 1e-9).floor() as i64;
    for v in lo..=hi {
        let t = v as f64 - center;
        let used = qii * t * t;
        if used > remaining * (1.0 + 1e-12) + 1e-12 {
            continue;
        }
        x[i] = v;
        enumerate_level(
            level - 1,
            q,
            remaining - used,
            x,
            count,
            cap,
            visit,
            stopped,
            outcome,
        );
        if *stopped {
            break;
        }
    }
    x[i] = 0;
}
