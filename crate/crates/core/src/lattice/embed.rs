//! Complex roots of f and the Minkowski embedding.
//!
//! Real embeddings come first, then one root from each complex-conjugate
//! pair (positive imaginary part). Complex coordinates are scaled by √2 so
//! that the Minkowski lattice of ℤ[θ] has covolume √|disc f|.

use crate::nf::{NFElement, NumberField};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct Embedding {
    pub roots: Vec<Complex64>,
    pub r1: usize,
    pub r2: usize,
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::zero();
    let mut dv = Complex64::zero();
    for &a in c.iter().rev() {
        dv = dv * z + v;
        v = v * z + a;
    }
    (v, dv)
}

/// All complex roots of a monic squarefree polynomial (Aberth–Ehrlich,
/// followed by Newton polishing).
pub fn complex_roots(poly: &[BigInt]) -> Vec<Complex64> {
    let c: Vec<f64> = poly.iter().map(big_to_f64).collect();
    let n = c.len() - 1;
    // start on a circle of the geometric-mean root size
    let radius = c[0].abs().powf(1.0 / n as f64).max(1.0);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, dv) = horner(&c, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    s += (z[i] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / (1.0 + z[i].norm()));
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(&c, *zi);
            if dv.norm() > 0.0 {
                *zi -= v / dv;
            }
        }
    }
    z
}

impl Embedding {
    pub fn new(k: &NumberField) -> Embedding {
        let mut roots = complex_roots(&k.poly);
        // the Sturm count decides which roots are real
        roots.sort_by(|a, b| a.im.abs().partial_cmp(&b.im.abs()).unwrap());
        let mut real: Vec<Complex64> = roots[..k.r1]
            .iter()
            .map(|z| Complex64::new(z.re, 0.0))
            .collect();
        real.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut cplx: Vec<Complex64> = roots[k.r1..]
            .iter()
            .filter(|z| z.im > 0.0)
            .copied()
            .collect();
        cplx.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(
            cplx.len(),
            k.r2,
            "root isolation disagrees with the signature"
        );
        real.extend(cplx);
        Embedding {
            roots: real,
            r1: k.r1,
            r2: k.r2,
        }
    }

    pub fn r(&self) -> usize {
        self.r1 + self.r2
    }

    /// σ_i(a) for the r1 + r2 chosen embeddings.
    pub fn eval(&self, a: &NFElement) -> Vec<Complex64> {
        let den = big_to_f64(&a.den);
        let c: Vec<f64> = a.num.iter().map(|x| big_to_f64(x) / den).collect();
        self.roots.iter().map(|&z| horner(&c, z).0).collect()
    }

    /// Minkowski vector in ℝ^n.
    pub fn minkowski(&self, a: &NFElement) -> Vec<f64> {
        let s = std::f64::consts::SQRT_2;
        let vals = self.eval(a);
        let mut out = Vec::with_capacity(self.r1 + 2 * self.r2);
        for v in &vals[..self.r1] {
            out.push(v.re);
        }
        for v in &vals[self.r1..] {
            out.push(s * v.re);
            out.push(s * v.im);
        }
        out
    }

    /// log|σ_i(a)| for i < r1 + r2.
    pub fn log_abs(&self, a: &NFElement) -> Vec<f64> {
        self.eval(a).iter().map(|v| v.norm().ln()).collect()
    }

    /// Weight of embedding i in the product formula (1 real, 2 complex).
    pub fn weight(&self, i: usize) -> f64 {
        if i < self.r1 {
            1.0
        } else {
            2.0
        }
    }

    /// Index of the embedding that owns Minkowski coordinate j.
    pub fn coord_owner(&self, j: usize) -> usize {
        if j < self.r1 {
            j
        } else {
            self.r1 + (j - self.r1) / 2
        }
    }
}
