//! One-sided Jacobi singular value decomposition for dense complex
//! matrices. Quadratically convergent and free of any external solver,
//! which keeps dataset generation bit-reproducible across platforms.

use num_complex::Complex64;

use super::{ComplexTM, TmFamily};

/// Result of `svd`: `a = u · diag(s) · vᴴ` with `u`, `v` unitary
/// (columns stored in row-major square matrices of the input size).
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Vec<Complex64>,
    pub s: Vec<f64>,
    pub v: Vec<Complex64>,
    pub n: usize,
}

/// Decompose a square complex matrix by one-sided Jacobi rotations.
///
/// Columns of the working copy are orthogonalized pairwise; the
/// accumulated rotations form `v`, the column norms the singular
/// values. Converges when every pairwise alignment falls below
/// `1e-14`; sweeps are capped at 60 (quadratic convergence reaches the
/// cap only for pathological inputs).
pub fn svd(a: &ComplexTM) -> Svd {
    let n = a.n();
    let mut w = a.data().to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }

    let col = |m: &[Complex64], j: usize, i: usize| m[i * n + j];
    let tol = 1e-14;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                // Gram entries of columns p and q
                let mut app = 0.0f64;
                let mut aqq = 0.0f64;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    let wp = col(&w, p, i);
                    let wq = col(&w, q, i);
                    app += wp.norm_sqr();
                    aqq += wq.norm_sqr();
                    apq += wp.conj() * wq;
                }
                let denom = (app * aqq).sqrt();
                if denom == 0.0 {
                    continue;
                }
                let align = apq.norm() / denom;
                off = off.max(align);
                if align <= tol {
                    continue;
                }

                // unitary 2x2 rotation annihilating the Gram off-diagonal
                let abs_apq = apq.norm();
                let phase = apq / abs_apq;
                let tau = (aqq - app) / (2.0 * abs_apq);
                let t = tau.signum_or_one() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = s * phase.conj(); // multiplies column q into p
                let sq = s * phase; // multiplies column p into q

                for i in 0..n {
                    let wp = w[i * n + p];
                    let wq = w[i * n + q];
                    w[i * n + p] = c * wp - sp * wq;
                    w[i * n + q] = sq * wp + c * wq;

                    let vp = v[i * n + p];
                    let vq = v[i * n + q];
                    v[i * n + p] = c * vp - sp * vq;
                    v[i * n + q] = sq * vp + c * vq;
                }
            }
        }
        if off <= tol {
            break;
        }
    }

    let mut s = vec![0.0f64; n];
    let mut u = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let norm: f64 = (0..n).map(|i| w[i * n + j].norm_sqr()).sum::<f64>().sqrt();
        s[j] = norm;
        if norm > 0.0 {
            for i in 0..n {
                u[i * n + j] = w[i * n + j] / norm;
            }
        } else {
            u[j * n + j] = Complex64::new(1.0, 0.0);
        }
    }

    Svd { u, s, v, n }
}

impl Svd {
    /// Rebuild `u · diag(s) · vᴴ` with the provided singular values.
    pub fn compose(&self, s: &[f64], family: TmFamily, seed: u64) -> ComplexTM {
        let n = self.n;
        assert_eq!(s.len(), n);
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    acc += self.u[i * n + k] * s[k] * self.v[j * n + k].conj();
                }
                out[i * n + j] = acc;
            }
        }
        ComplexTM::new(n, out, family, seed).expect("svd recomposition produced non-finite values")
    }
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self >= 0.0 { 1.0 } else { -1.0 }
    }
}
