//! Householder QR used to draw Haar-distributed real orthogonal
//! matrices for the reflector model.

use rand::RngExt;
use rand_distr::StandardNormal;

/// Sample an n×n real orthogonal matrix with Haar measure: QR of a
/// Gaussian matrix with the R-diagonal sign fix.
pub fn haar_orthogonal(n: usize, rng: &mut impl RngExt) -> Vec<f64> {
    let mut a = vec![0.0f64; n * n];
    for x in a.iter_mut() {
        *x = rng.sample(StandardNormal);
    }

    // Householder reduction, accumulating Q explicitly
    let mut q = vec![0.0f64; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    let mut v = vec![0.0f64; n];
    for k in 0..n {
        let mut norm = 0.0;
        for i in k..n {
            norm += a[i * n + k] * a[i * n + k];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k * n + k] >= 0.0 { -norm } else { norm };
        let mut vnorm2 = 0.0;
        for i in k..n {
            let vi = if i == k { a[i * n + k] - alpha } else { a[i * n + k] };
            v[i] = vi;
            vnorm2 += vi * vi;
        }
        if vnorm2 == 0.0 {
            continue;
        }
        // apply H = I - 2vvᵀ/|v|² to A (left) and to Q (right: Q <- Q·H)
        for j in k..n {
            let mut dot = 0.0;
            for i in k..n {
                dot += v[i] * a[i * n + j];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                a[i * n + j] -= f * v[i];
            }
        }
        for r in 0..n {
            let mut dot = 0.0;
            for i in k..n {
                dot += q[r * n + i] * v[i];
            }
            let f = 2.0 * dot / vnorm2;
            for i in k..n {
                q[r * n + i] -= f * v[i];
            }
        }
    }

    // sign fix: make diag(R) positive so the distribution is Haar
    for j in 0..n {
        if a[j * n + j] < 0.0 {
            for i in 0..n {
                q[i * n + j] = -q[i * n + j];
            }
        }
    }
    q
}
