//! Matrix exponential by scaling and squaring with a truncated Taylor
//! series. The segment propagators exponentiate i·H·L for Hermitian H,
//! so every intermediate stays close to unitary and repeated squaring
//! does not amplify error.

use num_complex::Complex64;

use crate::matrix::ComplexTM;

/// Compute `exp(M)` for a square complex matrix.
///
/// The mean diagonal is factored out first (`exp(M) = e^μ·exp(M - μI)`
/// with `μ = tr(M)/n`), which keeps the scaling exponent small for the
/// propagation generators whose diagonal dominates by orders of
/// magnitude. The shifted matrix is scaled by `2^-s` until its
/// Frobenius norm is at most one, expanded in a Taylor series to
/// machine precision, and squared back up.
pub fn expm(m: &ComplexTM) -> ComplexTM {
    let n = m.n();
    let mu = m.trace() / n as f64;
    let shifted = m.sub(&ComplexTM::identity(n, m.family(), m.seed()).scale(mu));

    let norm = shifted.frobenius_norm();
    let s = if norm > 1.0 { norm.log2().ceil() as u32 } else { 0 };
    let scaled = shifted.scale(Complex64::new(0.5f64.powi(s as i32), 0.0));

    // Taylor: I + X + X²/2! + …, stopping when terms stop contributing
    let mut result = ComplexTM::identity(n, m.family(), m.seed());
    let mut term = scaled.clone();
    let mut k = 1.0f64;
    loop {
        result = add(&result, &term);
        if term.frobenius_norm() <= 1e-18 * result.frobenius_norm() || k > 40.0 {
            break;
        }
        k += 1.0;
        term = term.matmul(&scaled).scale(Complex64::new(1.0 / k, 0.0));
    }

    for _ in 0..s {
        result = result.matmul(&result);
    }
    result.scale(mu.exp())
}

fn add(a: &ComplexTM, b: &ComplexTM) -> ComplexTM {
    let data: Vec<Complex64> = a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect();
    ComplexTM::new(a.n(), data, a.family(), a.seed()).expect("expm produced non-finite values")
}
