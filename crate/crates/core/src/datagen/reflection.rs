//! Reflector matrices and round-trip transmission matrices.
//!
//! A passive reflector at the distal facet is reciprocal, which makes
//! its matrix complex symmetric; scattering without loss makes it
//! unitary. Both properties carry over to the round-trip matrix
//! `T_r = T_fᵀ·R·T_f`, giving the family its testable symmetry.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexTM, TmFamily};

use super::qr::haar_orthogonal;
use super::DatagenError;

/// Generate a symmetric unitary reflector `R = Q·diag(e^{iθ})·Qᵀ` with
/// `Q` Haar orthogonal and phases uniform. The product is evaluated on
/// the upper triangle and mirrored, so symmetry is exact.
pub fn gen_reflection_matrix(n: usize, item_seed: u64) -> Result<ComplexTM, DatagenError> {
    if n < 2 {
        return Err(DatagenError::InvalidParams("reflector needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(item_seed);
    let q = haar_orthogonal(n, &mut rng);
    let phases: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU)))
        .collect();

    // M = Q·diag(e^{iθ}), then R_ij = Σ_k M_ik·Q_jk for i <= j
    let mut m = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            m[i * n + k] = phases[k] * q[i * n + k];
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += m[i * n + k] * q[j * n + k];
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc;
        }
    }
    Ok(ComplexTM::new(n, data, TmFamily::Roundtrip, item_seed).expect("finite by construction"))
}

/// Round-trip matrix `T_r = T_fᵀ·R·T_f`.
pub fn gen_roundtrip_tm(t_f: &ComplexTM, r: &ComplexTM) -> Result<ComplexTM, DatagenError> {
    if t_f.n() != r.n() {
        return Err(DatagenError::DimensionMismatch {
            left: t_f.n(),
            right: r.n(),
        });
    }
    let t_r = t_f.transpose().matmul(&r.matmul(t_f));
    Ok(t_r.with_meta(TmFamily::Roundtrip, t_f.seed()))
}

pub(super) fn symmetry_defect(t: &ComplexTM) -> f64 {
    let n = t.n();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += (t.get(i, j) - t.get(j, i)).norm_sqr();
        }
    }
    (2.0 * acc).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflector_is_exactly_symmetric() {
        for seed in 0..5 {
            let r = gen_reflection_matrix(14, seed).unwrap();
            assert_eq!(symmetry_defect(&r), 0.0);
        }
    }

    #[test]
    fn reflector_is_unitary() {
        for seed in 0..5 {
            let r = gen_reflection_matrix(14, seed).unwrap();
            assert!(r.unitarity_defect() <= 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn identity_phases_identity_reflector() {
        // with all phases zero, Q·I·Qᵀ = I regardless of Q; emulate by
        // checking the construction algebra on a manual build
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 6;
        let q = haar_orthogonal(n, &mut rng);
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += q[i * n + k] * q[j * n + k];
                }
                data[i * n + j] = Complex64::new(acc, 0.0);
                data[j * n + i] = Complex64::new(acc, 0.0);
            }
        }
        let r = ComplexTM::new(n, data, TmFamily::Roundtrip, 0).unwrap();
        let eye = ComplexTM::identity(n, TmFamily::Roundtrip, 0);
        assert!(r.sub(&eye).frobenius_norm() < 1e-12);
    }

    #[test]
    fn roundtrip_of_identities_is_identity() {
        let eye = ComplexTM::identity(8, TmFamily::Forward, 0);
        let r = ComplexTM::identity(8, TmFamily::Roundtrip, 0);
        let t_r = gen_roundtrip_tm(&eye, &r).unwrap();
        assert!(t_r.sub(&eye).frobenius_norm() == 0.0);
    }

    #[test]
    fn roundtrip_inherits_symmetry() {
        use crate::datagen::forward::{gen_forward_tm, ForwardTmParams};
        let params = ForwardTmParams::with_defaults(12, 0);
        for seed in 0..5 {
            let t_f = gen_forward_tm(&params, seed).unwrap();
            let r = gen_reflection_matrix(12, seed + 100).unwrap();
            let t_r = gen_roundtrip_tm(&t_f, &r).unwrap();
            let defect = symmetry_defect(&t_r) / t_r.frobenius_norm();
            assert!(defect <= 1e-10, "seed {seed}: defect {defect:.3e}");
        }
    }

    #[test]
    fn roundtrip_rejects_dimension_mismatch() {
        let a = ComplexTM::identity(4, TmFamily::Forward, 0);
        let r = ComplexTM::identity(5, TmFamily::Roundtrip, 0);
        assert!(matches!(
            gen_roundtrip_tm(&a, &r),
            Err(DatagenError::DimensionMismatch { left: 4, right: 5 })
        ));
    }
}
