//! Dense complex transmission matrices, their real block embedding, and
//! the participation-ratio sparsity metric.
//!
//! A complex n×n matrix embeds into a 2n×2n real matrix as
//! `[[Re, -Im], [Im, Re]]`. The embedding is a ring homomorphism, so
//! products of embedded matrices equal embeddings of products; that
//! algebraic fact is what the neural models rely on when they operate
//! on the real representation.

mod lu;
mod svd;

pub use lu::{lu_factor, lu_solve, LuFactorization};
pub use svd::{svd, Svd};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which generative family a transmission matrix belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TmFamily {
    /// Single-pass fibre matrix, sparse and diagonally dominant.
    Forward,
    /// Reflection-mode matrix `T_fᵀ·R·T_f`, dense.
    Roundtrip,
    /// Product of bent-segment propagators, unitary.
    Physical,
}

impl TmFamily {
    pub fn as_str(&self) -> &'static str {
        match self {
            TmFamily::Forward => "forward",
            TmFamily::Roundtrip => "roundtrip",
            TmFamily::Physical => "physical",
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(TmFamily::Forward),
            1 => Some(TmFamily::Roundtrip),
            2 => Some(TmFamily::Physical),
            _ => None,
        }
    }

    pub fn tag(&self) -> u8 {
        match self {
            TmFamily::Forward => 0,
            TmFamily::Roundtrip => 1,
            TmFamily::Physical => 2,
        }
    }
}

impl std::str::FromStr for TmFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "forward" => Ok(TmFamily::Forward),
            "roundtrip" => Ok(TmFamily::Roundtrip),
            "physical" => Ok(TmFamily::Physical),
            other => Err(format!("unknown family '{other}'")),
        }
    }
}

/// Errors from matrix construction and factorization.
#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix contains a non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("real block matrix has odd dimension {0}")]
    OddDimension(usize),
    #[error("participation ratio undefined for the all-zero matrix")]
    ZeroMatrix,
    #[error("matrix is singular to working tolerance: pivot magnitude {pivot:.3e} in column {col}")]
    Singular { pivot: f64, col: usize },
    #[error("condition estimate {estimate:.3e} exceeds ceiling {ceiling:.3e}")]
    IllConditioned { estimate: f64, ceiling: f64 },
}

/// An n×n complex transmission matrix with generation metadata.
///
/// Data is stored row-major as interleaved (re, im) double-precision
/// pairs; entries are guaranteed finite after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTM {
    n: usize,
    data: Vec<Complex64>,
    family: TmFamily,
    seed: u64,
}

impl ComplexTM {
    /// Build from row-major data, rejecting non-finite entries.
    pub fn new(
        n: usize,
        data: Vec<Complex64>,
        family: TmFamily,
        seed: u64,
    ) -> Result<Self, MatrixError> {
        assert!(n >= 1, "mode count must be positive");
        assert_eq!(data.len(), n * n, "data length must be n*n");
        for (k, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(MatrixError::NonFinite { row: k / n, col: k % n });
            }
        }
        Ok(Self { n, data, family, seed })
    }

    pub fn identity(n: usize, family: TmFamily, seed: u64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Self { n, data, family, seed }
    }

    pub fn from_fn(
        n: usize,
        family: TmFamily,
        seed: u64,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self::new(n, data, family, seed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> TmFamily {
        self.family
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// Matrix product `self * rhs`. Panics on mismatched dimensions;
    /// callers exposing a dimension error validate first.
    pub fn matmul(&self, rhs: &ComplexTM) -> ComplexTM {
        assert_eq!(self.n, rhs.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let dst = &mut out[i * n..(i + 1) * n];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexTM { n, data: out, family: self.family, seed: self.seed }
    }

    pub fn transpose(&self) -> ComplexTM {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        ComplexTM { n, data, family: self.family, seed: self.seed }
    }

    pub fn adjoint(&self) -> ComplexTM {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        ComplexTM { n, data, family: self.family, seed: self.seed }
    }

    pub fn scale(&self, c: Complex64) -> ComplexTM {
        let data = self.data.iter().map(|z| z * c).collect();
        ComplexTM { n: self.n, data, family: self.family, seed: self.seed }
    }

    pub fn sub(&self, rhs: &ComplexTM) -> ComplexTM {
        assert_eq!(self.n, rhs.n);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexTM { n: self.n, data, family: self.family, seed: self.seed }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance to the identity of `AᴴA`, i.e. how far the
    /// matrix is from unitary.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                acc += (gram.get(i, j) - expect).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Rescale to unit Frobenius norm. Errors on the all-zero matrix.
    pub fn normalized(&self) -> Result<ComplexTM, MatrixError> {
        let f = self.frobenius_norm();
        if f == 0.0 {
            return Err(MatrixError::ZeroMatrix);
        }
        Ok(self.scale(Complex64::new(1.0 / f, 0.0)))
    }

    pub(crate) fn with_meta(mut self, family: TmFamily, seed: u64) -> ComplexTM {
        self.family = family;
        self.seed = seed;
        self
    }
}

/// A 2n×2n real matrix, the model-facing representation of a
/// transmission matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealBlockTM {
    m: usize,
    data: Vec<f64>,
}

impl RealBlockTM {
    pub fn new(m: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), m * m, "data length must be m*m");
        Self { m, data }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.m + j]
    }

    pub fn matmul(&self, rhs: &RealBlockTM) -> RealBlockTM {
        assert_eq!(self.m, rhs.m, "matmul dimension mismatch");
        let m = self.m;
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * m..(k + 1) * m];
                let dst = &mut out[i * m..(i + 1) * m];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        RealBlockTM { m, data: out }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn sub(&self, rhs: &RealBlockTM) -> RealBlockTM {
        assert_eq!(self.m, rhs.m);
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        RealBlockTM { m: self.m, data }
    }
}

/// Embed an n×n complex matrix as the 2n×2n real block matrix
/// `[[Re, -Im], [Im, Re]]`. Rejects non-finite input.
pub fn complex_to_real_block(t: &ComplexTM) -> Result<RealBlockTM, MatrixError> {
    let n = t.n;
    let m = 2 * n;
    let mut data = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            let z = t.data[i * n + j];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(MatrixError::NonFinite { row: i, col: j });
            }
            data[i * m + j] = z.re;
            data[i * m + (n + j)] = -z.im;
            data[(n + i) * m + j] = z.im;
            data[(n + i) * m + (n + j)] = z.re;
        }
    }
    Ok(RealBlockTM { m, data })
}

/// Recover a complex matrix from a real block matrix by averaging the
/// redundant blocks: `Re = (TL + BR)/2`, `Im = (BL - TR)/2`.
///
/// Model outputs are generic real matrices, not exact block embeddings,
/// so averaging treats both copies of each component symmetrically.
/// Rejects odd dimensions.
pub fn real_block_to_complex(
    r: &RealBlockTM,
    family: TmFamily,
    seed: u64,
) -> Result<ComplexTM, MatrixError> {
    if r.m % 2 != 0 {
        return Err(MatrixError::OddDimension(r.m));
    }
    let n = r.m / 2;
    let m = r.m;
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let re = 0.5 * (r.data[i * m + j] + r.data[(n + i) * m + (n + j)]);
            let im = 0.5 * (r.data[(n + i) * m + j] - r.data[i * m + (n + j)]);
            data.push(Complex64::new(re, im));
        }
    }
    ComplexTM::new(n, data, family, seed)
}

/// Participation ratio: the fraction of matrix elements that carry
/// power, in (0, 1].
///
/// The matrix is normalized to unit Frobenius norm, then
/// `p = (Σ_j |t_j|⁴)⁻¹ / n²` over all n² elements. A single occupied
/// element gives 1/n², uniform magnitudes give 1. Computed as the ratio
/// `(Σ|t|²)² / (Σ|t|⁴ · n²)`, which makes the scalar invariance exact.
pub fn participation_ratio(t: &ComplexTM) -> Result<f64, MatrixError> {
    let mut s2 = 0.0;
    let mut s4 = 0.0;
    for z in &t.data {
        let a2 = z.norm_sqr();
        s2 += a2;
        s4 += a2 * a2;
    }
    if s2 == 0.0 {
        return Err(MatrixError::ZeroMatrix);
    }
    let n2 = (t.n * t.n) as f64;
    Ok(s2 * s2 / (s4 * n2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_tm(n: usize, seed: u64) -> ComplexTM {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        ComplexTM::from_fn(n, TmFamily::Forward, seed, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .unwrap()
    }

    #[test]
    fn embed_1x1_imaginary_unit() {
        let t = ComplexTM::new(1, vec![Complex64::new(0.0, 1.0)], TmFamily::Forward, 0).unwrap();
        let r = complex_to_real_block(&t).unwrap();
        assert_eq!(r.data(), &[0.0, -1.0, 1.0, 0.0]);
    }

    #[test]
    fn embed_identity_gives_identity() {
        let t = ComplexTM::identity(5, TmFamily::Forward, 0);
        let r = complex_to_real_block(&t).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(r.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn embed_rejects_non_finite() {
        let mut t = ComplexTM::identity(2, TmFamily::Forward, 0);
        t.data[1] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(
            complex_to_real_block(&t),
            Err(MatrixError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn embed_homomorphism_random_8x8() {
        // oracle route: multiply in complex arithmetic, then embed
        for seed in 0..20 {
            let a = random_tm(8, seed);
            let b = random_tm(8, seed + 1000);
            let lhs = complex_to_real_block(&a.matmul(&b)).unwrap();
            let ra = complex_to_real_block(&a).unwrap();
            let rb = complex_to_real_block(&b).unwrap();
            let rhs = ra.matmul(&rb);
            let diff = lhs.sub(&rhs).frobenius_norm();
            assert!(diff < 1e-10 * ra.frobenius_norm() * rb.frobenius_norm());
        }
    }

    #[test]
    fn unembed_inverse_of_embed() {
        let t = ComplexTM::new(1, vec![Complex64::new(0.0, 1.0)], TmFamily::Forward, 0).unwrap();
        let r = RealBlockTM::new(2, vec![0.0, -1.0, 1.0, 0.0]);
        let back = real_block_to_complex(&r, TmFamily::Forward, 0).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn unembed_round_trip_is_exact() {
        let t = random_tm(6, 7);
        let back =
            real_block_to_complex(&complex_to_real_block(&t).unwrap(), t.family(), t.seed())
                .unwrap();
        // averaging (x+x)/2 is exact in binary floating point
        assert_eq!(back.data(), t.data());
    }

    #[test]
    fn unembed_averages_non_block_input() {
        let r = RealBlockTM::new(2, vec![1.0, 0.0, 0.0, 3.0]);
        let t = real_block_to_complex(&r, TmFamily::Forward, 0).unwrap();
        assert_eq!(t.get(0, 0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn unembed_rejects_odd_dimension() {
        let r = RealBlockTM::new(3, vec![0.0; 9]);
        assert!(matches!(
            real_block_to_complex(&r, TmFamily::Forward, 0),
            Err(MatrixError::OddDimension(3))
        ));
    }

    #[test]
    fn participation_identity_78() {
        let t = ComplexTM::identity(78, TmFamily::Forward, 0);
        let p = participation_ratio(&t).unwrap();
        assert!((p - 1.0 / 78.0).abs() < 1e-12);
    }

    #[test]
    fn participation_uniform_is_one() {
        let t = ComplexTM::from_fn(9, TmFamily::Forward, 0, |i, j| {
            // equal magnitudes, varying phases
            Complex64::from_polar(0.3, (i * 9 + j) as f64)
        })
        .unwrap();
        let p = participation_ratio(&t).unwrap();
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn participation_single_element() {
        let mut data = vec![Complex64::new(0.0, 0.0); 25];
        data[7] = Complex64::new(0.0, -2.5);
        let t = ComplexTM::new(5, data, TmFamily::Forward, 0).unwrap();
        let p = participation_ratio(&t).unwrap();
        assert!((p - 1.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn participation_fixed_4x4_matches_direct_formula() {
        // expected value frozen from an element-wise evaluation of the
        // normalized fourth-moment sum, done independently of this crate
        let c = Complex64::new;
        let data = vec![
            c(0.8, 0.3), c(-0.2, 0.1), c(0.05, -0.4), c(0.0, 0.0),
            c(0.1, -0.1), c(1.2, 0.0), c(-0.3, 0.2), c(0.07, 0.02),
            c(0.0, 0.5), c(-0.15, -0.25), c(0.9, -0.6), c(0.4, 0.1),
            c(0.33, 0.0), c(0.0, -0.08), c(0.21, 0.7), c(-1.1, 0.45),
        ];
        let t = ComplexTM::new(4, data, TmFamily::Forward, 0).unwrap();
        let p = participation_ratio(&t).unwrap();
        assert!((p - 0.3837366246297703).abs() < 1e-12, "p = {p}");
    }

    #[test]
    fn participation_rejects_zero_matrix() {
        let t = ComplexTM::new(3, vec![Complex64::new(0.0, 0.0); 9], TmFamily::Forward, 0).unwrap();
        assert!(matches!(participation_ratio(&t), Err(MatrixError::ZeroMatrix)));
    }

    #[test]
    fn participation_of_permutation_is_inverse_n() {
        for n in [2usize, 5, 17] {
            let mut data = vec![Complex64::new(0.0, 0.0); n * n];
            for i in 0..n {
                data[i * n + ((i * 3 + 1) % n)] = Complex64::new(1.0, 0.0);
            }
            let t = ComplexTM::new(n, data, TmFamily::Forward, 0).unwrap();
            let p = participation_ratio(&t).unwrap();
            assert!((p - 1.0 / n as f64).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn embedding_isometry(seed in 0u64..500) {
            let a = random_tm(6, seed);
            let r = complex_to_real_block(&a).unwrap();
            let lhs = r.frobenius_norm();
            let rhs = 2f64.sqrt() * a.frobenius_norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        }

        #[test]
        fn participation_scalar_invariance(seed in 0u64..100, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            prop_assume!(re.abs() + im.abs() > 1e-3);
            let a = random_tm(5, seed);
            let scaled = a.scale(Complex64::new(re, im));
            let pa = participation_ratio(&a).unwrap();
            let pb = participation_ratio(&scaled).unwrap();
            prop_assert!((pa - pb).abs() <= 1e-9 * pa);
        }
    }
}
