//! Physically modelled fibres: a chain of bent segments whose unitary
//! propagators multiply into the end-to-end transmission matrix.
//!
//! Modes are organised into principal mode groups (group q holds q
//! modes), with propagation constants degenerate within a group under
//! the weakly-guiding approximation. Bends couple modes with strength
//! falling off in the group separation, so the segment generator is a
//! large diagonal plus a band-limited Hermitian perturbation.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::matrix::{ComplexTM, TmFamily};
use crate::util::splitmix64;

use super::expm::expm;
use super::DatagenError;

/// Fused-silica core index at visible wavelengths.
const N_CORE: f64 = 1.4607;
/// Pockels strain-optic coefficients of fused silica.
const P11: f64 = 0.121;
const P12: f64 = 0.270;
/// Dimensionless scale of the bend-coupling matrix relative to
/// `β̄·core_radius`; tuned so moderate default bends give ensembles
/// with mean participation ratio near 0.03 at n = 78.
const BEND_COUPLING_GEOMETRY: f64 = 0.0017;

/// Fibre geometry and material parameters shared by all segments.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FibreOptics {
    /// Core radius in metres.
    pub core_radius: f64,
    /// Numerical aperture.
    pub na: f64,
    /// Poisson ratio of the glass, feeding the photoelastic bend
    /// correction.
    pub poisson_ratio: f64,
    /// Operating wavelength in metres.
    pub wavelength: f64,
}

impl Default for FibreOptics {
    fn default() -> Self {
        Self { core_radius: 8e-6, na: 0.22, poisson_ratio: 0.17, wavelength: 633e-9 }
    }
}

impl FibreOptics {
    pub fn v_number(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength * self.core_radius * self.na
    }

    /// Number of principal mode groups supported by the fibre.
    pub fn group_count(&self) -> usize {
        let v = self.v_number();
        ((-1.0 + (1.0 + 2.0 * v * v).sqrt()) / 2.0).round() as usize
    }

    /// Guided mode count implied by the optics: group q holds q modes.
    pub fn implied_mode_count(&self) -> usize {
        let q = self.group_count();
        q * (q + 1) / 2
    }

    /// Curvature multiplier from the strain-optic effect.
    pub fn photoelastic_factor(&self) -> f64 {
        1.0 - (N_CORE * N_CORE / 2.0) * (P12 - self.poisson_ratio * (P11 + P12))
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        for (name, v) in [
            ("core_radius", self.core_radius),
            ("na", self.na),
            ("poisson_ratio", self.poisson_ratio),
            ("wavelength", self.wavelength),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(DatagenError::InvalidParams(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Mode-group index and propagation constant for each of the first `n`
/// modes in group-major order.
#[derive(Debug, Clone)]
pub struct ModeStructure {
    pub groups: Vec<usize>,
    pub betas: Vec<f64>,
}

/// Build the mode table for the leading `n` modes.
///
/// Errors if the optics do not guide `n` modes. When `n` is smaller
/// than the implied count the trailing groups are truncated, which is
/// how desk-scale datasets are produced.
pub fn mode_structure(optics: &FibreOptics, n: usize) -> Result<ModeStructure, DatagenError> {
    optics.validate()?;
    let implied = optics.implied_mode_count();
    if n > implied {
        return Err(DatagenError::InvalidParams(format!(
            "requested {n} modes but the optics guide only {implied}"
        )));
    }
    let q_total = optics.group_count();
    let k0 = 2.0 * std::f64::consts::PI / optics.wavelength;
    let mut groups = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    'outer: for q in 1..=q_total {
        let frac = q as f64 / q_total as f64;
        let beta = k0 * (N_CORE * N_CORE - (optics.na * frac).powi(2)).sqrt();
        for _ in 0..q {
            if groups.len() == n {
                break 'outer;
            }
            groups.push(q);
            betas.push(beta);
        }
    }
    Ok(ModeStructure { groups, betas })
}

/// One concrete perturbed fibre: geometry plus its segment layout.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhysicalFibreParams {
    pub optics: FibreOptics,
    /// Mode count of the dataset (at most the implied mode count).
    pub n: usize,
    /// Number of segments.
    pub segment_count: usize,
    /// Length of each segment in metres.
    pub segment_lengths: Vec<f64>,
    /// Bend radius of each segment in metres; `inf` means straight.
    pub bend_radii: Vec<f64>,
    /// Seed for the per-segment coupling draws.
    pub seed: u64,
}

impl PhysicalFibreParams {
    pub fn validate(&self) -> Result<(), DatagenError> {
        self.optics.validate()?;
        if self.n < 2 {
            return Err(DatagenError::InvalidParams("mode count must be at least 2".into()));
        }
        if self.segment_lengths.len() != self.segment_count
            || self.bend_radii.len() != self.segment_count
        {
            return Err(DatagenError::InvalidParams(
                "segment_lengths and bend_radii must each have segment_count entries".into(),
            ));
        }
        for &l in &self.segment_lengths {
            if !(l >= 0.0 && l.is_finite()) {
                return Err(DatagenError::InvalidParams("segment lengths must be finite and non-negative".into()));
            }
        }
        for &r in &self.bend_radii {
            // infinite radius encodes a straight segment
            if !(r > 0.0) {
                return Err(DatagenError::InvalidParams("bend radii must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Propagator of one segment: `T_s = exp(i·(Δ + κ·C)·L)`.
///
/// `Δ` is the diagonal of modal propagation constants, `κ` the
/// photoelastically corrected curvature, and `C` a Hermitian coupling
/// matrix with magnitude envelope `1/(1 + |g_p - g_q|)` over mode
/// groups and phases drawn fresh per segment. The output is unitary to
/// working precision because the generator is skew-Hermitian.
pub fn gen_segment_tm(
    params: &PhysicalFibreParams,
    segment_index: usize,
) -> Result<ComplexTM, DatagenError> {
    params.validate()?;
    if segment_index >= params.segment_count {
        return Err(DatagenError::InvalidParams(format!(
            "segment index {segment_index} out of range (z = {})",
            params.segment_count
        )));
    }
    let modes = mode_structure(&params.optics, params.n)?;
    let n = params.n;
    let length = params.segment_lengths[segment_index];
    let bend_radius = params.bend_radii[segment_index];
    let curvature =
        if bend_radius.is_finite() { params.optics.photoelastic_factor() / bend_radius } else { 0.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(params.seed, segment_index as u64));
    let beta_mean = modes.betas.iter().sum::<f64>() / n as f64;
    let coupling_scale =
        curvature * BEND_COUPLING_GEOMETRY * beta_mean * params.optics.core_radius;

    // Hermitian generator H = Δ + κ·C, assembled row by row
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for p in 0..n {
        for q in p..n {
            let dg = modes.groups[p].abs_diff(modes.groups[q]) as f64;
            let envelope = 1.0 / (1.0 + dg);
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let c = if p == q {
                Complex64::new(re * envelope, 0.0)
            } else {
                Complex64::new(re, im) * (envelope / 2f64.sqrt())
            };
            let v = c * coupling_scale;
            h[p * n + q] = v;
            h[q * n + p] = v.conj();
        }
        h[p * n + p] += Complex64::new(modes.betas[p], 0.0);
    }

    // exponentiate the skew-Hermitian i·H·L
    let gen_data: Vec<Complex64> =
        h.iter().map(|z| Complex64::new(-z.im, z.re) * length).collect();
    let generator = ComplexTM::new(n, gen_data, TmFamily::Physical, params.seed)
        .expect("finite by construction");
    Ok(expm(&generator))
}

/// End-to-end fibre matrix: the ordered product of all segment
/// propagators.
pub fn gen_physical_tm(params: &PhysicalFibreParams) -> Result<ComplexTM, DatagenError> {
    params.validate()?;
    if params.segment_count == 0 {
        return Err(DatagenError::InvalidParams("need at least one segment".into()));
    }
    let mut t = gen_segment_tm(params, 0)?;
    for s in 1..params.segment_count {
        t = t.matmul(&gen_segment_tm(params, s)?);
    }
    Ok(t)
}

/// Ensemble-level configuration: distributions that concrete fibres
/// are drawn from.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PhysicalEnsembleParams {
    pub optics: FibreOptics,
    pub n: usize,
    pub segment_count: usize,
    /// Uniform range of segment lengths in metres.
    pub length_range: (f64, f64),
    /// Uniform range of bend radii in metres.
    pub bend_radius_range: (f64, f64),
    pub seed: u64,
}

impl PhysicalEnsembleParams {
    pub fn with_defaults(n: usize, seed: u64) -> Self {
        Self {
            optics: FibreOptics::default(),
            n,
            segment_count: 10,
            length_range: (0.05, 0.15),
            bend_radius_range: (0.05, 0.30),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        self.optics.validate()?;
        if self.n < 2 {
            return Err(DatagenError::InvalidParams("mode count must be at least 2".into()));
        }
        if self.n > self.optics.implied_mode_count() {
            return Err(DatagenError::InvalidParams(format!(
                "requested {} modes but the optics guide only {}",
                self.n,
                self.optics.implied_mode_count()
            )));
        }
        if self.segment_count == 0 {
            return Err(DatagenError::InvalidParams("need at least one segment".into()));
        }
        for (name, (lo, hi)) in
            [("length_range", self.length_range), ("bend_radius_range", self.bend_radius_range)]
        {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(DatagenError::InvalidParams(format!("{name} must satisfy 0 < lo <= hi")));
            }
        }
        Ok(())
    }

    /// Draw the concrete fibre for one ensemble item.
    pub fn instantiate(&self, item_seed: u64) -> Result<PhysicalFibreParams, DatagenError> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(item_seed);
        let segment_lengths: Vec<f64> = (0..self.segment_count)
            .map(|_| rng.random_range(self.length_range.0..=self.length_range.1))
            .collect();
        let bend_radii: Vec<f64> = (0..self.segment_count)
            .map(|_| rng.random_range(self.bend_radius_range.0..=self.bend_radius_range.1))
            .collect();
        Ok(PhysicalFibreParams {
            optics: self.optics.clone(),
            n: self.n,
            segment_count: self.segment_count,
            segment_lengths,
            bend_radii,
            seed: splitmix64(item_seed, 1),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn desk_params(seed: u64) -> PhysicalFibreParams {
        PhysicalFibreParams {
            optics: FibreOptics::default(),
            n: 16,
            segment_count: 3,
            segment_lengths: vec![0.1, 0.08, 0.12],
            bend_radii: vec![0.1, 0.2, 0.15],
            seed,
        }
    }

    #[test]
    fn default_optics_guide_78_modes() {
        let optics = FibreOptics::default();
        assert!((optics.v_number() - 17.47).abs() < 0.05);
        assert_eq!(optics.group_count(), 12);
        assert_eq!(optics.implied_mode_count(), 78);
    }

    #[test]
    fn mode_structure_truncates_in_group_major_order() {
        let m = mode_structure(&FibreOptics::default(), 16).unwrap();
        assert_eq!(m.groups, vec![1, 2, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 5, 6]);
        // betas decrease with the group index
        for w in m.betas.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn mode_structure_rejects_oversubscription() {
        assert!(mode_structure(&FibreOptics::default(), 79).is_err());
    }

    #[test]
    fn straight_segment_is_diagonal_phase() {
        let mut p = desk_params(1);
        p.bend_radii = vec![f64::INFINITY; 3];
        let t = gen_segment_tm(&p, 0).unwrap();
        let modes = mode_structure(&p.optics, p.n).unwrap();
        for i in 0..p.n {
            for j in 0..p.n {
                if i == j {
                    let expect = Complex64::new(0.0, modes.betas[i] * p.segment_lengths[0]).exp();
                    assert!((t.get(i, i) - expect).norm() < 1e-10);
                    assert!((t.get(i, i).norm() - 1.0).abs() < 1e-12);
                } else {
                    assert_eq!(t.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn zero_length_segment_is_identity() {
        let mut p = desk_params(2);
        p.segment_lengths[1] = 0.0;
        let t = gen_segment_tm(&p, 1).unwrap();
        let eye = ComplexTM::identity(p.n, TmFamily::Physical, p.seed);
        assert!(t.sub(&eye).frobenius_norm() < 1e-14);
    }

    #[test]
    fn segments_are_unitary() {
        let p = desk_params(3);
        for s in 0..3 {
            let t = gen_segment_tm(&p, s).unwrap();
            assert!(t.unitarity_defect() <= 1e-8, "segment {s}");
        }
    }

    #[test]
    fn single_segment_product_equals_segment() {
        let mut p = desk_params(4);
        p.segment_count = 1;
        p.segment_lengths = vec![0.09];
        p.bend_radii = vec![0.12];
        let whole = gen_physical_tm(&p).unwrap();
        let seg = gen_segment_tm(&p, 0).unwrap();
        assert_eq!(whole.data(), seg.data());
    }

    #[test]
    fn all_straight_product_is_diagonal() {
        let mut p = desk_params(5);
        p.bend_radii = vec![f64::INFINITY; 3];
        let t = gen_physical_tm(&p).unwrap();
        for i in 0..p.n {
            for j in 0..p.n {
                if i != j {
                    assert_eq!(t.get(i, j), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn physical_tm_is_unitary() {
        let ens = PhysicalEnsembleParams::with_defaults(16, 8);
        for item in 0..4 {
            let fibre = ens.instantiate(crate::util::splitmix64(8, item)).unwrap();
            let t = gen_physical_tm(&fibre).unwrap();
            assert!(t.unitarity_defect() <= 1e-7, "item {item}");
        }
    }

    #[test]
    fn rejects_non_positive_geometry() {
        let mut p = desk_params(6);
        p.bend_radii[0] = 0.0;
        assert!(gen_segment_tm(&p, 0).is_err());
        let mut p = desk_params(6);
        p.segment_lengths[0] = f64::NAN;
        assert!(gen_segment_tm(&p, 0).is_err());
    }
}
