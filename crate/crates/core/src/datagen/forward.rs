//! Random forward transmission matrices: banded complex Gaussian
//! structure with the condition number pinned into a target interval.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::matrix::{svd, ComplexTM, TmFamily};

use super::DatagenError;

/// Band power decay rate giving a mean participation ratio near 0.06
/// at n = 78 under the default condition interval.
pub const DEFAULT_DIAG_POWER_DECAY: f64 = 0.5;

/// Generative parameters for the forward family.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ForwardTmParams {
    /// Mode count.
    pub n: usize,
    /// Off-diagonal power decay rate per band; expected power of band
    /// `d` is `exp(-diag_power_decay·d)`.
    pub diag_power_decay: f64,
    /// Lower end of the target condition-number interval.
    pub cond_min: f64,
    /// Upper end of the target condition-number interval.
    pub cond_max: f64,
    /// Master seed of the ensemble this parameter set belongs to.
    pub seed: u64,
}

impl ForwardTmParams {
    pub fn with_defaults(n: usize, seed: u64) -> Self {
        Self { n, diag_power_decay: DEFAULT_DIAG_POWER_DECAY, cond_min: 3.0, cond_max: 10.0, seed }
    }

    pub fn validate(&self) -> Result<(), DatagenError> {
        if self.n < 2 {
            return Err(DatagenError::InvalidParams("mode count must be at least 2".into()));
        }
        if !(self.diag_power_decay > 0.0) {
            return Err(DatagenError::InvalidParams("diag_power_decay must be positive".into()));
        }
        if !(self.cond_min > 0.0 && self.cond_min <= self.cond_max) {
            return Err(DatagenError::InvalidParams(
                "condition interval must satisfy 0 < cond_min <= cond_max".into(),
            ));
        }
        Ok(())
    }
}

/// Generate one forward TM.
///
/// The raw draw has unit-modulus random-phase diagonal entries and
/// complex Gaussian bands with power envelope
/// `exp(-diag_power_decay·|i-j|)`. The singular values are then clamped
/// from below at `σ_max/c` for a target condition number `c` drawn
/// uniformly from `[cond_min, cond_max]`, and the smallest one is set
/// onto the clamp floor so the condition number equals `c` exactly.
pub fn gen_forward_tm(params: &ForwardTmParams, item_seed: u64) -> Result<ComplexTM, DatagenError> {
    params.validate()?;
    let n = params.n;
    let mut rng = ChaCha8Rng::seed_from_u64(item_seed);

    let raw = ComplexTM::from_fn(n, TmFamily::Forward, item_seed, |i, j| {
        if i == j {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(1.0, theta)
        } else {
            let d = i.abs_diff(j) as f64;
            let amp = (-params.diag_power_decay * d / 2.0).exp();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * (amp / 2f64.sqrt())
        }
    })
    .expect("finite by construction");

    let target_cond = rng.random_range(params.cond_min..=params.cond_max);
    let d = svd(&raw);
    let smax = d.s.iter().cloned().fold(0.0, f64::max);
    let floor = smax / target_cond;
    let mut clamped: Vec<f64> = d.s.iter().map(|&s| s.max(floor)).collect();
    let jmin = clamped
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .unwrap();
    clamped[jmin] = floor;

    Ok(d.compose(&clamped, TmFamily::Forward, item_seed))
}
