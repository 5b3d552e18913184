//! Ensemble assembly: per-item seed derivation, the seeded shuffle,
//! and the 8:2:1 split.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::{ComplexTM, TmFamily};
use crate::util::splitmix64;

use super::forward::{gen_forward_tm, ForwardTmParams};
use super::physical::{gen_physical_tm, PhysicalEnsembleParams};
use super::reflection::{gen_reflection_matrix, gen_roundtrip_tm};
use super::DatagenError;

/// Stream tag separating the shuffle RNG from the per-item seed stream.
const SHUFFLE_STREAM: u64 = u64::MAX;

/// Family-specific generation parameters.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Forward(ForwardTmParams),
    /// Round-trip items reuse the forward generator for `T_f` and draw
    /// an independent reflector per item.
    Roundtrip(ForwardTmParams),
    Physical(PhysicalEnsembleParams),
}

impl FamilyParams {
    pub fn family(&self) -> TmFamily {
        match self {
            FamilyParams::Forward(_) => TmFamily::Forward,
            FamilyParams::Roundtrip(_) => TmFamily::Roundtrip,
            FamilyParams::Physical(_) => TmFamily::Physical,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            FamilyParams::Forward(p) | FamilyParams::Roundtrip(p) => p.n,
            FamilyParams::Physical(p) => p.n,
        }
    }

    pub fn with_defaults(family: TmFamily, n: usize, seed: u64) -> Self {
        match family {
            TmFamily::Forward => FamilyParams::Forward(ForwardTmParams::with_defaults(n, seed)),
            TmFamily::Roundtrip => FamilyParams::Roundtrip(ForwardTmParams::with_defaults(n, seed)),
            TmFamily::Physical => {
                FamilyParams::Physical(PhysicalEnsembleParams::with_defaults(n, seed))
            }
        }
    }

    /// Generate the item for one per-item seed.
    pub fn generate_item(&self, item_seed: u64) -> Result<ComplexTM, DatagenError> {
        match self {
            FamilyParams::Forward(p) => gen_forward_tm(p, item_seed),
            FamilyParams::Roundtrip(p) => {
                let t_f = gen_forward_tm(p, splitmix64(item_seed, 0))?;
                let r = gen_reflection_matrix(p.n, splitmix64(item_seed, 1))?;
                Ok(gen_roundtrip_tm(&t_f, &r)?.with_meta(TmFamily::Roundtrip, item_seed))
            }
            FamilyParams::Physical(p) => {
                let fibre = p.instantiate(item_seed)?;
                Ok(gen_physical_tm(&fibre)?.with_meta(TmFamily::Physical, item_seed))
            }
        }
    }
}

/// Contiguous 8:2:1 split boundaries over the (already shuffled)
/// dataset order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub n_train: usize,
    pub n_val: usize,
    pub n_test: usize,
}

impl Split {
    pub fn total(&self) -> usize {
        self.n_train + self.n_val + self.n_test
    }

    pub fn train_range(&self) -> std::ops::Range<usize> {
        0..self.n_train
    }

    pub fn val_range(&self) -> std::ops::Range<usize> {
        self.n_train..self.n_train + self.n_val
    }

    pub fn test_range(&self) -> std::ops::Range<usize> {
        self.n_train + self.n_val..self.total()
    }
}

/// 8:2:1 split sizes: `round(8/11·count)`, `round(2/11·count)`,
/// remainder. Errors below the minimum usable ensemble size.
pub fn split_sizes(count: usize) -> Result<Split, DatagenError> {
    if count < 11 {
        return Err(DatagenError::CountTooSmall(count));
    }
    let n_train = (8.0 / 11.0 * count as f64).round() as usize;
    let n_val = (2.0 / 11.0 * count as f64).round() as usize;
    let n_test = count - n_train - n_val;
    Ok(Split { n_train, n_val, n_test })
}

/// Generation record stored beside the data so that every matrix can
/// be regenerated from scratch.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Manifest {
    pub format_version: u16,
    pub family: TmFamily,
    pub n: usize,
    pub count: usize,
    pub master_seed: u64,
    pub split: Split,
    pub params: FamilyParams,
    pub tool_version: String,
    pub config_hash: String,
}

/// An ordered ensemble of transmission matrices with its split and
/// generation manifest. The order is the post-shuffle order; the split
/// ranges index into it contiguously.
#[derive(Debug, Clone)]
pub struct TmDataset {
    pub tms: Vec<ComplexTM>,
    pub manifest: Manifest,
}

impl TmDataset {
    pub fn family(&self) -> TmFamily {
        self.manifest.family
    }

    pub fn n(&self) -> usize {
        self.manifest.n
    }

    pub fn count(&self) -> usize {
        self.tms.len()
    }

    pub fn train(&self) -> &[ComplexTM] {
        &self.tms[self.manifest.split.train_range()]
    }

    pub fn val(&self) -> &[ComplexTM] {
        &self.tms[self.manifest.split.val_range()]
    }

    pub fn test(&self) -> &[ComplexTM] {
        &self.tms[self.manifest.split.test_range()]
    }

    /// Assemble from parts, validating structural consistency (shapes
    /// and split coverage, not the 8:2:1 ratio — stored files keep
    /// whatever split they were written with).
    pub fn from_parts(tms: Vec<ComplexTM>, manifest: Manifest) -> Result<Self, DatagenError> {
        if manifest.split.total() != tms.len() || manifest.count != tms.len() {
            return Err(DatagenError::InvalidParams(format!(
                "split covers {} items but dataset holds {}",
                manifest.split.total(),
                tms.len()
            )));
        }
        for tm in &tms {
            if tm.n() != manifest.n {
                return Err(DatagenError::InvalidParams(
                    "matrix dimension differs from manifest".into(),
                ));
            }
        }
        Ok(Self { tms, manifest })
    }
}

/// Seed for dataset position `k`: the shuffle permutation applied to
/// the splitmix stream of the master seed.
pub fn item_seed_at(master_seed: u64, count: usize, position: usize) -> u64 {
    let perm = shuffle_permutation(master_seed, count);
    splitmix64(master_seed, perm[position] as u64)
}

fn shuffle_permutation(master_seed: u64, count: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..count).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(master_seed, SHUFFLE_STREAM));
    // Fisher–Yates
    for i in (1..count).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Generate a full ensemble: `count` items from per-item seeds, a
/// seeded shuffle, and the contiguous 8:2:1 split.
///
/// Items are generated in parallel; the result is identical to a
/// sequential run because every item depends only on its own seed.
pub fn build_dataset(
    params: &FamilyParams,
    count: usize,
    master_seed: u64,
    config_hash: &str,
) -> Result<TmDataset, DatagenError> {
    let split = split_sizes(count)?;

    let items: Result<Vec<ComplexTM>, DatagenError> = (0..count)
        .into_par_iter()
        .map(|i| params.generate_item(splitmix64(master_seed, i as u64)))
        .collect();
    let items = items?;

    let perm = shuffle_permutation(master_seed, count);
    let mut slots: Vec<Option<ComplexTM>> = items.into_iter().map(Some).collect();
    let tms: Vec<ComplexTM> = perm.iter().map(|&src| slots[src].take().unwrap()).collect();

    let manifest = Manifest {
        format_version: super::io::FORMAT_VERSION,
        family: params.family(),
        n: params.n(),
        count,
        master_seed,
        split,
        params: params.clone(),
        tool_version: crate::TOOL_VERSION.to_string(),
        config_hash: config_hash.to_string(),
    };
    Ok(TmDataset { tms, manifest })
}
