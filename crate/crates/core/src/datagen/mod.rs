//! Generation of the three transmission-matrix dataset families with
//! controlled statistical properties, deterministic down to the bit
//! from a master seed, plus the on-disk format.

mod dataset;
mod expm;
mod forward;
mod io;
mod physical;
mod qr;
mod reflection;

pub use dataset::{
    build_dataset, item_seed_at, split_sizes, FamilyParams, Manifest, Split, TmDataset,
};
pub use expm::expm;
pub use forward::{gen_forward_tm, ForwardTmParams, DEFAULT_DIAG_POWER_DECAY};
pub use io::{manifest_path, read_dataset, write_dataset, FORMAT_VERSION};
pub use physical::{
    gen_physical_tm, gen_segment_tm, mode_structure, FibreOptics, ModeStructure,
    PhysicalEnsembleParams, PhysicalFibreParams,
};
pub use reflection::{gen_reflection_matrix, gen_roundtrip_tm};

use thiserror::Error;

/// Errors from dataset generation and persistence.
#[derive(Debug, Error)]
pub enum DatagenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("ensemble of {0} items is too small to split 8:2:1 (need at least 11)")]
    CountTooSmall(usize),
    #[error("bad magic bytes {0:?}, not a TMDS file")]
    BadMagic([u8; 4]),
    #[error("format version {found} unsupported (expected {expected})")]
    VersionMismatch { found: u16, expected: u16 },
    #[error("file truncated")]
    Truncated,
    #[error("payload checksum mismatch: stored {stored:#010x}, actual {actual:#010x}")]
    ChecksumMismatch { stored: u32, actual: u32 },
    #[error("corrupt dataset: {0}")]
    Corrupt(String),
    #[error("manifest error: {0}")]
    Manifest(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Matrix(#[from] crate::matrix::MatrixError),
}
