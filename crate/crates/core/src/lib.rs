//! Synthesis of multimode-fibre transmission-matrix ensembles, learned
//! sparsity-seeking basis transformations, and the metrics used to score
//! them (participation ratio, latent-space ratio, reconstruction error).
//!
//! The crate is organised along the processing pipeline:
//!
//! * [`matrix`] — dense complex matrices, the real block embedding, LU
//!   factorization and the participation-ratio metric.
//! * [`datagen`] — the three transmission-matrix dataset families
//!   (random forward, round-trip, physically modelled) and their binary
//!   on-disk format.
//! * [`autodiff`] — a small dense-tensor reverse-mode differentiation
//!   engine with the Adam optimizer and a finite-difference checker.
//! * [`models`] — the five basis-transformation architectures plus the
//!   two constraint autoencoders.
//! * [`train`] — composite-loss training loop with validation-based
//!   stopping and checkpointing.
//! * [`eval`] — test-split metrics, bottleneck-size search, heatmaps and
//!   report tables.

pub mod autodiff;
pub mod datagen;
pub mod eval;
pub mod matrix;
pub mod models;
pub mod train;
pub mod util;

/// Crate version string embedded into every artifact file.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
