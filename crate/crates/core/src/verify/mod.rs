//! Brute-force oracles and numerical certificates.
//!
//! Everything here is deterministic: random draws use ChaCha8 with a seed
//! that is recorded in the returned report.

mod convergence;
mod crossval;
mod duality;
mod grid;
mod lemma1;
pub mod random;

pub use convergence::{
    finite_p_convergence, ConvergenceReport, ConvergenceRow, DEFAULT_CONVERGENCE_THRESHOLD,
};
pub use crossval::{
    region_cross_validation, CrossValidationReport, OffendingSample, VertexCoverage,
};
pub use duality::{duality_certificate, duality_sweep, Direction, DualityReport, DualitySummary};
pub use grid::{
    sample_tin_region, sweep_size, sweep_tin_region, GridSpec, Sample, Side,
    DEFAULT_COLLECT_BUDGET, DEFAULT_SWEEP_BUDGET,
};
pub use lemma1::{lemma1_gaussian_gap, lemma1_random_search, Lemma1Coefficients, Lemma1Report};

/// Seed used when a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_2018;

/// Number of offending samples copied verbatim into a report.
pub const MAX_REPORTED_SAMPLES: usize = 16;
