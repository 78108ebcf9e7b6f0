//! Treating-interference-as-noise (TIN) GDoF regions for cellular networks
//! with two users per cell.
//!
//! * [`model`]: channel-strength profiles, decoding orders, power exponents.
//! * [`document`]: the canonical JSON profile document.
//! * [`tin`]: per-UE GDoF bounds for the downlink (IBC) and the dual uplink
//!   (IMAC), and the power maps between them.
//! * [`region`]: TIN-optimality conditions and the polyhedral region.
//! * [`verify`]: grid sampling, duality certificates and numerical checks.

pub mod document;
pub mod error;
pub mod ext;
pub mod model;
pub mod region;
pub mod tin;
pub mod verify;

pub use document::{parse_profile, profile_hash, serialize_profile};
pub use error::{Error, Result};
pub use model::{
    random_profile, CellOrder, DecodingOrder, FinitePConfig, GdofTuple, Interval, NetworkProfile,
    PowerAllocation,
};
pub use region::{
    check_tin_optimality, contains, enumerate_cyclic_sequences, extreme_points, tin_optimal_region,
    CyclicSequence, HalfSpaceRegion, Verdict,
};
pub use tin::{
    beta_exponents, dual_power_to_ibc, dual_power_to_imac, gamma_exponents, ibc_finite_p_rates,
    ibc_gdof_bounds, imac_gdof_bounds, normalize_imac_power, DualExponents,
};

/// Absolute tolerance for real-valued comparisons and region membership.
pub const TOL: f64 = 1e-9;
