//! Ratio dynamics, count bounds and entropy bounds.
//!
//! Everything here is driven by the exact integer ledger from
//! [`crate::recursion`]; multiprecision floats only enter when ratios and
//! logarithms are evaluated. Rigor comes from re-evaluating at doubled
//! precision and only reporting digits both evaluations agree on.

pub mod bounds;
pub mod checks;
pub mod entropy;
pub mod ratios;

pub use bounds::{bound_m_hanoi, entropy_bounds, CountBounds, EntropyBounds};
pub use entropy::{entropy, entropy_from_seed, entropy_with, EntropyEstimate};
pub use ratios::{
    ratio_fixed_point, ratio_step, ratios_from_counts, FixedPoint, RatioPolynomials, RatioState,
    RatioUpdateCoefficients,
};

use crate::recursion::{RecursionError, StageRecord};

/// Starting working precision; escalated geometrically when too low.
pub const DEFAULT_PRECISION_BITS: usize = 512;
/// Escalation stops here.
pub const MAX_PRECISION_BITS: usize = 1 << 16;
/// Largest digit count [`entropy`] accepts.
pub const MAX_TARGET_DIGITS: u32 = 120;
/// Digits withheld from every agreement count.
pub const GUARD_DIGITS: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AsymptoticsError {
    #[error("{0}")]
    Domain(String),
    #[error("{bits} bits of precision cannot resolve {detail}; increase --precision-bits")]
    PrecisionInsufficient { bits: usize, detail: String },
    #[error("no enclosure after {iterations} ratio steps")]
    ConvergenceFailure { iterations: u32 },
    #[error("{what} {requested} exceeds the limit of {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error(transparent)]
    Recursion(#[from] RecursionError),
}

pub(crate) fn stage(ledger: &[StageRecord], n: u32) -> Result<&StageRecord, AsymptoticsError> {
    ledger
        .iter()
        .find(|r| r.n == n)
        .ok_or_else(|| AsymptoticsError::Domain(format!("stage {n} is not in the ledger")))
}
