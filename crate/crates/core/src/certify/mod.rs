//! Certified statements about the level-indexed dimension sequences:
//! explicit lower bounds with directed rounding, omission certificates and
//! complete tables of vanishing dimensions.

mod bounds;
mod lemma;
mod omission;
mod scan;
mod zeros;

pub use bounds::{
    bound_estimate, bound_exceeds, bound_lower, first_clearing_level, verify_monotone, BoundSpec,
    FULL_THRESHOLD, NEW_THRESHOLD, OMEGA_CONSTANT, PI_CONSTANT,
};
pub use lemma::{omega_bound_holds, pi_bound_holds, verify_mult_bound_constants, MultBoundReport};
pub use omission::{
    find_omission, reference_omitted_value, replay, Candidate, OmissionCertificate, TOOL_VERSION,
};
pub use scan::{pointwise_dims, DimensionScanner, ScanConfig, ScanDigest};
pub(crate) use scan::AttainedSet;
pub use zeros::{zero_pairs, ZeroTable};

use thiserror::Error;

use crate::dimension::{DimensionError, SpaceKind};
use crate::numthy::NumthyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("value {value} attained at N={level}")]
    ValueAttained { value: u64, level: u64 },
    #[error("bound does not exceed {value} within level limit {limit}")]
    LimitReached { limit: u64, value: u64 },
    #[error("monotonicity check failed: {0}")]
    MonotonicityFailed(String),
    #[error("multiplicative bound violated: {0}")]
    LemmaViolation(String),
    #[error("certificate replay failed: {0}")]
    ReplayMismatch(String),
    #[error("{kind} space, k={k}: found omitted value {found}, reference value is {expected}")]
    ReferenceMismatch { kind: SpaceKind, k: u64, expected: u64, found: u64 },
    #[error("resource limit: {0}")]
    ResourceExhausted(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error(transparent)]
    Numthy(#[from] NumthyError),
}
