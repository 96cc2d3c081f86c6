use crate::combinatorics::{CertificationOutcome, IndexDomain};

/// Errors raised by constructions and searches.
///
/// Search misses are not errors: every `find_*` operation returns an
/// `Option` and leaves the exhausted bounds to the caller. Errors are
/// reserved for violated preconditions and failed constructions.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("generator set must be nonempty")]
    EmptyGenerators,

    #[error("operation needs at least {need} generators, got {got}")]
    TooFewGenerators { need: usize, got: usize },

    #[error("elements must be strictly increasing")]
    NotStrictlyIncreasing,

    #[error("pair index needs i < j, got ({0}, {1})")]
    InvalidPair(u64, u64),

    #[error("index domain mismatch: expected {expected:?}, got {got:?}")]
    DomainMismatch {
        expected: IndexDomain,
        got: IndexDomain,
    },

    #[error("arithmetic overflow while growing the sparse set")]
    GrowthOverflow,

    #[error("exhaustive certification refused beyond 14 elements (cost grows as 4^n), got {0}")]
    CertificationTooLarge(usize),

    #[error("sparse certification failed: {0}")]
    CertificationFailed(CertificationOutcome),

    #[error("{value} is not a finite sum of the set")]
    NotRepresentable { value: u64 },

    #[error("index {value} lies beyond the certified bound {bound}")]
    BeyondCertifiedBound { value: u64, bound: u64 },

    #[error("window bound {bound} is too small: {reason}")]
    WindowTooSmall { bound: u64, reason: String },

    #[error("epsilon ladder must be strictly decreasing and positive")]
    BadEpsilonLadder,

    #[error("target values must have strictly decreasing positive distance to the limit point")]
    BadDeltaLadder,

    #[error("layered family needs {need} target values, got {got}")]
    TooFewTargets { need: usize, got: usize },

    #[error("scheme depth {0} exceeds the supported exact range")]
    DepthTooLarge(u32),

    #[error("descent precondition failed: {0}")]
    DescentPrecondition(String),

    #[error("witness does not verify: {0}")]
    WitnessInvalid(String),

    #[error("uncertified sparse set required for a Hindman construction")]
    UncertifiedSparse,
}

pub type Result<T> = std::result::Result<T, Error>;
