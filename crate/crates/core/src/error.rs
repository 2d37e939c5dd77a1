use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are grouped by how the CLI maps them to exit codes: input and
/// precondition problems (exit 3), resource caps (exit 4), and internal
/// invariant breaches that indicate a bug rather than bad input (exit 5).
#[derive(Debug, Error)]
pub enum Error {
    // --- input / precondition problems -------------------------------
    #[error("denominator {denominator} is not invertible modulo {p}^{e}")]
    DenominatorNotInvertible {
        denominator: String,
        p: u64,
        e: u32,
    },

    #[error("elements belong to different parents: {0}")]
    ParentMismatch(String),

    #[error("sublattice is not an ideal: bracket of generator {generator} with basis {basis} leaves the span")]
    NotAnIdeal { generator: usize, basis: usize },

    #[error("nilpotency class {class} is not smaller than p = {p}")]
    ClassTooHigh { class: usize, p: u64 },

    #[error("extension kernel has order p^{log_order}, expected order p")]
    KernelNotCp { log_order: u64 },

    #[error("lifted bilinear form violates the Jacobi identity modulo the relation lattice at triple ({i},{j},{k})")]
    JacobiLiftFailure { i: usize, j: usize, k: usize },

    #[error("relation lattice is not contained in p times the free module (generator {0})")]
    RelationNotInPM(usize),

    #[error("generator images do not generate: {0}")]
    PresentationFailure(String),

    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),

    #[error("algebra is not nilpotent: lower central series stabilizes at a nonzero term")]
    NotNilpotent,

    #[error("{0}")]
    Parse(String),

    #[error("schema violation: {0}")]
    Schema(String),

    // --- resource caps ------------------------------------------------
    #[error("size limit exceeded: {what} would need {needed}, cap is {cap}")]
    SizeLimitExceeded {
        what: &'static str,
        needed: u64,
        cap: u64,
    },

    #[error("module of order p^{log_order} is too large for exhaustive enumeration (cap p^{cap})")]
    TooLargeForExhaustive { log_order: u64, cap: u64 },

    // --- internal invariant breaches (never valid-input errors) --------
    #[error("hat-ideal lemma violated: [I-hat, L-hat] is not contained in p*I-hat (internal bug)")]
    HatLemmaViolation,

    #[error("embedding construction failed: {0} (internal bug)")]
    EmbeddingFailure(String),

    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// Stable CLI exit-code category: 3 input, 4 resource cap, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeLimitExceeded { .. } | Error::TooLargeForExhaustive { .. } => 4,
            Error::HatLemmaViolation | Error::EmbeddingFailure(_) | Error::Internal(_) => 5,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
