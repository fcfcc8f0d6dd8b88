use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric (residual {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),
    #[error("degenerate eigenspace could not be resolved (residual {0:.3e})")]
    DegeneracyResolutionFailure(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {0:.12})")]
    NotNormalized(f64),
    #[error("state is not a product state (second Schmidt coefficient {0:.3e})")]
    NotProduct(f64),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("state {0} of the basis is not maximally entangled")]
    NotMaximallyEntangled(usize),
    #[error("basis states {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("phases do not sum to a multiple of 2π (offset {0:.3e})")]
    InconsistentPhases(f64),
    #[error("reconstruction failed (best residual {0:.3e})")]
    ReconstructionFailure(f64),
    #[error("interaction coefficient {0} outside [0, π/2)")]
    OutOfRange(f64),
    #[error("interaction vector ({0}, {1}, {2}) is not in the canonical chamber")]
    NotCanonical(f64, f64, f64),
    #[error("interaction vector is not a perfect entangler")]
    NotPerfectEntangler,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
