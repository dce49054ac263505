//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across construction, coding, estimation,
/// simulation, and configuration.
#[derive(Debug, Error)]
pub enum Error {
    /// Block lengths must be powers of two so the butterfly circuit exists.
    #[error("block length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    /// Design erasure probabilities live strictly inside (0, 1).
    #[error("design erasure probability {0} is outside the open interval (0, 1)")]
    ErasureOutOfRange(f64),

    /// The problem dimension must satisfy 1 <= d <= n.
    #[error(
        "parameter dimension {n_params} does not fit block length {n_total} (need 1 <= d <= n)"
    )]
    DimensionMismatch { n_params: usize, n_total: usize },

    /// An input block had the wrong number of entries.
    #[error("expected {expected} block entries, got {got}")]
    BlockLength { expected: usize, got: usize },

    /// Vectors inside one block must share a common dimension.
    #[error("block vectors have inconsistent dimensions ({0} vs {1})")]
    RaggedBlock(usize, usize),

    /// Sign diagonals may only contain +1 and -1.
    #[error("diagonal sign at position {0} is {1}, expected +1 or -1")]
    BadDiagonalSign(usize, f64),

    /// The available worker outputs do not determine all coordinates.
    #[error("outputs are not decodable; information channels {0:?} cannot be resolved")]
    NotDecodable(Vec<usize>),

    /// Perturbation step sizes must be strictly positive.
    #[error("perturbation step {0} must be > 0")]
    NonPositiveDelta(f64),

    /// Finite differencing over an empty coordinate set is meaningless.
    #[error("no coordinates selected for finite differencing")]
    EmptyCoordinates,

    /// A coordinate index fell outside 0..d.
    #[error("coordinate index {index} out of range for dimension {dim}")]
    CoordinateOutOfRange { index: usize, dim: usize },

    /// Averaging over an empty received set is meaningless.
    #[error("no worker outputs received")]
    EmptyReceived,

    /// Matrix/vector shapes must agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A class index fell outside the classifier's range.
    #[error("class index {index} out of range for {n_classes} classes")]
    ClassOutOfRange { index: usize, n_classes: usize },

    /// Runtime distributions need strictly positive samples/parameters.
    #[error("invalid runtime distribution: {0}")]
    BadRuntimeDistribution(String),

    /// A stopping rule that can never fire (e.g. first_k with k = 0 or k > n).
    #[error("invalid stopping rule: {0}")]
    BadStoppingRule(String),

    /// Configuration file/flag problems; the offending key is named.
    #[error("config error: {0}")]
    Config(String),

    /// Malformed numeric or CSV input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
