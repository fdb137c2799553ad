use thiserror::Error;

use crate::lie::ValidationReport;

/// Errors raised by the algebraic core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(ValidationReport),

    #[error("dilation factor must be positive")]
    NonPositiveDilation,

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("morphism is not surjective (rank {rank}, target dimension {target_dim})")]
    NotSurjective { rank: usize, target_dim: usize },

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("generator {generator} image is not homogeneous of weight {weight}")]
    GeneratorWeight { generator: usize, weight: u32 },

    #[error("depth {depth} is smaller than the largest generator weight {max_weight}")]
    DepthTooSmall { depth: u32, max_weight: u32 },

    #[error("free algebra would have dimension {dim}, above the limit of {limit}")]
    DimensionCap { dim: usize, limit: usize },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("canonicalization failed at jump index {index}: {reason}")]
    Canonicalization { index: usize, reason: String },

    #[error("invalid basis change: {0}")]
    InvalidBasis(String),

    #[error("covector must be nonzero")]
    ZeroCovector,

    #[error("polynomial parse error at column {column}: {message}")]
    PolyParse { column: usize, message: String },

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("inconsistent bracket reduction: {0}")]
    InconsistentBracket(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("divergent limit: component {component} keeps a pole of order {order}")]
    Divergent { component: usize, order: i32 },

    #[error("fiber of weight {weight} is not determined up to multiplier degree {bound}")]
    Undetermined { weight: u32, bound: u32 },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
