//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation, parsing, and numeric
/// operations on combinatorial complexes.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A cell list or complex was empty where a nonempty one is required.
    #[error("complex must contain at least one cell")]
    EmptyComplex,

    /// A cell with no vertices.
    #[error("cell has no vertices")]
    EmptyCell,

    /// The rank function is not order-preserving, or a rank-0 cell is not a
    /// singleton.
    #[error("rank violation: {reason}")]
    RankViolation { reason: String },

    /// A serialized document declared a negative rank.
    #[error("negative rank {rank} in cell {cell}")]
    NegativeRank { rank: i64, cell: String },

    /// Feature matrix row count does not match the number of rank-0 cells.
    #[error("feature matrix has {rows} rows but the complex has {vertices} rank-0 cells")]
    FeatureShapeMismatch { rows: usize, vertices: usize },

    /// Feature values must be finite to survive serialization.
    #[error("feature matrix contains a non-finite value at row {row}")]
    NonFiniteFeature { row: usize },

    /// An edge connecting a vertex to itself.
    #[error("self-loop on vertex {0}")]
    SelfLoop(u32),

    /// Permutation length does not match the vertex count.
    #[error("permutation covers {got} indices but the complex has {expected} vertices")]
    PermutationSizeMismatch { expected: usize, got: usize },

    /// The index mapping is not a bijection.
    #[error("mapping is not a bijection over 0..{0}")]
    InvalidPermutation(usize),

    /// A document failed to parse.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// A rank outside `0..=max_rank` (or `1..=max_rank` where rank 0 has no
    /// meaning) was requested.
    #[error("rank {k} out of range for a complex of maximum rank {max_rank}")]
    RankOutOfRange { k: usize, max_rank: usize },

    /// Weight scheme length does not match the maximum rank.
    #[error("weight scheme has {got} weights but the complex has maximum rank {expected}")]
    WeightLengthMismatch { expected: usize, got: usize },

    /// Unrecognized weight scheme name.
    #[error("unknown weight scheme `{0}`")]
    UnknownScheme(String),

    /// Weights must be positive with distinct subset sums.
    #[error("invalid weight scheme: {0}")]
    InvalidWeights(String),

    /// Matrix is not symmetric within tolerance.
    #[error("matrix is not symmetric (max |L - L^T| entry {max_asym:e})")]
    NotSymmetric { max_asym: f64 },

    /// The eigensolver did not converge.
    #[error("symmetric eigensolver failed to converge")]
    SolverFailure,

    /// Diffusion times must be non-negative.
    #[error("negative diffusion time {0}")]
    NegativeTime(f64),

    /// Time grids need at least one point.
    #[error("time grid requires at least one point")]
    NonPositiveCount,

    /// Time grid points must be positive and strictly increasing.
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),

    /// Vector length does not match the operator dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Torus grids need at least three cells per side.
    #[error("grid {m}x{n} too small; both sides must be at least 3")]
    GridTooSmall { m: usize, n: usize },

    /// Face index outside the torus face grid.
    #[error("face index {index} out of range for a grid with {n_faces} faces")]
    InvalidFaceIndex { index: usize, n_faces: usize },

    /// Augmentation cells must cover two distinct faces.
    #[error("augmentation faces must be distinct (got {0} twice)")]
    FacePairNotDistinct(usize),

    /// Only ranks 3 and 4 are meaningful torus augmentations.
    #[error("unsupported augmentation rank {0}; expected 3 or 4")]
    UnsupportedAugmentationRank(usize),

    /// Unrecognized blind-spot pair mode.
    #[error("unknown mode `{0}`")]
    UnknownMode(String),

    /// Exhaustive isomorphism search is limited to small complexes.
    #[error("complex with {0} vertices too large for exhaustive isomorphism search (limit 10)")]
    TooLarge(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
