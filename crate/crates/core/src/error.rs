use thiserror::Error;

/// Errors produced by construction, validation and decoding routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid multiplicity vector: {0}")]
    InvalidMultiplicity(String),

    #[error("initial vector entries must be pairwise distinct")]
    DuplicateInitialEntries,

    #[error("symbol counts do not match the multiplicity vector: {0}")]
    SymbolCountMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix is not a valid 0/1 multipermutation matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is not a valid permutation matrix: {0}")]
    InvalidPermutation(String),

    #[error("matrix lies outside the feasible polytope: {0}")]
    NotInPolytope(String),

    #[error("no perfect matching on the positive support: {0}")]
    NoPerfectMatching(String),

    #[error("constraint references an entry outside the {rows}x{cols} grid: ({i}, {j})")]
    ConstraintOutOfBounds {
        i: usize,
        j: usize,
        rows: usize,
        cols: usize,
    },

    #[error("constraint must have at least one nonzero coefficient")]
    EmptyConstraint,

    #[error("enumeration of {size} candidates exceeds the limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },

    #[error("operation needs at least {needed} codewords, codebook has {got}")]
    TooFewCodewords { needed: usize, got: usize },

    #[error("index {index} out of range for {len} codewords")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("word is not a codeword of the codebook")]
    NotInCodebook,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(String),

    #[error("malformed linear program: {0}")]
    MalformedProgram(String),

    #[error("linear program is infeasible")]
    InfeasibleProgram,

    #[error("linear program is unbounded")]
    UnboundedProgram,

    #[error("LP solver failed: {0}")]
    SolverFailure(String),

    #[error("pseudodistance is undefined for identical codewords")]
    IdenticalWords,
}

pub type Result<T> = std::result::Result<T, Error>;
