use thiserror::Error;

use crate::kernels::KernelError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors surfaced by the library. Row and column numbers in messages are
/// 1-based, matching the Matrix Market convention.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: malformed Matrix Market header: {reason}")]
    MalformedHeader { line: usize, reason: String },

    #[error("line {line}: matrix is not declared symmetric ({found})")]
    NotSymmetric { line: usize, found: String },

    #[error("line {line}: index ({row}, {col}) outside a {n} x {n} matrix")]
    IndexOutOfRange {
        line: usize,
        row: usize,
        col: usize,
        n: usize,
    },

    #[error("line {line}: cannot parse entry: {reason}")]
    MalformedEntry { line: usize, reason: String },

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("invalid sparse pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("diagonal entry of column {column} is not positive")]
    NonPositiveDiagonal { column: usize },

    #[error("matrix is not positive definite: pivot failed in supernode {supernode} at column {column}")]
    NotPositiveDefinite { supernode: usize, column: usize },

    #[error("entry ({row}, {col}) of A has no slot in the symbolic factor")]
    SymbolicMismatch { row: usize, col: usize },

    #[error("relative index map is in {found} mode, expected {expected}")]
    WrongIndexMode {
        expected: &'static str,
        found: &'static str,
    },

    #[error("relative index {index} out of range for a list of length {len}")]
    RelativeIndexOutOfRange { index: usize, len: usize },

    #[error("block sizes do not partition the index list: {0}")]
    InconsistentBlocks(String),

    #[error("pivot element {0} is outside the ground set")]
    PivotOutsideGround(usize),

    #[error("update workspace overflow: need {needed} reals, have {available}")]
    WorkspaceOverflow { needed: usize, available: usize },

    #[error("factor storage holds {found}, expected {expected}")]
    InvalidState {
        expected: &'static str,
        found: &'static str,
    },

    #[error("unknown {what}: {value}")]
    UnknownName { what: &'static str, value: String },

    #[error("kernel backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error(transparent)]
    Kernel(#[from] KernelError),
}
