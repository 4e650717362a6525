use thiserror::Error;

use crate::dd::StepIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation of [1, n]: {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("permutation size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("level j = {j} out of range [1, {max}]")]
    LevelOutOfRange { j: usize, max: usize },

    #[error("shape (m, p) = ({m}, {p}) rejected: both must be at least 2")]
    InvalidShape { m: usize, p: usize },

    #[error("n = {n} exceeds the size bound {bound}")]
    SizeBoundExceeded { n: usize, bound: usize },

    #[error("{what} = {value} exceeds its maximum {max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("barrier count needs a 2m-permutation, got n = {n} with m = {m}")]
    NotSquare { n: usize, m: usize },

    #[error("permutation {0:?} is not in the restricted set S")]
    NotRestricted(Vec<usize>),

    #[error("internal count inconsistency in {what}: {left} != {right}")]
    CountInconsistency {
        what: &'static str,
        left: String,
        right: String,
    },

    #[error("algebra dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("generator Z({row},{col}) outside a {rows}x{cols} algebra")]
    InvalidGenerator {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("invalid minor: {0}")]
    InvalidMinor(String),

    #[error("zero pivot at step ({}, {})", .0.row, .0.col)]
    ZeroPivot(StepIndex),

    #[error("step ({}, {}) is not a valid step here", .0.row, .0.col)]
    InvalidStep(StepIndex),

    #[error("matrix dimension {n} incompatible with m = {m}")]
    InvalidMatrix { n: usize, m: usize },
}
