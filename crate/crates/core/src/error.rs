use thiserror::Error;

use crate::lattice::GroupPoint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected rank {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate overflow")]
    Overflow,
    #[error("grid is empty")]
    EmptyGrid,
    #[error("reversed box bounds: {lo} is not below {hi}")]
    ReversedBounds { lo: GroupPoint, hi: GroupPoint },
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("set is not closed under joins: {a} ∨ {b} missing")]
    NotJoinClosed { a: GroupPoint, b: GroupPoint },
}

/// Rejections raised while validating or using a classical system.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("the point set is empty")]
    EmptySpace,
    #[error("expected {expected} generators, found {found}")]
    GeneratorCount { expected: usize, found: usize },
    #[error("generator {generator} has {found} images, expected {expected}")]
    MapLength {
        generator: usize,
        expected: usize,
        found: usize,
    },
    #[error("generator {generator} sends point {point} to {image}, outside 1..={points}")]
    ImageOutOfRange {
        generator: usize,
        point: usize,
        image: usize,
        points: usize,
    },
    #[error(
        "generators {first} and {second} do not commute at point {point}: \
         {first}∘{second} gives {left}, {second}∘{first} gives {right}"
    )]
    NonCommuting {
        first: usize,
        second: usize,
        point: usize,
        left: usize,
        right: usize,
    },
    #[error(
        "chain level {level} is not the {power}-th power of level {next} (first differs at point {point})"
    )]
    ChainIncompatible {
        level: usize,
        next: usize,
        power: u64,
        point: usize,
    },
    #[error("lexicographic orders of rank {0} carry no finitely generated cone; actions are not supported")]
    LexAction(usize),
    #[error("exponent {0} is not in the positive cone")]
    NotPositive(GroupPoint),
    #[error("function has {found} values, the space has {expected} points")]
    FunctionLength { expected: usize, found: usize },
    #[error("operation requires {required} order, system has {found} order")]
    UnsupportedOrder {
        required: &'static str,
        found: &'static str,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("scalar: {0}")]
    Scalar(String),
    #[error("grid literal: {0}")]
    Grid(String),
    #[error("subgroup spec: {0}")]
    Subgroup(String),
    #[error("system file: {0}")]
    SystemFile(String),
}

/// Crate-wide error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    /// An identity that holds as a theorem failed; always an implementation defect.
    #[error("identity violated: {0}")]
    IdentityViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
