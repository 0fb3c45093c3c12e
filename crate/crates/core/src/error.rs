use thiserror::Error;

use crate::model::SubsetIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable count {m} out of range 1..={max}")]
    VarCountOutOfRange { m: usize, max: usize },
    #[error("bitmask {mask:#b} is not a nonempty subset of {m} variables")]
    BadSubset { mask: u16, m: usize },
    #[error("position {position} out of range 1..={m}")]
    PositionOutOfRange { position: usize, m: usize },
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("entropy vector needs {expected} coordinates, got {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("entropy value at {subset} is negative")]
    NegativeEntropy { subset: SubsetIndex },
    #[error("inequality has no nonzero coefficient")]
    ZeroInequality,
    #[error("exact comparison needs {bits} bits, above the 2^24-bit limit")]
    SizeLimit { bits: u64 },
    #[error("zero is not a valid logarithm argument")]
    LogOfZero,
    #[error("invalid rational {0:?}")]
    BadRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("empty variable list at {position}")]
    EmptyVars { position: usize },
    #[error("all coefficients cancel")]
    ZeroInequality,
    #[error("too many variables: {count} (at most {max})")]
    TooManyVariables { count: usize, max: usize },
    #[error("duplicate declared variable `{0}`")]
    DuplicateDeclaration(String),
    #[error("expected {expected} variable names, got {found}")]
    NameCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistError {
    #[error("probabilities sum to {0}, not 1")]
    BadTotal(String),
    #[error("duplicate point {0:?}")]
    DuplicatePoint(Vec<u32>),
    #[error("nonpositive probability {prob} at point {point:?}")]
    NonPositive { point: Vec<u32>, prob: String },
    #[error("point {point:?} has {found} coordinates, expected {expected}")]
    WrongArity { point: Vec<u32>, expected: usize, found: usize },
    #[error("empty support")]
    Empty,
    #[error("projection onto {0} has non-uniform fibers")]
    NonUniformFibers(SubsetIndex),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("elemental inequalities need 1 <= m <= 6, got {0}")]
    OutOfRange(usize),
    #[error("certificate mismatch at {subset}: combination gives {combined}, target is {target}")]
    Mismatch { subset: SubsetIndex, combined: String, target: String },
    #[error("certificate weight for row {row} is negative")]
    NegativeWeight { row: usize },
    #[error("certificate refers to row {row}, but only {rows} rows exist")]
    UnknownRow { row: usize, rows: usize },
    #[error("witness violates elemental row {row} ({row_text})")]
    WitnessNotPolymatroid { row: usize, row_text: String },
    #[error("witness does not separate: target slack is {slack}, not negative")]
    WitnessNotSeparating { slack: String },
    #[error("witness has {found} coordinates, expected {expected}")]
    WitnessShape { expected: usize, found: usize },
    #[error("simplex failed: {0}")]
    Simplex(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is not square or has entries out of range")]
    InvalidTable,
    #[error("empty group table")]
    Empty,
    #[error("element 0 is not a two-sided identity")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("element list {0:?} is not a subgroup")]
    NotSubgroup(Vec<usize>),
    #[error("invalid permutation {0:?}")]
    BadPermutation(Vec<usize>),
    #[error("generated group exceeds {0} elements")]
    TooLarge(usize),
    #[error("group catalog is empty")]
    EmptyCatalog,
    #[error("expected {expected} subgroups, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("base must be at least 2, got {0}")]
    BadBase(u64),
    #[error("digit {digit} in point {point:?} is not below base {base}")]
    DigitOutOfRange { point: Vec<u32>, digit: u32, base: u64 },
    #[error("point {point:?} has {found} coordinates, expected {expected}")]
    WrongArity { point: Vec<u32>, expected: usize, found: usize },
    #[error("empty digit set")]
    Empty,
    #[error("dimension values with different bases ({0} and {1}) cannot be compared")]
    MixedBases(u64, u64),
    #[error("subset B is not contained in A (point {0:?})")]
    NotContained(Vec<u32>),
    #[error("projection onto {0} is not uniform")]
    NotUniform(SubsetIndex),
    #[error("group point does not violate the inequality (slack {0})")]
    NotViolated(String),
    #[error("no epsilon 2^-k (k <= 64) keeps the strict inequality")]
    NoEpsilon,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("operation needs a three-dimensional body, got m = {0}")]
    NotThreeDimensional(usize),
    #[error("side length {0} is not a perfect square >= 4")]
    BadSide(u64),
    #[error("exhaustive search over {parts}^{points} assignments exceeds the 10^7 bound")]
    TooLarge { parts: usize, points: usize },
    #[error("split spec has no parts")]
    EmptySpec,
    #[error("body has no points")]
    EmptyBody,
    #[error("base N must be at least 1, got {0}")]
    BadBase(u64),
    #[error("point {point:?}: {reason}")]
    BadPoint { point: Vec<u32>, reason: String },
    #[error("part {part} does not match the inequality's left-hand family")]
    WrongFamily { part: String },
    #[error("assignment has {found} entries for {expected} points")]
    AssignmentShape { expected: usize, found: usize },
    #[error("part {0} is listed twice")]
    DuplicatePart(SubsetIndex),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Umbrella error for callers that drive several modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cantor(#[from] CantorError),
    #[error(transparent)]
    Split(#[from] SplitError),
    /// Malformed JSON or a document of the wrong shape.
    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Model(_) => "model",
            Error::Dsl(_) => "parse",
            Error::Dist(_) => "distribution",
            Error::Cone(_) => "cone",
            Error::Group(_) => "group",
            Error::Cantor(_) => "cantor",
            Error::Split(_) => "split",
            Error::Input(_) => "input",
        }
    }
}
