use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid invariant factors: {0}")]
    InvariantFactors(String),
    #[error("map does not respect relations: {0}")]
    IllDefinedMap(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degree {degree} is outside the computed window (max {max})")]
    OutOfWindow { degree: i64, max: i64 },
    #[error("presentation is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("rings differ: {0}")]
    RingMismatch(String),
    #[error("insufficient resolution window: {0}")]
    InsufficientWindow(String),
    #[error("extension problem in degree {0}: both terms of the short exact sequence are nonzero")]
    Extension(i64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactSeqError {
    #[error("node {label} has an infinite group; order bookkeeping needs finite groups")]
    InfiniteGroup { label: String },
    #[error("node {label} is designated zero but carries a nontrivial group")]
    FalseZero { label: String },
    #[error("sequence must start and end at a zero node")]
    OpenEnds,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("bad group expression {expr:?}: {message}")]
    Expression { expr: String, message: String },
    #[error("table {table}: degree {degree} matches {count} rows")]
    Ambiguous { table: String, degree: u64, count: usize },
    #[error("table {table} has no row covering degree {degree}")]
    Uncovered { table: String, degree: u64 },
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Debug, Error)]
pub enum AuditError {
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    ExactSeq(#[from] ExactSeqError),
}
