use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Verification failures are not errors: they are reported through
/// [`crate::report::Report`] verdicts. An `Error` means a precondition was
/// violated, an input could not be parsed, or an internal cross-check found
/// two routes disagreeing.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("preset {name}: rank {n} out of range")]
    PresetRange { name: String, n: usize },
    #[error("malformed root datum: {0}")]
    MalformedDatum(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Weyl group closure exceeded {0} elements")]
    WeylBound(usize),
    #[error("coweight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("{0:?} is not a root of the datum")]
    NotARoot(Vec<i64>),
    #[error("character value must be nonzero")]
    ZeroCharacter,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration of {count} items exceeds the bound {bound}")]
    BoundExceeded { count: String, bound: u64 },
    #[error("polynomial has a nonzero constant term")]
    NonzeroConstant,
    #[error("sequence has {gens} generators but only {vars} variables")]
    TooManyGenerators { gens: usize, vars: usize },
    #[error("empty sequence")]
    EmptySequence,
    #[error("degree bound {bound} is below the generator degree {needed}")]
    DegreeBoundTooSmall { bound: u32, needed: u32 },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value not representable in the field: {0}")]
    NotInField(String),
    #[error("missing ledger field `{0}`")]
    MissingField(String),
    #[error("inconsistent dimensions: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("conjugate is not integral at entry ({row}, {col})")]
    NonIntegral { row: usize, col: usize },
    #[error("insufficient p-adic precision: {0}")]
    Precision(String),
    #[error("internal cross-check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
