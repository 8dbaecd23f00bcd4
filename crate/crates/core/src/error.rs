use thiserror::Error;

/// Errors raised by the group, field and verification engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters p={p}, f={f}")]
    InvalidField { p: u64, f: u32 },
    #[error("field of order {0} is too large for table-driven arithmetic")]
    FieldTooLarge(u64),
    #[error("division by zero in a finite field")]
    DivisionByZero,
    #[error("operation requires a field of odd order")]
    OddFieldRequired,
    #[error("q={0} is not supported here")]
    UnsupportedQ(u64),
    #[error("q={q} exceeds the brute-force bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("search space exceeded the candidate cap of {cap}")]
    CandidateCapExceeded { cap: u64 },
    #[error("{r} is not a prime divisor of the group order {order}")]
    NotADivisor { r: u64, order: u64 },
    #[error("the test character is undefined for q = 5")]
    QIsFive,
    #[error("Frobenius-Schur indicator of {0} is not in {{-1, 0, 1}}")]
    NonIntegralIndicator(String),
    #[error("element list is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("unsupported subgroup shape: {0}")]
    UnsupportedShape(String),
    #[error("value is not rational: {0}")]
    NotRational(String),
    #[error("unsupported Cohn-Livingstone instance: {0}")]
    UnsupportedInstance(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("Frobenius-Schur indicator of the test character is {0}, expected 1")]
    IndicatorNotOne(i64),
    #[error("no fact recorded for {candidate}: {key}")]
    UnknownFact { candidate: String, key: String },
    #[error("{0} is not simple")]
    NotSimple(String),
    #[error("unknown candidate: {0}")]
    UnknownCandidate(String),
    #[error("unsupported tag: {0}")]
    UnsupportedTag(String),
    #[error("even characteristic has no square root of eps*q in this construction")]
    EvenCharacteristic,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
