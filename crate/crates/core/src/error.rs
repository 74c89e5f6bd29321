use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("log_{p1}({p2}) is rational: the pair lies on a single projective point")]
    LogRationalPair { p1: u64, p2: u64 },
    #[error("{p} and {q} are not coprime")]
    NotCoprime { p: String, q: String },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("{n} exceeds the factoring bound")]
    FactoringBoundExceeded { n: String },
    #[error("1 has no projective point")]
    UnitHasNoPoint,
    #[error("enumeration needs about {estimate} elements, budget is {budget}")]
    EnumerationBudgetExceeded { estimate: u128, budget: u128 },
    #[error("generator {generator} is not a non-negative combination of the reduced pair")]
    MembershipFailure { generator: u64 },
    #[error("generator set cannot be reduced to at most two generators: {0}")]
    NotReducible(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
