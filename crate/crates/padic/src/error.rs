use thiserror::Error;

/// Errors shared across the crate. Contract violations are reported as
/// values, never panics; "undecidable" variants mean the inputs do not
/// carry enough digits to decide the question either way.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot invert: indistinguishable from zero at current precision")]
    InvertZeroBall,
    #[error("no canonical digits for a zero value")]
    NoDigits,
    #[error("undecidable at precision: {0}")]
    Undecidable(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("cannot certify convergence: no tail witness at the target precision")]
    NoConvergenceWitness,
    #[error("series diverges: |x|_p >= 1")]
    Diverges,
    #[error("oracle violates norm axioms: {0}")]
    InconsistentOracle(String),
    #[error("use measure-based integral: target prime equals the cell prime")]
    SamePrimeIntegral,
    #[error("measure inconsistent: not additive under subdivision")]
    MeasureInconsistent,
    #[error("raise precision: pivot indistinguishable from zero")]
    RaisePrecision,
    #[error("reduce to unit part first: |a|_p != 1")]
    NotAUnit,
    #[error("not a unit: representative divisible by p")]
    NotAUnitResidue,
    #[error("matrix is the identity at full precision")]
    IdentityMatrix,
    #[error("not an involution: A^2 != I")]
    NotAnInvolution,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
