use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("value is zero to the tracked precision and cannot be inverted")]
    NotInvertibleToPrecision,
    #[error("denominator exponent {den} exceeds precision {prec}")]
    NoSignificantDigits { den: u32, prec: u32 },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("polynomial is not irreducible modulo p: {0}")]
    NotIrreducible(String),
    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),
    #[error("extension is not Galois: {0}")]
    NotGalois(String),
    #[error("base field does not contain the p-th roots of unity")]
    NoPthRootsOfUnity,
    #[error("invalid jump: {0}")]
    InvalidJump(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("gcd violation: {0}")]
    GcdViolation(String),
    #[error("unsupported base field: {0}")]
    UnsupportedBase(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("element does not generate a normal basis")]
    NotGenerator,
    #[error("normal basis generator search exhausted after {0} attempts")]
    SearchExhausted(usize),
    #[error("enumeration needs {required} classes, budget is {budget}")]
    BudgetExceeded { budget: u128, required: u128 },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("invalid extension spec: {0}")]
    InvalidSpec(String),
}

impl Error {
    pub fn is_precision(&self) -> bool {
        matches!(self, Error::PrecisionExhausted(_) | Error::NotInvertibleToPrecision)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
