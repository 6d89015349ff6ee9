use thiserror::Error;

use crate::gaussint::GaussInt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("norm of {0} exceeds the 2^62 bound")]
    NormOverflow(GaussInt),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd(0, 0) is undefined")]
    UndefinedGcd,
    #[error("{0} has no primary associate (zero or divisible by 1+i)")]
    NotNormalizable(GaussInt),
    #[error("operation requires a nonzero argument")]
    ZeroInput,
    #[error("norm {0} exceeds the trial-division budget of 2^52")]
    FactorBudget(u64),
    #[error("invalid modulus {modulus}: {reason}")]
    InvalidModulus {
        modulus: GaussInt,
        reason: &'static str,
    },
    #[error("{0} is not primary")]
    NotPrimary(GaussInt),
    #[error("supplement exponent for {0} is not divisible by 4 (primary normalization bug)")]
    SupplementData(GaussInt),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the family is empty below norm {0}")]
    EmptyFamily(f64),
    #[error("decay target not reached: |phi({y_max})| = {modulus:e} >= {target:e}")]
    DecayNotReached {
        y_max: f64,
        modulus: f64,
        target: f64,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("sample list is empty")]
    EmptySamples,
}

pub type Result<T> = std::result::Result<T, Error>;
