use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the series ring and everything built on it.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("invalid variable list {0:?}: duplicate names or eps not first")]
    InvalidVariables(Vec<String>),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("exp needs a series with zero constant term")]
    NonzeroConstantTerm,
    #[error("log needs a series with constant term 1")]
    ConstantTermNotOne,
    #[error("powers of the argument never truncate to zero")]
    NotNilpotent,
    #[error("series is not univariate")]
    NotUnivariate,
    #[error("linear form has no terms")]
    EmptyForm,
    #[error("exponent {exponent} of `{variable}` exceeds its cap {cap}")]
    ExponentBeyondTruncation {
        variable: String,
        exponent: u32,
        cap: u32,
    },
    #[error("series is not divisible by the sum of {0:?}")]
    NotDivisible(Vec<String>),
    #[error("cannot divide by a sum involving the individually capped variable `{0}`")]
    CappedDivisor(String),
    #[error("1-form is not closed: d/d{second} of component {first} differs from d/d{first} of component {second}")]
    NotClosed { first: String, second: String },
    #[error("an eps cap is required for this series")]
    MissingEpsCap,
    #[error("index out of range: {0}")]
    InvalidIndex(String),
    #[error("at least {needed} variables are required, got {got}")]
    TooFewVariables { needed: usize, got: usize },
    #[error("moduli space is unstable: 2g - 2 + n = {0} <= 0")]
    UnstableModuli(i64),
    #[error("enumeration bound exceeded: {requested} > {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("identity violated: {0}")]
    IdentityViolated(String),
}

pub type Result<T> = core::result::Result<T, Error>;
