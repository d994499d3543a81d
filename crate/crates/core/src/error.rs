use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime (prime fields need p >= 2)")]
    NotPrime(u64),
    #[error("denominator of {value} is divisible by {p}")]
    BadDenominator { value: String, p: u64 },
    #[error("cannot make element monic: leading coefficient {0} is not invertible")]
    NotInvertible(String),
    #[error("expected a homogeneous polynomial of degree {expected}")]
    NonHomogeneous { expected: u32 },
    #[error("substitution image has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("substitution has a singular linear part")]
    SingularLinearPart,
    #[error("wrong cubic class: expected {expected}, found {found}")]
    WrongClass { expected: String, found: String },
    #[error("algebra is not certified finite within cap {0}")]
    NotFinite(u32),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
