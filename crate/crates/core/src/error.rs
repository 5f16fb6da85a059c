use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} is too large (must be below 2^32)")]
    ModulusTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field spec `{0}` (expected `Q` or `Fp:<p>`)")]
    InvalidFieldSpec(String),
    #[error("invalid scalar literal `{0}`")]
    InvalidScalar(String),
    #[error("operands live in different fields: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid dimension {0}")]
    InvalidDim(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("characteristic {char} is too small for variety `{variety}`")]
    CharTooSmall { variety: String, char: u64 },
    #[error("algebra does not satisfy variety `{0}`")]
    NotInVariety(String),
    #[error("malformed algebra description: {0}")]
    MalformedAlgebra(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("monomial `{0}` has degree below 2")]
    Degree(String),
    #[error("identity reduces to 0 = 0")]
    TrivialIdentity,
    #[error("unknown variety `{0}`")]
    UnknownVariety(String),

    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("enumeration of {needed} elements exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("operation requires a finite field")]
    InfiniteField,
    #[error("unsupported variety `{0}` (expected left_commutative or bicommutative)")]
    UnsupportedVariety(String),
    #[error("table row `{row}` mismatch: {detail}")]
    TableMismatch { row: String, detail: String },
}
