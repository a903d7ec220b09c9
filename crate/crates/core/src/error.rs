use thiserror::Error;

/// Errors raised by the coefficient layer (fields, polynomials, fractions).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("characteristic {0} is neither 0 nor a prime")]
    InvalidCharacteristic(u64),
    #[error("characteristic mismatch: field declares {declared}, scalar type has {scalar}")]
    CharacteristicMismatch { declared: u64, scalar: u64 },
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("operation requires positive characteristic")]
    NeedsPositiveCharacteristic,
}
