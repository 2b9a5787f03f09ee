use thiserror::Error;

/// Every failure mode of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus 0x{0:x} is reducible over GF(2)")]
    ReducibleModulus(u64),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("no embedding from GF(2^{from}) into GF(2^{to})")]
    NoEmbedding { from: u32, to: u32 },
    #[error("operands live in different polynomial rings")]
    RingMismatch,
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("coefficient of {term} is not divisible by {divisor}")]
    NotDivisible { term: String, divisor: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not alternate")]
    NotAlternate,
    #[error("predicted {predicted} terms exceeds the term budget of {budget}")]
    TermBudgetExceeded { predicted: u128, budget: u64 },
    #[error("alpha = 0x{0:x} lies in {{x + x^2}}; choose alpha outside the image of x -> x + x^2")]
    InvalidAlpha(u32),
    #[error("operation not defined for this form kind: {0}")]
    KindMismatch(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("no group element found after {0} rejections")]
    SamplingBudgetExceeded(u64),
    #[error("family has no member with index {0}")]
    MissingMember(usize),
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("bad index list: {0}")]
    BadIndices(String),
    #[error("diagonal entry {0} has no declared square root")]
    NotAPerfectSquareStructure(usize),
    #[error("no representation found within the degree budget {budget}")]
    AnsatzNotFound { budget: u64 },
    #[error("polynomial degree {degree} too large for a field of size 2^{bits}")]
    DegreeTooLarge { degree: u64, bits: u32 },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures caused by a resource guardrail rather than bad input.
    pub fn is_guardrail(&self) -> bool {
        matches!(
            self,
            Error::TermBudgetExceeded { .. }
                | Error::TooLarge(_)
                | Error::SamplingBudgetExceeded(_)
                | Error::DegreeTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
