use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReduciblePolynomial(Vec<u32>, u32),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("field of order {p}^{f} is too large")]
    FieldTooLarge { p: u32, f: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("permutation degree {degree} exceeds the limit {limit}")]
    DegreeTooLarge { degree: u128, limit: usize },
    #[error("index {index} exceeds the limit {limit}")]
    IndexTooLarge { index: u128, limit: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("group is not completely reducible; use the corollary check instead")]
    NotCompletelyReducible,
    #[error("dimension {0} is too large for this construction")]
    DimensionTooLarge(usize),
    #[error("construction requires q to be an even power of 2")]
    OddPowerField,
    #[error("unsupported Fermat prime {0} (supported: 3, 5)")]
    UnsupportedFermatPrime(u32),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Short machine-readable tag used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::ReduciblePolynomial(..) => "ReduciblePolynomial",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotInvertible => "NotInvertible",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::IndexTooLarge { .. } => "IndexTooLarge",
            Error::NotNormal => "NotNormal",
            Error::NotIrreducible => "NotIrreducible",
            Error::NotCompletelyReducible => "NotCompletelyReducible",
            Error::DimensionTooLarge(_) => "DimensionTooLarge",
            Error::OddPowerField => "OddPowerField",
            Error::UnsupportedFermatPrime(_) => "UnsupportedFermatPrime",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// Resource-limit errors map to a distinct CLI exit code.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::DegreeTooLarge { .. }
                | Error::IndexTooLarge { .. }
                | Error::FieldTooLarge { .. }
                | Error::DimensionTooLarge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
