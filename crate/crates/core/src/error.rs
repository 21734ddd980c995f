use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("zero vector has no Born probability")]
    ZeroVector,
    #[error("state invisible in component {0}: its projection vanishes")]
    InvisibleInComponent(usize),
    #[error("images do not define a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not representable exactly: {0}")]
    NotRepresentable(String),
    #[error("internal invariant failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DivisionByZero => "division_by_zero",
            Error::DegreeMismatch(..) => "degree_mismatch",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::ZeroVector => "zero_vector",
            Error::InvisibleInComponent(_) => "invisible_in_component",
            Error::NotHomomorphism(_) => "not_homomorphism",
            Error::NotRepresentable(_) => "not_representable",
            Error::Internal(_) => "internal",
        }
    }

    /// True for failures caused by the caller's input rather than by a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::CapExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
