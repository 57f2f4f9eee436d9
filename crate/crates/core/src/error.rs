use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("at least three singular fibers are required, got {0}")]
    TooFewFibers(usize),
    #[error("multiplicity {value} at position {index} is smaller than 2")]
    MultiplicityTooSmall { index: usize, value: i64 },
    #[error("multiplicities {a} and {b} share the factor {gcd}")]
    NotCoprime { a: i64, b: i64, gcd: i64 },
    #[error("fiber multiplicity 0 in a homology computation")]
    DivisionByZero,
    #[error("continued fraction input {0} is not below -1")]
    InvalidRange(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("form is not negative definite")]
    NotNegativeDefinite,
    #[error("form is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("lattice enumeration exceeded the cap of {0}")]
    EnumerationCapExceeded(u64),
    #[error("intersection form is not diagonalizable over the integers")]
    NotDiagonalizable,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("criterion not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
