use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("relations are not monomial-reducible within the length bound: overlap {overlap} leaves {remainder}")]
    NotReducible { overlap: String, remainder: String },

    #[error("algebra is not finite-dimensional within the bounds: {0}")]
    NotFinite(String),

    #[error("invalid dg algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid dg module: {0}")]
    InvalidModule(String),

    #[error("malformed A-infinity data: {0}")]
    Malformed(String),

    #[error("not connective: {0}")]
    NotConnective(String),

    #[error("not coconnective: {0}")]
    NotCoconnective(String),

    #[error("H^0 is not semisimple: {0}")]
    NotSemisimple(String),

    #[error("result cannot be certified within the bounds: {0}")]
    Uncertified(String),

    #[error("cohomology outside the window: {0}")]
    OutsideWindow(String),

    #[error("morphism is not closed: {0}")]
    NotClosed(String),

    #[error("morphisms are not composable: {0}")]
    MismatchedEndpoints(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
