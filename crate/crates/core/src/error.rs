use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// The variants split into input errors (bad text, mismatched shapes) and
/// precondition errors (a well-formed form that lies outside the locus an
/// operation is defined on). The CLI maps the two groups to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("inhomogeneous input: term of degree {found} in a form of degree {expected}")]
    Inhomogeneous { expected: u32, found: u32 },
    #[error("variable x{index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },
    #[error("number of variables mismatch: {left} vs {right}")]
    NvarsMismatch { left: usize, right: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("vector length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("{0}")]
    OutOfRange(String),
    #[error("operation undefined on the zero form")]
    ZeroForm,
    #[error("form lies in sigma_2")]
    InSigma2,
    #[error("form does not lie in sigma_3")]
    NotInSigma3,
    #[error("unsupported degree {0}")]
    UnsupportedDegree(u32),
    #[error("classification failed: {0}")]
    Classification(String),
}

impl Error {
    /// True for errors caused by malformed input rather than a violated precondition.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::Inhomogeneous { .. }
                | Error::VariableOutOfRange { .. }
                | Error::NvarsMismatch { .. }
                | Error::LengthMismatch { .. }
        )
    }
}
