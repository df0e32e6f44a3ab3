use thiserror::Error;

/// Errors raised by the lattice toolkit.
///
/// `Precondition` covers inputs that violate an operation's contract (odd
/// dimensions, wrong gauge, size caps). `Numerical` means a computed result
/// broke a tolerance the code guarantees; the failing invariant is named.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("lattice mismatch: {0:?} vs {1:?}")]
    LatticeMismatch([usize; 3], [usize; 3]),
    #[error("numerical failure in `{invariant}`: {detail}")]
    Numerical { invariant: &'static str, detail: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("malformed document: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn numerical(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            invariant,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
