use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every module.
///
/// The variants fall into three classes used by the CLI exit-code contract:
/// bad input ([`ErrorClass::InvalidInput`]), a valid input for which no
/// object exists ([`ErrorClass::Infeasible`]) and numerical breakdown
/// ([`ErrorClass::Numerical`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degenerate slope pair: {0}")]
    DegeneratePair(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("no certificate: {0}")]
    NoCertificate(String),
    #[error("numerical inconsistency: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    InvalidInput,
    Infeasible,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Infeasible(_) | Error::NoCertificate(_) => ErrorClass::Infeasible,
            Error::Numerical(_) => ErrorClass::Numerical,
            _ => ErrorClass::InvalidInput,
        }
    }
}
