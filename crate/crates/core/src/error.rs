use thiserror::Error;

/// Errors raised by the engine.
///
/// The variants group into the error classes the operations document:
/// structural mismatches, bad arguments, non-invertible elements, domain
/// violations of the conversion formulas, and derivation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring descriptor mismatch: {0}")]
    DescriptorMismatch(String),
    #[error("ambient mismatch: `{0}` vs `{1}`")]
    AmbientMismatch(String, String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("element is not a unit: constant term is {0}, expected +1 or -1")]
    NotAUnit(String),
    #[error("unknown support `{0}`")]
    UnknownSupport(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown embedding `{0}`")]
    UnknownEmbedding(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("axiom rejected: {0}")]
    AxiomRejected(String),
    #[error("underivable product: {0}")]
    Underivable(String),
    #[error("inconsistent derivation: {0}")]
    Inconsistent(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
