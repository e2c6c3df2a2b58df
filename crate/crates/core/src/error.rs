use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("incompatible invariants: {0}")]
    IncompatibleInvariants(String),

    #[error("invalid mu: {0}")]
    InvalidMu(String),

    #[error("invalid nu: {0}")]
    InvalidNu(String),

    #[error("invalid d: {0}")]
    InvalidD(String),

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("inconsistent candidate: {0}")]
    InconsistentCandidate(String),

    #[error("square discriminant: d = {0} is a perfect square")]
    SquareDiscriminant(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("invalid t: {0}")]
    InvalidT(String),

    #[error("inconsistent h1: {0}")]
    InconsistentH1(String),

    #[error("theorem inapplicable: {0}")]
    TheoremInapplicable(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("internal error: {0}")]
    Internal(String),
}
