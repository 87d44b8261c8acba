use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("mixed moduli: {0} and {1}")]
    ModulusMismatch(u32, u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("inconsistent subspace data: sub-dimension {sub} exceeds ambient dimension {ambient}")]
    QuotientTooLarge { ambient: usize, sub: usize },

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("elements belong to different presentations")]
    PresentationMismatch,

    #[error("inhomogeneous element: degrees {0} and {1}")]
    Inhomogeneous(u32, u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid algebra map: {0}")]
    Map(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid group data: {0}")]
    Group(String),

    #[error("degree {degree} is above the cutoff {cutoff}")]
    AboveCutoff { degree: u32, cutoff: u32 },

    #[error("invalid fiber algebra: {0}")]
    Fiber(String),

    #[error("invalid differential: {0}")]
    Differential(String),

    #[error("inconsistent differential data: {0}")]
    Inconsistent(String),

    #[error("invalid manifold data: {0}")]
    Data(String),

    #[error("missing hypothesis: {0}")]
    MissingHypothesis(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
