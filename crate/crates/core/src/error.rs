use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("pole: {0}")]
    Pole(String),

    #[error("degenerate AGM pair: {0}")]
    DegeneratePair(String),

    #[error("{what} did not converge within {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("singular curve: {0}")]
    SingularCurve(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("point has order 2; use the 2-torsion elliptic logarithm")]
    TwoTorsionInput,

    #[error("point at infinity has elliptic logarithm 0")]
    InfinityInput,

    #[error("no real point with this x-coordinate: {0}")]
    Component(String),

    #[error("point is not on the curve: {0}")]
    OffCurve(String),

    #[error("coset violation: {0}")]
    CosetViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Short machine-readable name, used by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::Pole(_) => "PoleError",
            Error::DegeneratePair(_) => "DegeneratePair",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::DegenerateLattice(_) => "DegenerateLattice",
            Error::SingularCurve(_) => "SingularCurve",
            Error::DegenerateCurve(_) => "DegenerateCurve",
            Error::TwoTorsionInput => "TwoTorsionInput",
            Error::InfinityInput => "InfinityInput",
            Error::Component(_) => "ComponentError",
            Error::OffCurve(_) => "OffCurve",
            Error::CosetViolation(_) => "CosetViolation",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Internal(_) => "Internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
