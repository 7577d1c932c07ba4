use thiserror::Error;

/// Errors raised by the lattice, sphere, strata, stability and packing layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("CP^2 blown up at {0} points has Euler characteristic above 12 (at most 9 blow-ups supported)")]
    TooManyBlowUps(usize),

    #[error("the zero class is not allowed here")]
    ZeroClass,

    #[error("class {class} has nonnegative square {square}")]
    NonNegativeSquare { class: String, square: i64 },

    #[error("invalid reflection root {0}: a root must have square -2 and be orthogonal to the canonical class")]
    InvalidRoot(String),

    #[error("class is not forward: {0}")]
    NotForward(String),

    #[error("class lies outside the symplectic cone: {class} has area {area}")]
    OutsideCone { class: String, area: String },

    #[error("missing bounds: {0}")]
    MissingBounds(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid class {class}: {reason}")]
    InvalidClass { class: String, reason: String },

    #[error("degenerate segment: {0}")]
    Degenerate(String),

    #[error("surface mismatch: {0}")]
    SurfaceMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// True for failures of the library's own self-checks, as opposed to bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
