use thiserror::Error;

/// Crate-wide error type.
///
/// Every variant is classified as either bad input (degenerate functional,
/// mode mixing, missing data) or an internal numerical failure (lost
/// convergence, unusable conditioning). The split drives the process exit
/// code reported by the CLI, see [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    /// Exact-rational and complex-float values were mixed in one operation.
    #[error("mode mismatch: cannot combine {left} with {right}")]
    ModeMismatch { left: &'static str, right: &'static str },

    #[error("division by zero")]
    DivisionByZero,

    /// A Hankel determinant vanished, so the moment functional does not
    /// determine a monic orthogonal system at this depth. `index` is the
    /// size of the first vanishing determinant (index 1 means g_0 itself).
    #[error("degenerate moment functional: Hankel determinant of size {index} vanishes")]
    DegenerateFunctional { index: usize },

    /// The leading coefficient of a moment recurrence vanished before the
    /// requested depth was reached.
    #[error("moment recurrence breaks down at n = {n}: leading coefficient is zero")]
    RecurrenceBreakdown { n: usize },

    /// A finite data source was asked for more entries than it holds.
    #[error("insufficient {what}: need {needed}, have {available}")]
    InsufficientData { what: &'static str, needed: usize, available: usize },

    /// mu_0 must be 0 and mu_n must be nonzero for n >= 1.
    #[error("invalid derivative eigenvalue mu_{n}: {reason}")]
    InvalidMu { n: usize, reason: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// No linear combination of shifted moment sequences reproduces the
    /// derived moments; the two functionals are not related by a
    /// polynomial-factor chain of the requested width.
    #[error("no consistent polynomial-factor relation of width {width} between the two moment sequences")]
    FactorInconsistent { width: usize },

    /// Exact mode cannot represent an irrational characteristic root.
    #[error("characteristic polynomial of the recurrence has no rational root; exact rescaling impossible")]
    NoRationalRoot,

    /// sigma(w(n+shift)) vanished for an index the pipeline needs, meaning
    /// the chosen parameters place a required argument on the period lattice.
    #[error("lattice collision: sigma({arg}) vanishes within tolerance")]
    LatticeCollision { arg: String },

    #[error("series evaluation did not converge: {0}")]
    Convergence(String),

    /// A linear system that must be solvable by construction was singular;
    /// indicates conditioning loss rather than bad input.
    #[error("singular linear system of size {size}")]
    SingularSystem { size: usize },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("could not parse scalar from {0:?}")]
    ScalarParse(String),
}

impl Error {
    /// Process exit code the CLI reports for this error.
    ///
    /// 2 marks degenerate or otherwise invalid input, 3 marks an internal
    /// tolerance or convergence failure. (0 is reserved for a clean pass and
    /// 1 for a falsified property verdict; neither is an `Error`.)
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ModeMismatch { .. }
            | Error::DivisionByZero
            | Error::DegenerateFunctional { .. }
            | Error::RecurrenceBreakdown { .. }
            | Error::InsufficientData { .. }
            | Error::InvalidMu { .. }
            | Error::InvalidParameter(_)
            | Error::LatticeCollision { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::ScalarParse(_) => 2,
            Error::FactorInconsistent { .. }
            | Error::NoRationalRoot
            | Error::Convergence(_)
            | Error::SingularSystem { .. }
            | Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
