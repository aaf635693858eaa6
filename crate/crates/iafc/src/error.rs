//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong while building combs, grids, ensembles or fits.
#[derive(Debug, Error)]
pub enum Error {
    /// Input rejected before any computation (bad counts, signs, ranges).
    #[error("invalid input: {0}")]
    Validation(String),

    /// Comb spacing does not exceed the tooth width (finesse <= 1).
    #[error("finesse violation: delta = {delta} must exceed gamma = {gamma}")]
    FinesseViolation { delta: f64, gamma: f64 },

    /// Requested spectral grid exceeds the configured point budget.
    #[error("spectral grid needs {required} points, more than the maximum {max}")]
    GridTooLarge { required: usize, max: usize },

    /// A field was produced on one grid and consumed on an incompatible one.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The echo window [pi/delta, 3pi/delta] does not fit in the time record.
    #[error("echo window [{lo}, {hi}] us exceeds the time grid ending at {t_max} us")]
    EchoWindow { lo: f64, hi: f64, t_max: f64 },

    /// Curve fitting needs at least five samples.
    #[error("fit needs at least 5 points, got {0}")]
    FitTooFewPoints(usize),

    /// Curve fitting on identically-zero efficiencies is meaningless.
    #[error("fit rejected: all efficiencies are zero")]
    FitDegenerate,

    /// Backward efficiencies must not be derived from an unconverged fit.
    #[error("fit did not converge; backward efficiency unavailable")]
    FitNotConverged,

    /// The forward-model fit residual exceeded the quality gate.
    #[error("fit residual {residual} exceeds gate threshold {threshold}")]
    GateFailed { residual: f64, threshold: f64 },

    /// Text that should have been a comb file, config or CSV did not parse.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the command-line front end:
    /// 0 ok, 1 internal, 2 validation / I-O / parse, 3 fit gate failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::GateFailed { .. } => 3,
            Error::Validation(_)
            | Error::FinesseViolation { .. }
            | Error::Parse(_)
            | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
