//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or integrating against a jump measure.
#[derive(Debug, Clone, Error)]
pub enum MeasureError {
    /// The measure description violates a structural invariant.
    #[error("structural error: {0}")]
    Structural(String),

    /// The dividend coordinate carries no quadratic mass, so quantities
    /// that normalize by the jump standard deviation are undefined.
    #[error("degenerate measure: the dividend coordinate has zero second moment")]
    DegenerateMeasure,

    /// An exponential-tilt evaluation would overflow. The offending
    /// exponent is reported so root-finders can diagnose runaway tilts.
    #[error("overflow guard: exponent {exponent:.3e} exceeds cap {cap:.0} ({context})")]
    Overflow {
        exponent: f64,
        cap: f64,
        context: &'static str,
    },
}

/// Errors raised by the bracketing root-finder.
#[derive(Debug, Clone, Error)]
pub enum RootFindError {
    /// No sign change was found within the doubling budget. For the tilt
    /// maps this signals a measure whose dividend coordinate does not
    /// charge both signs.
    #[error(
        "bracket failure after {doublings} doublings (half-width reached {reached:.3e}): {hint}"
    )]
    BracketFailure {
        doublings: u32,
        reached: f64,
        hint: &'static str,
    },

    /// The iteration budget was exhausted before the bracket shrank to
    /// the requested tolerance.
    #[error("iteration limit {max_iter} exceeded (bracket width {width:.3e})")]
    MaxIterExceeded { max_iter: usize, width: f64 },

    /// A function evaluation failed while searching.
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// Errors raised by the equilibrium and benchmark solvers.
#[derive(Debug, Clone, Error)]
pub enum SolveError {
    #[error("invalid economy: {0}")]
    InvalidEconomy(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: RootFindError,
    },

    #[error(transparent)]
    Measure(#[from] MeasureError),

    /// Evaluation outside the model horizon.
    #[error("domain error: time {t} outside [0, {horizon}]")]
    Domain { t: f64, horizon: f64 },
}

/// Errors raised by the path simulator.
#[derive(Debug, Clone, Error)]
pub enum SimError {
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Solve(#[from] SolveError),

    #[error(transparent)]
    Measure(#[from] MeasureError),
}
