//! Closed-form equilibrium for an exchange economy of exponential
//! investors whose incomes and dividends are driven by a common jump
//! measure, together with the complete-market representative-agent
//! benchmark and an exact Monte Carlo verifier for finite-activity
//! (compound Poisson) economies.
//!
//! The crate is organized around the data flow of the model:
//!
//! * [`measure`] — jump-measure descriptions and the exponential-tilt
//!   integrals everything else consumes;
//! * [`tilt`] — the strictly monotone tilted-mean maps and their
//!   bracketing inverses;
//! * [`equilibrium`] — the incomplete-market solver: market price of
//!   risk, holdings, interest rate, consumption policies, pricing
//!   integrands;
//! * [`benchmark`] — the representative-agent benchmark and the two
//!   incompleteness impacts;
//! * [`simulate`] — event-driven simulation of compound-Poisson
//!   economies and the pathwise/statistical verification report;
//! * [`config`] — config-file ingestion and the command-level entry
//!   points used by the thin CLI binary.
//!
//! Runnable walk-throughs for each capability live in `examples/`.

pub mod annuity;
pub mod benchmark;
pub mod config;
pub mod equilibrium;
pub mod error;
pub mod measure;
pub mod simulate;
pub mod tilt;

pub use annuity::Annuity;
pub use benchmark::{impacts, solve_benchmark, ImpactReport, RepresentativeBenchmark};
pub use equilibrium::{
    solve_consumption_trend, solve_equilibrium, solve_rate, solve_sharpe, solve_stock_holdings,
    ConsumptionPolicy, Economy, Equilibrium,
};
pub use error::{MeasureError, RootFindError, SimError, SolveError};
pub use measure::{
    atoms_from_csv, Atom, JumpCovariance, LevyMeasure, Tilt, ValidationReport,
};
pub use simulate::{
    density_path, evolve_paths, sample_jumps, sample_jumps_seeded, uniform_grid,
    verify_equilibrium, JumpStream, PathBundle, SimConfig, VerificationReport,
};
pub use tilt::{MonotoneTiltMap, RootFindConfig};
