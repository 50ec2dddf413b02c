//! Config-file ingestion and the command-level entry points behind the
//! CLI: validate, solve, sweep, simulate, convergence.
//!
//! Configs are single TOML files so experiments can be committed and
//! reproduced. Scalar outputs are JSON documents; the correlation sweep
//! and the convergence table are CSV with fixed headers, LF line
//! endings, and locale-independent number formatting.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::benchmark::{impacts, solve_benchmark, ImpactReport};
use crate::equilibrium::{solve_equilibrium, Economy, Equilibrium};
use crate::measure::{atoms_from_csv, Atom, JumpCovariance, LevyMeasure, Tilt};
use crate::simulate::{
    simulate_path, verify_equilibrium, SimConfig, VerificationReport,
};
use crate::tilt::RootFindConfig;

/// Errors split by exit-code semantics: `Usage` covers unparseable or
/// structurally malformed input (exit 2), `Domain` covers well-formed
/// but invalid models and failed validation (exit 1).
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl ConfigError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Usage(_) => 2,
            ConfigError::Domain(_) => 1,
        }
    }
}

fn domain<E: std::fmt::Display>(err: E) -> ConfigError {
    ConfigError::Domain(err.to_string())
}

/// Jump-measure declaration. Gaussian measures take either a flat
/// correlation or a full matrix; atomic measures take inline rows
/// `[weight, z0, ..., zI]` or a CSV file with columns weight,z0,...,zI.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureConfig {
    Gaussian {
        #[serde(skip_serializing_if = "Option::is_none")]
        rho: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
        #[serde(default = "default_intensity")]
        intensity: f64,
    },
    Atomic {
        #[serde(skip_serializing_if = "Option::is_none")]
        atoms: Option<Vec<Vec<f64>>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        atoms_csv: Option<PathBuf>,
    },
}

fn default_intensity() -> f64 {
    1.0
}

/// Economy section of the config; field names mirror [`Economy`].
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EconomyConfig {
    pub risk_tolerance: Vec<f64>,
    pub income_drift: Vec<f64>,
    pub income_vol: Vec<f64>,
    pub dividend_drift: f64,
    pub dividend_vol: f64,
    pub horizon: f64,
    pub dividend_init: f64,
    pub income_init: Vec<f64>,
    pub stock_endowment: Vec<f64>,
    pub bond_endowment: Vec<f64>,
    pub measure: MeasureConfig,
}

/// Correlation sweep over the benchmark family: flat-rho Gaussian jumps,
/// common tolerance tau, income loading `income_vol`, dividend loading
/// and drift proportional to the number of investors (so the per-capita
/// economy is invariant as I grows).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub rho_min: f64,
    pub rho_max: f64,
    pub n_points: usize,
    pub i_values: Vec<usize>,
    pub tau_values: Vec<f64>,
    #[serde(default = "default_sweep_income_vol")]
    pub income_vol: f64,
    #[serde(default = "default_sweep_income_drift")]
    pub income_drift: f64,
    #[serde(default = "default_sweep_dividend_vol")]
    pub dividend_vol_per_investor: f64,
    #[serde(default = "default_sweep_dividend_drift")]
    pub dividend_drift_per_investor: f64,
    #[serde(default = "default_intensity")]
    pub intensity: f64,
}

fn default_sweep_income_vol() -> f64 {
    0.1
}
fn default_sweep_income_drift() -> f64 {
    0.05
}
fn default_sweep_dividend_vol() -> f64 {
    0.2
}
fn default_sweep_dividend_drift() -> f64 {
    0.05
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    /// Number of sample points for the annuity and drift curves in the
    /// solve document.
    pub time_samples: usize,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            format: OutputFormat::Json,
            path: None,
            time_samples: 11,
        }
    }
}

/// Top-level run configuration.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub economy: EconomyConfig,
    #[serde(default)]
    pub rootfind: RootFindConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<SimConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn parse_str(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Usage(format!("config parse error: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_str(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Builds the domain economy. `base_dir` anchors relative CSV paths
    /// (usually the config file's directory).
    pub fn build_economy(&self, base_dir: &Path) -> Result<Economy, ConfigError> {
        let e = &self.economy;
        let dim = e.risk_tolerance.len() + 1;
        let measure = match &e.measure {
            MeasureConfig::Gaussian {
                rho,
                matrix,
                intensity,
            } => {
                let cov = match (rho, matrix) {
                    (Some(_), Some(_)) => {
                        return Err(ConfigError::Usage(
                            "measure: give either rho or matrix, not both".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(ConfigError::Usage(
                            "measure: gaussian needs rho or matrix".into(),
                        ))
                    }
                    (Some(rho), None) => JumpCovariance::flat(dim, *rho).map_err(domain)?,
                    (None, Some(rows)) => {
                        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                            return Err(ConfigError::Usage(format!(
                                "measure: matrix must be {dim}x{dim} for {} investors",
                                dim - 1
                            )));
                        }
                        let entries = nalgebra::DMatrix::from_fn(dim, dim, |i, j| rows[i][j]);
                        JumpCovariance::from_matrix(entries).map_err(domain)?
                    }
                };
                LevyMeasure::gaussian(cov, *intensity).map_err(domain)?
            }
            MeasureConfig::Atomic { atoms, atoms_csv } => {
                let atom_list: Vec<Atom> = match (atoms, atoms_csv) {
                    (Some(_), Some(_)) => {
                        return Err(ConfigError::Usage(
                            "measure: give either atoms or atoms_csv, not both".into(),
                        ))
                    }
                    (None, None) => {
                        return Err(ConfigError::Usage(
                            "measure: atomic needs atoms or atoms_csv".into(),
                        ))
                    }
                    (Some(rows), None) => rows
                        .iter()
                        .enumerate()
                        .map(|(k, row)| {
                            if row.len() != dim + 1 {
                                return Err(ConfigError::Usage(format!(
                                    "measure: atom row {k} needs {} entries (weight,z0,...,z{})",
                                    dim + 1,
                                    dim - 1
                                )));
                            }
                            Ok(Atom::new(row[0], row[1..].to_vec()))
                        })
                        .collect::<Result<_, _>>()?,
                    (None, Some(csv)) => {
                        let path = if csv.is_relative() {
                            base_dir.join(csv)
                        } else {
                            csv.clone()
                        };
                        let file = fs::File::open(&path).map_err(|err| {
                            ConfigError::Usage(format!("cannot read {}: {err}", path.display()))
                        })?;
                        atoms_from_csv(std::io::BufReader::new(file)).map_err(domain)?
                    }
                };
                LevyMeasure::atomic(atom_list).map_err(domain)?
            }
        };
        Ok(Economy {
            risk_tolerance: e.risk_tolerance.clone(),
            income_drift: e.income_drift.clone(),
            income_vol: e.income_vol.clone(),
            dividend_drift: e.dividend_drift,
            dividend_vol: e.dividend_vol,
            horizon: e.horizon,
            dividend_init: e.dividend_init,
            income_init: e.income_init.clone(),
            stock_endowment: e.stock_endowment.clone(),
            bond_endowment: e.bond_endowment.clone(),
            measure,
        })
    }
}

/// Validation command output: admissibility conditions plus structural
/// economy checks, with failures reported rather than thrown.
#[derive(Debug, Clone, Serialize)]
pub struct ValidateDocument {
    pub passed: bool,
    pub conditions: Vec<ValidateEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidateEntry {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

pub fn run_validate(cfg: &RunConfig, base_dir: &Path) -> ValidateDocument {
    let mut entries = Vec::new();
    match cfg.build_economy(base_dir) {
        Err(err) => entries.push(ValidateEntry {
            name: "structure".into(),
            passed: false,
            message: err.to_string(),
        }),
        Ok(economy) => {
            for c in economy.measure.validate().conditions {
                entries.push(ValidateEntry {
                    name: format!("measure/{}", c.name),
                    passed: c.passed,
                    message: c.message,
                });
            }
            match economy.validate() {
                Ok(()) => entries.push(ValidateEntry {
                    name: "economy".into(),
                    passed: true,
                    message: "lengths, signs, and endowment sums check out".into(),
                }),
                Err(err) => entries.push(ValidateEntry {
                    name: "economy".into(),
                    passed: false,
                    message: err.to_string(),
                }),
            }
        }
    }
    ValidateDocument {
        passed: entries.iter().all(|e| e.passed),
        conditions: entries,
    }
}

/// Scalar equilibrium output with the annuity and excess drift sampled
/// on a uniform time grid.
#[derive(Debug, Clone, Serialize)]
pub struct EquilibriumDoc {
    pub sharpe_ratio: f64,
    pub interest_rate: f64,
    pub stock_holdings: Vec<f64>,
    pub consumption_trend: Vec<f64>,
    pub sharpe_residual: f64,
    pub density_exponent: f64,
    /// Per investor: (dividend exponent, income exponent) of e^{b·z} − 1.
    pub investor_tilts: Vec<(f64, f64)>,
    pub time_grid: Vec<f64>,
    pub annuity: Vec<f64>,
    pub excess_drift: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchmarkDoc {
    pub interest_rate: f64,
    pub sharpe_ratio: f64,
    pub tolerance_sum: f64,
    pub density_tilt: Vec<f64>,
    pub annuity: Vec<f64>,
    pub excess_drift: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDocument {
    pub equilibrium: EquilibriumDoc,
    pub benchmark: BenchmarkDoc,
    pub impacts: ImpactReport,
}

fn time_grid(horizon: f64, samples: usize) -> Vec<f64> {
    let n = samples.max(2);
    (0..n)
        .map(|k| horizon * k as f64 / (n - 1) as f64)
        .collect()
}

fn equilibrium_doc(eq: &Equilibrium, grid: &[f64]) -> EquilibriumDoc {
    let annuity = eq.annuity();
    EquilibriumDoc {
        sharpe_ratio: eq.sharpe_ratio,
        interest_rate: eq.interest_rate,
        stock_holdings: eq.stock_holdings.clone(),
        consumption_trend: eq.consumption_trend.clone(),
        sharpe_residual: eq.sharpe_residual,
        density_exponent: eq.density_exponent,
        investor_tilts: eq
            .investor_tilts
            .iter()
            .map(|t| match t {
                Tilt::Sparse { u0, ui, .. } => (*u0, *ui),
                Tilt::Dense(_) => unreachable!("investor tilts are sparse"),
            })
            .collect(),
        time_grid: grid.to_vec(),
        annuity: grid.iter().map(|t| annuity.value(*t)).collect(),
        excess_drift: grid.iter().map(|t| eq.excess_drift(*t)).collect(),
    }
}

pub fn run_solve(cfg: &RunConfig, base_dir: &Path) -> Result<SolveDocument, ConfigError> {
    let economy = cfg.build_economy(base_dir)?;
    let eq = solve_equilibrium(&economy, &cfg.rootfind).map_err(domain)?;
    let bench = solve_benchmark(&economy).map_err(domain)?;
    let report = impacts(&economy, &eq, &bench).map_err(domain)?;
    let grid = time_grid(economy.horizon, cfg.output.time_samples);
    let bench_annuity = bench.annuity();
    Ok(SolveDocument {
        equilibrium: equilibrium_doc(&eq, &grid),
        benchmark: BenchmarkDoc {
            interest_rate: bench.interest_rate,
            sharpe_ratio: bench.sharpe_ratio,
            tolerance_sum: bench.tolerance_sum,
            density_tilt: match &bench.density_tilt {
                Tilt::Dense(v) => v.clone(),
                Tilt::Sparse { .. } => unreachable!("benchmark tilt is dense"),
            },
            annuity: grid.iter().map(|t| bench_annuity.value(*t)).collect(),
            excess_drift: grid.iter().map(|t| bench.excess_drift(*t)).collect(),
        },
        impacts: report,
    })
}

/// One sweep cell. Serialized CSV columns and their order are fixed:
/// rho,I,tau,r,r_rep,delta_r,lambda,lambda_rep,delta_lambda.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub rho: f64,
    #[serde(rename = "I")]
    pub investors: usize,
    pub tau: f64,
    pub r: f64,
    pub r_rep: f64,
    pub delta_r: f64,
    pub lambda: f64,
    pub lambda_rep: f64,
    pub delta_lambda: f64,
}

pub const SWEEP_CSV_HEADER: &str = "rho,I,tau,r,r_rep,delta_r,lambda,lambda_rep,delta_lambda";

/// The benchmark-family economy of one sweep cell.
pub fn sweep_cell_economy(sweep: &SweepConfig, investors: usize, tau: f64, rho: f64) -> Result<Economy, ConfigError> {
    let n = investors;
    let measure = LevyMeasure::gaussian(
        JumpCovariance::flat(n + 1, rho).map_err(domain)?,
        sweep.intensity,
    )
    .map_err(domain)?;
    Ok(Economy {
        risk_tolerance: vec![tau; n],
        income_drift: vec![sweep.income_drift; n],
        income_vol: vec![sweep.income_vol; n],
        dividend_drift: sweep.dividend_drift_per_investor * n as f64,
        dividend_vol: sweep.dividend_vol_per_investor * n as f64,
        horizon: 1.0,
        dividend_init: 1.0,
        income_init: vec![0.0; n],
        stock_endowment: vec![1.0 / n as f64; n],
        bond_endowment: vec![0.0; n],
        measure,
    })
}

fn rho_grid(sweep: &SweepConfig) -> Result<Vec<f64>, ConfigError> {
    if sweep.n_points == 0 {
        return Err(ConfigError::Usage("sweep: n_points must be >= 1".into()));
    }
    if sweep.i_values.is_empty() || sweep.tau_values.is_empty() {
        return Err(ConfigError::Usage(
            "sweep: i_values and tau_values must be non-empty".into(),
        ));
    }
    if !(sweep.rho_max >= sweep.rho_min) {
        return Err(ConfigError::Usage("sweep: rho_max < rho_min".into()));
    }
    let n = sweep.n_points;
    Ok((0..n)
        .map(|k| {
            if n == 1 {
                sweep.rho_min
            } else {
                sweep.rho_min + (sweep.rho_max - sweep.rho_min) * k as f64 / (n - 1) as f64
            }
        })
        .collect())
}

fn solve_cell(
    sweep: &SweepConfig,
    rootfind: &RootFindConfig,
    investors: usize,
    tau: f64,
    rho: f64,
) -> Result<SweepRow, ConfigError> {
    let economy = sweep_cell_economy(sweep, investors, tau, rho)?;
    let eq = solve_equilibrium(&economy, rootfind).map_err(domain)?;
    let bench = solve_benchmark(&economy).map_err(domain)?;
    let report = impacts(&economy, &eq, &bench).map_err(domain)?;
    Ok(SweepRow {
        rho,
        investors,
        tau,
        r: eq.interest_rate,
        r_rep: bench.interest_rate,
        delta_r: report.rate_impact,
        lambda: eq.sharpe_ratio,
        lambda_rep: bench.sharpe_ratio,
        delta_lambda: report.sharpe_impact,
    })
}

/// Runs the correlation sweep: one row per (tau, I, rho) in that order.
/// Cells are independent solves and run in parallel; rows are emitted in
/// deterministic order after all cells finish.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRow>, ConfigError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| ConfigError::Usage("config has no [sweep] section".into()))?;
    let rhos = rho_grid(sweep)?;
    for &i in &sweep.i_values {
        if i == 0 {
            return Err(ConfigError::Usage("sweep: i_values must be >= 1".into()));
        }
        let lower = -1.0 / i as f64;
        if rhos.iter().any(|r| *r <= lower || *r >= 1.0) {
            return Err(ConfigError::Domain(format!(
                "sweep: rho grid leaves the positive-definite range ({lower:.4}, 1) for I = {i}"
            )));
        }
    }

    let mut cells = Vec::new();
    for &tau in &sweep.tau_values {
        for &i in &sweep.i_values {
            for &rho in &rhos {
                cells.push((i, tau, rho));
            }
        }
    }
    cells
        .par_iter()
        .map(|&(i, tau, rho)| solve_cell(sweep, &cfg.rootfind, i, tau, rho))
        .collect()
}

fn format_float(x: f64) -> String {
    // Shortest round-trip representation; always a decimal point or
    // exponent, never locale-dependent.
    format!("{x}")
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            format_float(r.rho),
            r.investors,
            format_float(r.tau),
            format_float(r.r),
            format_float(r.r_rep),
            format_float(r.delta_r),
            format_float(r.lambda),
            format_float(r.lambda_rep),
            format_float(r.delta_lambda),
        ));
    }
    out
}

/// One convergence comparison: the same (tau, rho) cell solved at
/// consecutive investor counts, reported metric by metric.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub rho: f64,
    pub i_coarse: usize,
    pub i_fine: usize,
    pub metric: String,
    pub value_coarse: f64,
    pub value_fine: f64,
    pub abs_change: f64,
    /// |change| / max(|coarse|, tiny); NaN-free even for vanishing metrics.
    pub rel_change: f64,
}

pub const CONVERGENCE_CSV_HEADER: &str =
    "tau,rho,i_coarse,i_fine,metric,value_coarse,value_fine,abs_change,rel_change";

/// Reports |metric(2I) − metric(I)|-style changes between consecutive
/// entries of `i_values` so users can judge how large a finite economy
/// must be to stand in for the large-investor limit.
pub fn run_convergence(cfg: &RunConfig) -> Result<Vec<ConvergenceRow>, ConfigError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| ConfigError::Usage("config has no [sweep] section".into()))?;
    if sweep.i_values.len() < 2 {
        return Err(ConfigError::Usage(
            "convergence needs at least two entries in sweep.i_values".into(),
        ));
    }
    let rhos = rho_grid(sweep)?;
    let mut rows = Vec::new();
    for &tau in &sweep.tau_values {
        for pair in sweep.i_values.windows(2) {
            let (coarse, fine) = (pair[0], pair[1]);
            let cells: Vec<(SweepRow, SweepRow)> = rhos
                .par_iter()
                .map(|&rho| {
                    let a = solve_cell(sweep, &cfg.rootfind, coarse, tau, rho)?;
                    let b = solve_cell(sweep, &cfg.rootfind, fine, tau, rho)?;
                    Ok((a, b))
                })
                .collect::<Result<_, ConfigError>>()?;
            for (a, b) in cells {
                let metrics: [(&str, f64, f64); 6] = [
                    ("r", a.r, b.r),
                    ("r_rep", a.r_rep, b.r_rep),
                    ("delta_r", a.delta_r, b.delta_r),
                    ("lambda", a.lambda, b.lambda),
                    ("lambda_rep", a.lambda_rep, b.lambda_rep),
                    ("delta_lambda", a.delta_lambda, b.delta_lambda),
                ];
                for (name, coarse_v, fine_v) in metrics {
                    let abs_change = (fine_v - coarse_v).abs();
                    rows.push(ConvergenceRow {
                        tau,
                        rho: a.rho,
                        i_coarse: coarse,
                        i_fine: fine,
                        metric: name.to_string(),
                        value_coarse: coarse_v,
                        value_fine: fine_v,
                        abs_change,
                        rel_change: abs_change / coarse_v.abs().max(1e-300),
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn convergence_to_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from(CONVERGENCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            format_float(r.tau),
            format_float(r.rho),
            r.i_coarse,
            r.i_fine,
            r.metric,
            format_float(r.value_coarse),
            format_float(r.value_fine),
            format_float(r.abs_change),
            format_float(r.rel_change),
        ));
    }
    out
}

/// Solves the configured economy and runs the Monte Carlo verification.
pub fn run_simulate(
    cfg: &RunConfig,
    base_dir: &Path,
    perturb_psi: f64,
) -> Result<VerificationReport, ConfigError> {
    let sim = cfg
        .sim
        .clone()
        .ok_or_else(|| ConfigError::Usage("config has no [sim] section".into()))?;
    sim.validate()
        .map_err(|e| ConfigError::Usage(e.to_string()))?;
    let economy = cfg.build_economy(base_dir)?;
    let eq = solve_equilibrium(&economy, &cfg.rootfind).map_err(domain)?;
    verify_equilibrium(&economy, &eq, &sim, perturb_psi).map_err(domain)
}

/// Writes the per-path grid dump: one row per (path, grid time) with
/// every simulated quantity. The paths are exactly those the verifier
/// aggregated, re-derived from the per-path random streams.
pub fn dump_paths_csv<W: Write>(
    cfg: &RunConfig,
    base_dir: &Path,
    writer: &mut W,
) -> Result<(), ConfigError> {
    let sim = cfg
        .sim
        .clone()
        .ok_or_else(|| ConfigError::Usage("config has no [sim] section".into()))?;
    sim.validate()
        .map_err(|e| ConfigError::Usage(e.to_string()))?;
    let economy = cfg.build_economy(base_dir)?;
    let eq = solve_equilibrium(&economy, &cfg.rootfind).map_err(domain)?;
    let n_inv = economy.investors();

    let mut header = String::from("path,time,dividend,stock_price,money_account,density_star");
    for i in 1..=n_inv {
        header.push_str(&format!(
            ",income_{i},wealth_{i},consumption_{i},bond_units_{i},density_{i}"
        ));
    }
    writeln!(writer, "{header}").map_err(|e| ConfigError::Domain(e.to_string()))?;

    for p in 0..sim.n_paths as u64 {
        let bundle = simulate_path(&economy, &eq, &sim, p).map_err(domain)?;
        for (k, t) in bundle.times.iter().enumerate() {
            let mut line = format!(
                "{p},{},{},{},{},{}",
                format_float(*t),
                format_float(bundle.dividend[k]),
                format_float(bundle.stock_price[k]),
                format_float(bundle.money_account[k]),
                format_float(bundle.density_star[k]),
            );
            for i in 0..n_inv {
                line.push_str(&format!(
                    ",{},{},{},{},{}",
                    format_float(bundle.incomes[i][k]),
                    format_float(bundle.wealth[i][k]),
                    format_float(bundle.consumption[i][k]),
                    format_float(bundle.bond_units[i][k]),
                    format_float(bundle.density_investor[i][k]),
                ));
            }
            writeln!(writer, "{line}").map_err(|e| ConfigError::Domain(e.to_string()))?;
        }
    }
    Ok(())
}
