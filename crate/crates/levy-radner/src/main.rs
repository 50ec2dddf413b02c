//! Thin command-line front end. All logic lives in the library; this
//! binary parses flags, loads the config, dispatches, and maps errors to
//! exit codes: 0 success, 1 domain/validation failure, 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use levy_radner::config::{
    convergence_to_csv, dump_paths_csv, run_convergence, run_simulate, run_solve, run_sweep,
    run_validate, sweep_to_csv, ConfigError, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "levy-radner",
    version,
    about = "Incomplete-market equilibrium under jump risk: closed-form solver, representative-agent benchmark, correlation sweeps, and exact Monte Carlo verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check measure admissibility and economy structure; exit 0 iff all pass.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve the equilibrium, the benchmark, and the incompleteness impacts.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Correlation sweep over the benchmark family (CSV by default).
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Solve, then verify by Monte Carlo simulation.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Path-count override.
        #[arg(long)]
        paths: Option<usize>,
        /// Reporting-grid override (number of intervals).
        #[arg(long)]
        grid: Option<usize>,
        /// Negative control: adds EPS to the market-density jump factors
        /// without adjusting the compensator, which must trip the
        /// martingale or price checks.
        #[arg(long, default_value_t = 0.0)]
        perturb_psi: f64,
        /// Write every simulated path to this CSV (one row per path and
        /// grid time). Large: n_paths x (n_grid + 1) rows.
        #[arg(long)]
        dump_paths: Option<PathBuf>,
    },
    /// Investor-count convergence table for the sweep metrics.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), ConfigError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| ConfigError::Domain(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        stdout.write_all(b"\n")
                    }
                })
                .map_err(|e| ConfigError::Domain(format!("cannot write to stdout: {e}")))
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serialization cannot fail")
}

fn base_dir(config: &Path) -> PathBuf {
    config
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn run(cli: Cli) -> Result<(), ConfigError> {
    match cli.command {
        Command::Validate { config } => {
            let cfg = RunConfig::load(&config)?;
            let doc = run_validate(&cfg, &base_dir(&config));
            for entry in &doc.conditions {
                let status = if entry.passed { "ok  " } else { "FAIL" };
                println!("[{status}] {}: {}", entry.name, entry.message);
            }
            if doc.passed {
                Ok(())
            } else {
                Err(ConfigError::Domain("validation failed".into()))
            }
        }
        Command::Solve {
            config,
            out,
            format,
        } => {
            if format == Some(Format::Csv) {
                return Err(ConfigError::Usage(
                    "solve emits a JSON document; CSV is available for sweep and convergence"
                        .into(),
                ));
            }
            let cfg = RunConfig::load(&config)?;
            let doc = run_solve(&cfg, &base_dir(&config))?;
            emit(&out, &to_json(&doc))
        }
        Command::Sweep {
            config,
            out,
            format,
        } => {
            let cfg = RunConfig::load(&config)?;
            let rows = run_sweep(&cfg)?;
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => sweep_to_csv(&rows),
                Format::Json => to_json(&rows),
            };
            emit(&out, &text)
        }
        Command::Simulate {
            config,
            out,
            format,
            seed,
            paths,
            grid,
            perturb_psi,
            dump_paths,
        } => {
            if format == Some(Format::Csv) {
                return Err(ConfigError::Usage(
                    "simulate emits a JSON report; use --dump-paths for per-path CSV".into(),
                ));
            }
            let mut cfg = RunConfig::load(&config)?;
            let mut sim = cfg.sim.clone().unwrap_or_default();
            if let Some(s) = seed {
                sim.seed = s;
            }
            if let Some(p) = paths {
                sim.n_paths = p;
            }
            if let Some(g) = grid {
                sim.n_grid = g;
            }
            cfg.sim = Some(sim);
            let dir = base_dir(&config);
            let report = run_simulate(&cfg, &dir, perturb_psi)?;
            if let Some(dump) = dump_paths {
                let file = fs::File::create(&dump).map_err(|e| {
                    ConfigError::Domain(format!("cannot create {}: {e}", dump.display()))
                })?;
                let mut writer = std::io::BufWriter::new(file);
                dump_paths_csv(&cfg, &dir, &mut writer)?;
            }
            emit(&out, &to_json(&report))?;
            if report.all_passed {
                Ok(())
            } else {
                Err(ConfigError::Domain(
                    "one or more verification checks failed (see report)".into(),
                ))
            }
        }
        Command::Convergence {
            config,
            out,
            format,
        } => {
            let cfg = RunConfig::load(&config)?;
            let rows = run_convergence(&cfg)?;
            let text = match format.unwrap_or(Format::Csv) {
                Format::Csv => convergence_to_csv(&rows),
                Format::Json => to_json(&rows),
            };
            emit(&out, &text)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("LEVY_RADNER_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // Ignore the error if a pool already exists (e.g. tests).
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: LEVY_RADNER_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
