//! Comparing the incomplete-market equilibrium with the complete-market
//! representative-agent benchmark: the rate impact is nonnegative by
//! convexity, while the Sharpe impact can take either sign.
//!
//! Run with: cargo run --example benchmark_impacts

use levy_radner::{
    impacts, solve_benchmark, solve_equilibrium, Economy, JumpCovariance, LevyMeasure,
    RootFindConfig,
};

fn economy(
    tolerances: Vec<f64>,
    income_vols: Vec<f64>,
    dividend_vol: f64,
    rho: f64,
    intensity: f64,
) -> Result<Economy, Box<dyn std::error::Error>> {
    let n = tolerances.len();
    Ok(Economy {
        risk_tolerance: tolerances,
        income_drift: vec![0.03; n],
        income_vol: income_vols,
        dividend_drift: 0.05,
        dividend_vol,
        horizon: 5.0,
        dividend_init: 1.0,
        income_init: vec![0.0; n],
        stock_endowment: vec![1.0 / n as f64; n],
        bond_endowment: vec![0.0; n],
        measure: LevyMeasure::gaussian(JumpCovariance::flat(n + 1, rho)?, intensity)?,
    })
}

fn show(label: &str, e: &Economy) -> Result<(), Box<dyn std::error::Error>> {
    let eq = solve_equilibrium(e, &RootFindConfig::default())?;
    let bench = solve_benchmark(e)?;
    let report = impacts(e, &eq, &bench)?;
    println!("{label}");
    println!(
        "  incomplete:  r = {:+.6}, lambda = {:+.6}",
        eq.interest_rate, eq.sharpe_ratio
    );
    println!(
        "  benchmark:   r = {:+.6}, lambda = {:+.6}",
        bench.interest_rate, bench.sharpe_ratio
    );
    println!(
        "  impacts:     rate {:+.6} (nonnegative), sharpe {:+.6} (either sign)\n",
        report.rate_impact, report.sharpe_impact
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show(
        "Moderately heterogeneous economy (positive Sharpe impact):",
        &economy(vec![0.5, 0.8, 1.2], vec![0.1, 0.15, 0.08], 0.25, 0.3, 1.0)?,
    )?;

    // Risk-averse investors with large income loadings negatively
    // correlated with dividends push the Sharpe impact below zero.
    show(
        "Negatively correlated incomes (negative Sharpe impact):",
        &economy(
            vec![0.35, 0.15, 0.4],
            vec![0.32, 0.4, 0.22],
            0.09,
            -0.25,
            1.25,
        )?,
    )?;

    // Near-perfect correlation spans income risk by the stock: both
    // impacts collapse toward zero.
    show(
        "Nearly spanned economy (rho = 0.995):",
        &economy(vec![0.5, 0.5], vec![0.1, 0.1], 0.2, 0.995, 1.0)?,
    )?;
    Ok(())
}
