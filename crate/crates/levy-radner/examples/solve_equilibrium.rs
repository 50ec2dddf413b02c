//! Solving the incomplete-market equilibrium: market price of jump risk,
//! stock holdings, interest rate, consumption policies, and the pricing
//! integrands that make every investor's deflated wealth a martingale.
//!
//! Run with: cargo run --example solve_equilibrium

use levy_radner::{
    solve_equilibrium, Economy, JumpCovariance, LevyMeasure, RootFindConfig,
};

fn show(label: &str, economy: &Economy) -> Result<(), Box<dyn std::error::Error>> {
    let eq = solve_equilibrium(economy, &RootFindConfig::default())?;
    println!("{label}");
    println!("  market price of risk  lambda = {:.9}", eq.sharpe_ratio);
    println!("  interest rate         r      = {:.9}", eq.interest_rate);
    println!("  stock holdings        theta* = {:?}", eq.stock_holdings);
    println!("  consumption trends    g      = {:?}", eq.consumption_trend);
    println!("  equation residual            = {:.3e}", eq.sharpe_residual);
    println!(
        "  holdings sum to {:.12} (stock market clearing)",
        eq.stock_holdings.iter().sum::<f64>()
    );
    let annuity = eq.annuity();
    println!(
        "  annuity A(0) = {:.6}, excess drift mu(0) = {:.6}, mu/A = {:.6} (constant)",
        annuity.value(0.0),
        eq.excess_drift(0.0),
        eq.drift_over_annuity()
    );
    // A consumption policy maps (time, wealth) to a consumption rate.
    let policy = eq.consumption_policy(0);
    println!(
        "  investor 1 consumes {:.6} at t = 0 from wealth 1.0\n",
        policy.eval(0.0, 1.0)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Single investor: lambda = 0.4 e^{0.1} and r = 0.2 - (e^{0.1} - 1)
    // in closed form, a quick correctness anchor.
    let single = Economy {
        risk_tolerance: vec![0.5],
        income_drift: vec![0.05],
        income_vol: vec![0.1],
        dividend_drift: 0.05,
        dividend_vol: 0.2,
        horizon: 10.0,
        dividend_init: 1.0,
        income_init: vec![0.1],
        stock_endowment: vec![1.0],
        bond_endowment: vec![0.0],
        measure: LevyMeasure::gaussian(JumpCovariance::identity(2)?, 1.0)?,
    };
    show("Single investor (closed-form benchmark):", &single)?;
    println!(
        "  closed forms: lambda = {:.9}, r = {:.9}\n",
        0.4 * 0.1f64.exp(),
        0.2 - 0.1f64.exp_m1()
    );

    // Three heterogeneous investors under flat correlation 0.3.
    let three = Economy {
        risk_tolerance: vec![0.5, 0.8, 1.2],
        income_drift: vec![0.04, 0.02, 0.05],
        income_vol: vec![0.1, 0.15, 0.08],
        dividend_drift: 0.06,
        dividend_vol: 0.25,
        horizon: 5.0,
        dividend_init: 1.0,
        income_init: vec![0.2, 0.1, 0.3],
        stock_endowment: vec![0.5, 0.3, 0.2],
        bond_endowment: vec![0.2, -0.1, -0.1],
        measure: LevyMeasure::gaussian(JumpCovariance::flat(4, 0.3)?, 1.0)?,
    };
    show("Three heterogeneous investors (rho = 0.3):", &three)?;
    Ok(())
}
