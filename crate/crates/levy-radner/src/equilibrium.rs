//! The incomplete-market equilibrium solver.
//!
//! Given an economy of exponential investors whose incomes and dividends
//! load on a common jump measure, the equilibrium is available in closed
//! form up to one scalar root-find: the market price of jump risk solves
//! a strictly monotone equation built from the inverse tilted-mean maps,
//! and every other quantity (stock holdings, interest rate, consumption
//! trends, pricing-measure integrands) follows by direct evaluation. The
//! dependency order is upper triangular — Sharpe ratio, then holdings,
//! then the rate — and is never circular.

use crate::annuity::Annuity;
use crate::error::{MeasureError, RootFindError, SolveError};
use crate::measure::{LevyMeasure, Tilt};
use crate::tilt::{MonotoneTiltMap, RootFindConfig};

/// Exogenous description of the economy.
///
/// Vectors are indexed by investor (0-based in code, coordinate i+1 of
/// the jump measure). Stock endowments must sum to one (unit net supply)
/// and bond endowments to zero (zero net supply).
#[derive(Debug, Clone)]
pub struct Economy {
    /// Risk tolerances τ_i > 0.
    pub risk_tolerance: Vec<f64>,
    /// Income drifts μ_i.
    pub income_drift: Vec<f64>,
    /// Income jump loadings σ_i > 0.
    pub income_vol: Vec<f64>,
    /// Dividend drift μ_D.
    pub dividend_drift: f64,
    /// Dividend jump loading σ_D > 0.
    pub dividend_vol: f64,
    /// Model horizon T > 0 in years.
    pub horizon: f64,
    /// Initial dividend rate level.
    pub dividend_init: f64,
    /// Initial income rate levels.
    pub income_init: Vec<f64>,
    /// Initial stock endowments, summing to 1.
    pub stock_endowment: Vec<f64>,
    /// Initial money-market endowments, summing to 0.
    pub bond_endowment: Vec<f64>,
    /// Jump measure on R^{I+1}.
    pub measure: LevyMeasure,
}

impl Economy {
    /// Number of investors I.
    pub fn investors(&self) -> usize {
        self.risk_tolerance.len()
    }

    /// Aggregate risk tolerance τ_Σ = Σ τ_i.
    pub fn tolerance_sum(&self) -> f64 {
        self.risk_tolerance.iter().sum()
    }

    /// Checks structural invariants and measure admissibility.
    pub fn validate(&self) -> Result<(), SolveError> {
        let n = self.investors();
        if n == 0 {
            return Err(SolveError::InvalidEconomy(
                "at least one investor required".into(),
            ));
        }
        for (name, len) in [
            ("income_drift", self.income_drift.len()),
            ("income_vol", self.income_vol.len()),
            ("income_init", self.income_init.len()),
            ("stock_endowment", self.stock_endowment.len()),
            ("bond_endowment", self.bond_endowment.len()),
        ] {
            if len != n {
                return Err(SolveError::InvalidEconomy(format!(
                    "{name} has length {len}, expected {n}"
                )));
            }
        }
        if self.risk_tolerance.iter().any(|t| !(*t > 0.0)) {
            return Err(SolveError::InvalidEconomy(
                "risk tolerances must be strictly positive".into(),
            ));
        }
        if self.income_vol.iter().any(|s| !(*s > 0.0)) || !(self.dividend_vol > 0.0) {
            return Err(SolveError::InvalidEconomy(
                "jump loadings must be strictly positive".into(),
            ));
        }
        if !(self.horizon > 0.0) {
            return Err(SolveError::InvalidEconomy(
                "horizon must be strictly positive".into(),
            ));
        }
        let stock_sum: f64 = self.stock_endowment.iter().sum();
        if (stock_sum - 1.0).abs() > 1e-10 {
            return Err(SolveError::InvalidEconomy(format!(
                "stock endowments sum to {stock_sum}, expected 1"
            )));
        }
        let bond_sum: f64 = self.bond_endowment.iter().sum();
        if bond_sum.abs() > 1e-10 {
            return Err(SolveError::InvalidEconomy(format!(
                "bond endowments sum to {bond_sum}, expected 0"
            )));
        }
        if self.measure.dim() != n + 1 {
            return Err(SolveError::InvalidEconomy(format!(
                "measure dimension {} does not match investor count {n} + 1",
                self.measure.dim()
            )));
        }
        let report = self.measure.validate();
        if !report.all_passed() {
            let failed: Vec<&str> = report
                .conditions
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            return Err(SolveError::InvalidEconomy(format!(
                "measure fails admissibility condition(s): {}",
                failed.join(", ")
            )));
        }
        Ok(())
    }

    /// The frozen income exponent -σ_i/τ_i of investor i's tilt map.
    fn income_exponent(&self, i: usize) -> f64 {
        -self.income_vol[i] / self.risk_tolerance[i]
    }

    /// Correlation between the dividend coordinate and investor i's
    /// income coordinate; the only way the measure distinguishes
    /// investors inside a tilt map.
    fn dividend_income_corr(&self, i: usize) -> f64 {
        match &self.measure {
            LevyMeasure::GaussianCompoundPoisson { cov, .. } => cov.entries()[(0, i + 1)],
            // Atomic measures have no shared structure to exploit;
            // using the coordinate index keeps every key distinct.
            LevyMeasure::Atomic { .. } => (i + 1) as f64,
        }
    }

    /// Inverse tilt map of investor i (0-based).
    fn inverse_map(&self, i: usize) -> MonotoneTiltMap<'_> {
        MonotoneTiltMap::new_unchecked(&self.measure, Some(i + 1), self.income_exponent(i))
    }
}

fn stage(stage: &'static str) -> impl Fn(RootFindError) -> SolveError {
    move |source| SolveError::Stage { stage, source }
}

/// Inverts the tilt map of every investor at the common target y.
///
/// Investor maps coincide whenever the frozen income exponent and the
/// dividend-income correlation entry agree (every investor of a
/// symmetric flat-correlation economy, in particular), so inversions are
/// deduplicated by that exact key. This is a pure speedup: the shared
/// map produces bit-identical results for every member of a group.
fn inverse_all(
    economy: &Economy,
    y: f64,
    cfg: &RootFindConfig,
) -> Result<Vec<f64>, RootFindError> {
    let n = economy.investors();
    let mut cache: Vec<((u64, u64), f64)> = Vec::new();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let key = (
            economy.income_exponent(i).to_bits(),
            economy.dividend_income_corr(i).to_bits(),
        );
        if let Some((_, u)) = cache.iter().find(|(k, _)| *k == key) {
            out.push(*u);
            continue;
        }
        let u = economy.inverse_map(i).invert(y, cfg)?;
        cache.push((key, u));
        out.push(u);
    }
    Ok(out)
}

/// Sum of τ_i · f^i(y) over investors, the building block of the market
/// price of risk equation.
fn weighted_inverse_sum(
    economy: &Economy,
    y: f64,
    cfg: &RootFindConfig,
) -> Result<f64, RootFindError> {
    let inverses = inverse_all(economy, y, cfg)?;
    Ok(economy
        .risk_tolerance
        .iter()
        .zip(&inverses)
        .map(|(tau, u)| tau * u)
        .sum())
}

/// Solves for the market price of jump risk λ: the unique root of
/// σ_D + Σ τ_i f^i(-λ·s + m₀) = 0 with s = (∫(z⁰)²ν)^{1/2}, m₀ = ∫z⁰ν.
/// The left side is strictly decreasing in λ, so a doubling bracket from
/// ±10 followed by bisection is guaranteed to converge.
pub fn solve_sharpe(economy: &Economy, cfg: &RootFindConfig) -> Result<f64, SolveError> {
    cfg.validate()?;
    let s = economy.measure.second_moment_z0()?.sqrt();
    let m0 = economy.measure.mean_z0();
    let err = stage("market price of risk");

    let eval = |lambda: f64| -> Result<f64, RootFindError> {
        let y = -lambda * s + m0;
        Ok(economy.dividend_vol + weighted_inverse_sum(economy, y, cfg)?)
    };

    let mut lo = -10.0;
    let mut hi = 10.0;
    let mut f_lo = eval(lo).map_err(&err)?;
    let mut f_hi = eval(hi).map_err(&err)?;
    let mut doublings = 0u32;
    // Decreasing function: need f(lo) >= 0 >= f(hi).
    while !(f_lo >= 0.0 && f_hi <= 0.0) {
        if doublings >= 40 {
            return Err(err(RootFindError::BracketFailure {
                doublings,
                reached: hi,
                hint: "market price of risk not bracketed; economy is badly scaled",
            }));
        }
        if f_lo < 0.0 {
            lo *= 2.0;
            f_lo = eval(lo).map_err(&err)?;
        }
        if f_hi > 0.0 {
            hi *= 2.0;
            f_hi = eval(hi).map_err(&err)?;
        }
        doublings += 1;
    }

    let mut width = hi - lo;
    for _ in 0..cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval(mid).map_err(&err)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid > 0.0 {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
        width = hi - lo;
        if width <= cfg.abs_tol {
            let denom = f_hi - f_lo;
            if denom < 0.0 {
                let sec = lo - f_lo * (hi - lo) / denom;
                if sec > lo && sec < hi {
                    return Ok(sec);
                }
            }
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(err(RootFindError::MaxIterExceeded {
        max_iter: cfg.max_iter,
        width,
    }))
}

/// Optimal stock holdings θ*_i = -(τ_i/σ_D) f^i(-λ·s + m₀). Their sum is
/// one by the defining equation of λ.
pub fn solve_stock_holdings(
    economy: &Economy,
    lambda: f64,
    cfg: &RootFindConfig,
) -> Result<Vec<f64>, SolveError> {
    let s = economy.measure.second_moment_z0()?.sqrt();
    let m0 = economy.measure.mean_z0();
    let y = -lambda * s + m0;
    let inverses = inverse_all(economy, y, cfg).map_err(stage("stock holdings"))?;
    Ok(inverses
        .iter()
        .zip(&economy.risk_tolerance)
        .map(|(u, tau)| -tau / economy.dividend_vol * u)
        .collect())
}

/// The sparse exponent vector b_i = -(θ*_i σ_D e₀ + σ_i e_i)/τ_i that
/// appears in investor i's pricing integrand e^{b_i·z} - 1.
pub fn investor_tilt(economy: &Economy, holdings: &[f64], i: usize) -> Tilt {
    Tilt::Sparse {
        u0: -holdings[i] * economy.dividend_vol / economy.risk_tolerance[i],
        ui: economy.income_exponent(i),
        investor: Some(i + 1),
    }
}

/// Equilibrium interest rate
/// r = (μ_D + Σ μ_i - Σ τ_i K(b_i)) / τ_Σ
/// where K is the convexity integral. This equals the direct aggregate
/// marginal-utility expression because Σ τ_i b_i·z = -(σ_D z⁰ + Σ σ_i zⁱ)
/// once the holdings sum to one.
pub fn solve_rate(economy: &Economy, holdings: &[f64]) -> Result<f64, SolveError> {
    let mut penalty = 0.0;
    for i in 0..economy.investors() {
        let k = economy
            .measure
            .convexity_integral(&investor_tilt(economy, holdings, i))?;
        penalty += economy.risk_tolerance[i] * k;
    }
    let drift_sum = economy.dividend_drift + economy.income_drift.iter().sum::<f64>();
    Ok((drift_sum - penalty) / economy.tolerance_sum())
}

/// Per-investor consumption trend constants
/// g_i = -r + θ*_i χ / τ_i + μ_i / τ_i - K(b_i)
/// with χ = μ(t)/A(t), the (constant) ratio of excess drift to annuity.
pub fn solve_consumption_trend(
    economy: &Economy,
    rate: f64,
    drift_over_annuity: f64,
    holdings: &[f64],
) -> Result<Vec<f64>, SolveError> {
    let mut trend = Vec::with_capacity(economy.investors());
    for i in 0..economy.investors() {
        let k = economy
            .measure
            .convexity_integral(&investor_tilt(economy, holdings, i))?;
        let tau = economy.risk_tolerance[i];
        trend.push(-rate + holdings[i] * drift_over_annuity / tau + economy.income_drift[i] / tau - k);
    }
    Ok(trend)
}

/// The solved equilibrium. All fields are plain data; price and policy
/// functions are exposed as methods.
#[derive(Debug, Clone)]
pub struct Equilibrium {
    /// Market price of jump risk λ (instantaneous Sharpe ratio).
    pub sharpe_ratio: f64,
    /// Constant interest rate r.
    pub interest_rate: f64,
    /// Optimal stock holdings θ*_i, summing to one.
    pub stock_holdings: Vec<f64>,
    /// Consumption trend constants g_i.
    pub consumption_trend: Vec<f64>,
    /// Residual of the market-price-of-risk equation at the solution.
    pub sharpe_residual: f64,
    /// Horizon T.
    pub horizon: f64,
    /// Dividend jump loading σ_D.
    pub dividend_vol: f64,
    /// (∫ (z⁰)² ν)^{1/2}.
    pub jump_sd: f64,
    /// ∫ z⁰ ν.
    pub jump_mean: f64,
    /// Exponent u* of the market pricing integrand ψ*(z) = e^{u* z⁰} - 1.
    pub density_exponent: f64,
    /// Per-investor pricing tilts b_i with ψ_i(z) = e^{b_i·z} - 1.
    pub investor_tilts: Vec<Tilt>,
    /// Snapshot of the investors' risk tolerances.
    pub risk_tolerance: Vec<f64>,
}

impl Equilibrium {
    /// The annuity built from the equilibrium rate.
    pub fn annuity(&self) -> Annuity {
        Annuity::new(self.interest_rate, self.horizon)
    }

    /// Excess drift μ(t) = λ · s · σ_D · A(t); zero at the horizon.
    pub fn excess_drift(&self, t: f64) -> f64 {
        self.drift_over_annuity() * self.annuity().value(t)
    }

    /// The constant χ = μ(t)/A(t) = λ · s · σ_D.
    pub fn drift_over_annuity(&self) -> f64 {
        self.sharpe_ratio * self.jump_sd * self.dividend_vol
    }

    /// Market pricing integrand ψ*(z) = e^{u* z⁰} - 1; time-independent
    /// because μ/A is constant.
    pub fn psi_star(&self, mark: &[f64]) -> f64 {
        (self.density_exponent * mark[0]).exp() - 1.0
    }

    /// Investor i's pricing integrand ψ_i(z) = e^{b_i·z} - 1 (0-based i).
    pub fn psi_investor(&self, i: usize, mark: &[f64]) -> f64 {
        self.investor_tilts[i].dot(mark).exp() - 1.0
    }

    /// The tilt of the market pricing integrand, for measure integrals.
    pub fn density_tilt_star(&self) -> Tilt {
        Tilt::coord0(self.density_exponent)
    }

    /// Residual of the martingale drift condition
    /// μ(t)/(σ_D A(t)) + ∫ ψ(z) z⁰ ν(dz) = 0
    /// for the integrand ψ(z) = e^{tilt·z} - 1. Zero (up to solver
    /// tolerance) for ψ* and every ψ_i.
    pub fn emm_drift_residual(
        &self,
        measure: &LevyMeasure,
        tilt: &Tilt,
    ) -> Result<f64, MeasureError> {
        let psi_mean = measure.tilted_mean_z0(tilt)? - self.jump_mean;
        Ok(self.sharpe_ratio * self.jump_sd + psi_mean)
    }

    /// Optimal consumption policy of investor i (0-based).
    pub fn consumption_policy(&self, i: usize) -> ConsumptionPolicy {
        ConsumptionPolicy {
            investor: i,
            rate: self.interest_rate,
            horizon: self.horizon,
            risk_tolerance: self.risk_tolerance[i],
            trend: self.consumption_trend[i],
        }
    }
}

/// Optimal consumption as a function of time and financial wealth:
/// c = X/A(t) + τ_i g_i P(t)/A(t).
#[derive(Debug, Clone, Copy)]
pub struct ConsumptionPolicy {
    pub investor: usize,
    pub rate: f64,
    pub horizon: f64,
    pub risk_tolerance: f64,
    pub trend: f64,
}

impl ConsumptionPolicy {
    /// Evaluates the policy at time t < T for wealth X. The t ↑ T limit
    /// exists pathwise (wealth vanishes at the horizon) but requires the
    /// annuitized form below.
    pub fn eval(&self, t: f64, wealth: f64) -> Result<f64, SolveError> {
        if !(t >= 0.0 && t < self.horizon) {
            return Err(SolveError::Domain {
                t,
                horizon: self.horizon,
            });
        }
        let annuity = Annuity::new(self.rate, self.horizon);
        Ok(wealth / annuity.value(t) + self.trend_term(t))
    }

    /// Same policy expressed through annuitized wealth V = X/A(t), which
    /// extends continuously to t = T.
    pub fn eval_annuitized(&self, t: f64, annuitized_wealth: f64) -> f64 {
        annuitized_wealth + self.trend_term(t)
    }

    fn trend_term(&self, t: f64) -> f64 {
        let annuity = Annuity::new(self.rate, self.horizon);
        self.risk_tolerance * self.trend * annuity.consumption_weight(t)
    }
}

/// Solves the full equilibrium: market price of risk, then holdings, then
/// the interest rate, then the annuity-linked quantities and the pricing
/// integrands.
pub fn solve_equilibrium(economy: &Economy, cfg: &RootFindConfig) -> Result<Equilibrium, SolveError> {
    economy.validate()?;
    let jump_sd = economy.measure.second_moment_z0()?.sqrt();
    let jump_mean = economy.measure.mean_z0();

    let lambda = solve_sharpe(economy, cfg)?;
    let holdings = solve_stock_holdings(economy, lambda, cfg)?;
    let rate = solve_rate(economy, &holdings)?;
    let drift_over_annuity = lambda * jump_sd * economy.dividend_vol;
    let trend = solve_consumption_trend(economy, rate, drift_over_annuity, &holdings)?;

    let y = -lambda * jump_sd + jump_mean;
    let star_map = MonotoneTiltMap::new_unchecked(&economy.measure, None, 0.0);
    let density_exponent = star_map
        .invert(y, cfg)
        .map_err(stage("market pricing integrand"))?;

    let residual = economy.dividend_vol + weighted_inverse_sum(economy, y, cfg)
        .map_err(stage("residual evaluation"))?;

    let tilts: Vec<Tilt> = (0..economy.investors())
        .map(|i| investor_tilt(economy, &holdings, i))
        .collect();

    Ok(Equilibrium {
        sharpe_ratio: lambda,
        interest_rate: rate,
        stock_holdings: holdings,
        consumption_trend: trend,
        sharpe_residual: residual,
        horizon: economy.horizon,
        dividend_vol: economy.dividend_vol,
        jump_sd,
        jump_mean,
        density_exponent,
        investor_tilts: tilts,
        risk_tolerance: economy.risk_tolerance.clone(),
    })
}
