//! Shared oracles and generators for the integration and acceptance
//! suites. Everything here is computed independently of the library's
//! closed forms: quadrature goes through Gauss-Hermite nodes, and the
//! symmetric-economy equilibrium values come from the moment generating
//! function of a bivariate normal, derived by hand before the solver was
//! built.

#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use levy_radner::{Atom, Economy, JumpCovariance, LevyMeasure};

/// Gauss-Hermite rule: nodes and weights for ∫ e^{-x²} f(x) dx, computed
/// by the Golub-Welsch eigenvalue method on the Jacobi matrix with
/// Newton-polished nodes and Christoffel-sum weights.
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal Hermite polynomials for weight e^{-x²}:
/// p_{k+1} = x sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1},
/// p_0 = π^{-1/4}. Returns (p_n(x), p_n'(x), Σ_{k<n} p_k(x)²).
fn hermite_recurrence(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0f64;
    let mut curr = std::f64::consts::PI.powf(-0.25);
    let mut christoffel = 0.0f64;
    for k in 0..n {
        christoffel += curr * curr;
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * curr - (kf / (kf + 1.0)).sqrt() * prev;
        prev = curr;
        curr = next;
    }
    let derivative = (2.0 * n as f64).sqrt() * prev;
    (curr, derivative, christoffel)
}

impl GaussHermite {
    pub fn new(degree: usize) -> Self {
        assert!(degree >= 1);
        // Eigenvalues of the Jacobi matrix locate the nodes; the
        // eigenvector-based weight formula is relatively inaccurate in
        // the far tails (weights near 1e-120 computed from components
        // near 1e-60 with absolute rounding error), which matters for
        // exponentially growing integrands. Nodes are therefore polished
        // by Newton steps on the orthonormal Hermite recurrence and the
        // weights recovered through the Christoffel sum 1/Σ p_k(x)²,
        // which is accurate to machine precision node by node.
        let mut jacobi = DMatrix::zeros(degree, degree);
        for k in 0..degree - 1 {
            let off = ((k + 1) as f64 * 0.5).sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
        let mut nodes: Vec<f64> = jacobi.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut weights = Vec::with_capacity(degree);
        for x in &mut nodes {
            for _ in 0..3 {
                let (pn, dpn, _) = hermite_recurrence(degree, *x);
                if dpn != 0.0 {
                    *x -= pn / dpn;
                }
            }
            let (_, _, christoffel) = hermite_recurrence(degree, *x);
            weights.push(1.0 / christoffel);
        }
        Self { nodes, weights }
    }

    /// E[f(X)] for X ~ N(0, 1).
    pub fn expect_1d(&self, f: impl Fn(f64) -> f64) -> f64 {
        let norm = std::f64::consts::PI.sqrt();
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(std::f64::consts::SQRT_2 * x))
            .sum::<f64>()
            / norm
    }

    /// E[f(Z0, Zi)] for a centered bivariate normal with unit variances
    /// and correlation rho.
    pub fn expect_2d(&self, rho: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let norm = std::f64::consts::PI;
        let l21 = rho;
        let l22 = (1.0 - rho * rho).sqrt();
        let mut total = 0.0;
        for (x1, w1) in self.nodes.iter().zip(&self.weights) {
            let g1 = std::f64::consts::SQRT_2 * x1;
            for (x2, w2) in self.nodes.iter().zip(&self.weights) {
                let g2 = std::f64::consts::SQRT_2 * x2;
                total += w1 * w2 * f(g1, l21 * g1 + l22 * g2);
            }
        }
        total / norm
    }
}

/// Quadrature oracle for ∫ z0 e^{u0 z0 + ui zi} ν(dz) over a Gaussian
/// compound-Poisson measure whose (0, i) marginal has correlation rho.
pub fn quad_tilted_mean_z0(rule: &GaussHermite, intensity: f64, rho: f64, u0: f64, ui: f64) -> f64 {
    intensity * rule.expect_2d(rho, |z0, zi| z0 * (u0 * z0 + ui * zi).exp())
}

/// Quadrature oracle for the convexity integral with a tilt supported on
/// coordinates (0, i).
pub fn quad_convexity(rule: &GaussHermite, intensity: f64, rho: f64, b0: f64, bi: f64) -> f64 {
    intensity
        * rule.expect_2d(rho, |z0, zi| {
            let x = b0 * z0 + bi * zi;
            x.exp() - 1.0 - x
        })
}

/// Quadrature oracle for the convexity integral of an arbitrary dense
/// tilt via its scalar projection b·Z ~ N(0, v). The variance v is
/// supplied by the caller; the exponential moment itself is integrated
/// numerically rather than via the moment generating function.
pub fn quad_convexity_projected(rule: &GaussHermite, intensity: f64, variance: f64) -> f64 {
    let sd = variance.sqrt();
    intensity
        * rule.expect_1d(|y| {
            let x = sd * y;
            x.exp() - 1.0 - x
        })
}

/// Hand-derived symmetric-economy equilibrium (flat correlation, common
/// tau and income loading, Gaussian marks with intensity kappa).
///
/// Derivation: exchangeability forces equal stock holdings 1/I, so each
/// inverse-map value is u0 = -sigma_d/(I tau) with frozen income
/// exponent ui = -sigma_i/tau. The bivariate normal MGF gives the map
/// value y = kappa (u0 + rho ui) e^{q/2} with
/// q = u0^2 + 2 rho u0 ui + ui^2, hence
///   lambda = -y / sqrt(kappa) = sqrt(kappa) (sigma_d/(I tau) + rho sigma_i/tau) e^{q/2},
///   r = (mu_d + I mu_i)/(I tau) - kappa (e^{q/2} - 1),
/// the last step because every investor tilt has the same quadratic form q.
pub struct SymmetricOracle {
    pub lambda: f64,
    pub rate: f64,
}

pub fn symmetric_oracle(
    investors: usize,
    tau: f64,
    sigma_income: f64,
    sigma_dividend: f64,
    rho: f64,
    kappa: f64,
    mu_dividend: f64,
    mu_income: f64,
) -> SymmetricOracle {
    let n = investors as f64;
    let u0 = -sigma_dividend / (n * tau);
    let ui = -sigma_income / tau;
    let q = u0 * u0 + 2.0 * rho * u0 * ui + ui * ui;
    let lambda = kappa.sqrt() * (sigma_dividend / (n * tau) + rho * sigma_income / tau)
        * (0.5 * q).exp();
    let rate = (mu_dividend + n * mu_income) / (n * tau) - kappa * (0.5 * q).exp_m1();
    SymmetricOracle { lambda, rate }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// Random heterogeneous economy with a flat-correlation Gaussian measure:
/// tau in [0.1, 2], income loadings in [0.01, 0.5], correlation in
/// (-1/I, 0.95), jump intensity in [0.5, 2].
pub fn random_economy(rng: &mut ChaCha8Rng, investors: usize) -> Economy {
    let n = investors;
    let rho_lo = -1.0 / n as f64 + 0.02;
    let rho = uniform(rng, rho_lo, 0.95);
    let kappa = uniform(rng, 0.5, 2.0);

    let mut stock: Vec<f64> = (0..n).map(|_| uniform(rng, 0.1, 1.0)).collect();
    let total: f64 = stock.iter().sum();
    for s in &mut stock {
        *s /= total;
    }
    let mut bond: Vec<f64> = (0..n).map(|_| uniform(rng, -0.5, 0.5)).collect();
    let shift: f64 = bond.iter().sum::<f64>() / n as f64;
    for b in &mut bond {
        *b -= shift;
    }

    Economy {
        risk_tolerance: (0..n).map(|_| uniform(rng, 0.1, 2.0)).collect(),
        income_drift: (0..n).map(|_| uniform(rng, -0.05, 0.1)).collect(),
        income_vol: (0..n).map(|_| uniform(rng, 0.01, 0.5)).collect(),
        dividend_drift: uniform(rng, -0.05, 0.15),
        dividend_vol: uniform(rng, 0.05, 0.5),
        horizon: uniform(rng, 1.0, 10.0),
        dividend_init: uniform(rng, 0.5, 2.0),
        income_init: (0..n).map(|_| uniform(rng, 0.0, 0.5)).collect(),
        stock_endowment: stock,
        bond_endowment: bond,
        measure: LevyMeasure::gaussian(JumpCovariance::flat(n + 1, rho).unwrap(), kappa).unwrap(),
    }
}

/// Random symmetric economy paired with its closed-form oracle values.
pub fn random_symmetric_economy(rng: &mut ChaCha8Rng) -> (Economy, SymmetricOracle) {
    let n = 1 + (rng.random::<u64>() % 6) as usize;
    let tau = uniform(rng, 0.2, 1.5);
    let sigma_income = uniform(rng, 0.02, 0.4);
    let sigma_dividend = uniform(rng, 0.05, 0.5);
    let rho_lo = -1.0 / n as f64 + 0.05;
    let rho = uniform(rng, rho_lo, 0.9);
    let kappa = uniform(rng, 0.5, 2.0);
    let mu_dividend = uniform(rng, -0.05, 0.1);
    let mu_income = uniform(rng, -0.05, 0.1);

    let economy = Economy {
        risk_tolerance: vec![tau; n],
        income_drift: vec![mu_income; n],
        income_vol: vec![sigma_income; n],
        dividend_drift: mu_dividend,
        dividend_vol: sigma_dividend,
        horizon: 5.0,
        dividend_init: 1.0,
        income_init: vec![0.0; n],
        stock_endowment: vec![1.0 / n as f64; n],
        bond_endowment: vec![0.0; n],
        measure: LevyMeasure::gaussian(JumpCovariance::flat(n + 1, rho).unwrap(), kappa).unwrap(),
    };
    let oracle = symmetric_oracle(
        n,
        tau,
        sigma_income,
        sigma_dividend,
        rho,
        kappa,
        mu_dividend,
        mu_income,
    );
    (economy, oracle)
}

/// Random atomic measure on R^{dim} guaranteed to charge both signs of
/// the dividend coordinate.
pub fn random_atomic_measure(rng: &mut ChaCha8Rng, dim: usize) -> LevyMeasure {
    let extra = (rng.random::<u64>() % 6) as usize;
    let mut atoms = vec![
        Atom::new(
            uniform(rng, 0.2, 2.0),
            std::iter::once(uniform(rng, 0.1, 1.5))
                .chain((1..dim).map(|_| uniform(rng, -1.0, 1.0)))
                .collect(),
        ),
        Atom::new(
            uniform(rng, 0.2, 2.0),
            std::iter::once(uniform(rng, -1.5, -0.1))
                .chain((1..dim).map(|_| uniform(rng, -1.0, 1.0)))
                .collect(),
        ),
    ];
    for _ in 0..extra {
        atoms.push(Atom::new(
            uniform(rng, 0.1, 1.0),
            (0..dim).map(|_| uniform(rng, -1.2, 1.2)).collect(),
        ));
    }
    LevyMeasure::atomic(atoms).unwrap()
}

/// The flat-correlation benchmark family used for the correlation sweep:
/// dividend loading grows with the number of investors (0.2 per
/// investor), income loading 0.1, common tolerance tau.
pub fn sweep_family_economy(investors: usize, tau: f64, rho: f64) -> Economy {
    let n = investors;
    Economy {
        risk_tolerance: vec![tau; n],
        income_drift: vec![0.05; n],
        income_vol: vec![0.1; n],
        dividend_drift: 0.05 * n as f64,
        dividend_vol: 0.2 * n as f64,
        horizon: 1.0,
        dividend_init: 1.0,
        income_init: vec![0.0; n],
        stock_endowment: vec![1.0 / n as f64; n],
        bond_endowment: vec![0.0; n],
        measure: LevyMeasure::gaussian(JumpCovariance::flat(n + 1, rho).unwrap(), 1.0).unwrap(),
    }
}
