//! Jump-measure descriptions and the integral functionals built on them.
//!
//! Everything downstream (tilt inversion, the equilibrium solver, the
//! benchmark, the simulator) consumes a measure only through a handful of
//! integrals against it:
//!
//! * `mean_z0`            — ∫ z⁽⁰⁾ ν(dz)
//! * `second_moment_z0`   — ∫ (z⁽⁰⁾)² ν(dz)
//! * `tilted_mass`        — ∫ e^{u·z} ν(dz)
//! * `tilted_mean_z0`     — ∫ z⁽⁰⁾ e^{u·z} ν(dz)
//! * `convexity_integral` — ∫ (e^{b·z} − 1 − b·z) ν(dz)
//!
//! Coordinate 0 drives the dividend stream; coordinate i (1-based) drives
//! investor i's income. Two measure families are supported: a compound
//! Poisson process with centered Gaussian marks (closed forms via the
//! normal moment generating function) and a finite list of weighted atoms
//! (exact sums). Atom lists double as hand-checkable fixtures because all
//! their integrals are elementary.

use std::io::BufRead;

use nalgebra::DMatrix;

use crate::error::MeasureError;

/// Exponent cap for tilted integrals. Root-finders probe extreme tilts;
/// anything beyond this would silently saturate to `inf`, so it is
/// reported as an error instead.
pub const EXP_CAP: f64 = 700.0;

fn guarded_exp(exponent: f64, context: &'static str) -> Result<f64, MeasureError> {
    if exponent > EXP_CAP {
        return Err(MeasureError::Overflow {
            exponent,
            cap: EXP_CAP,
            context,
        });
    }
    Ok(exponent.exp())
}

/// Exponential tilt u applied to jump marks, i.e. the weight e^{u·z}.
///
/// The solver only ever needs two shapes: a tilt carried by the dividend
/// coordinate and at most one income coordinate (`Sparse`), or a full
/// vector used by the representative-agent benchmark (`Dense`). Sparse
/// tilts keep the Gaussian quadratic forms O(1) regardless of the number
/// of investors.
#[derive(Debug, Clone, PartialEq)]
pub enum Tilt {
    Sparse {
        /// Exponent on the dividend coordinate z⁽⁰⁾.
        u0: f64,
        /// Exponent on the income coordinate; must be 0 when `investor`
        /// is `None`.
        ui: f64,
        /// 1-based income coordinate the `ui` exponent applies to.
        investor: Option<usize>,
    },
    Dense(Vec<f64>),
}

impl Tilt {
    /// Tilt acting on the dividend coordinate only.
    pub fn coord0(u0: f64) -> Self {
        Tilt::Sparse {
            u0,
            ui: 0.0,
            investor: None,
        }
    }

    /// Tilt acting on the dividend coordinate and income coordinate
    /// `investor` (1-based).
    pub fn pair(u0: f64, investor: usize, ui: f64) -> Result<Self, MeasureError> {
        if investor == 0 {
            return Err(MeasureError::Structural(
                "income coordinate index must be >= 1 (0 is the dividend coordinate)".into(),
            ));
        }
        Ok(Tilt::Sparse {
            u0,
            ui,
            investor: Some(investor),
        })
    }

    /// Fully specified exponent vector of length dim = I + 1.
    pub fn dense(v: Vec<f64>) -> Self {
        Tilt::Dense(v)
    }

    /// The zero tilt (weight identically 1).
    pub fn zero() -> Self {
        Tilt::coord0(0.0)
    }

    /// u · z for a concrete mark.
    pub fn dot(&self, mark: &[f64]) -> f64 {
        match self {
            Tilt::Sparse { u0, ui, investor } => {
                let mut s = u0 * mark[0];
                if let Some(i) = investor {
                    s += ui * mark[*i];
                }
                s
            }
            Tilt::Dense(v) => v.iter().zip(mark).map(|(a, b)| a * b).sum(),
        }
    }

    fn check_dim(&self, dim: usize) -> Result<(), MeasureError> {
        match self {
            Tilt::Sparse { investor, .. } => {
                if let Some(i) = investor {
                    if *i >= dim {
                        return Err(MeasureError::Structural(format!(
                            "tilt income coordinate {i} out of range for dimension {dim}"
                        )));
                    }
                }
                Ok(())
            }
            Tilt::Dense(v) => {
                if v.len() != dim {
                    return Err(MeasureError::Structural(format!(
                        "dense tilt length {} does not match measure dimension {dim}",
                        v.len()
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Correlation matrix of the Gaussian jump marks: symmetric, unit
/// diagonal, positive definite. Positive definiteness is certified by a
/// successful Cholesky factorization, whose factor is kept for sampling.
#[derive(Debug, Clone)]
pub struct JumpCovariance {
    dim: usize,
    entries: DMatrix<f64>,
    flat_rho: Option<f64>,
    factor: DMatrix<f64>,
}

impl JumpCovariance {
    /// Uncorrelated marks.
    pub fn identity(dim: usize) -> Result<Self, MeasureError> {
        Self::from_matrix(DMatrix::identity(dim, dim))
    }

    /// Flat correlation: Σ_ij = ρ for i ≠ j, unit diagonal. Positive
    /// definite exactly when ρ ∈ (−1/(dim−1), 1).
    pub fn flat(dim: usize, rho: f64) -> Result<Self, MeasureError> {
        if dim < 2 {
            return Err(MeasureError::Structural(
                "jump covariance needs dimension >= 2 (one dividend + one income coordinate)"
                    .into(),
            ));
        }
        let lower = -1.0 / (dim as f64 - 1.0);
        if !(rho > lower && rho < 1.0) {
            return Err(MeasureError::Structural(format!(
                "flat correlation {rho} outside positive-definite range ({lower:.6}, 1) for dimension {dim}"
            )));
        }
        let entries = DMatrix::from_fn(dim, dim, |i, j| if i == j { 1.0 } else { rho });
        let mut cov = Self::from_matrix(entries)?;
        cov.flat_rho = Some(rho);
        Ok(cov)
    }

    /// General matrix; validates symmetry, unit diagonal, and positive
    /// definiteness.
    pub fn from_matrix(entries: DMatrix<f64>) -> Result<Self, MeasureError> {
        let dim = entries.nrows();
        if dim < 2 || entries.ncols() != dim {
            return Err(MeasureError::Structural(format!(
                "jump covariance must be square with dimension >= 2, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..dim {
            if (entries[(i, i)] - 1.0).abs() > 1e-12 {
                return Err(MeasureError::Structural(format!(
                    "diagonal entry ({i},{i}) = {} must equal 1",
                    entries[(i, i)]
                )));
            }
            for j in (i + 1)..dim {
                if (entries[(i, j)] - entries[(j, i)]).abs() > 1e-12 {
                    return Err(MeasureError::Structural(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        let chol = nalgebra::Cholesky::new(entries.clone()).ok_or_else(|| {
            MeasureError::Structural("jump covariance is not positive definite".into())
        })?;
        Ok(Self {
            dim,
            factor: chol.l(),
            entries,
            flat_rho: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn flat_rho(&self) -> Option<f64> {
        self.flat_rho
    }

    /// Lower Cholesky factor L with Σ = L Lᵀ.
    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// uᵀ Σ u. O(1) for sparse tilts, O(dim) for dense tilts over a flat
    /// matrix, O(dim²) otherwise.
    pub fn quad_form(&self, tilt: &Tilt) -> f64 {
        match tilt {
            Tilt::Sparse { u0, ui, investor } => match investor {
                None => u0 * u0,
                Some(i) => u0 * u0 + 2.0 * u0 * ui * self.entries[(0, *i)] + ui * ui,
            },
            Tilt::Dense(v) => {
                if let Some(rho) = self.flat_rho {
                    let sum: f64 = v.iter().sum();
                    let sq: f64 = v.iter().map(|x| x * x).sum();
                    (1.0 - rho) * sq + rho * sum * sum
                } else {
                    let mut total = 0.0;
                    for i in 0..self.dim {
                        total += v[i] * v[i];
                        for j in (i + 1)..self.dim {
                            total += 2.0 * v[i] * v[j] * self.entries[(i, j)];
                        }
                    }
                    total
                }
            }
        }
    }

    /// (Σ u)₀, the dividend-coordinate component of Σu.
    pub fn row0_dot(&self, tilt: &Tilt) -> f64 {
        match tilt {
            Tilt::Sparse { u0, ui, investor } => match investor {
                None => *u0,
                Some(i) => u0 + ui * self.entries[(0, *i)],
            },
            Tilt::Dense(v) => {
                if let Some(rho) = self.flat_rho {
                    (1.0 - rho) * v[0] + rho * v.iter().sum::<f64>()
                } else {
                    (0..self.dim).map(|j| self.entries[(0, j)] * v[j]).sum()
                }
            }
        }
    }
}

/// One weighted point mass of an atomic measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub weight: f64,
    pub mark: Vec<f64>,
}

impl Atom {
    pub fn new(weight: f64, mark: Vec<f64>) -> Self {
        Self { weight, mark }
    }
}

/// A finite-activity jump measure on R^{I+1}.
#[derive(Debug, Clone)]
pub enum LevyMeasure {
    /// ν(dz) = intensity · N(0, Σ)(dz). Total mass equals the Poisson
    /// intensity; every exponential moment is finite.
    GaussianCompoundPoisson {
        cov: JumpCovariance,
        intensity: f64,
    },
    /// ν = Σ_k w_k δ_{z_k} with strictly positive weights and no atom at
    /// the origin.
    Atomic { atoms: Vec<Atom> },
}

impl LevyMeasure {
    pub fn gaussian(cov: JumpCovariance, intensity: f64) -> Result<Self, MeasureError> {
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(MeasureError::Structural(format!(
                "jump intensity must be a positive real, got {intensity}"
            )));
        }
        Ok(Self::GaussianCompoundPoisson { cov, intensity })
    }

    /// Convenience: flat-correlation Gaussian marks with unit intensity.
    pub fn gaussian_flat(dim: usize, rho: f64) -> Result<Self, MeasureError> {
        Self::gaussian(JumpCovariance::flat(dim, rho)?, 1.0)
    }

    pub fn atomic(atoms: Vec<Atom>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::Structural(
                "atomic measure needs at least one atom".into(),
            ));
        }
        let dim = atoms[0].mark.len();
        if dim < 2 {
            return Err(MeasureError::Structural(
                "atom marks need dimension >= 2 (one dividend + one income coordinate)".into(),
            ));
        }
        for (k, atom) in atoms.iter().enumerate() {
            if !(atom.weight > 0.0 && atom.weight.is_finite()) {
                return Err(MeasureError::Structural(format!(
                    "atom {k} has non-positive weight {}",
                    atom.weight
                )));
            }
            if atom.mark.len() != dim {
                return Err(MeasureError::Structural(format!(
                    "atom {k} has mark length {} but atom 0 has {dim}",
                    atom.mark.len()
                )));
            }
            if atom.mark.iter().all(|x| *x == 0.0) {
                return Err(MeasureError::Structural(format!(
                    "atom {k} sits at the origin"
                )));
            }
            if atom.mark.iter().any(|x| !x.is_finite()) {
                return Err(MeasureError::Structural(format!(
                    "atom {k} has a non-finite mark"
                )));
            }
        }
        Ok(Self::Atomic { atoms })
    }

    /// Dimension I + 1 of the mark space.
    pub fn dim(&self) -> usize {
        match self {
            Self::GaussianCompoundPoisson { cov, .. } => cov.dim(),
            Self::Atomic { atoms } => atoms[0].mark.len(),
        }
    }

    /// Total mass ν(Rᵈ) — the Poisson arrival intensity of jumps.
    pub fn total_mass(&self) -> f64 {
        match self {
            Self::GaussianCompoundPoisson { intensity, .. } => *intensity,
            Self::Atomic { atoms } => atoms.iter().map(|a| a.weight).sum(),
        }
    }

    /// ∫ z⁽ʲ⁾ ν(dz).
    pub fn mean_coord(&self, j: usize) -> f64 {
        match self {
            Self::GaussianCompoundPoisson { .. } => 0.0,
            Self::Atomic { atoms } => atoms.iter().map(|a| a.weight * a.mark[j]).sum(),
        }
    }

    /// ∫ z⁽⁰⁾ ν(dz).
    pub fn mean_z0(&self) -> f64 {
        self.mean_coord(0)
    }

    /// ∫ (z⁽⁰⁾)² ν(dz). Errors if the dividend coordinate carries no
    /// quadratic mass (the market price of jump risk is then undefined).
    pub fn second_moment_z0(&self) -> Result<f64, MeasureError> {
        let value = match self {
            Self::GaussianCompoundPoisson { cov, intensity } => intensity * cov.entries()[(0, 0)],
            Self::Atomic { atoms } => atoms
                .iter()
                .map(|a| a.weight * a.mark[0] * a.mark[0])
                .sum(),
        };
        if value <= 0.0 {
            return Err(MeasureError::DegenerateMeasure);
        }
        Ok(value)
    }

    /// ∫ e^{u·z} ν(dz).
    pub fn tilted_mass(&self, tilt: &Tilt) -> Result<f64, MeasureError> {
        tilt.check_dim(self.dim())?;
        match self {
            Self::GaussianCompoundPoisson { cov, intensity } => {
                let q = cov.quad_form(tilt);
                Ok(intensity * guarded_exp(0.5 * q, "tilted mass")?)
            }
            Self::Atomic { atoms } => {
                let mut sum = 0.0;
                for a in atoms {
                    sum += a.weight * guarded_exp(tilt.dot(&a.mark), "tilted mass")?;
                }
                Ok(sum)
            }
        }
    }

    /// ∫ z⁽⁰⁾ e^{u·z} ν(dz). Gaussian closed form: intensity·(Σu)₀·e^{uᵀΣu/2}.
    pub fn tilted_mean_z0(&self, tilt: &Tilt) -> Result<f64, MeasureError> {
        tilt.check_dim(self.dim())?;
        match self {
            Self::GaussianCompoundPoisson { cov, intensity } => {
                let q = cov.quad_form(tilt);
                Ok(intensity * cov.row0_dot(tilt) * guarded_exp(0.5 * q, "tilted mean")?)
            }
            Self::Atomic { atoms } => {
                let mut sum = 0.0;
                for a in atoms {
                    sum += a.weight * a.mark[0] * guarded_exp(tilt.dot(&a.mark), "tilted mean")?;
                }
                Ok(sum)
            }
        }
    }

    /// K(b) = ∫ (e^{b·z} − 1 − b·z) ν(dz), nonnegative by convexity of
    /// the exponential. Gaussian closed form: intensity·(e^{bᵀΣb/2} − 1)
    /// because the marks are centered.
    pub fn convexity_integral(&self, tilt: &Tilt) -> Result<f64, MeasureError> {
        tilt.check_dim(self.dim())?;
        match self {
            Self::GaussianCompoundPoisson { cov, intensity } => {
                let q = cov.quad_form(tilt);
                if 0.5 * q > EXP_CAP {
                    return Err(MeasureError::Overflow {
                        exponent: 0.5 * q,
                        cap: EXP_CAP,
                        context: "convexity integral",
                    });
                }
                Ok(intensity * (0.5 * q).exp_m1())
            }
            Self::Atomic { atoms } => {
                let mut sum = 0.0;
                for a in atoms {
                    let x = tilt.dot(&a.mark);
                    if x > EXP_CAP {
                        return Err(MeasureError::Overflow {
                            exponent: x,
                            cap: EXP_CAP,
                            context: "convexity integral",
                        });
                    }
                    sum += a.weight * (x.exp_m1() - x);
                }
                Ok(sum)
            }
        }
    }

    /// ∫ ψ dν for the density integrand ψ(z) = e^{u·z} − 1, i.e. the
    /// compensator rate of the associated stochastic exponential.
    pub fn psi_compensator(&self, tilt: &Tilt) -> Result<f64, MeasureError> {
        Ok(self.tilted_mass(tilt)? - self.total_mass())
    }

    /// Checks the admissibility conditions required of a jump measure:
    /// no mass at the origin with square integrability near it, an
    /// integrable dividend coordinate on small jumps, finite exponential
    /// moments for every tilt, and dividend jumps of both signs. The
    /// last condition is what makes the tilted-mean maps surjective and
    /// hence invertible.
    pub fn validate(&self) -> ValidationReport {
        let mut conditions = Vec::with_capacity(4);
        match self {
            Self::GaussianCompoundPoisson { intensity, .. } => {
                conditions.push(ConditionReport::pass(
                    "origin-and-square-integrability",
                    format!("Gaussian marks put no mass at points; total mass {intensity} is finite"),
                ));
                conditions.push(ConditionReport::pass(
                    "small-jump-integrability",
                    "finite total mass integrates |z0| near the origin".into(),
                ));
                conditions.push(ConditionReport::pass(
                    "exponential-moments",
                    "the Gaussian moment generating function is finite for every tilt".into(),
                ));
                conditions.push(ConditionReport::pass(
                    "two-sided-dividend-jumps",
                    "a centered Gaussian density charges both half-spaces {z0 > 0} and {z0 < 0}"
                        .into(),
                ));
            }
            Self::Atomic { atoms } => {
                conditions.push(ConditionReport::pass(
                    "origin-and-square-integrability",
                    format!(
                        "{} atoms, none at the origin (enforced at construction), finite mass",
                        atoms.len()
                    ),
                ));
                conditions.push(ConditionReport::pass(
                    "small-jump-integrability",
                    "finite sums integrate |z0| trivially".into(),
                ));
                conditions.push(ConditionReport::pass(
                    "exponential-moments",
                    "finite sums of exponentials are finite for every tilt".into(),
                ));
                let pos = atoms.iter().any(|a| a.mark[0] > 0.0);
                let neg = atoms.iter().any(|a| a.mark[0] < 0.0);
                if pos && neg {
                    conditions.push(ConditionReport::pass(
                        "two-sided-dividend-jumps",
                        "atoms charge both signs of the dividend coordinate".into(),
                    ));
                } else {
                    let missing = if pos { "negative" } else { "positive" };
                    conditions.push(ConditionReport::fail(
                        "two-sided-dividend-jumps",
                        format!(
                            "no atom with {missing} dividend jump; the tilted-mean map is not onto and cannot be inverted"
                        ),
                    ));
                }
            }
        }
        ValidationReport { conditions }
    }
}

/// Outcome of a single admissibility condition.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub name: &'static str,
    pub passed: bool,
    pub message: String,
}

impl ConditionReport {
    fn pass(name: &'static str, message: String) -> Self {
        Self {
            name,
            passed: true,
            message,
        }
    }

    fn fail(name: &'static str, message: String) -> Self {
        Self {
            name,
            passed: false,
            message,
        }
    }
}

/// Per-condition admissibility report.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub conditions: Vec<ConditionReport>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }
}

/// Reads an atom list from CSV with header `weight,z0,z1,...,zI`.
pub fn atoms_from_csv<R: BufRead>(reader: R) -> Result<Vec<Atom>, MeasureError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| MeasureError::Structural("atom CSV is empty".into()))?
        .map_err(|e| MeasureError::Structural(format!("atom CSV read error: {e}")))?;
    let cols: Vec<&str> = header.trim().split(',').map(str::trim).collect();
    if cols.len() < 3 || cols[0] != "weight" {
        return Err(MeasureError::Structural(
            "atom CSV header must be weight,z0,z1,...,zI".into(),
        ));
    }
    for (j, col) in cols[1..].iter().enumerate() {
        if *col != format!("z{j}") {
            return Err(MeasureError::Structural(format!(
                "atom CSV header column {} must be z{j}, got {col}",
                j + 1
            )));
        }
    }
    let dim = cols.len() - 1;
    let mut atoms = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| MeasureError::Structural(format!("atom CSV read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != dim + 1 {
            return Err(MeasureError::Structural(format!(
                "atom CSV row {} has {} fields, expected {}",
                lineno + 2,
                fields.len(),
                dim + 1
            )));
        }
        let mut values = Vec::with_capacity(dim + 1);
        for f in &fields {
            values.push(f.parse::<f64>().map_err(|e| {
                MeasureError::Structural(format!("atom CSV row {}: {e}", lineno + 2))
            })?);
        }
        atoms.push(Atom::new(values[0], values[1..].to_vec()));
    }
    Ok(atoms)
}
