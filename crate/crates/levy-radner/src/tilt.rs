//! Monotone tilted-mean maps and their inverses.
//!
//! For a fixed income-coordinate exponent, the map
//! u₀ ↦ ∫ z⁽⁰⁾ e^{u₀ z⁽⁰⁾ + uᵢ z⁽ⁱ⁾} ν(dz)
//! is strictly increasing and onto the whole real line whenever the
//! measure charges both signs of the dividend coordinate. Its inverse is
//! what the equilibrium solver consumes, so we compute it by guaranteed
//! bracketing: grow a bracket by doubling until the target is straddled,
//! then bisect. Pure Newton is avoided on purpose — the derivative of the
//! map can be tiny for large negative tilts.

use crate::error::{MeasureError, RootFindError};
use crate::measure::{LevyMeasure, Tilt};

/// Tolerances for the bracketing inverse. `abs_tol` is measured on the
/// argument u₀, not on the map value, because downstream formulas consume
/// u₀ linearly.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RootFindConfig {
    pub abs_tol: f64,
    pub max_iter: usize,
    pub initial_bracket_halfwidth: f64,
}

impl Default for RootFindConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_iter: 200,
            initial_bracket_halfwidth: 1.0,
        }
    }
}

impl RootFindConfig {
    pub fn validate(&self) -> Result<(), MeasureError> {
        if !(self.abs_tol > 0.0) || !(self.initial_bracket_halfwidth > 0.0) || self.max_iter == 0 {
            return Err(MeasureError::Structural(
                "root-find tolerances and bracket half-width must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// The map u₀ ↦ ∫ z⁽⁰⁾ e^{u₀ z⁽⁰⁾ + uᵢ z⁽ⁱ⁾} ν(dz) with the income
/// exponent frozen. With `investor == None` the map acts on the dividend
/// coordinate alone.
#[derive(Debug, Clone)]
pub struct MonotoneTiltMap<'a> {
    measure: &'a LevyMeasure,
    investor: Option<usize>,
    fixed_ui: f64,
}

impl<'a> MonotoneTiltMap<'a> {
    /// Builds the map and spot-checks strict monotonicity on three probe
    /// points. The probe is a cheap guard against degenerate measures
    /// slipping past validation, not a proof.
    pub fn new(
        measure: &'a LevyMeasure,
        investor: Option<usize>,
        fixed_ui: f64,
    ) -> Result<Self, MeasureError> {
        if investor.is_none() && fixed_ui != 0.0 {
            return Err(MeasureError::Structural(
                "a frozen income exponent requires an income coordinate index".into(),
            ));
        }
        let map = Self {
            measure,
            investor,
            fixed_ui,
        };
        let probes = [-1.0, 0.0, 1.0];
        let mut values = [0.0; 3];
        for (v, u0) in values.iter_mut().zip(probes) {
            *v = map.eval(u0)?;
        }
        if !(values[0] < values[1] && values[1] < values[2]) {
            return Err(MeasureError::Structural(format!(
                "tilted-mean map is not strictly increasing on probe points: {values:?}"
            )));
        }
        Ok(map)
    }

    /// Builds the map without probing. Used internally where the measure
    /// has already passed validation.
    pub(crate) fn new_unchecked(
        measure: &'a LevyMeasure,
        investor: Option<usize>,
        fixed_ui: f64,
    ) -> Self {
        Self {
            measure,
            investor,
            fixed_ui,
        }
    }

    fn tilt(&self, u0: f64) -> Tilt {
        match self.investor {
            None => Tilt::coord0(u0),
            Some(i) => Tilt::Sparse {
                u0,
                ui: self.fixed_ui,
                investor: Some(i),
            },
        }
    }

    /// Evaluates the map at u₀.
    pub fn eval(&self, u0: f64) -> Result<f64, MeasureError> {
        self.measure.tilted_mean_z0(&self.tilt(u0))
    }

    /// Inverts the map: returns u₀ with the bracket around the solution
    /// narrowed below `cfg.abs_tol`. The initial bracket is grown by
    /// doubling; surjectivity of the map guarantees termination for
    /// admissible measures, so a bracket failure signals a measure whose
    /// dividend coordinate charges only one sign.
    pub fn invert(&self, y: f64, cfg: &RootFindConfig) -> Result<f64, RootFindError> {
        cfg.validate()?;
        // f(u0) = eval(u0) - y is strictly increasing.
        let f = |u0: f64| -> Result<f64, MeasureError> { Ok(self.eval(u0)? - y) };

        let mut half = cfg.initial_bracket_halfwidth;
        let mut lo = -half;
        let mut hi = half;
        const MAX_DOUBLINGS: u32 = 64;
        let bracket_hint =
            "no sign change found; the measure may not charge both signs of the dividend jump";
        let mut f_lo;
        let mut f_hi;
        let mut doublings = 0;
        loop {
            // Overflow while expanding means the map saturated before a
            // sign change could occur, which is the same diagnosis as an
            // exhausted doubling budget.
            let lo_val = f(lo);
            let hi_val = f(hi);
            match (lo_val, hi_val) {
                (Ok(a), Ok(b)) => {
                    f_lo = a;
                    f_hi = b;
                    if f_lo <= 0.0 && f_hi >= 0.0 {
                        break;
                    }
                    if f_lo > 0.0 && f_hi < 0.0 {
                        return Err(RootFindError::BracketFailure {
                            doublings,
                            reached: half,
                            hint: "map decreased across the bracket; monotonicity violated",
                        });
                    }
                }
                (Err(MeasureError::Overflow { .. }), _) | (_, Err(MeasureError::Overflow { .. })) => {
                    return Err(RootFindError::BracketFailure {
                        doublings,
                        reached: half,
                        hint: bracket_hint,
                    });
                }
                (Err(e), _) | (_, Err(e)) => return Err(e.into()),
            }
            if doublings >= MAX_DOUBLINGS {
                return Err(RootFindError::BracketFailure {
                    doublings,
                    reached: half,
                    hint: bracket_hint,
                });
            }
            half *= 2.0;
            lo = -half;
            hi = half;
            doublings += 1;
        }

        if f_lo == 0.0 {
            return Ok(lo);
        }
        if f_hi == 0.0 {
            return Ok(hi);
        }

        let mut width = hi - lo;
        for _ in 0..cfg.max_iter {
            let mid = 0.5 * (lo + hi);
            let f_mid = f(mid)?;
            if f_mid == 0.0 {
                return Ok(mid);
            }
            if f_mid < 0.0 {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
                f_hi = f_mid;
            }
            width = hi - lo;
            if width <= cfg.abs_tol {
                // Secant polish inside the final bracket; bisection
                // already guarantees the tolerance, this only sharpens
                // the point estimate.
                let denom = f_hi - f_lo;
                if denom > 0.0 {
                    let sec = lo - f_lo * (hi - lo) / denom;
                    if sec > lo && sec < hi {
                        return Ok(sec);
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
        }
        Err(RootFindError::MaxIterExceeded {
            max_iter: cfg.max_iter,
            width,
        })
    }
}
