//! The deterministic annuity A(t) = ∫_t^T e^{-r(s-t)} ds and the related
//! discounted-time integrals the consumption formulas need. All of them
//! have removable singularities at r = 0, handled by series branches so
//! root-finders can cross zero rates without losing digits.

/// Rates below this threshold use the r = 0 limits.
pub const RATE_EPS: f64 = 1e-10;

/// phi1(x) = (1 - e^{-x}) / x, continuously extended by phi1(0) = 1.
fn phi1(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -(-x).exp_m1() / x
    }
}

/// phi2(x) = (1 - e^{-x}(1 + x)) / x², continuously extended by
/// phi2(0) = 1/2. The direct formula cancels catastrophically near zero,
/// so |x| <= 0.5 uses the alternating series
/// Σ_{j>=0} (-1)^j (j+1) x^j / (j+2)!.
fn phi2(x: f64) -> f64 {
    if x.abs() <= 0.5 {
        let mut term = 0.5;
        let mut sum = term;
        for j in 0..24u32 {
            let j = f64::from(j);
            term *= -x * (j + 2.0) / ((j + 1.0) * (j + 3.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (1.0 - (-x).exp() * (1.0 + x)) / (x * x)
    }
}

/// Present value of a unit consumption stream over a remaining horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annuity {
    pub rate: f64,
    pub horizon: f64,
}

impl Annuity {
    pub fn new(rate: f64, horizon: f64) -> Self {
        Self { rate, horizon }
    }

    fn remaining(&self, t: f64) -> f64 {
        (self.horizon - t).max(0.0)
    }

    /// A(t) = ∫_t^T e^{-r(s-t)} ds = (1 - e^{-r(T-t)}) / r, equal to T - t
    /// in the zero-rate limit. A(T) = 0 and A is decreasing in t.
    pub fn value(&self, t: f64) -> f64 {
        let h = self.remaining(t);
        if self.rate.abs() <= RATE_EPS {
            h
        } else {
            h * phi1(self.rate * h)
        }
    }

    /// P(t) = ∫_t^T e^{-r(s-t)} (s - t) ds = ∫_0^{T-t} u e^{-ru} du,
    /// equal to (T-t)²/2 in the zero-rate limit.
    pub fn ramp(&self, t: f64) -> f64 {
        let h = self.remaining(t);
        if self.rate.abs() <= RATE_EPS {
            0.5 * h * h
        } else {
            h * h * phi2(self.rate * h)
        }
    }

    /// P(t)/A(t): the weight multiplying the consumption trend in the
    /// optimal policy. Tends to 0 as t ↑ T.
    pub fn consumption_weight(&self, t: f64) -> f64 {
        let h = self.remaining(t);
        if h == 0.0 {
            return 0.0;
        }
        if self.rate.abs() <= RATE_EPS {
            0.5 * h
        } else {
            let x = self.rate * h;
            h * phi2(x) / phi1(x)
        }
    }

    /// P(t)/A(t)²: the bounded, smooth drift ratio that appears when the
    /// optimal wealth dynamics are written for annuitized wealth X/A.
    /// Tends to 1/2 as t ↑ T.
    pub fn bridge_ratio(&self, t: f64) -> f64 {
        let h = self.remaining(t);
        if self.rate.abs() <= RATE_EPS || h == 0.0 {
            return 0.5;
        }
        let x = self.rate * h;
        let p1 = phi1(x);
        phi2(x) / (p1 * p1)
    }
}
