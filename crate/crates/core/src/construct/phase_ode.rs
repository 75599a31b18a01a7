use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_ode, DenseTrajectory, OdeOptions};

/// Logistic function `σ(x) = eˣ/(1 + eˣ)`, evaluated without overflow.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `σ'(x) = σ(x)σ(−x) = eˣ/(1 + eˣ)²`.
pub fn logistic_slope(x: f64) -> f64 {
    logistic(x) * logistic(-x)
}

/// Right-hand side `φ'' = t φ' eᵠ/(2(1 + eᵠ)²)`.
pub fn phase_rhs(t: f64, phi: f64, dphi: f64) -> f64 {
    0.5 * logistic_slope(phi) * t * dphi
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseOdeConfig {
    /// `φ(0)`.
    pub a0: f64,
    /// `φ'(0)`, positive.
    pub a1: f64,
    /// Integration span `[−T, T]`.
    pub span: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl PhaseOdeConfig {
    pub fn new(a0: f64, a1: f64) -> Self {
        Self {
            a0,
            a1,
            span: 20.0,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
        }
    }

    /// A priori bound `φ' ≤ a1 exp(e^{−a0}/a1²)` on `[0, ∞)`.
    pub fn slope_bound(&self) -> f64 {
        self.a1 * ((-self.a0).exp() / (self.a1 * self.a1)).exp()
    }
}

/// Solution of the phase ODE on `[−T, T]`, integrated outward from `t = 0`.
#[derive(Clone, Debug)]
pub struct PhaseTrajectory {
    config: PhaseOdeConfig,
    forward: DenseTrajectory,
    backward: DenseTrajectory,
}

impl PhaseTrajectory {
    pub fn config(&self) -> &PhaseOdeConfig {
        &self.config
    }

    pub fn span(&self) -> f64 {
        self.config.span
    }

    /// `(φ(t), φ'(t))` for `|t| ≤ T`.
    pub fn state(&self, t: f64) -> Result<(f64, f64)> {
        let y = if t >= 0.0 {
            self.forward.eval(t)?
        } else {
            self.backward.eval(t)?
        };
        Ok((y[0], y[1]))
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.0)
    }

    pub fn phi_prime(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.1)
    }

    /// `φ''(t)` from the equation.
    pub fn phi_second(&self, t: f64) -> Result<f64> {
        let (p, dp) = self.state(t)?;
        Ok(phase_rhs(t, p, dp))
    }

    /// Accepted step times on `[−T, T]`, increasing.
    pub fn mesh(&self) -> Vec<f64> {
        let mut back = self.backward.mesh();
        back.reverse();
        back.pop();
        back.extend(self.forward.mesh());
        back
    }

    pub fn step_count(&self) -> usize {
        self.forward.step_count() + self.backward.step_count()
    }

    /// Largest decrease of `φ'` between consecutive accepted steps on `[0, T]`
    /// (zero when monotone).
    pub fn monotonicity_violation(&self) -> f64 {
        let knots = self.forward.knots();
        knots
            .windows(2)
            .map(|w| (w[0].1[1] - w[1].1[1]).max(0.0))
            .fold(0.0, f64::max)
    }

    /// Smallest `φ'` over the accepted steps on `[−T, 0]`.
    pub fn min_slope_backward(&self) -> f64 {
        self.backward
            .knots()
            .iter()
            .map(|(_, y)| y[1])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Integrates the phase ODE from `(φ, φ')(0) = (a0, a1)` to `±T` and checks
/// that `φ'` is non-decreasing on `[0, T]`, positive on `[−T, 0]` and below
/// the a priori bound at `T`, each within the integrator tolerance.
pub fn solve_phase_ode(config: &PhaseOdeConfig) -> Result<PhaseTrajectory> {
    let c = config;
    if !(c.a0.is_finite() && c.a1.is_finite()) {
        return Err(Error::NonFinite("initial data"));
    }
    if c.a1 == 0.0 {
        return Err(Error::TrivialSolution);
    }
    if c.a1 < 0.0 {
        return Err(Error::InvalidInput("a1 must be positive".into()));
    }
    if !(c.span > 0.0 && c.span.is_finite()) {
        return Err(Error::InvalidInput("span must be positive".into()));
    }
    let opts = OdeOptions::with_tolerances(c.rel_tol, c.abs_tol);
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = phase_rhs(t, y[0], y[1]);
    };
    let y0 = [c.a0, c.a1];
    let forward = integrate_ode(rhs, 0.0, &y0, c.span, &opts)?;
    let backward = integrate_ode(rhs, 0.0, &y0, -c.span, &opts)?;
    let traj = PhaseTrajectory {
        config: *c,
        forward,
        backward,
    };

    let slack = |v: f64| c.abs_tol + c.rel_tol * v.abs();
    let end_slope = traj.phi_prime(c.span)?;
    if traj.monotonicity_violation() > slack(end_slope) {
        return Err(Error::InvalidInput(format!(
            "phi' decreases by {} on [0, T]",
            traj.monotonicity_violation()
        )));
    }
    if !(traj.min_slope_backward() > 0.0) {
        return Err(Error::InvalidInput("phi' is not positive on [-T, 0]".into()));
    }
    let bound = c.slope_bound();
    if end_slope > bound + slack(bound) {
        return Err(Error::InvalidInput(format!(
            "phi'(T) = {end_slope} exceeds the a priori bound {bound}"
        )));
    }
    Ok(traj)
}
