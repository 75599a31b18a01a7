use std::sync::Arc;

use crate::construct::phase_ode::{logistic, logistic_slope, PhaseTrajectory};
use crate::error::{Error, Result};
use crate::numerics::{check_point, Backend, ScalarField, SecondAntiderivative, SymMatrix};

/// Default quadrature node spacing.
pub const DEFAULT_DELTA: f64 = 1e-3;

/// Largest acceptable `|φ − (½t w₁' − w₁)|` over the quadrature nodes.
pub const PHASE_IDENTITY_TOL: f64 = 1e-7;

/// The 1-D profile `w₁` with `w₁'' = σ(φ)`, `w₁(0) = −a0`, `w₁'(0) = −2a1`.
///
/// Inside `[−T, T]` values come from cumulative Simpson quadrature of the
/// phase trajectory. Beyond `±T` the phase is continued linearly from its
/// endpoint value and slope.
#[derive(Clone, Debug)]
pub struct W1Field {
    traj: Arc<PhaseTrajectory>,
    quad: SecondAntiderivative,
    identity_defect: f64,
}

impl W1Field {
    pub fn trajectory(&self) -> &PhaseTrajectory {
        &self.traj
    }

    pub fn quadrature(&self) -> &SecondAntiderivative {
        &self.quad
    }

    /// `sup |φ − (½t w₁' − w₁)|` over the quadrature nodes.
    pub fn phase_identity_defect(&self) -> f64 {
        self.identity_defect
    }

    /// Phase used by the field: the trajectory inside the span, its linear
    /// continuation outside.
    pub fn phase_model(&self, t: f64) -> Result<(f64, f64)> {
        let big_t = self.traj.span();
        if t.abs() <= big_t {
            return self.traj.state(t);
        }
        let end = big_t.copysign(t);
        let (p, dp) = self.traj.state(end)?;
        Ok((p + dp * (t - end), dp))
    }

    fn second(&self, t: f64) -> Result<f64> {
        Ok(logistic(self.phase_model(t)?.0))
    }

    /// `(w₁(t), w₁'(t))`.
    pub fn jet(&self, t: f64) -> Result<(f64, f64)> {
        let big_t = self.traj.span();
        if t.abs() <= big_t {
            return self.quad.eval(|s| self.second(s), t);
        }
        let end = big_t.copysign(t);
        let (mut w, mut d) = self.quad.eval(|s| self.second(s), end)?;
        let steps = ((t - end).abs() / self.quad.delta()).ceil().max(1.0) as usize;
        let h = (t - end) / steps as f64;
        let mut s = end;
        for _ in 0..steps {
            let g0 = self.second(s)?;
            let gm = self.second(s + 0.5 * h)?;
            let g1 = self.second(s + h)?;
            w += h * d + h * h / 6.0 * (g0 + 2.0 * gm);
            d += h / 6.0 * (g0 + 4.0 * gm + g1);
            s += h;
        }
        Ok((w, d))
    }

    /// `w₁''' = σ'(φ) φ'`.
    pub fn third_derivative(&self, t: f64) -> Result<f64> {
        let (p, dp) = self.phase_model(t)?;
        Ok(logistic_slope(p) * dp)
    }

    /// Size of the neglected tail: `½T σ'(φ(±T)) |φ'(±T)|`, larger end.
    pub fn tail_estimate(&self) -> Result<f64> {
        let big_t = self.traj.span();
        let mut worst: f64 = 0.0;
        for end in [big_t, -big_t] {
            let (p, dp) = self.traj.state(end)?;
            worst = worst.max(0.5 * big_t * logistic_slope(p) * dp.abs());
        }
        Ok(worst)
    }
}

/// Builds `w₁` on a node spacing `delta` and re-checks the phase identity
/// `φ = ½t w₁' − w₁` at every node.
pub fn assemble_w1(traj: Arc<PhaseTrajectory>, delta: f64) -> Result<W1Field> {
    let cfg = *traj.config();
    let big_t = traj.span();
    let g = |t: f64| traj.phi(t).map(logistic);
    let quad = SecondAntiderivative::build(g, -big_t, big_t, delta, -cfg.a0, -2.0 * cfg.a1)?;
    let mut defect: f64 = 0.0;
    for (t, w, d, _) in quad.table() {
        let phi = traj.phi(t)?;
        defect = defect.max((phi - (0.5 * t * d - w)).abs());
    }
    if !(defect <= PHASE_IDENTITY_TOL) {
        return Err(Error::InvalidInput(format!(
            "phase identity defect {defect:e} exceeds {PHASE_IDENTITY_TOL:e}"
        )));
    }
    Ok(W1Field {
        traj,
        quad,
        identity_defect: defect,
    })
}

impl ScalarField for W1Field {
    fn dim(&self) -> usize {
        1
    }

    fn backend(&self) -> Backend {
        Backend::Trajectory
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(1, x)?;
        Ok(self.jet(x[0])?.0)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(1, x)?;
        Ok(vec![self.jet(x[0])?.1])
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(1, x)?;
        Ok(SymMatrix::from_diag(&[self.second(x[0])?]))
    }
}

/// `w(x) = w₁(x₁) + (|x|² − x₁²)/4` on `ℝⁿ`.
#[derive(Clone, Debug)]
pub struct NdAssembly<F> {
    w1: F,
    n: usize,
}

pub fn assemble_nd<F: ScalarField>(w1: F, n: usize) -> Result<NdAssembly<F>> {
    if w1.dim() != 1 {
        return Err(Error::InvalidInput("profile must be one-dimensional".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    Ok(NdAssembly { w1, n })
}

impl<F> NdAssembly<F> {
    pub fn profile(&self) -> &F {
        &self.w1
    }
}

impl<F: ScalarField> ScalarField for NdAssembly<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn backend(&self) -> Backend {
        self.w1.backend()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(self.n, x)?;
        let rest: f64 = x[1..].iter().map(|v| v * v).sum();
        Ok(self.w1.value(&x[..1])? + 0.25 * rest)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self.n, x)?;
        let mut g = Vec::with_capacity(self.n);
        g.push(self.w1.gradient(&x[..1])?[0]);
        g.extend(x[1..].iter().map(|v| 0.5 * v));
        Ok(g)
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(self.n, x)?;
        let mut d = vec![0.5; self.n];
        d[0] = self.w1.hessian(&x[..1])?.get(0, 0);
        Ok(SymMatrix::from_diag(&d))
    }
}
