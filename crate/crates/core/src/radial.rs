//! Radial shooting from the origin.
//!
//! For `u(x) = U(|x|)` the Hessian eigenvalues are `U''` (once) and
//! `p = U'/r` (`n − 1` times), so the equation reduces to
//! `U'' = f⁻¹(φ − (n−1) f(p))` with `φ = −U + ½ r U'`. The integrated state is
//! `(p, ψ)` with `ψ = φ − n f(p)`, which obeys
//!
//! ```text
//! p' = (U'' − p)/r,    ψ' = (½ r² − n f'(p)) p',    f(U'') = f(p) + ψ
//! ```
//!
//! and stays bounded at the origin. Regularity at the origin is `ψ(0) = 0`
//! with `p(0) = c = f⁻¹(−u0/n)`; on `[0, r₀]` the series `p = c + O(r⁴)`,
//! `ψ = O(r⁴)` is used, its `r²` coefficients vanishing identically.
//!
//! Perturbations off `ψ = 0` grow like `r⁻ⁿ exp(r²/(4 f'(c)))`, so the
//! variables are chosen so that `ψ = 0` is reproduced exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    check_point, dot, integrate_with_events, Backend, DenseTrajectory, OdeOptions, Outcome, ScalarField, SymMatrix,
};
use crate::tau::{df_dlambda, f_scalar, f_scalar_inv, TauParams};

/// Why a shot stopped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialEvent {
    Completed {
        r: f64,
    },
    /// The eigenvalue `U'/r` left the cone component.
    ConeExit {
        r: f64,
        eigenvalue: f64,
    },
    BlowUp {
        r: f64,
    },
    /// `f(U'/r) + ψ` left the range of `f`.
    InversionFailure {
        r: f64,
    },
}

impl RadialEvent {
    pub fn r(&self) -> f64 {
        match *self {
            Self::Completed { r } | Self::ConeExit { r, .. } | Self::BlowUp { r } | Self::InversionFailure { r } => r,
        }
    }

    pub fn is_completed(&self) -> bool {
        matches!(self, Self::Completed { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Completed { .. } => "completed",
            Self::ConeExit { .. } => "cone_exit",
            Self::BlowUp { .. } => "blow_up",
            Self::InversionFailure { .. } => "inversion_failure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSample {
    pub r: f64,
    pub u: f64,
    pub du: f64,
    pub d2u: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialOptions {
    /// Radius where the series start hands over to the integrator.
    pub r0: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    /// `|p|` or `|ψ|` beyond this is a blow-up.
    pub blow_up: f64,
    /// `ψ(r₀)`. Non-zero values leave the regular family and excite the
    /// growing mode.
    pub offset: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        Self {
            r0: 1e-4,
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            max_step: 0.05,
            blow_up: 1e12,
            offset: 0.0,
        }
    }
}

#[derive(Clone, Debug)]
enum Shape {
    /// `U = c r²/2 + u0`.
    Quadratic { c: f64, u0: f64 },
    /// Series on `[0, r₀]`, then the integrated pieces in order.
    Shot {
        c: f64,
        u0: f64,
        r0: f64,
        pieces: Vec<DenseTrajectory>,
    },
}

/// A radial solution `u(x) = U(|x|)` on the closed ball of radius
/// [`reach`](Self::reach), together with how the run ended.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    tp: TauParams,
    n: usize,
    samples: Vec<RadialSample>,
    event: RadialEvent,
    shape: Shape,
}

impl RadialProfile {
    pub fn params(&self) -> &TauParams {
        &self.tp
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> &[RadialSample] {
        &self.samples
    }

    pub fn event(&self) -> &RadialEvent {
        &self.event
    }

    /// Largest radius where the profile is defined.
    pub fn reach(&self) -> f64 {
        self.event.r()
    }

    /// `U''(0)`.
    pub fn curvature_at_origin(&self) -> f64 {
        match self.shape {
            Shape::Quadratic { c, .. } | Shape::Shot { c, .. } => c,
        }
    }

    /// `(U, U', U'')` at radius `r`.
    pub fn eval(&self, r: f64) -> Result<RadialSample> {
        if !(r >= 0.0 && r <= self.reach()) {
            return Err(Error::OutOfSpan {
                t: r,
                lo: 0.0,
                hi: self.reach(),
            });
        }
        match &self.shape {
            Shape::Quadratic { c, u0 } => Ok(RadialSample {
                r,
                u: 0.5 * c * r * r + u0,
                du: c * r,
                d2u: *c,
            }),
            Shape::Shot { c, u0, r0, pieces } => {
                if r <= *r0 || pieces.is_empty() {
                    return Ok(RadialSample {
                        r,
                        u: 0.5 * c * r * r + u0,
                        du: c * r,
                        d2u: *c,
                    });
                }
                let piece = pieces
                    .iter()
                    .find(|p| r <= p.t_end())
                    .unwrap_or_else(|| pieces.last().expect("non-empty"));
                let y = piece.eval(r)?;
                sample_from_state(&self.tp, self.n, r, y[0], y[1])
            }
        }
    }

    /// `max |U − V|` between two profiles on evenly spaced radii in `[0, r_max]`.
    pub fn max_deviation(&self, other: &RadialProfile, r_max: f64, points: usize) -> Result<f64> {
        let m = points.max(2);
        let mut worst: f64 = 0.0;
        for i in 0..m {
            let r = r_max * i as f64 / (m - 1) as f64;
            worst = worst.max((self.eval(r)?.u - other.eval(r)?.u).abs());
        }
        Ok(worst)
    }
}

fn sample_from_state(tp: &TauParams, n: usize, r: f64, p: f64, psi: f64) -> Result<RadialSample> {
    let d = increment(tp, p, psi).map_err(|stop| match stop {
        Stop::Cone(l) => Error::ConeViolation {
            eigenvalue: l,
            location: None,
        },
        Stop::Inversion | Stop::BlowUp => Error::Divergence { t: r },
    })?;
    let phi = psi + n as f64 * f_scalar(tp, p)?;
    Ok(RadialSample {
        r,
        u: -phi + 0.5 * r * r * p,
        du: r * p,
        d2u: p + d,
    })
}

impl ScalarField for RadialProfile {
    fn dim(&self) -> usize {
        self.n
    }

    fn backend(&self) -> Backend {
        match self.shape {
            Shape::Quadratic { .. } => Backend::Analytic,
            Shape::Shot { .. } => Backend::Trajectory,
        }
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(self.n, x)?;
        Ok(self.eval(dot(x, x).sqrt())?.u)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self.n, x)?;
        let r = dot(x, x).sqrt();
        let s = self.eval(r)?;
        let p = if r == 0.0 { s.d2u } else { s.du / r };
        Ok(x.iter().map(|v| p * v).collect())
    }

    /// `p I + (U'' − p) x xᵀ/r²` with `p = U'/r`.
    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(self.n, x)?;
        let r = dot(x, x).sqrt();
        let s = self.eval(r)?;
        if r == 0.0 {
            return Ok(SymMatrix::scalar(self.n, s.d2u));
        }
        let p = s.du / r;
        let k = (s.d2u - p) / (r * r);
        Ok(SymMatrix::from_fn(self.n, |i, j| {
            k * x[i] * x[j] + if i == j { p } else { 0.0 }
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Stop {
    Cone(f64),
    Inversion,
    BlowUp,
}

/// `U'' − p`, i.e. the `Δ` with `f(p + Δ) − f(p) = ψ`, by Newton iteration
/// from `Δ = 0` with a bracketed fallback. `ψ = 0` gives exactly `Δ = 0`.
fn increment(tp: &TauParams, p: f64, psi: f64) -> std::result::Result<f64, Stop> {
    if !tp.cone().contains(p) {
        return Err(Stop::Cone(p));
    }
    if psi == 0.0 {
        return Ok(0.0);
    }
    let fp = f_scalar(tp, p).map_err(|_| Stop::Cone(p))?;
    let y = fp + psi;
    let (lo, hi) = tp.f_range();
    if !(y > lo && y < hi) {
        return Err(Stop::Inversion);
    }
    let mut d = 0.0;
    for _ in 0..12 {
        let (Ok(fx), Ok(dfx)) = (f_scalar(tp, p + d), df_dlambda(tp, p + d)) else {
            break;
        };
        let step = ((fx - fp) - psi) / dfx;
        let next = d - step;
        if !tp.cone().contains(p + next) {
            break;
        }
        if step.abs() <= 4.0 * f64::EPSILON * (p + next).abs().max(next.abs()).max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        d = next;
    }
    f_scalar_inv(tp, y).map(|q| q - p).map_err(|_| Stop::Inversion)
}

/// Shoots the regular radial solution with `U(0) = u0`, `U'(0) = 0` out to
/// `r_max`. Stopping events are returned in the profile, not as errors.
///
/// The profile starts from `c = f⁻¹(−u0/n)` and reports `U(0) = −n f(c)`,
/// which differs from `u0` only by the rounding of the inverse.
pub fn shoot_radial(tp: &TauParams, n: usize, u0: f64, r_max: f64, opts: &RadialOptions) -> Result<RadialProfile> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if !(u0.is_finite() && opts.offset.is_finite()) {
        return Err(Error::NonFinite("initial data"));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidInput(format!("r_max must be positive, got {r_max}")));
    }
    if !(opts.r0 > 0.0 && opts.r0 < r_max) {
        return Err(Error::InvalidInput("need 0 < r0 < r_max".into()));
    }
    let c = f_scalar_inv(tp, -u0 / n as f64)?;
    let u0 = -(n as f64) * f_scalar(tp, c)?;
    let ode = OdeOptions {
        max_step: opts.max_step,
        ..OdeOptions::with_tolerances(opts.rel_tol, opts.abs_tol)
    };
    let blow_up = opts.blow_up;
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| -> std::result::Result<(), Stop> {
        if y[0].abs() > blow_up || y[1].abs() > blow_up {
            return Err(Stop::BlowUp);
        }
        let d = increment(tp, y[0], y[1])?;
        let slope = df_dlambda(tp, y[0]).map_err(|_| Stop::Cone(y[0]))?;
        dy[0] = d / r;
        dy[1] = (0.5 * r * r - n as f64 * slope) * dy[0];
        Ok(())
    };

    let mut pieces: Vec<DenseTrajectory> = Vec::new();
    let mut r = opts.r0;
    let mut y = vec![c, opts.offset];
    let mut trial = ode;
    let event = loop {
        let (traj, outcome) = integrate_with_events(rhs, r, &y, r_max, &trial)?;
        let (r_end, y_end) = (traj.t_end(), traj.y_end().to_vec());
        if traj.step_count() > 0 {
            pieces.push(traj);
        }
        match outcome {
            Outcome::Completed => break RadialEvent::Completed { r: r_max },
            Outcome::Halted { t, reason } => {
                // A trial stage may overshoot; re-approach the stop from the
                // last accepted point until the gap is negligible.
                if t - r_end > 1e-9 * r_end.max(1.0) {
                    r = r_end;
                    y = y_end;
                    trial.initial_step = Some(0.25 * (t - r_end));
                    trial.max_step = 0.5 * (t - r_end);
                    continue;
                }
                break match reason {
                    Stop::Cone(l) => RadialEvent::ConeExit {
                        r: r_end,
                        eigenvalue: l,
                    },
                    Stop::Inversion => RadialEvent::InversionFailure { r: r_end },
                    Stop::BlowUp => RadialEvent::BlowUp { r: r_end },
                };
            }
            Outcome::StepUnderflow { .. } | Outcome::NonFinite { .. } | Outcome::StepLimit { .. } => {
                break RadialEvent::BlowUp { r: r_end };
            }
        }
    };

    let mut samples = vec![RadialSample {
        r: 0.0,
        u: u0,
        du: 0.0,
        d2u: c,
    }];
    for piece in &pieces {
        for (t, state) in piece.knots() {
            if samples.last().is_some_and(|s| s.r >= t) {
                continue;
            }
            samples.push(sample_from_state(tp, n, t, state[0], state[1])?);
        }
    }
    Ok(RadialProfile {
        tp: *tp,
        n,
        samples,
        event,
        shape: Shape::Shot {
            c,
            u0,
            r0: opts.r0,
            pieces,
        },
    })
}

/// The quadratic `U = c r²/2 − n f(c)` sampled at `points` radii on `[0, r_max]`.
pub fn radial_quadratic_reference(
    tp: &TauParams,
    n: usize,
    c: f64,
    r_max: f64,
    points: usize,
) -> Result<RadialProfile> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidInput(format!("r_max must be positive, got {r_max}")));
    }
    let u0 = -(n as f64) * f_scalar(tp, c)?;
    let m = points.max(2);
    let samples = (0..m)
        .map(|i| {
            let r = r_max * i as f64 / (m - 1) as f64;
            RadialSample {
                r,
                u: 0.5 * c * r * r + u0,
                du: c * r,
                d2u: c,
            }
        })
        .collect();
    Ok(RadialProfile {
        tp: *tp,
        n,
        samples,
        event: RadialEvent::Completed { r: r_max },
        shape: Shape::Quadratic { c, u0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{growth_ratio_check, shrinker_residual};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    #[test]
    fn slag_unit_curvature() {
        let tp = TauParams::special_lagrangian();
        let prof = shoot_radial(&tp, 2, -FRAC_PI_2, 10.0, &RadialOptions::default()).unwrap();
        assert!(prof.event().is_completed());
        assert!((prof.curvature_at_origin() - 1.0).abs() < 1e-14);
        let reference = radial_quadratic_reference(&tp, 2, 1.0, 10.0, 11).unwrap();
        assert!(prof.max_deviation(&reference, 10.0, 1001).unwrap() < 1e-6);
    }

    #[test]
    fn harmonic_constant_profile() {
        let tp = TauParams::harmonic();
        let prof = shoot_radial(&tp, 1, SQRT_2, 10.0, &RadialOptions::default()).unwrap();
        assert!(prof.event().is_completed());
        for s in prof.samples() {
            assert!(s.d2u.abs() < 1e-12 && (s.u - SQRT_2).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn reference_constants() {
        let ma = radial_quadratic_reference(&TauParams::monge_ampere(), 3, 1.0, 1.0, 3).unwrap();
        assert_eq!(ma.eval(0.0).unwrap().u, 0.0);
        let h = radial_quadratic_reference(&TauParams::harmonic(), 2, 0.0, 1.0, 3).unwrap();
        assert_eq!(h.eval(0.7).unwrap().u, 2.0 * SQRT_2);
        assert!(radial_quadratic_reference(&TauParams::monge_ampere(), 2, -1.0, 1.0, 3).is_err());
    }

    #[test]
    fn profile_solves_the_equation_off_axis() {
        let tp = TauParams::representative(crate::tau::Branch::Log);
        let u0 = -3.0 * f_scalar(&tp, 2.0).unwrap();
        let prof = shoot_radial(&tp, 3, u0, 5.0, &RadialOptions::default()).unwrap();
        let x = [1.0, -2.0, 0.5];
        assert!(shrinker_residual(&tp, &prof, &x).unwrap().abs() < 1e-9);
        let g = growth_ratio_check(&prof, &x, 2.0).unwrap();
        assert!(g.defect < 1e-6, "{g:?}");
    }

    #[test]
    fn eigenvalues_agree_near_origin() {
        let tp = TauParams::special_lagrangian();
        let prof = shoot_radial(&tp, 3, -1.0, 2.0, &RadialOptions::default()).unwrap();
        for r in [1e-3, 1e-2, 1e-1] {
            let s = prof.eval(r).unwrap();
            assert!((s.du / r - s.d2u).abs() <= 1e-10 + r * r, "r = {r}");
        }
    }

    #[test]
    fn inadmissible_start_is_an_error() {
        let tp = TauParams::special_lagrangian();
        assert!(shoot_radial(&tp, 2, -4.0, 1.0, &RadialOptions::default()).is_err());
        assert!(shoot_radial(&tp, 0, 0.0, 1.0, &RadialOptions::default()).is_err());
    }
}
