//! Adaptive Dormand–Prince 5(4) integration with continuous (dense) output.
//!
//! Dense output uses the method's own fourth-order interpolant, so the
//! interpolation error tracks the step-size control rather than adding a
//! separate Hermite error term.

use crate::error::{Error, Result};

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

/// Stage coefficients; the last row is also the 5th-order weight vector (FSAL).
const A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

/// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Continuous-extension coefficients: `y(t0 + s·h) = y0 + h Σ_k K_k Σ_j P[k][j] s^(j+1)`.
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// First trial step; chosen automatically when `None`.
    pub initial_step: Option<f64>,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            initial_step: None,
            max_step: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::InvalidInput("ODE tolerances must be positive".into()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::InvalidInput("max_step must be positive".into()));
        }
        Ok(())
    }
}

/// Why an integration run stopped.
#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<E> {
    Completed,
    /// The right-hand side refused to evaluate at `t`.
    Halted {
        t: f64,
        reason: E,
    },
    /// The step size fell below the resolvable limit near `t`.
    StepUnderflow {
        t: f64,
    },
    /// A stage produced NaN or ±∞ near `t`.
    NonFinite {
        t: f64,
    },
    StepLimit {
        t: f64,
    },
}

#[derive(Clone, Debug)]
struct Segment {
    t0: f64,
    h: f64,
    y0: Vec<f64>,
    /// `dim × 4` row-major: polynomial coefficients of `(y - y0)/h` in `s`.
    q: Vec<f64>,
}

/// Accepted steps of an integration run with continuous evaluation between them.
#[derive(Clone, Debug)]
pub struct DenseTrajectory {
    dim: usize,
    t_start: f64,
    y_start: Vec<f64>,
    segments: Vec<Segment>,
    t_end: f64,
    y_end: Vec<f64>,
}

impl DenseTrajectory {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    /// Last accepted time; for an interrupted run this is the last valid `t`.
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> &[f64] {
        &self.y_end
    }

    pub fn span(&self) -> (f64, f64) {
        (self.t_start.min(self.t_end), self.t_start.max(self.t_end))
    }

    pub fn step_count(&self) -> usize {
        self.segments.len()
    }

    /// Times of the accepted step boundaries, in integration order.
    pub fn mesh(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.segments.iter().map(|s| s.t0).collect();
        t.push(self.t_end);
        t
    }

    fn forward(&self) -> bool {
        self.t_end >= self.t_start
    }

    fn locate(&self, t: f64) -> Result<Option<&Segment>> {
        let (lo, hi) = self.span();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfSpan { t, lo, hi });
        }
        if self.segments.is_empty() {
            return Ok(None);
        }
        let fwd = self.forward();
        // Number of segments whose start is at or before t along the run direction.
        let idx = self
            .segments
            .partition_point(|s| if fwd { s.t0 <= t } else { s.t0 >= t });
        Ok(Some(&self.segments[idx.saturating_sub(1)]))
    }

    /// State at `t` from the continuous extension.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let Some(seg) = self.locate(t)? else {
            return Ok(self.y_start.clone());
        };
        let s = (t - seg.t0) / seg.h;
        let basis = [s, s * s, s * s * s, s * s * s * s];
        Ok((0..self.dim)
            .map(|i| {
                let q = &seg.q[4 * i..4 * i + 4];
                seg.y0[i] + seg.h * (q[0] * basis[0] + q[1] * basis[1] + q[2] * basis[2] + q[3] * basis[3])
            })
            .collect())
    }

    /// Time derivative of the continuous extension at `t`.
    pub fn eval_derivative(&self, t: f64) -> Result<Vec<f64>> {
        let Some(seg) = self.locate(t)? else {
            return Ok(vec![0.0; self.dim]);
        };
        let s = (t - seg.t0) / seg.h;
        let basis = [1.0, 2.0 * s, 3.0 * s * s, 4.0 * s * s * s];
        Ok((0..self.dim)
            .map(|i| {
                let q = &seg.q[4 * i..4 * i + 4];
                q[0] * basis[0] + q[1] * basis[1] + q[2] * basis[2] + q[3] * basis[3]
            })
            .collect())
    }

    /// Accepted (t, y) pairs, starting with the initial condition.
    pub fn knots(&self) -> Vec<(f64, Vec<f64>)> {
        if self.segments.is_empty() {
            return vec![(self.t_start, self.y_start.clone())];
        }
        let mut out: Vec<(f64, Vec<f64>)> = self.segments.iter().map(|s| (s.t0, s.y0.clone())).collect();
        out.push((self.t_end, self.y_end.clone()));
        out
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t_end` (either direction).
///
/// The right-hand side may stop the run by returning `Err`; the trajectory up
/// to the last accepted step is returned together with the [`Outcome`].
pub fn integrate_with_events<F, E>(
    mut rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    opts: &OdeOptions,
) -> Result<(DenseTrajectory, Outcome<E>)>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> std::result::Result<(), E>,
{
    opts.validate()?;
    if !(t0.is_finite() && t_end.is_finite()) || y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial condition"));
    }
    let dim = y0.len();
    let mut traj = DenseTrajectory {
        dim,
        t_start: t0,
        y_start: y0.to_vec(),
        segments: Vec::new(),
        t_end: t0,
        y_end: y0.to_vec(),
    };
    if t_end == t0 {
        return Ok((traj, Outcome::Completed));
    }
    let dir = (t_end - t0).signum();

    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    let mut t = t0;
    let mut y = y0.to_vec();
    if let Err(reason) = rhs(t, &y, &mut k[0]) {
        return Ok((traj, Outcome::Halted { t, reason }));
    }
    if k[0].iter().any(|v| !v.is_finite()) {
        return Ok((traj, Outcome::NonFinite { t }));
    }

    let mut h_abs = match opts.initial_step {
        Some(h) => h.abs(),
        None => initial_step(&y, &k[0], opts, (t_end - t0).abs()),
    }
    .min(opts.max_step);

    let mut stage = vec![0.0; dim];
    let mut y_new = vec![0.0; dim];
    let mut steps = 0usize;

    loop {
        if (t_end - t) * dir <= 0.0 {
            return Ok((traj, Outcome::Completed));
        }
        if steps == opts.max_steps {
            return Ok((traj, Outcome::StepLimit { t }));
        }
        let min_step = 16.0 * f64::EPSILON * t.abs().max(1.0);
        let remaining = (t_end - t).abs();
        if h_abs >= remaining {
            h_abs = remaining;
        }
        let mut rejected = false;
        loop {
            if h_abs < min_step {
                return Ok((traj, Outcome::StepUnderflow { t }));
            }
            let h = dir * h_abs;
            let t_new = if h_abs == remaining { t_end } else { t + h };

            for s in 1..7 {
                for i in 0..dim {
                    let acc: f64 = A[s].iter().enumerate().map(|(j, a)| a * k[j][i]).sum();
                    stage[i] = y[i] + h * acc;
                }
                if let Err(reason) = rhs(t + C[s] * h, &stage, &mut k[s]) {
                    return Ok((
                        traj,
                        Outcome::Halted {
                            t: t + C[s] * h,
                            reason,
                        },
                    ));
                }
                if k[s].iter().any(|v| !v.is_finite()) {
                    return Ok((traj, Outcome::NonFinite { t }));
                }
            }
            // Stage 7 is evaluated at the 5th-order solution (FSAL).
            y_new.copy_from_slice(&stage);

            let mut err_sq = 0.0;
            for i in 0..dim {
                let e: f64 = h * (0..7).map(|j| E[j] * k[j][i]).sum::<f64>();
                let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
                err_sq += (e / sc) * (e / sc);
            }
            let err = if dim == 0 { 0.0 } else { (err_sq / dim as f64).sqrt() };

            if err <= 1.0 {
                let mut q = vec![0.0; 4 * dim];
                for i in 0..dim {
                    for j in 0..4 {
                        q[4 * i + j] = (0..7).map(|m| k[m][i] * P[m][j]).sum();
                    }
                }
                traj.segments.push(Segment {
                    t0: t,
                    h,
                    y0: y.clone(),
                    q,
                });
                t = t_new;
                y.copy_from_slice(&y_new);
                traj.t_end = t;
                traj.y_end.copy_from_slice(&y);
                let last = k.pop().expect("seven stages");
                k.insert(0, last);
                steps += 1;

                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                let factor = if rejected { factor.min(1.0) } else { factor };
                h_abs = (h_abs * factor).min(opts.max_step);
                break;
            }
            if !err.is_finite() {
                h_abs *= MIN_FACTOR;
            } else {
                h_abs *= (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            }
            rejected = true;
        }
    }
}

/// Integrates an infallible system; any early stop is reported as divergence
/// at the last valid `t`.
pub fn integrate_ode<F>(mut rhs: F, t0: f64, y0: &[f64], t_end: f64, opts: &OdeOptions) -> Result<DenseTrajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let (traj, outcome) = integrate_with_events(
        |t, y, dy| {
            rhs(t, y, dy);
            Ok::<(), ()>(())
        },
        t0,
        y0,
        t_end,
        opts,
    )?;
    match outcome {
        Outcome::Completed => Ok(traj),
        Outcome::Halted { .. }
        | Outcome::StepUnderflow { .. }
        | Outcome::NonFinite { .. }
        | Outcome::StepLimit { .. } => Err(Error::Divergence { t: traj.t_end() }),
    }
}

/// Starting step heuristic from Hairer, Nørsett & Wanner, simplified to a
/// single right-hand-side evaluation.
fn initial_step(y: &[f64], f0: &[f64], opts: &OdeOptions, span: f64) -> f64 {
    let dim = y.len().max(1) as f64;
    let scale = |i: usize| opts.abs_tol + opts.rel_tol * y[i].abs();
    let d0 = (y.iter().enumerate().map(|(i, v)| (v / scale(i)).powi(2)).sum::<f64>() / dim).sqrt();
    let d1 = (f0.iter().enumerate().map(|(i, v)| (v / scale(i)).powi(2)).sum::<f64>() / dim).sqrt();
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let opts = OdeOptions::with_tolerances(1e-12, 1e-12);
        let traj = integrate_ode(|_, y, dy| dy[0] = y[0], 0.0, &[1.0], 2.0, &opts).unwrap();
        let y = traj.eval(2.0).unwrap()[0];
        assert!((y - 2.0_f64.exp()).abs() < 1e-10 * y);
        // Dense output between steps.
        let mid = traj.eval(0.7371).unwrap()[0];
        assert!((mid - 0.7371_f64.exp()).abs() < 1e-10);
        let d = traj.eval_derivative(0.7371).unwrap()[0];
        assert!((d - 0.7371_f64.exp()).abs() < 1e-8);
    }

    #[test]
    fn harmonic_oscillator_backward() {
        let opts = OdeOptions::with_tolerances(1e-11, 1e-12);
        let traj = integrate_ode(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            0.0,
            &[0.0, 1.0],
            -3.0,
            &opts,
        )
        .unwrap();
        for &t in &[-0.3, -1.1, -2.5, -3.0] {
            let y = traj.eval(t).unwrap();
            assert!((y[0] - f64::sin(t)).abs() < 1e-9, "t = {t}");
            assert!((y[1] - f64::cos(t)).abs() < 1e-9, "t = {t}");
        }
        assert!(traj.eval(0.5).is_err());
    }

    #[test]
    fn finite_time_blow_up_is_divergence() {
        let opts = OdeOptions::with_tolerances(1e-10, 1e-10);
        let err = integrate_ode(|_, y, dy| dy[0] = y[0] * y[0], 0.0, &[1.0], 2.0, &opts).unwrap_err();
        match err {
            Error::Divergence { t } => assert!(t < 1.0 && t > 0.99, "t = {t}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn halting_rhs_reports_event() {
        let opts = OdeOptions::default();
        let (traj, outcome) = integrate_with_events(
            |t, _y, dy| {
                if t > 1.5 {
                    return Err("stop");
                }
                dy[0] = 1.0;
                Ok(())
            },
            0.0,
            &[0.0],
            5.0,
            &opts,
        )
        .unwrap();
        match outcome {
            Outcome::Halted { reason, .. } => assert_eq!(reason, "stop"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(traj.t_end() <= 1.5);
    }

    #[test]
    fn interpolant_hits_knots_exactly() {
        let opts = OdeOptions::with_tolerances(1e-9, 1e-9);
        let traj = integrate_ode(|t, _, dy| dy[0] = t.cos(), 0.0, &[0.0], 4.0, &opts).unwrap();
        for (t, y) in traj.knots() {
            let v = traj.eval(t).unwrap();
            assert!((v[0] - y[0]).abs() < 1e-14);
        }
    }
}
