use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use shrinker_core::{Branch, ConeSide, TauParams};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "shrinker-lab",
    version,
    about = "Numerical lab for self-shrinker potential equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Random-matrix sweep over exact quadratic solutions.
    ///
    /// CSV (verify_quadratic.csv): branch, trial, n, tau, max_residual,
    /// shrinker_defect, duality_defect.
    VerifyQuadratic(VerifyArgs),
    /// Builds and certifies a non-quadratic entire solution (NEG branch, or the
    /// spacelike mean curvature shrinker with --mss).
    ///
    /// CSV (trajectory.csv): t, phi, phi_prime, w1, w1_prime, w1_second; with
    /// --mss: x, s, phi, f, f_prime, f_second.
    BuildCounterexample(BuildArgs),
    /// Shoots a radial solution from the origin and records how it ends.
    ///
    /// CSV (profile.csv): r, u, du, d2u.
    Shoot(ShootArgs),
    /// Self-similar flow defect of quadratic solutions at random (x, t).
    ///
    /// CSV (flow_check.csv): branch, trial, n, t, defect.
    FlowCheck(FlowArgs),
    /// Legendre involution and harmonic dual-equation residuals in 1-D.
    ///
    /// CSV (legendre_check.csv): case, involution_defect, hessian_inversion,
    /// dual_residual, phase_residual.
    LegendreCheck(LegendreArgs),
    /// Metric duality and shrinker defect of the gradient graph of quadratic
    /// solutions.
    ///
    /// CSV (defect.csv): branch, trial, n, duality_defect, shrinker_defect,
    /// shift_invariance.
    Defect(DefectArgs),
}

/// Operator selection: `--tau` (angle), `--a` (cot τ) or `--branch`.
#[derive(Args, Debug, Clone, Serialize)]
pub struct TauArgs {
    /// Branch tag: MA, LOG, HARM, ATAN, SLAG, NEG.
    #[arg(long)]
    pub branch: Option<String>,
    /// Angle τ in (−π/4, π/2].
    #[arg(long, allow_hyphen_values = true, conflicts_with = "a")]
    pub tau: Option<f64>,
    /// a = cot τ.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Cone component for LOG and HARM: upper or lower. Sweeps pick one at
    /// random when absent.
    #[arg(long)]
    pub side: Option<String>,
}

impl TauArgs {
    pub fn branch(&self) -> Result<Option<Branch>, CliError> {
        self.branch
            .as_deref()
            .map(|s| s.parse::<Branch>().map_err(|e| CliError::Usage(e.to_string())))
            .transpose()
    }

    pub fn side(&self) -> Result<Option<ConeSide>, CliError> {
        self.side
            .as_deref()
            .map(|s| s.parse::<ConeSide>().map_err(|e| CliError::Usage(e.to_string())))
            .transpose()
    }

    /// Explicit parameters, or `None` when neither `--tau` nor `--a` was
    /// given. `--branch` must agree with the angle when both are present.
    pub fn explicit(&self) -> Result<Option<TauParams>, CliError> {
        let tp = match (self.tau, self.a) {
            (Some(t), _) => TauParams::from_angle(t).map_err(|e| CliError::Usage(format!("--tau: {e}")))?,
            (None, Some(a)) => TauParams::from_cot(a).map_err(|e| CliError::Usage(format!("--a: {e}")))?,
            (None, None) => return Ok(None),
        };
        if let Some(b) = self.branch()? {
            if b != tp.branch() {
                return Err(CliError::Usage(format!(
                    "--branch {b} does not match the operator selected by --tau/--a ({})",
                    tp.branch()
                )));
            }
        }
        Ok(Some(self.apply_side(tp)?))
    }

    /// Single operator: `--tau`/`--a`, else the representative of
    /// `--branch`, else `default`.
    pub fn resolve_or(&self, default: TauParams) -> Result<TauParams, CliError> {
        if let Some(tp) = self.explicit()? {
            return Ok(tp);
        }
        let tp = match self.branch()? {
            Some(b) => TauParams::representative(b),
            None => default,
        };
        self.apply_side(tp)
    }

    fn apply_side(&self, tp: TauParams) -> Result<TauParams, CliError> {
        Ok(match self.side()? {
            Some(s) => tp.with_side(s),
            None => tp,
        })
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutArgs {
    /// Directory for report.json and CSV files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub tau: TauArgs,
    /// Dimension; by default trials cycle through 1..=4.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Sample points per trial.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Radius of the sampling ball.
    #[arg(long, default_value_t = 5.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub tau: TauArgs,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub a1: f64,
    /// Spacelike mean curvature shrinker in ℝ^{1,1} instead of NEG.
    #[arg(long)]
    pub mss: bool,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s0: f64,
    /// ODE span T.
    #[arg(long, default_value_t = 20.0)]
    pub span: f64,
    /// Relative and absolute ODE tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Quadrature node spacing.
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    /// Certification radius.
    #[arg(long, default_value_t = 10.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 2001)]
    pub axis_samples: usize,
    #[arg(long, default_value_t = 2000)]
    pub random_samples: usize,
    /// Spacing of the exported trajectory samples.
    #[arg(long, default_value_t = 0.01)]
    pub csv_step: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ShootArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub tau: TauArgs,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// U(0); defaults to the value giving curvature --c.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "c")]
    pub u0: Option<f64>,
    /// U''(0), used when --u0 is absent.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    #[arg(long, default_value_t = 10.0)]
    pub rmax: f64,
    /// Relative and absolute ODE tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// ψ(r₀) off the regular family.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub offset: f64,
    /// Growth-ratio defect tolerance on completed profiles.
    #[arg(long, default_value_t = 1e-6)]
    pub growth_tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub tau: TauArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct LegendreArgs {
    /// Half-width of the source interval.
    #[arg(long, default_value_t = 3.0)]
    pub span: f64,
    #[arg(long, default_value_t = 1e-2)]
    pub grid_step: f64,
    /// Involution tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DefectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub tau: TauArgs,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Finite-difference step for the mean curvature.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutArgs,
}
