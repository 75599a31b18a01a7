use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::certificate::{BoundCheck, Certificate, ConeCheck, SampleCloud, Witness};
use crate::construct::phase_ode::{logistic_slope, solve_phase_ode, PhaseOdeConfig, PhaseTrajectory};
use crate::construct::w1::{assemble_nd, assemble_w1, NdAssembly, W1Field, DEFAULT_DELTA, PHASE_IDENTITY_TOL};
use crate::error::{Error, Result, Stage};
use crate::numerics::{eig_sym, ScalarField};
use crate::operators::shrinker_residual;
use crate::sampling::{random_point_in_ball, rng_for};
use crate::tau::{Branch, TauParams};
use crate::transforms::{normalize_counterexample_branch, NegChart, NegNormalization};

/// Residual threshold for a passing certificate.
pub const CERTIFICATE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    pub tp: TauParams,
    pub n: usize,
    pub ode: PhaseOdeConfig,
    /// Quadrature node spacing for `w₁`.
    pub delta: f64,
    /// Certification ball radius, in the normalized chart.
    pub cloud_radius: f64,
    pub axis_samples: usize,
    pub random_samples: usize,
    pub seed: u64,
}

impl CounterexampleConfig {
    pub fn new(tp: TauParams, n: usize, a0: f64, a1: f64) -> Self {
        Self {
            tp,
            n,
            ode: PhaseOdeConfig::new(a0, a1),
            delta: DEFAULT_DELTA,
            cloud_radius: 10.0,
            axis_samples: 2001,
            random_samples: 2000,
            seed: 0,
        }
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.ode.rel_tol = rel_tol;
        self.ode.abs_tol = abs_tol;
        self
    }
}

/// The NEG solution `u` in its original chart.
pub type CounterexampleField = NegNormalization<NdAssembly<Arc<W1Field>>>;

/// A certified non-quadratic entire solution of the NEG equation.
pub struct Counterexample {
    config: CounterexampleConfig,
    w1: Arc<W1Field>,
    u: CounterexampleField,
    certificate: Certificate,
}

impl Counterexample {
    pub fn config(&self) -> &CounterexampleConfig {
        &self.config
    }

    /// The solution of the original equation.
    pub fn u(&self) -> &CounterexampleField {
        &self.u
    }

    /// The solution of the normalized equation `Σ ln(μ/(1−μ)) = −w + ½⟨x, Dw⟩`.
    pub fn w(&self) -> &NdAssembly<Arc<W1Field>> {
        self.u.inner()
    }

    pub fn w1(&self) -> &W1Field {
        &self.w1
    }

    pub fn trajectory(&self) -> &PhaseTrajectory {
        self.w1.trajectory()
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// Re-runs certification on the stored solution.
    pub fn recertify(&self) -> Result<Certificate> {
        certify(&self.config, &self.w1, &self.u)
    }
}

/// Normalized-chart certification points: an evenly spaced diameter along
/// `e₁` plus seeded uniform points in the ball.
fn cloud_points(cfg: &CounterexampleConfig) -> Vec<Vec<f64>> {
    let (n, r) = (cfg.n, cfg.cloud_radius);
    let mut pts = Vec::with_capacity(cfg.axis_samples + cfg.random_samples);
    let m = cfg.axis_samples;
    for i in 0..m {
        let mut p = vec![0.0; n];
        p[0] = if m == 1 {
            0.0
        } else {
            -r + 2.0 * r * i as f64 / (m - 1) as f64
        };
        pts.push(p);
    }
    let mut rng = rng_for(cfg.seed, 0);
    for _ in 0..cfg.random_samples {
        pts.push(random_point_in_ball(n, r, &mut rng));
    }
    pts
}

fn certify(cfg: &CounterexampleConfig, w1: &W1Field, u: &CounterexampleField) -> Result<Certificate> {
    let tp = cfg.tp;
    let cone = tp.cone();
    let scale = u.scale();
    let pts = cloud_points(cfg);
    let evals: Vec<(f64, f64, Vec<f64>)> = pts
        .par_iter()
        .map(|x| {
            let z: Vec<f64> = x.iter().map(|v| v * scale).collect();
            let res = shrinker_residual(&tp, u, &z)?;
            let margin = eig_sym(&u.hessian(&z)?)?
                .iter()
                .map(|l| cone.margin(l))
                .fold(f64::INFINITY, f64::min);
            Ok((res.abs(), margin, z))
        })
        .collect::<Result<_>>()?;

    let mut sup = 0.0;
    let mut argmax = vec![0.0; cfg.n];
    let mut min_margin = f64::INFINITY;
    for (res, margin, z) in &evals {
        if *res > sup {
            sup = *res;
            argmax.clone_from(z);
        }
        min_margin = min_margin.min(*margin);
    }

    let traj = w1.trajectory();
    let ode = traj.config();
    let end_slope = traj.phi_prime(ode.span)?;
    let bound = ode.slope_bound();
    let slack = |v: f64| ode.abs_tol + ode.rel_tol * v.abs();
    let bounds = vec![
        BoundCheck::at_most("phi'(T) <= a1 exp(exp(-a0)/a1^2)", end_slope, bound + slack(bound)),
        BoundCheck::at_most(
            "decrease of phi' on [0, T]",
            traj.monotonicity_violation(),
            slack(end_slope),
        ),
        BoundCheck::at_least("min phi' on [-T, 0]", traj.min_slope_backward(), f64::MIN_POSITIVE),
        BoundCheck::at_most("phase identity defect", w1.phase_identity_defect(), PHASE_IDENTITY_TOL),
    ];

    Ok(Certificate {
        equation: "sum_i f_tau(lambda_i(D^2 u)) = -u + <x, Du>/2".into(),
        cloud: SampleCloud {
            radius: cfg.cloud_radius,
            chart: "normalized w-chart; residual evaluated at z = c x in the u-chart".into(),
            axis_samples: cfg.axis_samples,
            random_samples: cfg.random_samples,
            seed: cfg.seed,
        },
        samples: pts.len(),
        residual_sup: sup,
        residual_argmax: argmax,
        threshold: CERTIFICATE_THRESHOLD,
        cone: Some(ConeCheck {
            interval: [cone.lower, cone.upper],
            ok: min_margin > 0.0,
            min_margin,
        }),
        witness: Witness {
            order: 3,
            location: vec![0.0; cfg.n],
            value: w1.third_derivative(0.0)?,
            expected: Some(ode.a1 * logistic_slope(ode.a0)),
        },
        bounds,
        phase_identity_defect: Some(w1.phase_identity_defect()),
        tail_estimate: Some(w1.tail_estimate()?),
        pass: false,
    }
    .finalize())
}

/// Runs the full pipeline: phase ODE, `w₁` quadrature, `n`-D assembly, the
/// map back to the NEG chart and certification. Failures carry the stage.
pub fn build_counterexample(cfg: &CounterexampleConfig) -> Result<Counterexample> {
    if cfg.tp.branch() != Branch::Negative {
        return Err(Error::UnsupportedBranch(cfg.tp.branch()));
    }
    if cfg.n == 0 {
        return Err(Error::InvalidInput("dimension must be at least 1".into()));
    }
    if !(cfg.cloud_radius > 0.0) {
        return Err(Error::InvalidInput("certification radius must be positive".into()));
    }
    let traj = match solve_phase_ode(&cfg.ode) {
        Ok(t) => Arc::new(t),
        Err(Error::TrivialSolution) => return Err(Error::TrivialSolution),
        Err(e) => return Err(e.in_stage(Stage::PhaseOde)),
    };
    let w1 = Arc::new(assemble_w1(traj, cfg.delta).map_err(|e| e.in_stage(Stage::AssembleW1))?);
    let w = assemble_nd(Arc::clone(&w1), cfg.n).map_err(|e| e.in_stage(Stage::AssembleNd))?;
    let u = normalize_counterexample_branch(&cfg.tp, NegChart::ToU, w).map_err(|e| e.in_stage(Stage::Normalize))?;
    let certificate = certify(cfg, &w1, &u).map_err(|e| e.in_stage(Stage::Certify))?;
    Ok(Counterexample {
        config: *cfg,
        w1,
        u,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: usize) -> CounterexampleConfig {
        let mut cfg = CounterexampleConfig::new(TauParams::from_cot(-2.0).unwrap(), n, 0.0, 1.0);
        cfg.axis_samples = 201;
        cfg.random_samples = 100;
        cfg
    }

    #[test]
    fn certificate_passes_and_reproduces() {
        let ce = build_counterexample(&small(2)).unwrap();
        let cert = ce.certificate();
        assert!(cert.pass, "{cert:?}");
        assert!(cert.residual_sup < 1e-6);
        assert_eq!(cert.witness.value, 0.25);
        let again = ce.recertify().unwrap();
        assert_eq!(&again, cert);
    }

    #[test]
    fn trivial_and_wrong_branch_inputs() {
        let mut cfg = small(1);
        cfg.ode.a1 = 0.0;
        assert_eq!(build_counterexample(&cfg).err(), Some(Error::TrivialSolution));
        cfg.tp = TauParams::harmonic();
        assert_eq!(
            build_counterexample(&cfg).err(),
            Some(Error::UnsupportedBranch(Branch::Harmonic))
        );
    }

    #[test]
    fn failures_name_their_stage() {
        let mut cfg = small(1);
        cfg.ode.rel_tol = -1.0;
        match build_counterexample(&cfg) {
            Err(Error::Stage { stage, .. }) => assert_eq!(stage, Stage::PhaseOde),
            other => panic!("unexpected {:?}", other.err()),
        }
    }
}
