//! Entire non-planar solutions of the spacelike mean curvature self-shrinker
//! equation in `ℝ^{1,1}`, through the reduction `f' = tanh s`, `s' = φ`,
//! `φ' = (x/2) sech²(s) φ`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::construct::certificate::{BoundCheck, Certificate, SampleCloud, Witness};
use crate::construct::counterexample::CERTIFICATE_THRESHOLD;
use crate::error::{Error, Result, Stage};
use crate::numerics::{
    check_point, integrate_ode, Antiderivative, Backend, DenseTrajectory, OdeOptions, ScalarField, SymMatrix,
};
use crate::operators::mss_residual;

/// `sech² s`, evaluated without overflow.
pub fn sech2(s: f64) -> f64 {
    let e = (-2.0 * s.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MssConfig {
    /// `φ(0)`; must be non-zero.
    pub phi0: f64,
    /// `s(0)`.
    pub s0: f64,
    pub span: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub delta: f64,
    pub cloud_radius: f64,
    pub samples: usize,
}

impl MssConfig {
    pub fn new(phi0: f64, s0: f64) -> Self {
        Self {
            phi0,
            s0,
            span: 20.0,
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            delta: 1e-3,
            cloud_radius: 10.0,
            samples: 2001,
        }
    }
}

/// The profile `f` on `[−T, T]`: `f' = tanh s`, `f(0) = −2φ(0)`,
/// `f'' = (1 − f'²) φ` with `f'` as returned.
#[derive(Clone, Debug)]
pub struct MssField {
    forward: Arc<DenseTrajectory>,
    backward: Arc<DenseTrajectory>,
    quad: Antiderivative,
}

impl MssField {
    /// `(s(x), φ(x))`.
    pub fn state(&self, x: f64) -> Result<(f64, f64)> {
        let y = if x >= 0.0 {
            self.forward.eval(x)?
        } else {
            self.backward.eval(x)?
        };
        Ok((y[0], y[1]))
    }

    fn slope(&self, x: f64) -> Result<f64> {
        Ok(self.state(x)?.0.tanh())
    }
}

impl ScalarField for MssField {
    fn dim(&self) -> usize {
        1
    }

    fn backend(&self) -> Backend {
        Backend::Trajectory
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(1, x)?;
        self.quad.eval(|t| self.slope(t), x[0])
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(1, x)?;
        Ok(vec![self.slope(x[0])?])
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(1, x)?;
        let (s, phi) = self.state(x[0])?;
        let d = s.tanh();
        Ok(SymMatrix::from_diag(&[(1.0 - d * d) * phi]))
    }
}

pub struct MssCounterexample {
    config: MssConfig,
    field: MssField,
    certificate: Certificate,
}

impl MssCounterexample {
    pub fn config(&self) -> &MssConfig {
        &self.config
    }

    pub fn field(&self) -> &MssField {
        &self.field
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }
}

pub fn build_mss_counterexample(cfg: &MssConfig) -> Result<MssCounterexample> {
    if !(cfg.phi0.is_finite() && cfg.s0.is_finite()) {
        return Err(Error::NonFinite("initial data"));
    }
    if cfg.phi0 == 0.0 {
        return Err(Error::TrivialSolution);
    }
    if !(cfg.span > 0.0 && cfg.cloud_radius > 0.0 && cfg.cloud_radius <= cfg.span) {
        return Err(Error::InvalidInput("need 0 < radius <= span".into()));
    }
    let opts = OdeOptions::with_tolerances(cfg.rel_tol, cfg.abs_tol);
    let rhs = |x: f64, y: &[f64], dy: &mut [f64]| {
        dy[0] = y[1];
        dy[1] = 0.5 * x * sech2(y[0]) * y[1];
    };
    let y0 = [cfg.s0, cfg.phi0];
    let forward = integrate_ode(rhs, 0.0, &y0, cfg.span, &opts).map_err(|e| e.in_stage(Stage::PhaseOde))?;
    let backward = integrate_ode(rhs, 0.0, &y0, -cfg.span, &opts).map_err(|e| e.in_stage(Stage::PhaseOde))?;
    let slope = |x: f64| -> Result<f64> {
        let y = if x >= 0.0 { forward.eval(x)? } else { backward.eval(x)? };
        Ok(y[0].tanh())
    };
    let quad = Antiderivative::build(slope, -cfg.span, cfg.span, cfg.delta, -2.0 * cfg.phi0)
        .map_err(|e| e.in_stage(Stage::AssembleW1))?;
    let field = MssField {
        forward: Arc::new(forward),
        backward: Arc::new(backward),
        quad,
    };

    let m = cfg.samples.max(2);
    let r = cfg.cloud_radius;
    let mut sup = 0.0;
    let mut argmax = 0.0;
    let mut max_slope: f64 = 0.0;
    for i in 0..m {
        let x = -r + 2.0 * r * i as f64 / (m - 1) as f64;
        let res = mss_residual(&field, &[x])
            .map_err(|e| e.in_stage(Stage::Certify))?
            .abs();
        if res > sup {
            sup = res;
            argmax = x;
        }
        max_slope = max_slope.max(field.slope(x)?.abs());
    }
    let certificate = Certificate {
        equation: "(delta_ij + f_i f_j/(1 - |Df|^2)) f_ij = -f/2 + <x, Df>/2".into(),
        cloud: SampleCloud {
            radius: r,
            chart: "x".into(),
            axis_samples: m,
            random_samples: 0,
            seed: 0,
        },
        samples: m,
        residual_sup: sup,
        residual_argmax: vec![argmax],
        threshold: CERTIFICATE_THRESHOLD,
        cone: None,
        witness: Witness {
            order: 2,
            location: vec![0.0],
            value: field.hessian(&[0.0])?.get(0, 0),
            expected: Some(sech2(cfg.s0) * cfg.phi0),
        },
        bounds: vec![BoundCheck::at_most("sup |f'| < 1", max_slope, 1.0 - f64::EPSILON)],
        phase_identity_defect: None,
        tail_estimate: None,
        pass: false,
    }
    .finalize();
    Ok(MssCounterexample {
        config: *cfg,
        field,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sech2_matches_definition() {
        for s in [-3.0_f64, 0.0, 0.5, 12.9] {
            let want = 1.0 / s.cosh().powi(2);
            assert!((sech2(s) - want).abs() <= 1e-15 * want.max(1e-300) + 1e-300);
        }
        assert_eq!(sech2(1000.0), 0.0);
    }

    #[test]
    fn standard_mss_certificate() {
        let mut cfg = MssConfig::new(1.0, 0.0);
        cfg.samples = 401;
        let ce = build_mss_counterexample(&cfg).unwrap();
        let cert = ce.certificate();
        assert!(cert.pass, "{cert:?}");
        assert_eq!(ce.field().value(&[0.0]).unwrap(), -2.0);
        assert_eq!(cert.witness.value, 1.0);
    }

    #[test]
    fn zero_phase_is_trivial() {
        assert_eq!(
            build_mss_counterexample(&MssConfig::new(0.0, 0.3)).err(),
            Some(Error::TrivialSolution)
        );
    }
}
