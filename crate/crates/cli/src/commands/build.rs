use serde::Serialize;

use shrinker_core::construct::{
    build_counterexample, build_mss_counterexample, logistic, Certificate, CounterexampleConfig, MssConfig,
};
use shrinker_core::{Error, ScalarField, TauParams};

use super::{check_positive, Outcome};
use crate::args::BuildArgs;
use crate::error::CliError;
use crate::report::{num, Report, Table};

/// Largest quadrature or CSV node count accepted.
const MAX_NODES: f64 = 5e7;

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    args: &'a BuildArgs,
    params: Option<TauParams>,
}

#[derive(Serialize)]
struct NegResults<'a> {
    certificate: &'a Certificate,
    eigenvalue_interval: [f64; 2],
    w1_third_at_origin: f64,
    phi_prime_at_span: f64,
    ode_steps: usize,
}

#[derive(Serialize)]
struct MssResults<'a> {
    certificate: &'a Certificate,
    f_at_origin: f64,
    f_second_at_origin: f64,
}

fn certificate_json(cert: &Certificate) -> std::result::Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(cert)?;
    s.push('\n');
    Ok(s)
}

/// Sample times `−T, −T + h, …, T`.
fn samples(span: f64, step: f64) -> Vec<f64> {
    let m = (2.0 * span / step).round().max(1.0) as usize;
    (0..=m).map(|i| -span + 2.0 * span * i as f64 / m as f64).collect()
}

pub fn run(args: &BuildArgs) -> std::result::Result<Outcome, CliError> {
    check_positive("--span", args.span)?;
    check_positive("--tol", args.tol)?;
    check_positive("--grid-step", args.grid_step)?;
    check_positive("--radius", args.radius)?;
    check_positive("--csv-step", args.csv_step)?;
    if 2.0 * args.span / args.grid_step > MAX_NODES || 2.0 * args.span / args.csv_step > MAX_NODES {
        return Err(CliError::Usage(format!(
            "--span / --grid-step and --span / --csv-step must stay below {MAX_NODES:e} nodes"
        )));
    }
    if args.mss {
        run_mss(args)
    } else {
        run_neg(args)
    }
}

fn run_neg(args: &BuildArgs) -> std::result::Result<Outcome, CliError> {
    if args.n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let default = TauParams::from_cot(-2.0).expect("a = -2 is a NEG operator");
    let tp = args.tau.resolve_or(default)?;
    let mut cfg = CounterexampleConfig::new(tp, args.n, args.a0, args.a1).with_tolerances(args.tol, args.tol);
    cfg.ode.span = args.span;
    cfg.delta = args.grid_step;
    cfg.cloud_radius = args.radius;
    cfg.axis_samples = args.axis_samples;
    cfg.random_samples = args.random_samples;
    cfg.seed = args.seed;
    let ce = build_counterexample(&cfg).map_err(|e| match e {
        Error::UnsupportedBranch(b) => {
            CliError::Parameter(format!("build-counterexample needs a NEG operator, got {b}"))
        }
        e => e.into(),
    })?;

    let w1 = ce.w1();
    let traj = ce.trajectory();
    let mut table = Table::new(
        "trajectory.csv",
        &["t", "phi", "phi_prime", "w1", "w1_prime", "w1_second"],
    );
    for t in samples(args.span, args.csv_step) {
        let (phi, dphi) = traj.state(t)?;
        let (w, dw) = w1.jet(t)?;
        table.push(vec![num(t), num(phi), num(dphi), num(w), num(dw), num(logistic(phi))]);
    }
    let cone = tp.cone();
    let cert = ce.certificate();
    let results = NegResults {
        certificate: cert,
        eigenvalue_interval: [cone.lower, cone.upper],
        w1_third_at_origin: w1.third_derivative(0.0)?,
        phi_prime_at_span: traj.phi_prime(args.span)?,
        ode_steps: traj.step_count(),
    };
    let config = Config { args, params: Some(tp) };
    Ok(Outcome {
        report: Report::new("build-counterexample", config, results, cert.pass)?,
        tables: vec![table],
        documents: vec![("certificate.json", certificate_json(cert)?)],
    })
}

fn run_mss(args: &BuildArgs) -> std::result::Result<Outcome, CliError> {
    let mut cfg = MssConfig::new(args.phi0, args.s0);
    cfg.span = args.span;
    cfg.rel_tol = args.tol;
    cfg.abs_tol = args.tol;
    cfg.delta = args.grid_step;
    cfg.cloud_radius = args.radius;
    cfg.samples = args.axis_samples;
    let ce = build_mss_counterexample(&cfg)?;
    let f = ce.field();
    let mut table = Table::new("trajectory.csv", &["x", "s", "phi", "f", "f_prime", "f_second"]);
    for x in samples(args.span, args.csv_step) {
        let (s, phi) = f.state(x)?;
        let d = s.tanh();
        table.push(vec![
            num(x),
            num(s),
            num(phi),
            num(f.value(&[x])?),
            num(d),
            num((1.0 - d * d) * phi),
        ]);
    }
    let cert = ce.certificate();
    let results = MssResults {
        certificate: cert,
        f_at_origin: f.value(&[0.0])?,
        f_second_at_origin: f.hessian(&[0.0])?.get(0, 0),
    };
    let config = Config { args, params: None };
    Ok(Outcome {
        report: Report::new("build-counterexample", config, results, cert.pass)?,
        tables: vec![table],
        documents: vec![("certificate.json", certificate_json(cert)?)],
    })
}
