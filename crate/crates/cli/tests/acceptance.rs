//! Acceptance suite: one PASS/FAIL line per criterion, with the wall-clock
//! budget counted as part of the criterion. Exits non-zero if any fails.

use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use shrinker_core::construct::{build_counterexample, build_mss_counterexample, CounterexampleConfig, MssConfig};
use shrinker_core::geometry::{metric_duality_defect, shrinker_defect};
use shrinker_core::numerics::{AnalyticField, Grid1D, QuadraticField, SymMatrix};
use shrinker_core::operators::growth_ratio_check;
use shrinker_core::quadratics::{build_quadratic, verify_quadratic};
use shrinker_core::radial::{radial_quadratic_reference, shoot_radial, RadialOptions};
use shrinker_core::sampling::{random_admissible_matrix, random_params, random_point_in_ball, rng_for};
use shrinker_core::tau::f_scalar;
use shrinker_core::transforms::{convexify_shift, legendre_1d, legendre_dual_residual, self_similar_extension};
use shrinker_core::{Branch, Result, ScalarField, TauParams};

type Verdict = (bool, String);

fn random_quadratic(branch: Branch, n: usize, seed: u64, stream: u64) -> Result<(TauParams, SymMatrix)> {
    let mut rng = rng_for(seed, stream);
    let tp = random_params(branch, &mut rng);
    Ok(random_admissible_matrix(&tp, n, &mut rng))
}

fn branch_stream(b: usize, i: usize) -> u64 {
    ((b as u64) << 32) | i as u64
}

fn quadratic_exactness() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for (b, &branch) in Branch::ALL.iter().enumerate() {
        let maxes: Vec<f64> = (0..100)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(1, branch_stream(b, i));
                let n = 1 + i % 4;
                let tp = random_params(branch, &mut rng);
                let (tp, a) = random_admissible_matrix(&tp, n, &mut rng);
                let sol = build_quadratic(&tp, a)?;
                let pts: Vec<Vec<f64>> = (0..100).map(|_| random_point_in_ball(n, 5.0, &mut rng)).collect();
                Ok(verify_quadratic(&sol, &pts)?.max_residual)
            })
            .collect::<Result<_>>()?;
        worst = maxes.into_iter().fold(worst, f64::max);
    }
    Ok((
        worst <= 1e-10,
        format!("max residual {worst:.2e} over 6x100 solutions x 100 points"),
    ))
}

fn metric_duality() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    for (b, &branch) in Branch::ALL.iter().enumerate() {
        let d: Vec<f64> = (0..1000)
            .into_par_iter()
            .map(|i| {
                let (tp, h) = random_quadratic(branch, 1 + i % 4, 2, branch_stream(b, i))?;
                metric_duality_defect(&tp, &h)
            })
            .collect::<Result<_>>()?;
        worst = d.into_iter().fold(worst, f64::max);
    }
    Ok((
        worst <= 1e-9,
        format!("max duality defect {worst:.2e} over 6x1000 Hessians"),
    ))
}

fn shrinker_defects() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut shift_exact = true;
    for (b, &branch) in Branch::ALL.iter().enumerate() {
        let rows: Vec<(f64, bool)> = (0..100)
            .into_par_iter()
            .map(|i| {
                let n = 1 + i % 4;
                let (tp, a) = random_quadratic(branch, n, 3, branch_stream(b, i))?;
                let sol = build_quadratic(&tp, a)?;
                let x = random_point_in_ball(n, 3.0, &mut rng_for(3, branch_stream(b, i) ^ (1 << 63)));
                let moved = AnalyticField::new(
                    n,
                    |y: &[f64]| sol.value(y).unwrap() - 2.5,
                    |y: &[f64]| sol.gradient(y).unwrap(),
                    |y: &[f64]| sol.hessian(y).unwrap(),
                );
                let d = shrinker_defect(&tp, &sol, &x, 1e-3)?;
                Ok((d, d == shrinker_defect(&tp, &moved, &x, 1e-3)?))
            })
            .collect::<Result<_>>()?;
        for (d, same) in rows {
            worst = worst.max(d);
            shift_exact &= same;
        }
    }
    Ok((
        worst <= 1e-7 && shift_exact,
        format!("max defect {worst:.2e} at step 1e-3; constant shift exact: {shift_exact}"),
    ))
}

fn arctan_identity() -> Result<Verdict> {
    let mut rng = rng_for(4, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let tau = rng.gen_range(FRAC_PI_4..FRAC_PI_2);
        let tp = TauParams::from_angle(tau)?;
        let (a, b) = (tp.a(), tp.b());
        for _ in 0..10_000 {
            // λ + a + b log-uniform on [1e-8, 1e4].
            let s = 10f64.powf(rng.gen_range(-8.0..4.0));
            let l = s - a - b;
            if l + a + b <= 0.0 {
                continue;
            }
            let lhs = ((l + a - b) / (l + a + b)).atan();
            let rhs = ((l + a) / b).atan() - FRAC_PI_4;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max gap {worst:.2e} over 10 angles x 1e4 eigenvalues"),
    ))
}

fn counterexample_construction() -> Result<Verdict> {
    let tp = TauParams::from_cot(-2.0)?;
    let build = |tol: f64| {
        let mut cfg = CounterexampleConfig::new(tp, 2, 0.0, 1.0).with_tolerances(tol, tol);
        cfg.ode.span = 20.0;
        build_counterexample(&cfg)
    };
    let ce = build(1e-10)?;
    let cert = ce.certificate();
    let residual = cert.residual_sup;
    let cone_ok = cert.cone.as_ref().is_some_and(|c| c.ok && c.min_margin > 0.0);
    let expected_cone = [2.0 - 3f64.sqrt(), 2.0 + 3f64.sqrt()];
    let interval_ok = cert.cone.as_ref().is_some_and(|c| {
        (c.interval[0] - expected_cone[0]).abs() <= 1e-12 && (c.interval[1] - expected_cone[1]).abs() <= 1e-12
    });
    let third = ce.w1().third_derivative(0.0)?;
    let cfg = ce.config();
    let end_slope = ce.trajectory().phi_prime(cfg.ode.span)?;
    let slope_ok = end_slope <= E * (1.0 + cfg.ode.rel_tol) + cfg.ode.abs_tol;
    let tight = build(1e-11)?.certificate().residual_sup;
    let ratio = residual / tight;
    let ok = residual <= 1e-6 && cone_ok && interval_ok && (third - 0.25).abs() <= 1e-8 && slope_ok && ratio >= 5.0;
    Ok((
        ok,
        format!(
            "residual {residual:.2e}; cone {cone_ok}/{interval_ok}; w1'''(0) = {third}; phi'(T) = {end_slope:.6}; \
             residual ratio 1e-10 -> 1e-11: {ratio:.1}"
        ),
    ))
}

fn mss_construction() -> Result<Verdict> {
    let ce = build_mss_counterexample(&MssConfig::new(1.0, 0.0))?;
    let cert = ce.certificate();
    let slope = cert.bounds[0].value;
    let f2 = ce.field().hessian(&[0.0])?.get(0, 0);
    let ok = cert.residual_sup <= 1e-6 && cert.cloud.radius >= 10.0 && slope < 1.0 && (f2 - 1.0).abs() <= 1e-8;
    Ok((
        ok,
        format!("residual {:.2e}; sup|f'| = {slope}; f''(0) = {f2}", cert.residual_sup),
    ))
}

fn legendre_pipeline() -> Result<Verdict> {
    let grid = Grid1D::new(-2.0, 2.0, 1e-2)?;
    let half_square = QuadraticField::homogeneous(SymMatrix::identity(1), 0.0)?;
    let cosh = AnalyticField::new(
        1,
        |x: &[f64]| x[0].cosh(),
        |x: &[f64]| vec![x[0].sinh()],
        |x: &[f64]| SymMatrix::from_diag(&[x[0].cosh()]),
    );
    let inv = legendre_1d(&half_square, &grid)?
        .involution_defect
        .max(legendre_1d(&cosh, &grid)?.involution_defect);

    let tp = TauParams::harmonic();
    let grid = Grid1D::new(-3.0, 3.0, 1e-2)?;
    let (mut hess, mut dual, mut phase) = (0.0f64, 0.0f64, 0.0f64);
    for c in [-0.5, 0.0, 1.0, 2.5] {
        let w = convexify_shift(&tp, build_quadratic(&tp, SymMatrix::scalar(1, c))?)?;
        let r = legendre_dual_residual(&w, &grid)?;
        hess = hess.max(r.hessian_inversion);
        dual = dual.max(r.dual_residual);
        phase = phase.max(r.phase_residual);
    }
    Ok((
        inv <= 1e-9 && hess <= 1e-8 && dual <= 1e-5 && phase <= 1e-5,
        format!(
            "involution {inv:.2e}; hessian inversion {hess:.2e}; dual residual {dual:.2e}; phase residual {phase:.2e}"
        ),
    ))
}

fn self_similar() -> Result<Verdict> {
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for (b, &branch) in Branch::ALL.iter().enumerate() {
        let rows: Vec<(f64, bool)> = (0..1000)
            .into_par_iter()
            .map(|i| {
                let n = 1 + i % 3;
                let mut rng = rng_for(8, branch_stream(b, i));
                let tp = random_params(branch, &mut rng);
                let (tp, a) = random_admissible_matrix(&tp, n, &mut rng);
                let sol = build_quadratic(&tp, a)?;
                let x = random_point_in_ball(n, 5.0, &mut rng);
                let t = rng.gen_range(-10.0..-0.1);
                let s = self_similar_extension(&tp, &sol, &x, t)?;
                let unit = self_similar_extension(&tp, &sol, &x, -1.0)?;
                Ok((s.defect.abs(), unit.v == sol.value(&x)?))
            })
            .collect::<Result<_>>()?;
        for (d, e) in rows {
            worst = worst.max(d);
            exact &= e;
        }
    }
    Ok((
        worst <= 1e-10 && exact,
        format!("max flow defect {worst:.2e} over 6x1000 (x, t); v(x, -1) = u(x) exact: {exact}"),
    ))
}

fn radial_curvatures(b: Branch) -> [f64; 5] {
    match b {
        Branch::MongeAmpere => [0.2, 0.5, 1.0, 2.0, 4.0],
        Branch::Log => [-0.2, 0.0, 0.5, 1.0, 3.0],
        Branch::Harmonic => [-0.5, 0.0, 0.5, 1.0, 3.0],
        Branch::Arctan | Branch::SpecialLagrangian => [-3.0, -1.0, 0.0, 1.0, 3.0],
        Branch::Negative => [0.5, 1.0, 2.0, 3.0, 3.5],
    }
}

fn radial_shooting() -> Result<Verdict> {
    let opts = RadialOptions::default();
    let mut cases = Vec::new();
    for b in Branch::ALL {
        for c in radial_curvatures(b) {
            for n in 1..=3 {
                cases.push((b, c, n));
            }
        }
    }
    let rows: Vec<(f64, f64, bool)> = cases
        .par_iter()
        .map(|&(b, c, n)| {
            let tp = TauParams::representative(b);
            let u0 = -(n as f64) * f_scalar(&tp, c)?;
            let shot = shoot_radial(&tp, n, u0, 10.0, &opts)?;
            let reference = radial_quadratic_reference(&tp, n, c, 10.0, 11)?;
            let dev = shot.max_deviation(&reference, 10.0, 1001)?;
            let mut theta = vec![0.0; n];
            theta[0] = 1.0;
            let mut growth: f64 = 0.0;
            for r in [0.5, 2.0, 5.0, 9.0] {
                growth = growth.max(growth_ratio_check(&shot, &theta, r)?.defect);
            }
            Ok((dev, growth, shot.event().is_completed()))
        })
        .collect::<Result<_>>()?;
    let dev = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let growth = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let completed = rows.iter().all(|r| r.2);

    let perturbed = shoot_radial(&TauParams::special_lagrangian(), 2, -FRAC_PI_2 + 0.1, 50.0, &opts)?;
    let event = *perturbed.event();
    let non_completion = !event.is_completed() && event.r() < 50.0;
    Ok((
        dev <= 1e-6 && growth <= 1e-6 && completed && non_completion,
        format!(
            "{} profiles: max deviation {dev:.2e}, max growth defect {growth:.2e}, all completed {completed}; \
             perturbed SLAG run ended with {} at r = {} (non-completion required: {})",
            rows.len(),
            event.name(),
            event.r(),
            if non_completion { "met" } else { "not met" }
        ),
    ))
}

fn determinism() -> Result<Verdict> {
    let runs: [&[&str]; 5] = [
        &["verify-quadratic", "--trials", "20", "--seed", "7"],
        &["defect", "--trials", "20", "--seed", "7"],
        &["flow-check", "--trials", "200", "--seed", "7"],
        &["shoot", "--branch", "LOG", "--n", "3", "--c", "0.5"],
        &[
            "build-counterexample",
            "--axis-samples",
            "201",
            "--random-samples",
            "200",
            "--seed",
            "7",
        ],
    ];
    let exe = env!("CARGO_BIN_EXE_shrinker-lab");
    let mut identical = 0;
    for args in runs {
        let outputs: Vec<Vec<u8>> = ["1", "4", "4"]
            .iter()
            .map(|threads| {
                let out = Command::new(exe)
                    .args(args)
                    .env("SHRINKER_LAB_THREADS", threads)
                    .output()
                    .expect("binary runs");
                out.stdout
            })
            .collect();
        if !outputs[0].is_empty() && outputs.iter().all(|o| *o == outputs[0]) {
            identical += 1;
        }
    }
    Ok((
        identical == runs.len(),
        format!(
            "{identical}/{} commands byte-identical across 3 runs (1 and 4 threads)",
            runs.len()
        ),
    ))
}

fn main() {
    type Check = fn() -> Result<Verdict>;
    let criteria: [(&str, &str, Option<u64>, Check); 10] = [
        ("1", "quadratic exactness", Some(10), quadratic_exactness),
        ("2", "metric-Hessian duality", Some(5), metric_duality),
        ("3", "shrinker defect", Some(10), shrinker_defects),
        ("4", "arctan identity", Some(1), arctan_identity),
        (
            "5",
            "NEG counterexample construction",
            Some(30),
            counterexample_construction,
        ),
        ("6", "MSS construction", Some(10), mss_construction),
        ("7", "Legendre pipeline", Some(10), legendre_pipeline),
        ("8", "self-similar extension", Some(2), self_similar),
        ("9", "radial shooting", Some(20), radial_shooting),
        ("10", "determinism", None, determinism),
    ];
    let mut failures = 0;
    for (id, title, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_budget = budget.is_none_or(|s| elapsed < Duration::from_secs(s));
        let budget_note = match budget {
            Some(s) => format!("{:.2} s of {s} s", elapsed.as_secs_f64()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        let (pass, detail) = match outcome {
            Ok((ok, detail)) => (ok && in_budget, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] criterion {id:>2} {title}: {detail} ({budget_note})",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} passed, {failures} failed", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
