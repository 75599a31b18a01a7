use rayon::prelude::*;
use serde::Serialize;

use shrinker_core::geometry::{metric_duality_defect, shrinker_defect};
use shrinker_core::quadratics::{build_quadratic, verify_quadratic};
use shrinker_core::sampling::{random_point_in_ball, rng_for};
use shrinker_core::{Branch, Result};

use super::{check_dim, check_positive, random_hessian, stream, sweep_targets, trial_dim, Outcome, Stats};
use crate::args::VerifyArgs;
use crate::error::CliError;
use crate::report::{num, Report, Table};

/// Finite-difference step for the shrinker defect column.
const DEFECT_STEP: f64 = 1e-3;

struct Trial {
    n: usize,
    tau: f64,
    max_residual: f64,
    shrinker_defect: f64,
    duality_defect: f64,
}

#[derive(Serialize)]
struct BranchSummary {
    branch: Branch,
    trials: usize,
    max_residual: f64,
    worst_trial: usize,
    shrinker_defect: Stats,
    duality_defect: Stats,
    pass: bool,
}

pub fn run(args: &VerifyArgs) -> std::result::Result<Outcome, CliError> {
    check_dim(args.n)?;
    check_positive("--radius", args.radius)?;
    if args.trials == 0 || args.points == 0 {
        return Err(CliError::Usage("--trials and --points must be at least 1".into()));
    }
    let mut table = Table::new(
        "verify_quadratic.csv",
        &[
            "branch",
            "trial",
            "n",
            "tau",
            "max_residual",
            "shrinker_defect",
            "duality_defect",
        ],
    );
    let mut summaries = Vec::new();
    for target in sweep_targets(&args.tau)? {
        let trials: Vec<Trial> = (0..args.trials)
            .into_par_iter()
            .map(|t| -> Result<Trial> {
                let mut rng = rng_for(args.seed, stream(target.branch, t));
                let n = trial_dim(args.n, t);
                let (tp, a) = random_hessian(&target, n, &mut rng);
                let sol = build_quadratic(&tp, a.clone())?;
                let pts: Vec<Vec<f64>> = (0..args.points)
                    .map(|_| random_point_in_ball(n, args.radius, &mut rng))
                    .collect();
                let v = verify_quadratic(&sol, &pts)?;
                Ok(Trial {
                    n,
                    tau: tp.tau(),
                    max_residual: v.max_residual,
                    shrinker_defect: shrinker_defect(&tp, &sol, &pts[0], DEFECT_STEP)?,
                    duality_defect: metric_duality_defect(&tp, &a)?,
                })
            })
            .collect::<Result<_>>()?;

        let (worst_trial, max_residual) = trials.iter().enumerate().fold((0, 0.0), |(bi, bv), (i, t)| {
            if t.max_residual > bv {
                (i, t.max_residual)
            } else {
                (bi, bv)
            }
        });
        for (i, t) in trials.iter().enumerate() {
            table.push(vec![
                target.branch.tag().into(),
                i.to_string(),
                t.n.to_string(),
                num(t.tau),
                num(t.max_residual),
                num(t.shrinker_defect),
                num(t.duality_defect),
            ]);
        }
        summaries.push(BranchSummary {
            branch: target.branch,
            trials: trials.len(),
            max_residual,
            worst_trial,
            shrinker_defect: Stats::of(trials.iter().map(|t| t.shrinker_defect)),
            duality_defect: Stats::of(trials.iter().map(|t| t.duality_defect)),
            pass: max_residual <= args.tol,
        });
    }
    let pass = summaries.iter().all(|s| s.pass);
    Ok(Outcome {
        report: Report::new(
            "verify-quadratic",
            args,
            serde_json::json!({ "branches": summaries }),
            pass,
        )?,
        tables: vec![table],
        documents: Vec::new(),
    })
}
