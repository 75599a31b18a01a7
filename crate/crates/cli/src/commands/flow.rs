use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use shrinker_core::quadratics::build_quadratic;
use shrinker_core::sampling::{random_point_in_ball, rng_for};
use shrinker_core::transforms::self_similar_extension;
use shrinker_core::{Branch, Result, ScalarField};

use super::{check_dim, random_hessian, stream, sweep_targets, trial_dim, Outcome};
use crate::args::FlowArgs;
use crate::error::CliError;
use crate::report::{num, Report, Table};

/// Sampled times lie in `(T_MIN, T_MAX)`.
const T_MIN: f64 = -10.0;
const T_MAX: f64 = -0.1;
const RADIUS: f64 = 5.0;

struct Trial {
    n: usize,
    t: f64,
    defect: f64,
    /// `v(x, −1) − u(x)`, expected to be exactly zero.
    unit_time_gap: f64,
}

#[derive(Serialize)]
struct BranchSummary {
    branch: Branch,
    trials: usize,
    max_defect: f64,
    max_unit_time_gap: f64,
    pass: bool,
}

pub fn run(args: &FlowArgs) -> std::result::Result<Outcome, CliError> {
    check_dim(args.n)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut table = Table::new("flow_check.csv", &["branch", "trial", "n", "t", "defect"]);
    let mut summaries = Vec::new();
    for target in sweep_targets(&args.tau)? {
        let trials: Vec<Trial> = (0..args.trials)
            .into_par_iter()
            .map(|i| -> Result<Trial> {
                let mut rng = rng_for(args.seed, stream(target.branch, i));
                let n = trial_dim(args.n, i);
                let (tp, a) = random_hessian(&target, n, &mut rng);
                let sol = build_quadratic(&tp, a)?;
                let x = random_point_in_ball(n, RADIUS, &mut rng);
                let t = rng.gen_range(T_MIN..T_MAX);
                let s = self_similar_extension(&tp, &sol, &x, t)?;
                let unit = self_similar_extension(&tp, &sol, &x, -1.0)?;
                Ok(Trial {
                    n,
                    t,
                    defect: s.defect.abs(),
                    unit_time_gap: (unit.v - sol.value(&x)?).abs(),
                })
            })
            .collect::<Result<_>>()?;
        for (i, tr) in trials.iter().enumerate() {
            table.push(vec![
                target.branch.tag().into(),
                i.to_string(),
                tr.n.to_string(),
                num(tr.t),
                num(tr.defect),
            ]);
        }
        let max_defect = trials.iter().map(|t| t.defect).fold(0.0, f64::max);
        let max_unit_time_gap = trials.iter().map(|t| t.unit_time_gap).fold(0.0, f64::max);
        summaries.push(BranchSummary {
            branch: target.branch,
            trials: trials.len(),
            max_defect,
            max_unit_time_gap,
            pass: max_defect <= args.tol && max_unit_time_gap == 0.0,
        });
    }
    let pass = summaries.iter().all(|s| s.pass);
    Ok(Outcome {
        report: Report::new("flow-check", args, serde_json::json!({ "branches": summaries }), pass)?,
        tables: vec![table],
        documents: Vec::new(),
    })
}
