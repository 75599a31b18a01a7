use rayon::prelude::*;
use serde::Serialize;

use shrinker_core::geometry::{metric_duality_defect, shrinker_defect};
use shrinker_core::numerics::AnalyticField;
use shrinker_core::quadratics::build_quadratic;
use shrinker_core::sampling::{random_point_in_ball, rng_for};
use shrinker_core::{Branch, Result, ScalarField};

use super::{check_dim, check_positive, random_hessian, stream, sweep_targets, trial_dim, Outcome, Stats};
use crate::args::DefectArgs;
use crate::error::CliError;
use crate::report::{num, Report, Table};

const RADIUS: f64 = 3.0;
/// Constant added to `u` for the shift-invariance column.
const SHIFT: f64 = 1.75;
const DUALITY_TOL: f64 = 1e-9;

struct Trial {
    n: usize,
    duality_defect: f64,
    shrinker_defect: f64,
    /// `|defect(u + c) − defect(u)|`, expected to be exactly zero.
    shift_gap: f64,
}

#[derive(Serialize)]
struct BranchSummary {
    branch: Branch,
    trials: usize,
    duality_defect: Stats,
    shrinker_defect: Stats,
    max_shift_gap: f64,
    pass: bool,
}

pub fn run(args: &DefectArgs) -> std::result::Result<Outcome, CliError> {
    check_dim(args.n)?;
    check_positive("--step", args.step)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut table = Table::new(
        "defect.csv",
        &[
            "branch",
            "trial",
            "n",
            "duality_defect",
            "shrinker_defect",
            "shift_invariance",
        ],
    );
    let mut summaries = Vec::new();
    for target in sweep_targets(&args.tau)? {
        let trials: Vec<Trial> = (0..args.trials)
            .into_par_iter()
            .map(|i| -> Result<Trial> {
                let mut rng = rng_for(args.seed, stream(target.branch, i));
                let n = trial_dim(args.n, i);
                let (tp, a) = random_hessian(&target, n, &mut rng);
                let sol = build_quadratic(&tp, a.clone())?;
                let x = random_point_in_ball(n, RADIUS, &mut rng);
                let moved = AnalyticField::new(
                    n,
                    |y: &[f64]| sol.value(y).map_or(f64::NAN, |v| v + SHIFT),
                    |y: &[f64]| sol.gradient(y).unwrap_or_else(|_| vec![f64::NAN; n]),
                    |y: &[f64]| sol.hessian(y).unwrap_or_else(|_| a.scale(f64::NAN)),
                );
                let d = shrinker_defect(&tp, &sol, &x, args.step)?;
                let dm = shrinker_defect(&tp, &moved, &x, args.step)?;
                Ok(Trial {
                    n,
                    duality_defect: metric_duality_defect(&tp, &a)?,
                    shrinker_defect: d,
                    shift_gap: (dm - d).abs(),
                })
            })
            .collect::<Result<_>>()?;
        for (i, t) in trials.iter().enumerate() {
            table.push(vec![
                target.branch.tag().into(),
                i.to_string(),
                t.n.to_string(),
                num(t.duality_defect),
                num(t.shrinker_defect),
                num(t.shift_gap),
            ]);
        }
        let duality = Stats::of(trials.iter().map(|t| t.duality_defect));
        let shrinker = Stats::of(trials.iter().map(|t| t.shrinker_defect));
        let max_shift_gap = trials.iter().map(|t| t.shift_gap).fold(0.0, f64::max);
        summaries.push(BranchSummary {
            branch: target.branch,
            trials: trials.len(),
            duality_defect: duality,
            shrinker_defect: shrinker,
            max_shift_gap,
            pass: duality.max <= DUALITY_TOL && shrinker.max <= args.tol && max_shift_gap == 0.0,
        });
    }
    let pass = summaries.iter().all(|s| s.pass);
    Ok(Outcome {
        report: Report::new("defect", args, serde_json::json!({ "branches": summaries }), pass)?,
        tables: vec![table],
        documents: Vec::new(),
    })
}
