//! One module per subcommand. Each returns the report and the CSV tables;
//! `main` prints and writes them.

mod build;
mod defect;
mod flow;
mod legendre;
mod shoot;
mod verify;

pub use build::run as build_counterexample;
pub use defect::run as defect;
pub use flow::run as flow_check;
pub use legendre::run as legendre_check;
pub use shoot::run as shoot;
pub use verify::run as verify_quadratic;

use rand::Rng;
use serde::Serialize;

use shrinker_core::numerics::SymMatrix;
use shrinker_core::sampling::{admissible_eigenvalue, random_admissible_matrix, random_orthogonal, random_params};
use shrinker_core::{Branch, ConeSide, TauParams};

use crate::args::TauArgs;
use crate::error::CliError;
use crate::report::{Report, Table};

pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
    /// Extra JSON files for `--out`.
    pub documents: Vec<(&'static str, String)>,
}

/// Operators covered by a sweep: the explicit one, every random angle of one
/// branch, or every branch.
pub(crate) struct SweepTarget {
    pub branch: Branch,
    pub fixed: Option<TauParams>,
    pub side: Option<ConeSide>,
}

pub(crate) fn sweep_targets(tau: &TauArgs) -> Result<Vec<SweepTarget>, CliError> {
    let side = tau.side()?;
    if let Some(tp) = tau.explicit()? {
        return Ok(vec![SweepTarget {
            branch: tp.branch(),
            fixed: Some(tp),
            side,
        }]);
    }
    let branches = match tau.branch()? {
        Some(b) => vec![b],
        None => Branch::ALL.to_vec(),
    };
    Ok(branches
        .into_iter()
        .map(|branch| SweepTarget {
            branch,
            fixed: None,
            side,
        })
        .collect())
}

/// Independent RNG stream for one (branch, trial) pair.
pub(crate) fn stream(branch: Branch, trial: usize) -> u64 {
    let b = Branch::ALL.iter().position(|&x| x == branch).unwrap_or(0) as u64;
    (b << 32) | trial as u64
}

/// Dimension of a trial: fixed, or cycling through 1..=4.
pub(crate) fn trial_dim(n: Option<usize>, trial: usize) -> usize {
    n.unwrap_or(1 + trial % 4)
}

/// Random admissible Hessian for a sweep target.
pub(crate) fn random_hessian<R: Rng>(target: &SweepTarget, n: usize, rng: &mut R) -> (TauParams, SymMatrix) {
    let tp = target.fixed.unwrap_or_else(|| random_params(target.branch, rng));
    match target.side {
        Some(side) => {
            let tp = tp.with_side(side);
            let diag: Vec<f64> = (0..n).map(|_| admissible_eigenvalue(&tp, rng)).collect();
            let q = random_orthogonal(n, rng);
            (tp, SymMatrix::from_eigen(&q, &diag))
        }
        None => random_admissible_matrix(&tp, n, rng),
    }
}

pub(crate) fn check_dim(n: Option<usize>) -> Result<(), CliError> {
    match n {
        Some(0) => Err(CliError::Usage("--n must be at least 1".into())),
        _ => Ok(()),
    }
}

pub(crate) fn check_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{name} must be positive and finite, got {v}")))
    }
}

/// Max and mean of a sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub(crate) struct Stats {
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut max, mut sum, mut count) = (0.0f64, 0.0, 0usize);
        for v in values {
            max = max.max(v);
            sum += v;
            count += 1;
        }
        Self {
            max,
            mean: if count == 0 { 0.0 } else { sum / count as f64 },
        }
    }
}
