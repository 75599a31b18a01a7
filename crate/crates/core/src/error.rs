use std::fmt;

use crate::tau::Branch;

/// Pipeline stage in which a construction failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    PhaseOde,
    AssembleW1,
    AssembleNd,
    Normalize,
    Certify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::PhaseOde => "phase-ode",
            Stage::AssembleW1 => "assemble-w1",
            Stage::AssembleNd => "assemble-nd",
            Stage::Normalize => "normalize",
            Stage::Certify => "certify",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("eigenvalue {eigenvalue} lies outside the admissible cone{}", at_suffix(.location))]
    ConeViolation {
        eigenvalue: f64,
        location: Option<Vec<f64>>,
    },

    #[error("spectrum straddles two cone components")]
    MixedComponents,

    #[error("value {y} is outside the attainable range ({lo}, {hi})")]
    Range { y: f64, lo: f64, hi: f64 },

    #[error("integration diverged at t = {t}")]
    Divergence { t: f64 },

    #[error("t = {t} is outside the available span [{lo}, {hi}]")]
    OutOfSpan { t: f64, lo: f64, hi: f64 },

    #[error("input is not strictly convex near t = {at}")]
    Convexity { at: f64 },

    #[error("weight |Dh|^(p-2) is singular at a critical point (p = {p})")]
    SingularWeight { p: f64 },

    #[error("spacelike condition violated: |Df| = {norm}")]
    Spacelike { norm: f64 },

    #[error("induced metric is degenerate")]
    DegenerateMetric,

    #[error("operation is not defined for the {0} branch")]
    UnsupportedBranch(Branch),

    #[error("input lies in the lower cone; apply symmetry_negate first")]
    LowerCone,

    #[error("a1 = 0 yields the trivial (quadratic) solution")]
    TrivialSolution,

    #[error("{stage} stage failed: {source}")]
    Stage { stage: Stage, source: Box<Error> },
}

fn at_suffix(location: &Option<Vec<f64>>) -> String {
    match location {
        Some(x) => format!(" at x = {x:?}"),
        None => String::new(),
    }
}

impl Error {
    /// Attaches an evaluation point to a cone violation; other errors pass through.
    pub fn at(self, x: &[f64]) -> Self {
        match self {
            Error::ConeViolation {
                eigenvalue,
                location: None,
            } => Error::ConeViolation {
                eigenvalue,
                location: Some(x.to_vec()),
            },
            other => other,
        }
    }

    pub fn in_stage(self, stage: Stage) -> Self {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
