use serde::{Deserialize, Serialize};

/// A named inequality that was checked, e.g. `φ'(T) ≤ B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub ok: bool,
}

impl BoundCheck {
    /// `value ≤ limit`.
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_owned(),
            value,
            limit,
            ok: value <= limit,
        }
    }

    /// `value ≥ limit`.
    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_owned(),
            value,
            limit,
            ok: value >= limit,
        }
    }
}

/// Where and how densely the residual was sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleCloud {
    /// Points are drawn from the closed ball of this radius in the chart below.
    pub radius: f64,
    pub chart: String,
    pub axis_samples: usize,
    pub random_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeCheck {
    pub interval: [f64; 2],
    pub ok: bool,
    /// Smallest distance from a sampled eigenvalue to the cone boundary.
    pub min_margin: f64,
}

/// Evidence that the solution is not a quadratic: a non-zero derivative of
/// order three or higher.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub order: u32,
    pub location: Vec<f64>,
    pub value: f64,
    /// Independent closed-form value where one exists.
    pub expected: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub equation: String,
    pub cloud: SampleCloud,
    pub samples: usize,
    pub residual_sup: f64,
    pub residual_argmax: Vec<f64>,
    pub threshold: f64,
    pub cone: Option<ConeCheck>,
    pub witness: Witness,
    pub bounds: Vec<BoundCheck>,
    pub phase_identity_defect: Option<f64>,
    pub tail_estimate: Option<f64>,
    pub pass: bool,
}

impl Certificate {
    pub(crate) fn finalize(mut self) -> Self {
        self.pass = self.residual_sup <= self.threshold
            && self.cone.as_ref().is_none_or(|c| c.ok)
            && self.witness.value != 0.0
            && self.bounds.iter().all(|b| b.ok);
        self
    }
}
