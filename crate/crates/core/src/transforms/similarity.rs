use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dot, ScalarField};
use crate::operators::f_tau_matrix;
use crate::tau::TauParams;

/// The self-similar flow `v(x, t) = −t u(x/√−t)` sampled at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarSample {
    pub v: f64,
    pub v_t: f64,
    /// `v_t − F_τ(λ(D²v))`.
    pub defect: f64,
}

/// Evaluates `v`, `∂_t v` and the flow defect at `(x, t)`, `t < 0`.
pub fn self_similar_extension<F: ScalarField + ?Sized>(
    tp: &TauParams,
    u: &F,
    x: &[f64],
    t: f64,
) -> Result<SelfSimilarSample> {
    if !(t < 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("time must be negative, got {t}")));
    }
    let s = (-t).sqrt();
    let y: Vec<f64> = x.iter().map(|v| v / s).collect();
    let uy = u.value(&y)?;
    let v = -t * uy;
    let v_t = -uy + 0.5 * dot(&u.gradient(&y)?, &y);
    // D²v(x, t) = D²u(y).
    let rhs = f_tau_matrix(tp, &u.hessian(&y)?).map_err(|e| e.at(&y))?;
    Ok(SelfSimilarSample {
        v,
        v_t,
        defect: v_t - rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::SymMatrix;
    use crate::quadratics::build_quadratic;

    #[test]
    fn quadratic_flow_has_no_defect() {
        let tp = TauParams::special_lagrangian();
        let sol = build_quadratic(&tp, SymMatrix::from_diag(&[0.5, -1.0])).unwrap();
        let s = self_similar_extension(&tp, &sol, &[1.0, 2.0], -0.25).unwrap();
        assert!(s.defect.abs() < 1e-13);
        assert!((s.v - (-(-0.25) * sol.value(&[2.0, 4.0]).unwrap())).abs() < 1e-14);
        assert!(self_similar_extension(&tp, &sol, &[1.0, 2.0], 0.0).is_err());
    }
}
