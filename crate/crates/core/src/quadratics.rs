//! Exact quadratic solutions `u = ½⟨x, Ax⟩ − F_τ(λ(A))`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eig_sym, Backend, EigenSpectrum, QuadraticField, ScalarField, SymMatrix};
use crate::operators::{f_tau, shrinker_residual};
use crate::tau::TauParams;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSolution {
    tp: TauParams,
    spectrum: EigenSpectrum,
    field: QuadraticField,
}

impl QuadraticSolution {
    pub fn params(&self) -> &TauParams {
        &self.tp
    }

    pub fn matrix(&self) -> &SymMatrix {
        self.field.matrix()
    }

    pub fn spectrum(&self) -> &EigenSpectrum {
        &self.spectrum
    }

    /// The constant `c = −F_τ(λ(A))`.
    pub fn constant(&self) -> f64 {
        self.field.constant()
    }
}

impl ScalarField for QuadraticSolution {
    fn dim(&self) -> usize {
        self.field.dim()
    }

    fn backend(&self) -> Backend {
        Backend::Analytic
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.field.value(x)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.field.gradient(x)
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        self.field.hessian(x)
    }
}

/// The quadratic solution with Hessian `a`. Fails when `λ(a)` is not
/// admissible for `tp`.
pub fn build_quadratic(tp: &TauParams, a: SymMatrix) -> Result<QuadraticSolution> {
    let spectrum = eig_sym(&a)?;
    let c = -f_tau(tp, &spectrum)?;
    Ok(QuadraticSolution {
        tp: *tp,
        spectrum,
        field: QuadraticField::homogeneous(a, c)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticVerification {
    pub samples: usize,
    pub max_residual: f64,
    pub argmax: Vec<f64>,
}

/// Largest `|F_τ(D²u) − φ|` over `points`.
pub fn verify_quadratic(sol: &QuadraticSolution, points: &[Vec<f64>]) -> Result<QuadraticVerification> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    let residuals: Vec<f64> = points
        .par_iter()
        .map(|x| shrinker_residual(&sol.tp, sol, x).map(f64::abs))
        .collect::<Result<_>>()?;
    let (idx, max) = residuals
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    Ok(QuadraticVerification {
        samples: points.len(),
        max_residual: max,
        argmax: points[idx].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::{Branch, ConeSide};
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_4, SQRT_2};

    #[test]
    fn harmonic_identity_constant() {
        for n in 1..=4 {
            let sol = build_quadratic(&TauParams::harmonic(), SymMatrix::identity(n)).unwrap();
            assert_relative_eq!(sol.constant(), n as f64 * SQRT_2 / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn special_lagrangian_identity_constant() {
        let sol = build_quadratic(&TauParams::special_lagrangian(), SymMatrix::identity(3)).unwrap();
        assert_relative_eq!(sol.constant(), -3.0 * FRAC_PI_4, epsilon = 1e-15);
    }

    #[test]
    fn log_zero_matrix_constant() {
        // Oracle: 30-digit evaluation of (√(a²+1)/2b) ln((a+b)/(a−b)) at τ = π/6.
        let tp = TauParams::representative(Branch::Log);
        for n in 1..=3 {
            let sol = build_quadratic(&tp, SymMatrix::zeros(n)).unwrap();
            assert_relative_eq!(sol.constant(), n as f64 * 1.620_993_978_953_507, epsilon = 1e-13);
        }
    }

    #[test]
    fn neg_identity_constant() {
        // Oracle: 30-digit evaluation of f(1) at cot τ = −2.
        let tp = TauParams::from_cot(-2.0).unwrap();
        let sol = build_quadratic(&tp, SymMatrix::identity(2)).unwrap();
        assert_relative_eq!(sol.constant(), 2.0 * 0.850_092_667_074_359_8, epsilon = 1e-13);
    }

    #[test]
    fn inadmissible_matrix_is_rejected() {
        let tp = TauParams::harmonic().with_side(ConeSide::Upper);
        assert!(build_quadratic(&tp, SymMatrix::from_diag(&[-2.0, 1.0])).is_err());
        assert!(build_quadratic(&TauParams::monge_ampere(), SymMatrix::zeros(2)).is_err());
    }

    #[test]
    fn verification_reports_tiny_residual() {
        let a = SymMatrix::from_rows(&[vec![0.7, 0.1], vec![0.1, 0.2]]).unwrap();
        let sol = build_quadratic(&TauParams::monge_ampere(), a).unwrap();
        let pts: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![i as f64 * 0.3 - 3.0, 1.0 - i as f64 * 0.1])
            .collect();
        let rep = verify_quadratic(&sol, &pts).unwrap();
        assert_eq!(rep.samples, 20);
        assert!(rep.max_residual < 1e-13);
    }
}
