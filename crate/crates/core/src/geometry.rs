//! Gradient graphs `{(x, Du(x))}` in `ℝⁿ × ℝⁿ` with the pseudo-metric
//! `g_τ = sin τ δ_0 + cos τ g_0`.

use crate::error::{Error, Result};
use crate::numerics::{dot, fd_gradient, norm, DenseMatrix, ScalarField, SymMatrix};
use crate::operators::{f_tau_matrix, linearization};
use crate::tau::TauParams;

/// The ambient form `[[sin τ I, cos τ I], [cos τ I, sin τ I]]` on `ℝ²ⁿ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmbientMetric {
    n: usize,
    sin: f64,
    cos: f64,
}

impl AmbientMetric {
    pub fn new(tp: &TauParams, n: usize) -> Self {
        Self {
            n,
            sin: tp.sin_tau(),
            cos: tp.cos_tau(),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn matrix(&self) -> DenseMatrix {
        let n = self.n;
        DenseMatrix::from_fn(2 * n, |i, j| {
            if i == j {
                self.sin
            } else if i % n == j % n {
                self.cos
            } else {
                0.0
            }
        })
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.n;
        let (ux, uy) = u.split_at(n);
        let (vx, vy) = v.split_at(n);
        self.sin * (dot(ux, vx) + dot(uy, vy)) + self.cos * (dot(ux, vy) + dot(uy, vx))
    }

    /// The form has eigenvalues `sin τ ± cos τ`.
    pub fn is_positive_definite(&self) -> bool {
        self.sin > self.cos.abs()
    }
}

/// Tangent vectors `E_i = e_i + Σ_j H_ij e_{n+j}` of the gradient graph.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentFrame {
    vectors: Vec<Vec<f64>>,
}

impl TangentFrame {
    pub fn new(h: &SymMatrix) -> Self {
        let n = h.dim();
        let vectors = (0..n)
            .map(|i| {
                let mut e = vec![0.0; 2 * n];
                e[i] = 1.0;
                for j in 0..n {
                    e[n + j] = h.get(i, j);
                }
                e
            })
            .collect();
        Self { vectors }
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Gram matrix `⟨E_i, E_j⟩_τ`, computed from the ambient form directly.
    pub fn gram(&self, metric: &AmbientMetric) -> SymMatrix {
        SymMatrix::from_fn(self.vectors.len(), |i, j| {
            metric.inner(&self.vectors[i], &self.vectors[j])
        })
    }
}

/// `g = sin τ (I + H²) + 2 cos τ H`.
pub fn induced_metric(tp: &TauParams, h: &SymMatrix) -> SymMatrix {
    let n = h.dim();
    &(&SymMatrix::identity(n) + &h.square()).scale(tp.sin_tau()) + &h.scale(2.0 * tp.cos_tau())
}

/// `max |g⁻¹ − ∂F_τ/∂H|` over all entries.
pub fn metric_duality_defect(tp: &TauParams, h: &SymMatrix) -> Result<f64> {
    let ginv = induced_metric(tp, h).inverse()?;
    let lin = linearization(tp, h)?;
    Ok((&ginv - &lin).max_abs())
}

/// `V − Σ g^{ij} ⟨V, E_j⟩_τ E_i`: the `g_τ`-normal part of `V` along the graph
/// with Hessian `h`.
pub fn normal_project(tp: &TauParams, h: &SymMatrix, v: &[f64]) -> Result<Vec<f64>> {
    let n = h.dim();
    if v.len() != 2 * n {
        return Err(Error::InvalidInput(format!(
            "ambient vector must have length {}, got {}",
            2 * n,
            v.len()
        )));
    }
    let metric = AmbientMetric::new(tp, n);
    let frame = TangentFrame::new(h);
    let g = induced_metric(tp, h);
    let rhs: Vec<f64> = frame.vectors().iter().map(|e| metric.inner(v, e)).collect();
    let coeffs = g.to_dense().solve(&rhs)?;
    let mut out = v.to_vec();
    for (c, e) in coeffs.iter().zip(frame.vectors()) {
        for (o, ei) in out.iter_mut().zip(e) {
            *o -= c * ei;
        }
    }
    Ok(out)
}

/// Mean curvature vector `(0, D_x F_τ(D²u))^⊥` with `D_x F_τ` by central
/// differences of step `step`.
pub fn mean_curvature<F: ScalarField + ?Sized>(tp: &TauParams, u: &F, x: &[f64], step: f64) -> Result<Vec<f64>> {
    let n = x.len();
    let h = u.hessian(x)?;
    let df = fd_gradient(|y| f_tau_matrix(tp, &u.hessian(y)?), x, step).map_err(|e| e.at(x))?;
    let mut v = vec![0.0; 2 * n];
    v[n..].copy_from_slice(&df);
    normal_project(tp, &h, &v)
}

/// Size of `H + ½X^⊥` for the position vector `X = (x, Du(x))`. Measured in
/// `g_τ` when the ambient form is positive definite, otherwise Euclidean.
pub fn shrinker_defect<F: ScalarField + ?Sized>(tp: &TauParams, u: &F, x: &[f64], step: f64) -> Result<f64> {
    let n = x.len();
    let h = u.hessian(x)?;
    let mc = mean_curvature(tp, u, x, step)?;
    let mut pos = x.to_vec();
    pos.extend(u.gradient(x)?);
    let xn = normal_project(tp, &h, &pos)?;
    let d: Vec<f64> = mc.iter().zip(&xn).map(|(m, p)| m + 0.5 * p).collect();
    let metric = AmbientMetric::new(tp, n);
    Ok(if metric.is_positive_definite() {
        metric.inner(&d, &d).max(0.0).sqrt()
    } else {
        norm(&d)
    })
}
