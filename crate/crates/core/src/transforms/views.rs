//! Affine and scaling transforms between branches, as lazy field views.
//!
//! Each view keeps the backing field and reports its backend, so analytic
//! inputs give exact derivatives.

use std::f64::consts::{FRAC_PI_4, SQRT_2};

use crate::error::{Error, Result};
use crate::numerics::{check_point, dot, eig_sym, Backend, ScalarField, SymMatrix};
use crate::operators::phase;
use crate::tau::{Branch, ConeSide, TauParams};

/// `u ↦ −k|x|² − u`, exchanging the two cones of HARM (`k = 1`) and LOG
/// (`k = a`).
pub struct SymmetryNegate<F> {
    inner: F,
    k: f64,
}

impl<F> SymmetryNegate<F> {
    /// Recovers the original field exactly.
    pub fn undo(self) -> F {
        self.inner
    }

    pub fn coefficient(&self) -> f64 {
        self.k
    }
}

/// Applies the cone-exchanging symmetry. Returns the parameters with the
/// cone side flipped together with the transformed field.
pub fn symmetry_negate<F: ScalarField>(tp: &TauParams, u: F) -> Result<(TauParams, SymmetryNegate<F>)> {
    let k = match tp.branch() {
        Branch::Harmonic => 1.0,
        Branch::Log => tp.a(),
        other => return Err(Error::UnsupportedBranch(other)),
    };
    Ok((tp.with_side(tp.side().flipped()), SymmetryNegate { inner: u, k }))
}

impl<F: ScalarField> ScalarField for SymmetryNegate<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn backend(&self) -> Backend {
        self.inner.backend()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(-self.k * dot(x, x) - self.inner.value(x)?)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.inner.gradient(x)?;
        Ok(x.iter().zip(g).map(|(xi, gi)| -2.0 * self.k * xi - gi).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        Ok(self.inner.hessian(x)?.scale(-1.0).add_scalar_identity(-2.0 * self.k))
    }
}

/// `u ↦ u + ½k|x|²` moving the upper cone onto the positive cone: `k = 1`
/// for HARM, `k = a − b` for LOG.
pub struct ConvexShift<F> {
    inner: F,
    k: f64,
}

impl<F> ConvexShift<F> {
    pub fn shift(&self) -> f64 {
        self.k
    }
}

pub fn convexify_shift<F: ScalarField>(tp: &TauParams, u: F) -> Result<ConvexShift<F>> {
    let k = match tp.branch() {
        Branch::Harmonic => 1.0,
        Branch::Log => tp.a() - tp.b(),
        other => return Err(Error::UnsupportedBranch(other)),
    };
    if tp.side() == ConeSide::Lower {
        return Err(Error::LowerCone);
    }
    Ok(ConvexShift { inner: u, k })
}

impl<F: ScalarField> ScalarField for ConvexShift<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn backend(&self) -> Backend {
        self.inner.backend()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(self.inner.value(x)? + 0.5 * self.k * dot(x, x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.inner.gradient(x)?;
        Ok(x.iter().zip(g).map(|(xi, gi)| gi + self.k * xi).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        Ok(self.inner.hessian(x)?.add_scalar_identity(self.k))
    }

    /// The shift is homogeneous of degree two, so the phase is unchanged.
    fn phase(&self, x: &[f64]) -> Result<f64> {
        self.inner.phase(x)
    }
}

fn positive_spectrum<F: ScalarField + ?Sized>(w: &F, x: &[f64]) -> Result<Vec<f64>> {
    let spec = eig_sym(&w.hessian(x)?)?;
    if let Some(mu) = spec.iter().find(|&m| !(m > 0.0)) {
        return Err(Error::ConeViolation {
            eigenvalue: mu,
            location: Some(x.to_vec()),
        });
    }
    Ok(spec.values().to_vec())
}

/// Residual of the shifted equation satisfied by a [`ConvexShift`] output:
/// `−√2 Σ 1/μ_i − φ` (HARM) or `(√(a²+1)/2b) Σ ln(μ_i/(μ_i + 2b)) − φ` (LOG),
/// with `μ` the eigenvalues of `D²w`.
pub fn effective_residual<F: ScalarField + ?Sized>(tp: &TauParams, w: &F, x: &[f64]) -> Result<f64> {
    let mu = positive_spectrum(w, x)?;
    let lhs: f64 = match tp.branch() {
        Branch::Harmonic => mu.iter().map(|m| -SQRT_2 / m).sum(),
        Branch::Log => {
            let b = tp.b();
            tp.root() / (2.0 * b) * mu.iter().map(|m| (m / (m + 2.0 * b)).ln()).sum::<f64>()
        }
        other => return Err(Error::UnsupportedBranch(other)),
    };
    Ok(lhs - phase(w, x)?)
}

/// `w(x) = (b/√(a²+1)) u(s x) + (a/2b)|x|² − nπ/4` with `s = (a²+1)^{1/4}/b`,
/// taking an ATAN solution to a special Lagrangian one. Eigenvalues map as
/// `λ ↦ (λ + a)/b`.
pub struct SlagReduction<F> {
    inner: F,
    amp: f64,
    s: f64,
    quad: f64,
}

impl<F> SlagReduction<F> {
    /// Factor relating the two residuals: `res_SLAG(x) = amp · res_ATAN(s x)`.
    pub fn amplitude(&self) -> f64 {
        self.amp
    }

    /// Spatial scale `s`; the view at `x` reads the backing field at `s x`.
    pub fn scale(&self) -> f64 {
        self.s
    }
}

pub fn reduce_to_special_lagrangian<F: ScalarField>(tp: &TauParams, u: F) -> Result<SlagReduction<F>> {
    if tp.branch() != Branch::Arctan {
        return Err(Error::UnsupportedBranch(tp.branch()));
    }
    let (a, b, root) = (tp.a(), tp.b(), tp.root());
    Ok(SlagReduction {
        inner: u,
        amp: b / root,
        s: root.sqrt() / b,
        quad: a / (2.0 * b),
    })
}

impl<F: ScalarField> SlagReduction<F> {
    fn mapped(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v * self.s).collect()
    }
}

impl<F: ScalarField> ScalarField for SlagReduction<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn backend(&self) -> Backend {
        self.inner.backend()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let n = x.len() as f64;
        Ok(self.amp * self.inner.value(&self.mapped(x))? + self.quad * dot(x, x) - n * FRAC_PI_4)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let g = self.inner.gradient(&self.mapped(x))?;
        Ok(x.iter()
            .zip(g)
            .map(|(xi, gi)| self.amp * self.s * gi + 2.0 * self.quad * xi)
            .collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        let h = self.inner.hessian(&self.mapped(x))?;
        Ok(h.scale(self.amp * self.s * self.s).add_scalar_identity(2.0 * self.quad))
    }
}

/// Direction of the NEG normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegChart {
    /// From a NEG solution `u` to the unit-interval chart `w`.
    ToW,
    /// From a unit-interval solution `w` back to `u`.
    ToU,
}

/// The NEG normalization
/// `w(x) = (2b/√(a²+1)) u(c x) + ((a+b)/4b)|x|²` with `c = (a²+1)^{1/4}/(2b)`,
/// and its inverse. Eigenvalues map as `μ = (λ + a + b)/(2b)`, taking the NEG
/// cone onto `(0, 1)`, and phases as `φ_u(c x) = (√(a²+1)/2b) φ_w(x)`.
pub struct NegNormalization<F> {
    inner: F,
    chart: NegChart,
    amp: f64,
    c: f64,
    quad: f64,
}

impl<F> NegNormalization<F> {
    pub fn chart(&self) -> NegChart {
        self.chart
    }

    /// `c`: the w-chart point `x` corresponds to the u-chart point `c x`.
    pub fn scale(&self) -> f64 {
        self.c
    }

    /// `2b/√(a²+1)`, the factor from u-phases to w-phases.
    pub fn amplitude(&self) -> f64 {
        self.amp
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

pub fn normalize_counterexample_branch<F: ScalarField>(
    tp: &TauParams,
    chart: NegChart,
    field: F,
) -> Result<NegNormalization<F>> {
    if tp.branch() != Branch::Negative {
        return Err(Error::UnsupportedBranch(tp.branch()));
    }
    let (a, b, root) = (tp.a(), tp.b(), tp.root());
    Ok(NegNormalization {
        inner: field,
        chart,
        amp: 2.0 * b / root,
        c: root.sqrt() / (2.0 * b),
        quad: (a + b) / (4.0 * b),
    })
}

/// `μ = (λ + a + b)/(2b)`.
pub fn neg_eigen_to_unit(tp: &TauParams, lambda: f64) -> f64 {
    (lambda + tp.a() + tp.b()) / (2.0 * tp.b())
}

/// `λ = 2bμ − a − b`.
pub fn neg_eigen_from_unit(tp: &TauParams, mu: f64) -> f64 {
    2.0 * tp.b() * mu - tp.a() - tp.b()
}

impl<F: ScalarField> ScalarField for NegNormalization<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn backend(&self) -> Backend {
        self.inner.backend()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(self.dim(), x)?;
        match self.chart {
            NegChart::ToW => {
                let z: Vec<f64> = x.iter().map(|v| v * self.c).collect();
                Ok(self.amp * self.inner.value(&z)? + self.quad * dot(x, x))
            }
            NegChart::ToU => {
                let y: Vec<f64> = x.iter().map(|v| v / self.c).collect();
                Ok((self.inner.value(&y)? - self.quad * dot(&y, &y)) / self.amp)
            }
        }
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self.dim(), x)?;
        match self.chart {
            NegChart::ToW => {
                let z: Vec<f64> = x.iter().map(|v| v * self.c).collect();
                let g = self.inner.gradient(&z)?;
                Ok(x.iter()
                    .zip(g)
                    .map(|(xi, gi)| self.amp * self.c * gi + 2.0 * self.quad * xi)
                    .collect())
            }
            NegChart::ToU => {
                let y: Vec<f64> = x.iter().map(|v| v / self.c).collect();
                let g = self.inner.gradient(&y)?;
                Ok(y.iter()
                    .zip(g)
                    .map(|(yi, gi)| (gi - 2.0 * self.quad * yi) / (self.amp * self.c))
                    .collect())
            }
        }
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(self.dim(), x)?;
        match self.chart {
            NegChart::ToW => {
                let z: Vec<f64> = x.iter().map(|v| v * self.c).collect();
                let h = self.inner.hessian(&z)?;
                Ok(h.scale(self.amp * self.c * self.c).add_scalar_identity(2.0 * self.quad))
            }
            NegChart::ToU => {
                let y: Vec<f64> = x.iter().map(|v| v / self.c).collect();
                let h = self.inner.hessian(&y)?;
                if let Some(mu) = eig_sym(&h)?.iter().find(|&m| !(m > 0.0 && m < 1.0)) {
                    return Err(Error::ConeViolation {
                        eigenvalue: mu,
                        location: Some(y),
                    });
                }
                let s = 1.0 / (self.amp * self.c * self.c);
                Ok(h.add_scalar_identity(-2.0 * self.quad).scale(s))
            }
        }
    }
}

/// `Σ ln(μ_i/(1 − μ_i)) − φ_w` for `μ = λ(D²w) ∈ (0, 1)`.
pub fn effective_logit_residual<F: ScalarField + ?Sized>(w: &F, x: &[f64]) -> Result<f64> {
    let spec = eig_sym(&w.hessian(x)?)?;
    let mut lhs = 0.0;
    for mu in spec.iter() {
        if !(mu > 0.0 && mu < 1.0) {
            return Err(Error::ConeViolation {
                eigenvalue: mu,
                location: Some(x.to_vec()),
            });
        }
        lhs += (mu / (1.0 - mu)).ln();
    }
    Ok(lhs - phase(w, x)?)
}
