//! The operator `F_τ(D²u)` and the residuals built on it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    dot, eig_sym, eigh_sym, fd_gradient, fd_hessian, norm, Backend, EigenSpectrum, ScalarField, SymMatrix,
};
use crate::tau::{df_dlambda, f_scalar, Component, TauParams};

/// The cone component containing the whole spectrum, or `None` when some
/// eigenvalue is inadmissible or the spectrum straddles two components.
pub fn admissible(tp: &TauParams, spec: &EigenSpectrum) -> Option<Component> {
    let mut comp = None;
    for lambda in spec.iter() {
        let c = tp.component_of(lambda)?;
        match comp {
            None => comp = Some(c),
            Some(prev) if prev != c => return None,
            Some(_) => {}
        }
    }
    comp
}

fn check_admissible(tp: &TauParams, spec: &EigenSpectrum) -> Result<()> {
    if admissible(tp, spec).is_some() {
        return Ok(());
    }
    match spec.iter().find(|&l| tp.component_of(l).is_none()) {
        Some(eigenvalue) => Err(Error::ConeViolation {
            eigenvalue,
            location: None,
        }),
        None => Err(Error::MixedComponents),
    }
}

/// `F_τ(λ) = Σ f_τ(λ_i)`; all eigenvalues must lie in one cone component.
pub fn f_tau(tp: &TauParams, spec: &EigenSpectrum) -> Result<f64> {
    check_admissible(tp, spec)?;
    spec.iter().map(|l| f_scalar(tp, l)).sum()
}

/// `F_τ(λ(H))`.
pub fn f_tau_matrix(tp: &TauParams, h: &SymMatrix) -> Result<f64> {
    f_tau(tp, &eig_sym(h)?)
}

/// `∂F_τ/∂H = Q diag(f_τ'(λ_i)) Qᵀ`.
pub fn linearization(tp: &TauParams, h: &SymMatrix) -> Result<SymMatrix> {
    let (spec, q) = eigh_sym(h)?;
    check_admissible(tp, &spec)?;
    let d: Vec<f64> = spec.iter().map(|l| df_dlambda(tp, l)).collect::<Result<_>>()?;
    Ok(SymMatrix::from_eigen(&q, &d))
}

/// `φ = −u + ½⟨x, Du⟩`.
pub fn phase<F: ScalarField + ?Sized>(u: &F, x: &[f64]) -> Result<f64> {
    u.phase(x)
}

/// `F_τ(λ(D²u(x))) − φ(x)`. Cone violations report the evaluation point.
pub fn shrinker_residual<F: ScalarField + ?Sized>(tp: &TauParams, u: &F, x: &[f64]) -> Result<f64> {
    let h = u.hessian(x)?;
    let lhs = f_tau_matrix(tp, &h).map_err(|e| e.at(x))?;
    Ok(lhs - phase(u, x)?)
}

/// The phase `φ` of `u` as a field. Derivatives are central differences of
/// `φ` with a fixed step.
pub struct PhaseField<F> {
    inner: F,
    step: f64,
}

impl<F: ScalarField> PhaseField<F> {
    pub fn new(inner: F, step: f64) -> Self {
        Self { inner, step }
    }
}

impl<F: ScalarField> ScalarField for PhaseField<F> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn backend(&self) -> Backend {
        Backend::GridFd
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        phase(&self.inner, x)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        fd_gradient(|y| phase(&self.inner, y), x, self.step)
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        fd_hessian(|y| phase(&self.inner, y), x, self.step)
    }
}

/// `a^{ij} D_ij φ − ½⟨x, Dφ⟩` with `a = ∂F_τ/∂H` at `D²u(x)` and the phase
/// derivatives taken by central differences of step `h`.
pub fn drift_residual<F: ScalarField + ?Sized>(tp: &TauParams, u: &F, x: &[f64], h: f64) -> Result<f64> {
    let a = linearization(tp, &u.hessian(x)?).map_err(|e| e.at(x))?;
    let phi = |y: &[f64]| phase(u, y);
    let grad = fd_gradient(phi, x, h)?;
    let hess = fd_hessian(phi, x, h)?;
    let n = x.len();
    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace += a.get(i, j) * hess.get(i, j);
        }
    }
    Ok(trace - 0.5 * dot(x, &grad))
}

/// Radial growth of `q(r) = u(rθ)/r²` compared with `q' = 2φ(rθ)/r³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRatio {
    pub q: f64,
    /// Five-point central difference of `q` in `r`.
    pub dq_dr: f64,
    /// `2φ(rθ)/r³`.
    pub expected: f64,
    pub defect: f64,
}

/// Evaluates [`GrowthRatio`] along the ray through the direction `theta`
/// (normalized internally). The difference step in `r` is `1e-3 · r`.
pub fn growth_ratio_check<F: ScalarField + ?Sized>(u: &F, theta: &[f64], r: f64) -> Result<GrowthRatio> {
    let len = norm(theta);
    if !(len > 0.0 && len.is_finite()) {
        return Err(Error::InvalidInput("direction must be non-zero".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {r}")));
    }
    let dir: Vec<f64> = theta.iter().map(|v| v / len).collect();
    let at = |s: f64| -> Vec<f64> { dir.iter().map(|v| v * s).collect() };
    let q = |s: f64| -> Result<f64> { Ok(u.value(&at(s))? / (s * s)) };
    let h = 1e-3 * r;
    let dq_dr = (q(r - 2.0 * h)? - 8.0 * q(r - h)? + 8.0 * q(r + h)? - q(r + 2.0 * h)?) / (12.0 * h);
    let expected = 2.0 * phase(u, &at(r))? / (r * r * r);
    Ok(GrowthRatio {
        q: q(r)?,
        dq_dr,
        expected,
        defect: (dq_dr - expected).abs(),
    })
}

/// `|Dh|^{p−2} Δh + (p−2)|Dh|^{p−4} ⟨Dh, D²h Dh⟩ − K⟨x, Dh⟩|Dh|^{p−2}`.
pub fn weighted_plaplace_residual<F: ScalarField + ?Sized>(h: &F, p: f64, k: f64, x: &[f64]) -> Result<f64> {
    let g = h.gradient(x)?;
    let hess = h.hessian(x)?;
    let gn = norm(&g);
    if gn == 0.0 {
        if p < 2.0 {
            return Err(Error::SingularWeight { p });
        }
        return Ok(if p == 2.0 { hess.trace() } else { 0.0 });
    }
    let w = gn.powf(p - 2.0);
    let curv = hess.quadratic_form(&g) / (gn * gn);
    Ok(w * hess.trace() + (p - 2.0) * w * curv - k * dot(x, &g) * w)
}

/// Residual of the spacelike mean curvature self-shrinker equation
/// `(δ_ij + f_i f_j/(1 − |Df|²)) f_ij + ½f − ½⟨x, Df⟩`.
pub fn mss_residual<F: ScalarField + ?Sized>(f: &F, x: &[f64]) -> Result<f64> {
    let g = f.gradient(x)?;
    let gn2 = dot(&g, &g);
    if !(gn2 < 1.0) {
        return Err(Error::Spacelike { norm: gn2.sqrt() });
    }
    let hess = f.hessian(x)?;
    let lhs = hess.trace() + hess.quadratic_form(&g) / (1.0 - gn2);
    Ok(lhs + 0.5 * f.value(x)? - 0.5 * dot(x, &g))
}
