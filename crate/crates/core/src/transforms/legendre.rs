//! One-dimensional Legendre transform by exact pointwise inversion of `w'`.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{check_point, Backend, Grid1D, GridField1D, ScalarField, SymMatrix};
use crate::operators::{phase, weighted_plaplace_residual, PhaseField};

const INVERSION_MAX_ITER: usize = 400;

fn derivative<F: ScalarField + ?Sized>(w: &F, t: f64) -> Result<f64> {
    Ok(w.gradient(&[t])?[0])
}

fn second_derivative<F: ScalarField + ?Sized>(w: &F, t: f64) -> Result<f64> {
    Ok(w.hessian(&[t])?.get(0, 0))
}

/// Solves `w'(t) = y` on `[lo, hi]` for increasing `w'`, by bisection with
/// Newton steps where `w''` is usable.
fn invert_derivative<F: ScalarField + ?Sized>(w: &F, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (ya, yb) = (derivative(w, a)?, derivative(w, b)?);
    // Grid arithmetic can land a few ulps past the ends; those snap to them.
    let slack = 8.0 * f64::EPSILON * ya.abs().max(yb.abs());
    if y < ya - slack || y > yb + slack {
        return Err(Error::OutOfSpan { t: y, lo: ya, hi: yb });
    }
    if y <= ya {
        return Ok(a);
    }
    if y >= yb {
        return Ok(b);
    }
    let tol = 1e-15 * (1.0 + y.abs());
    let mut t = 0.5 * (a + b);
    for _ in 0..INVERSION_MAX_ITER {
        let g = derivative(w, t)? - y;
        if g.abs() <= tol {
            return Ok(t);
        }
        if g < 0.0 {
            a = t;
        } else {
            b = t;
        }
        let curv = second_derivative(w, t).unwrap_or(f64::NAN);
        let newton = t - g / curv;
        let next = if curv.is_finite() && curv > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if next == t || b - a <= 2.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// The Legendre dual `w*(y) = x y − w(x)` with `w'(x) = y`, evaluated exactly
/// (up to root-finding) from the backing field on `[t_min, t_max]`.
pub struct LegendreDual1D<F> {
    w: F,
    t_min: f64,
    t_max: f64,
    y_min: f64,
    y_max: f64,
}

impl<F: ScalarField> LegendreDual1D<F> {
    pub fn new(w: F, t_min: f64, t_max: f64) -> Result<Self> {
        if w.dim() != 1 {
            return Err(Error::InvalidInput("Legendre transform needs a 1-D field".into()));
        }
        let y_min = derivative(&w, t_min)?;
        let y_max = derivative(&w, t_max)?;
        if !(y_max > y_min) {
            return Err(Error::Convexity { at: t_min });
        }
        Ok(Self {
            w,
            t_min,
            t_max,
            y_min,
            y_max,
        })
    }

    /// Range of `w'` over the source interval, i.e. the dual's domain.
    pub fn domain(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    /// The point `x` with `w'(x) = y`.
    pub fn preimage(&self, y: f64) -> Result<f64> {
        invert_derivative(&self.w, y, self.t_min, self.t_max)
    }

    pub fn inner(&self) -> &F {
        &self.w
    }
}

impl<F: ScalarField> ScalarField for LegendreDual1D<F> {
    fn dim(&self) -> usize {
        1
    }

    fn backend(&self) -> Backend {
        self.w.backend()
    }

    fn value(&self, y: &[f64]) -> Result<f64> {
        check_point(1, y)?;
        let x = self.preimage(y[0])?;
        Ok(x * y[0] - self.w.value(&[x])?)
    }

    fn gradient(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_point(1, y)?;
        Ok(vec![self.preimage(y[0])?])
    }

    /// `1/w''(x)`; infinite where `w'' = 0`.
    fn hessian(&self, y: &[f64]) -> Result<SymMatrix> {
        check_point(1, y)?;
        let x = self.preimage(y[0])?;
        let c = second_derivative(&self.w, x)?;
        if c < 0.0 {
            return Err(Error::Convexity { at: x });
        }
        Ok(SymMatrix::from_diag(&[1.0 / c]))
    }
}

/// Sampled Legendre transform on a uniform `y` grid spanning `w'([t_min, t_max])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transform1DResult {
    pub y: Vec<f64>,
    pub dual: Vec<f64>,
    /// `x(y)` with `w'(x) = y`.
    pub preimage: Vec<f64>,
    /// `sup |w** − w|` over the source samples, from a second inversion.
    pub involution_defect: f64,
}

impl Transform1DResult {
    pub fn to_grid_field(&self) -> Result<GridField1D> {
        let grid = Grid1D::with_len(self.y[0], self.y[self.y.len() - 1], self.y.len())?;
        GridField1D::new(grid, self.dual.clone())
    }
}

/// Rejects `w` unless `w'' ≥ 0` at every sample and `w'` strictly increases
/// between consecutive samples.
fn check_convex<F: ScalarField + ?Sized>(w: &F, samples: &[f64]) -> Result<Vec<f64>> {
    let mut prev: Option<f64> = None;
    let mut slopes = Vec::with_capacity(samples.len());
    for &t in samples {
        if second_derivative(w, t)? < 0.0 {
            return Err(Error::Convexity { at: t });
        }
        let d = derivative(w, t)?;
        if let Some(p) = prev {
            if !(d > p) {
                return Err(Error::Convexity { at: t });
            }
        }
        prev = Some(d);
        slopes.push(d);
    }
    Ok(slopes)
}

/// Legendre transform of a convex 1-D field sampled on `grid`.
pub fn legendre_1d<F: ScalarField>(w: &F, grid: &Grid1D) -> Result<Transform1DResult> {
    if w.dim() != 1 {
        return Err(Error::InvalidInput("Legendre transform needs a 1-D field".into()));
    }
    let xs = grid.samples();
    check_convex(w, &xs)?;
    let dual_view = LegendreDual1D::new(w, grid.t_min(), grid.t_max())?;
    let (y0, y1) = dual_view.domain();
    let ygrid = Grid1D::with_len(y0, y1, grid.len())?;
    let y = ygrid.samples();
    let mut dual = Vec::with_capacity(y.len());
    let mut pre = Vec::with_capacity(y.len());
    for &yi in &y {
        let x = dual_view.preimage(yi)?;
        pre.push(x);
        dual.push(x * yi - w.value(&[x])?);
    }

    // w** through a genuine second inversion of the dual's derivative.
    let bidual = LegendreDual1D::new(&dual_view, y0, y1)?;
    let mut defect: f64 = 0.0;
    for &x in &xs {
        let v = bidual.value(&[x])?;
        defect = defect.max((v - w.value(&[x])?).abs());
    }
    Ok(Transform1DResult {
        y,
        dual,
        preimage: pre,
        involution_defect: defect,
    })
}

/// Residuals of the harmonic effective equation before and after the Legendre
/// transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPipelineReport {
    /// `sup |−√2/w'' − (−w + ½x w')|` on the source grid.
    pub input_residual: f64,
    /// `sup |√2 w*'' − ½y w*' + w*|` on interior dual nodes (grid differences).
    pub dual_residual: f64,
    /// `sup |w*'' − 1/w''(x(y))|` on interior dual nodes (grid differences).
    pub hessian_inversion: f64,
    /// `sup |Δφ* − (√2/4)⟨y, Dφ*⟩|` for the dual phase `φ*` on interior nodes.
    pub phase_residual: f64,
}

/// Transforms a solution `w` of `−√2/w'' = −w + ½x w'` and measures the
/// linear dual equation on the sampled transform.
pub fn legendre_dual_residual<F: ScalarField>(w: &F, grid: &Grid1D) -> Result<DualPipelineReport> {
    let mut input_residual: f64 = 0.0;
    for t in grid.samples() {
        let mu = second_derivative(w, t)?;
        if !(mu > 0.0) {
            return Err(Error::Convexity { at: t });
        }
        input_residual = input_residual.max((-SQRT_2 / mu - phase(w, &[t])?).abs());
    }
    let tr = legendre_1d(w, grid)?;
    let field = tr.to_grid_field()?;
    let d1 = field.first_derivatives();
    let d2 = field.second_derivatives();
    let m = tr.y.len();
    let mut dual_residual: f64 = 0.0;
    let mut hessian_inversion: f64 = 0.0;
    for i in 1..m - 1 {
        let y = tr.y[i];
        dual_residual = dual_residual.max((SQRT_2 * d2[i] - 0.5 * y * d1[i] + tr.dual[i]).abs());
        let mu = second_derivative(w, tr.preimage[i])?;
        hessian_inversion = hessian_inversion.max((d2[i] - 1.0 / mu).abs());
    }

    let view = LegendreDual1D::new(w, grid.t_min(), grid.t_max())?;
    let phi = PhaseField::new(&view, field.grid().step());
    let mut phase_residual: f64 = 0.0;
    for i in 1..m - 1 {
        let r = weighted_plaplace_residual(&phi, 2.0, SQRT_2 / 4.0, &[tr.y[i]])?;
        phase_residual = phase_residual.max(r.abs());
    }
    Ok(DualPipelineReport {
        input_residual,
        dual_residual,
        hessian_inversion,
        phase_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{AnalyticField, QuadraticField};

    fn quartic() -> impl ScalarField {
        AnalyticField::new(
            1,
            |x: &[f64]| x[0].powi(4) / 4.0,
            |x: &[f64]| vec![x[0].powi(3)],
            |x: &[f64]| SymMatrix::from_diag(&[3.0 * x[0] * x[0]]),
        )
    }

    #[test]
    fn half_square_is_self_dual() {
        let w = QuadraticField::homogeneous(SymMatrix::identity(1), 0.0).unwrap();
        let grid = Grid1D::new(-3.0, 3.0, 0.01).unwrap();
        let tr = legendre_1d(&w, &grid).unwrap();
        for (y, d) in tr.y.iter().zip(&tr.dual) {
            assert!((d - 0.5 * y * y).abs() < 1e-12);
        }
        assert!(tr.involution_defect < 1e-12);
    }

    #[test]
    fn quartic_has_four_thirds_dual() {
        let grid = Grid1D::new(-2.0, 2.0, 0.01).unwrap();
        let tr = legendre_1d(&quartic(), &grid).unwrap();
        for (y, d) in tr.y.iter().zip(&tr.dual) {
            assert!((d - 0.75 * y.abs().powf(4.0 / 3.0)).abs() < 1e-6, "y = {y}");
        }
        assert!(tr.involution_defect < 1e-9);
    }

    #[test]
    fn concave_input_is_rejected() {
        let w = QuadraticField::homogeneous(SymMatrix::scalar(1, -1.0), 0.0).unwrap();
        let grid = Grid1D::new(-1.0, 1.0, 0.1).unwrap();
        assert!(matches!(legendre_1d(&w, &grid), Err(Error::Convexity { .. })));
    }

    #[test]
    fn dual_view_derivatives() {
        let w = QuadraticField::homogeneous(SymMatrix::scalar(1, 2.0), 0.0).unwrap();
        let d = LegendreDual1D::new(&w, -5.0, 5.0).unwrap();
        assert!((d.value(&[3.0]).unwrap() - 9.0 / 4.0).abs() < 1e-14);
        assert!((d.gradient(&[3.0]).unwrap()[0] - 1.5).abs() < 1e-15);
        assert!((d.hessian(&[3.0]).unwrap().get(0, 0) - 0.5).abs() < 1e-15);
        assert!(d.value(&[11.0]).is_err());
    }
}
