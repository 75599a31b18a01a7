//! Uniform 1-D grids and sampled fields with finite-difference derivatives.

use crate::error::{Error, Result};
use crate::numerics::field::{Backend, ScalarField};
use crate::numerics::linalg::SymMatrix;

/// Uniform grid `t_min, t_min + step, …, t_max`. The step is adjusted so both
/// endpoints are samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid1D {
    t_min: f64,
    t_max: f64,
    step: f64,
    len: usize,
}

impl Grid1D {
    pub fn new(t_min: f64, t_max: f64, step: f64) -> Result<Self> {
        if !(t_min.is_finite() && t_max.is_finite() && step.is_finite()) {
            return Err(Error::NonFinite("grid bounds"));
        }
        if !(t_max > t_min && step > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid needs t_min < t_max and step > 0 (got {t_min}, {t_max}, {step})"
            )));
        }
        let intervals = ((t_max - t_min) / step).round().max(1.0) as usize;
        Self::with_len(t_min, t_max, intervals + 1)
    }

    pub fn with_len(t_min: f64, t_max: f64, len: usize) -> Result<Self> {
        if len < 2 || !(t_max > t_min) {
            return Err(Error::InvalidInput("grid needs two distinct samples".into()));
        }
        Ok(Self {
            t_min,
            t_max,
            step: (t_max - t_min) / (len - 1) as f64,
            len,
        })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn sample(&self, i: usize) -> f64 {
        if i + 1 == self.len {
            self.t_max
        } else {
            self.t_min + i as f64 * self.step
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.sample(i)).collect()
    }
}

/// Values on a [`Grid1D`]. Derivatives are second-order finite differences:
/// central in the interior, one-sided at the two boundary nodes.
#[derive(Clone, Debug)]
pub struct GridField1D {
    grid: Grid1D,
    values: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

impl GridField1D {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid samples"));
        }
        if grid.len() < 4 {
            return Err(Error::InvalidInput("grid field needs at least 4 samples".into()));
        }
        let h = grid.step();
        let v = &values;
        let m = v.len();
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        for i in 1..m - 1 {
            d1[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
            d2[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
        }
        d1[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        d1[m - 1] = (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * h);
        d2[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / (h * h);
        d2[m - 1] = (2.0 * v[m - 1] - 5.0 * v[m - 2] + 4.0 * v[m - 3] - v[m - 4]) / (h * h);
        Ok(Self { grid, values, d1, d2 })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.samples().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn first_derivatives(&self) -> &[f64] {
        &self.d1
    }

    pub fn second_derivatives(&self) -> &[f64] {
        &self.d2
    }

    /// Cell index `i` and fraction `s ∈ [0, 1]` with `t = t_i + s·h`.
    fn cell(&self, t: f64) -> Result<(usize, f64)> {
        let (lo, hi) = (self.grid.t_min(), self.grid.t_max());
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfSpan { t, lo, hi });
        }
        let x = (t - lo) / self.grid.step();
        let i = (x.floor() as usize).min(self.grid.len() - 2);
        Ok((i, x - i as f64))
    }

    fn lerp(data: &[f64], i: usize, s: f64) -> f64 {
        if s == 0.0 {
            data[i]
        } else {
            data[i] * (1.0 - s) + data[i + 1] * s
        }
    }

    pub fn value_at(&self, t: f64) -> Result<f64> {
        let (i, s) = self.cell(t)?;
        if s == 0.0 {
            return Ok(self.values[i]);
        }
        // Cubic Hermite on the cell using the nodal FD slopes.
        let h = self.grid.step();
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.d1[i] * h, self.d1[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        Ok((2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * m0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * m1)
    }

    pub fn derivative_at(&self, t: f64) -> Result<f64> {
        let (i, s) = self.cell(t)?;
        Ok(Self::lerp(&self.d1, i, s))
    }

    pub fn second_derivative_at(&self, t: f64) -> Result<f64> {
        let (i, s) = self.cell(t)?;
        Ok(Self::lerp(&self.d2, i, s))
    }
}

impl ScalarField for GridField1D {
    fn dim(&self) -> usize {
        1
    }

    fn backend(&self) -> Backend {
        Backend::GridFd
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        self.value_at(x[0])
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.derivative_at(x[0])?])
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        Ok(SymMatrix::from_diag(&[self.second_derivative_at(x[0])?]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_count_matches_step() {
        let g = Grid1D::new(-1.0, 1.0, 0.1).unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g.sample(0), -1.0);
        assert_eq!(g.sample(20), 1.0);
        assert!((g.sample(10)).abs() < 1e-15);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid1D::new(1.0, 1.0, 0.1).is_err());
        assert!(Grid1D::new(0.0, 1.0, -0.1).is_err());
        assert!(Grid1D::new(0.0, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn quadratic_derivatives_are_exact() {
        let g = Grid1D::new(-2.0, 2.0, 0.05).unwrap();
        let f = GridField1D::from_fn(g, |t| 1.5 * t * t - t + 0.25).unwrap();
        for (i, t) in f.grid().samples().into_iter().enumerate() {
            assert!((f.first_derivatives()[i] - (3.0 * t - 1.0)).abs() < 1e-11, "t = {t}");
            assert!((f.second_derivatives()[i] - 3.0).abs() < 1e-9, "t = {t}");
        }
        assert!((f.value_at(0.123).unwrap() - (1.5 * 0.123 * 0.123 - 0.123 + 0.25)).abs() < 1e-12);
    }

    #[test]
    fn sine_is_second_order() {
        let err = |h: f64| {
            let g = Grid1D::new(0.0, 3.0, h).unwrap();
            let f = GridField1D::from_fn(g, f64::sin).unwrap();
            f.grid()
                .samples()
                .iter()
                .enumerate()
                .map(|(i, t)| (f.second_derivatives()[i] + t.sin()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(0.02) / err(0.01);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio = {ratio}");
    }

    #[test]
    fn out_of_span_is_an_error() {
        let g = Grid1D::new(0.0, 1.0, 0.1).unwrap();
        let f = GridField1D::from_fn(g, |t| t).unwrap();
        assert!(matches!(f.value_at(1.5), Err(Error::OutOfSpan { .. })));
    }
}
