//! Central finite differences of scalar functions on ℝⁿ.

use crate::error::{Error, Result};
use crate::numerics::linalg::{norm, SymMatrix};

/// Default step `1e-4 · max(1, |x|)`.
pub fn default_step(x: &[f64]) -> f64 {
    1e-4 * norm(x).max(1.0)
}

fn check_step(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "finite-difference step must be positive, got {h}"
        )))
    }
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in moves {
        y[i] += d;
    }
    y
}

/// Second-order central gradient.
pub fn fd_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    check_step(h)?;
    (0..x.len())
        .map(|i| {
            let fp = f(&shifted(x, &[(i, h)]))?;
            let fm = f(&shifted(x, &[(i, -h)]))?;
            Ok((fp - fm) / (2.0 * h))
        })
        .collect()
}

/// Second-order central Hessian. Mixed entries use the four-point stencil and
/// are written to both triangles, so the result is exactly symmetric.
pub fn fd_hessian<F>(f: F, x: &[f64], h: f64) -> Result<SymMatrix>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    check_step(h)?;
    let n = x.len();
    let f0 = f(x)?;
    let mut m = SymMatrix::zeros(n);
    for i in 0..n {
        let fp = f(&shifted(x, &[(i, h)]))?;
        let fm = f(&shifted(x, &[(i, -h)]))?;
        m.set(i, i, (fp - 2.0 * f0 + fm) / (h * h));
        for j in i + 1..n {
            let fpp = f(&shifted(x, &[(i, h), (j, h)]))?;
            let fpm = f(&shifted(x, &[(i, h), (j, -h)]))?;
            let fmp = f(&shifted(x, &[(i, -h), (j, h)]))?;
            let fmm = f(&shifted(x, &[(i, -h), (j, -h)]))?;
            m.set(i, j, (fpp - fpm - fmp + fmm) / (4.0 * h * h));
        }
    }
    Ok(m)
}

/// Central first derivative of a scalar function of one variable.
pub fn fd_derivative<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    check_step(h)?;
    Ok((f(t + h)? - f(t - h)?) / (2.0 * h))
}
