//! The scalar-field abstraction shared by every module.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::{dot, SymMatrix};

/// How a field produces its derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Closed-form derivatives.
    Analytic,
    /// Derivatives read off an ODE trajectory or quadrature built from one.
    Trajectory,
    /// Finite differences of sampled values.
    GridFd,
}

/// A real function on ℝⁿ with gradient and Hessian.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;
    fn backend(&self) -> Backend;
    fn value(&self, x: &[f64]) -> Result<f64>;
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn hessian(&self, x: &[f64]) -> Result<SymMatrix>;

    /// `φ(x) = −u(x) + ½⟨x, Du(x)⟩`. Views whose phase is known in closed
    /// form from their inner field override this.
    fn phase(&self, x: &[f64]) -> Result<f64> {
        Ok(-self.value(x)? + 0.5 * dot(x, &self.gradient(x)?))
    }
}

/// Rejects points of the wrong dimension or with non-finite coordinates.
pub fn check_point(field_dim: usize, x: &[f64]) -> Result<()> {
    if x.len() != field_dim {
        return Err(Error::InvalidInput(format!(
            "point has dimension {}, field has dimension {field_dim}",
            x.len()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("evaluation point"));
    }
    Ok(())
}

macro_rules! forward_field {
    ($($ty:ty),*) => {$(
        impl<T: ScalarField + ?Sized> ScalarField for $ty {
            fn dim(&self) -> usize {
                (**self).dim()
            }
            fn backend(&self) -> Backend {
                (**self).backend()
            }
            fn value(&self, x: &[f64]) -> Result<f64> {
                (**self).value(x)
            }
            fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
                (**self).gradient(x)
            }
            fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
                (**self).hessian(x)
            }
            fn phase(&self, x: &[f64]) -> Result<f64> {
                (**self).phase(x)
            }
        }
    )*};
}

forward_field!(&T, Box<T>, Arc<T>);

/// `½⟨x, A x⟩ + ⟨b, x⟩ + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticField {
    a: SymMatrix,
    b: Vec<f64>,
    c: f64,
}

impl QuadraticField {
    pub fn new(a: SymMatrix, b: Vec<f64>, c: f64) -> Result<Self> {
        if b.len() != a.dim() {
            return Err(Error::InvalidInput("linear term has wrong dimension".into()));
        }
        if !a.is_finite() || b.iter().any(|v| !v.is_finite()) || !c.is_finite() {
            return Err(Error::NonFinite("quadratic coefficients"));
        }
        Ok(Self { a, b, c })
    }

    pub fn homogeneous(a: SymMatrix, c: f64) -> Result<Self> {
        let n = a.dim();
        Self::new(a, vec![0.0; n], c)
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.a
    }

    pub fn constant(&self) -> f64 {
        self.c
    }
}

impl ScalarField for QuadraticField {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn backend(&self) -> Backend {
        Backend::Analytic
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(self.dim(), x)?;
        Ok(0.5 * self.a.quadratic_form(x) + dot(&self.b, x) + self.c)
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self.dim(), x)?;
        Ok(self.a.mul_vec(x).iter().zip(&self.b).map(|(u, v)| u + v).collect())
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(self.dim(), x)?;
        Ok(self.a.clone())
    }
}

/// Field defined by three closures returning closed-form derivatives.
pub struct AnalyticField<V, G, H> {
    dim: usize,
    value: V,
    gradient: G,
    hessian: H,
}

impl<V, G, H> AnalyticField<V, G, H>
where
    V: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
    H: Fn(&[f64]) -> SymMatrix + Send + Sync,
{
    pub fn new(dim: usize, value: V, gradient: G, hessian: H) -> Self {
        Self {
            dim,
            value,
            gradient,
            hessian,
        }
    }
}

impl<V, G, H> ScalarField for AnalyticField<V, G, H>
where
    V: Fn(&[f64]) -> f64 + Send + Sync,
    G: Fn(&[f64]) -> Vec<f64> + Send + Sync,
    H: Fn(&[f64]) -> SymMatrix + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn backend(&self) -> Backend {
        Backend::Analytic
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_point(self.dim, x)?;
        Ok((self.value)(x))
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_point(self.dim, x)?;
        Ok((self.gradient)(x))
    }

    fn hessian(&self, x: &[f64]) -> Result<SymMatrix> {
        check_point(self.dim, x)?;
        Ok((self.hessian)(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_field_derivatives() {
        let a = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, -1.0]]).unwrap();
        let q = QuadraticField::new(a, vec![1.0, 0.0], 3.0).unwrap();
        let x = [1.0, 2.0];
        assert_eq!(q.value(&x).unwrap(), 0.5 * (2.0 + 4.0 - 4.0) + 1.0 + 3.0);
        assert_eq!(q.gradient(&x).unwrap(), vec![5.0, -1.0]);
        assert_eq!(q.backend(), Backend::Analytic);
        assert!(q.value(&[1.0]).is_err());
        assert!(q.value(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn wrappers_forward() {
        let q = Arc::new(QuadraticField::homogeneous(SymMatrix::identity(1), 0.0).unwrap());
        let dynf: Arc<dyn ScalarField> = q;
        assert_eq!(dynf.value(&[2.0]).unwrap(), 2.0);
        #[allow(clippy::needless_borrow)]
        let via_ref = (&dynf).dim();
        assert_eq!(via_ref, 1);
    }
}
