//! Small dense linear algebra: symmetric matrices and the cyclic Jacobi eigensolver.

use std::ops::{Add, Index, Mul, Sub};

use crate::error::{Error, Result};

/// Square matrix in row-major order. Used for eigenvector bases and other
/// non-symmetric intermediates.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len(), "dimension mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(i, k) * v[k]).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Solves `self * x = rhs` by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        if rhs.len() != n {
            return Err(Error::InvalidInput("right-hand side has wrong length".into()));
        }
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        let scale = self.max_abs();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col].abs() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::DegenerateMetric);
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot * n + k);
                }
                b.swap(col, pivot);
            }
            for row in col + 1..n {
                let factor = a[row * n + col] / a[col * n + col];
                if factor != 0.0 {
                    for k in col..n {
                        a[row * n + k] -= factor * a[col * n + k];
                    }
                    b[row] -= factor * b[col];
                }
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let tail: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
            x[row] = (b[row] - tail) / a[row * n + row];
        }
        Ok(x)
    }
}

/// Real symmetric matrix. Writes go to both triangles so symmetry holds exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1.0)
    }

    pub fn scalar(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds from the upper triangle of `f` (`i <= j`), mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from explicit rows; rejects ragged or asymmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix rows must form a square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Symmetric part `(M + Mᵀ)/2` of a dense matrix.
    pub fn symmetric_part(m: &DenseMatrix) -> Self {
        Self::from_fn(m.dim(), |i, j| 0.5 * (m.get(i, j) + m.get(j, i)))
    }

    /// `Q diag(d) Qᵀ`, symmetrized.
    pub fn from_eigen(q: &DenseMatrix, d: &[f64]) -> Self {
        let n = q.dim();
        assert_eq!(n, d.len(), "dimension mismatch");
        Self::from_fn(n, |i, j| (0..n).map(|k| q.get(i, k) * d[k] * q.get(j, k)).sum())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add_scalar_identity(&self, s: f64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] += s;
        }
        m
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.n, v.len(), "dimension mismatch");
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.get(i, k) * v[k]).sum())
            .collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul_vec(v))
    }

    /// `M²`, which stays symmetric.
    pub fn square(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * self.get(k, j)).sum())
    }

    /// `Qᵀ M Q`, symmetrized.
    pub fn congruence(&self, q: &DenseMatrix) -> Self {
        let n = self.n;
        let mq = DenseMatrix::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * q.get(k, j)).sum());
        Self::from_fn(n, |i, j| (0..n).map(|k| q.get(k, i) * mq.get(k, j)).sum())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.clone(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    /// Inverse via the eigen-decomposition; fails when an eigenvalue is
    /// negligible relative to the spectral radius.
    pub fn inverse(&self) -> Result<Self> {
        let (spec, q) = eigh_sym(self)?;
        let radius = spec.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if spec.values().iter().any(|v| v.abs() <= 1e-13 * radius || *v == 0.0) {
            return Err(Error::DegenerateMetric);
        }
        let inv: Vec<f64> = spec.values().iter().map(|v| 1.0 / v).collect();
        Ok(Self::from_eigen(&q, &inv))
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        SymMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, s: f64) -> SymMatrix {
        self.scale(s)
    }
}

/// Eigenvalues sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
}

impl EigenSpectrum {
    /// Wraps raw eigenvalues, sorting them ascending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().copied()
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn eig_sym(m: &SymMatrix) -> Result<EigenSpectrum> {
    eigh_sym(m).map(|(spec, _)| spec)
}

/// Eigenvalues with orthonormal eigenvectors (the columns of the returned
/// matrix, ordered like the ascending spectrum).
pub fn eigh_sym(m: &SymMatrix) -> Result<(EigenSpectrum, DenseMatrix)> {
    if !m.is_finite() {
        return Err(Error::NonFinite("symmetric matrix"));
    }
    let n = m.dim();
    let mut a = m.to_dense();
    let mut v = DenseMatrix::identity(n);
    let target = 1e-13 * m.frobenius();

    let off_norm = |a: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a.get(i, j) * a.get(i, j);
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::InvalidInput("Jacobi iteration did not converge".into()));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, c * apk - s * aqk);
                    a.set(q, k, s * apk + c * aqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = DenseMatrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok((EigenSpectrum { values }, vectors))
}

pub fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

pub fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_matrix_is_already_converged() {
        let m = SymMatrix::from_diag(&[3.0, -1.0, 2.0]);
        let spec = eig_sym(&m).unwrap();
        assert_eq!(spec.values(), &[-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let spec = eig_sym(&m).unwrap();
        assert_relative_eq!(spec.values()[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(spec.values()[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn eigenvectors_reconstruct_the_matrix() {
        let m = SymMatrix::from_rows(&[vec![4.0, 1.0, -2.0], vec![1.0, 0.5, 0.25], vec![-2.0, 0.25, 3.0]]).unwrap();
        let (spec, q) = eigh_sym(&m).unwrap();
        let back = SymMatrix::from_eigen(&q, spec.values());
        assert!((&back - &m).max_abs() < 1e-13);
        let qtq = q.transpose().matmul(&q);
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((qtq.get(i, j) - e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_asymmetric_rows_and_nan() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        let mut m = SymMatrix::identity(2);
        m.set(0, 1, f64::NAN);
        assert_eq!(eig_sym(&m), Err(Error::NonFinite("symmetric matrix")));
    }

    #[test]
    fn zero_matrix_has_zero_spectrum() {
        let spec = eig_sym(&SymMatrix::zeros(3)).unwrap();
        assert_eq!(spec.values(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn dense_solve_matches_inverse() {
        let m = SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 3.0]]).unwrap();
        let x = m.to_dense().solve(&[1.0, 2.0]).unwrap();
        let inv = m.inverse().unwrap();
        let y = inv.mul_vec(&[1.0, 2.0]);
        assert_relative_eq!(x[0], y[0], epsilon = 1e-14);
        assert_relative_eq!(x[1], y[1], epsilon = 1e-14);
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn singular_matrix_is_degenerate() {
        let m = SymMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(m.inverse(), Err(Error::DegenerateMetric));
        assert_eq!(m.to_dense().solve(&[1.0, 0.0]), Err(Error::DegenerateMetric));
    }
}
