//! Dense linear algebra backend.
//!
//! The operator is factored once with an SVD, `A = U diag(sigma) V^T`. Every
//! regularized solve afterwards is a spectral filter applied in the singular
//! bases, so changing the regularization parameter costs `O(m^2)` instead of
//! a fresh `O(m^3)` factorization.
//!
//! All arithmetic is `f64`. Matrices such as the 200x200 Hilbert matrix have
//! condition numbers far beyond `1/f64::EPSILON`; their trailing singular
//! values are rounding noise. The filters below never divide by a bare
//! singular value (the effective inverse is capped at `1/(2 sqrt(a))`), so
//! the regularized quantities stay well defined for any `a > 0`.

use std::ops::{Deref, Index};

use nalgebra::{DMatrix, SVD};

use crate::error::{check_len, check_positive, Error, Result};

/// Dense real matrix stored in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(
                "matrix dimensions must be positive".into(),
            ));
        }
        check_len(rows * cols, data.len())?;
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_row_major(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, d) in diag.iter().enumerate() {
            data[i * n + i] = *d;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.data
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Result<Vector> {
        check_len(self.cols, x.len())?;
        Ok(Vector::from_raw(
            (0..self.rows).map(|i| dot(self.row(i), x)).collect(),
        ))
    }

    /// `A^T x`.
    pub fn transpose_matvec(&self, x: &[f64]) -> Result<Vector> {
        check_len(self.rows, x.len())?;
        let mut out = vec![0.0; self.cols];
        for (i, xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * xi;
            }
        }
        Ok(Vector::from_raw(out))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        check_len(self.cols, other.rows)?;
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            let out = &mut data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                for (o, b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<f64>) -> Self {
        let (rows, cols) = m.shape();
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        Self { rows, cols, data }
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

/// Real vector with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidInput("vector must be non-empty".into()));
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite vector entry at {pos}"
            )));
        }
        Ok(Self(data))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        Self(data)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn distance(&self, other: &[f64]) -> f64 {
        assert_eq!(self.len(), other.len(), "vector lengths differ");
        self.0
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `a * self + b * other`.
    pub fn lincomb(&self, a: f64, b: f64, other: &[f64]) -> Vector {
        assert_eq!(self.len(), other.len(), "vector lengths differ");
        Self(
            self.0
                .iter()
                .zip(other)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm, scaled to avoid overflow for large entries.
pub fn norm(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    scale
        * x.iter()
            .map(|v| (v / scale) * (v / scale))
            .sum::<f64>()
            .sqrt()
}

/// Singular value decomposition `A = U diag(sigma) V^T` of a square matrix.
#[derive(Debug, Clone)]
pub struct SpectralFactors {
    u: DenseMatrix,
    sigma: Vec<f64>,
    v: DenseMatrix,
}

/// Factor a square matrix. Singular values come back sorted nonincreasing.
pub fn svd(a: &DenseMatrix) -> Result<SpectralFactors> {
    if !a.is_square() {
        return Err(Error::InvalidInput(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    // from_row_major already rejects non-finite entries; this guards matrices
    // built some other way inside the crate.
    if a.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let m = a.rows();
    let max_iters = 1000.max(200 * m);
    let dec =
        SVD::try_new(a.to_nalgebra(), true, true, f64::EPSILON, max_iters).ok_or_else(|| {
            Error::NumericalFailure(format!("SVD did not converge in {max_iters} sweeps"))
        })?;
    let u = dec.u.as_ref().expect("left vectors requested");
    let v_t = dec.v_t.as_ref().expect("right vectors requested");
    Ok(SpectralFactors {
        u: DenseMatrix::from_nalgebra(u),
        sigma: dec.singular_values.iter().copied().collect(),
        v: DenseMatrix::from_nalgebra(&v_t.transpose()),
    })
}

impl SpectralFactors {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    pub fn left_vectors(&self) -> &DenseMatrix {
        &self.u
    }

    pub fn right_vectors(&self) -> &DenseMatrix {
        &self.v
    }

    /// `U diag(sigma) V^T`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let m = self.dim();
        DenseMatrix::from_fn(m, m, |i, j| {
            (0..m)
                .map(|k| self.u.get(i, k) * self.sigma[k] * self.v.get(j, k))
                .sum()
        })
        .expect("finite factors")
    }

    /// Coefficients `beta_i = <u_i, g>`.
    pub fn left_coefficients(&self, g: &[f64]) -> Result<Vec<f64>> {
        Ok(self.u.transpose_matvec(g)?.into_inner())
    }

    /// Coefficients `<v_i, x>`.
    pub fn right_coefficients(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.v.transpose_matvec(x)?.into_inner())
    }

    /// `sum_i c_i v_i`.
    pub fn synthesize_right(&self, c: &[f64]) -> Vector {
        self.v
            .matvec(c)
            .expect("coefficient length equals dimension")
    }

    /// `sum_i c_i u_i`.
    pub fn synthesize_left(&self, c: &[f64]) -> Vector {
        self.u
            .matvec(c)
            .expect("coefficient length equals dimension")
    }

    /// Tikhonov solution `(A^T A + a I)^{-1} A^T g`.
    pub fn regularized_solve(&self, a: f64, g: &[f64]) -> Result<Vector> {
        check_positive("regularization parameter", a)?;
        let beta = self.left_coefficients(g)?;
        let c: Vec<f64> = beta
            .iter()
            .zip(&self.sigma)
            .map(|(b, s)| s / (s * s + a) * b)
            .collect();
        Ok(self.synthesize_right(&c))
    }

    /// `(A A^T + a I)^{-1} g`.
    pub fn apply_q_inverse(&self, a: f64, g: &[f64]) -> Result<Vector> {
        check_positive("regularization parameter", a)?;
        let beta = self.left_coefficients(g)?;
        let c: Vec<f64> = beta
            .iter()
            .zip(&self.sigma)
            .map(|(b, s)| b / (s * s + a))
            .collect();
        Ok(self.synthesize_left(&c))
    }

    /// `(A^T A + a I)^{-1} x`.
    pub fn apply_t_inverse(&self, a: f64, x: &[f64]) -> Result<Vector> {
        check_positive("regularization parameter", a)?;
        let gamma = self.right_coefficients(x)?;
        let c: Vec<f64> = gamma
            .iter()
            .zip(&self.sigma)
            .map(|(g, s)| g / (s * s + a))
            .collect();
        Ok(self.synthesize_right(&c))
    }

    /// `a ||(A A^T + a I)^{-1} g||`, which equals the Tikhonov residual
    /// `||A (A^T A + a I)^{-1} A^T g - g||`.
    pub fn discrepancy_norm(&self, a: f64, g: &[f64]) -> Result<f64> {
        check_positive("regularization parameter", a)?;
        let beta = self.left_coefficients(g)?;
        Ok(discrepancy_from_coefficients(&self.sigma, &beta, a))
    }

    /// `sigma_1 / sigma_m`; `f64::INFINITY` when the smallest singular value
    /// is exactly zero.
    pub fn condition_number(&self) -> f64 {
        let smax = self.sigma[0];
        let smin = *self.sigma.last().expect("non-empty spectrum");
        if smin == 0.0 {
            f64::INFINITY
        } else {
            smax / smin
        }
    }
}

/// `a ||Q_a^{-1} g||` given the left coefficients of `g`.
pub(crate) fn discrepancy_from_coefficients(sigma: &[f64], beta: &[f64], a: f64) -> f64 {
    let filtered: Vec<f64> = beta
        .iter()
        .zip(sigma)
        .map(|(b, s)| a / (s * s + a) * b)
        .collect();
    norm(&filtered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn identity_factors() {
        let f = svd(&DenseMatrix::identity(2)).unwrap();
        assert_eq!(f.singular_values(), &[1.0, 1.0]);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert_relative_eq!(f.left_vectors().get(i, j).abs(), expected, epsilon = 1e-15);
                assert_relative_eq!(f.right_vectors().get(i, j).abs(), expected, epsilon = 1e-15);
            }
        }
        assert_eq!(f.condition_number(), 1.0);
    }

    #[test]
    fn diagonal_with_null_space() {
        let f = svd(&DenseMatrix::from_diagonal(&[3.0, 0.0])).unwrap();
        assert_eq!(f.singular_values(), &[3.0, 0.0]);
        assert!(f.condition_number().is_infinite());
    }

    #[test]
    fn rejects_rectangular_and_non_finite() {
        let rect = DenseMatrix::from_row_major(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(svd(&rect), Err(Error::InvalidInput(_))));
        assert!(matches!(
            DenseMatrix::from_row_major(1, 2, vec![1.0, f64::NAN]),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            DenseMatrix::from_row_major(2, 2, vec![1.0; 3]),
            Err(Error::DimensionMismatch {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn identity_filters() {
        let f = svd(&DenseMatrix::identity(2)).unwrap();
        let x = f.regularized_solve(1.0, &[2.0, 4.0]).unwrap();
        assert_relative_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(x[1], 2.0, epsilon = 1e-15);
        let y = f.apply_q_inverse(1.0, &[2.0, 4.0]).unwrap();
        assert_relative_eq!(y[0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(y[1], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn scalar_q_inverse_and_discrepancy() {
        let f = svd(&DenseMatrix::from_diagonal(&[2.0])).unwrap();
        assert_relative_eq!(
            f.apply_q_inverse(0.5, &[3.0]).unwrap()[0],
            3.0 / 4.5,
            max_relative = 1e-15
        );

        let one = svd(&DenseMatrix::from_diagonal(&[1.0])).unwrap();
        assert_relative_eq!(
            one.discrepancy_norm(0.5, &[2.0]).unwrap(),
            2.0 / 3.0,
            max_relative = 1e-15
        );
        assert_eq!(one.discrepancy_norm(0.5, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn non_positive_parameter_rejected() {
        let f = svd(&DenseMatrix::from_diagonal(&[2.0])).unwrap();
        for a in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                f.regularized_solve(a, &[1.0]),
                Err(Error::InvalidParameter(_))
            ));
            assert!(matches!(
                f.apply_q_inverse(a, &[1.0]),
                Err(Error::InvalidParameter(_))
            ));
            assert!(matches!(
                f.discrepancy_norm(a, &[1.0]),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn length_mismatch_rejected() {
        let f = svd(&DenseMatrix::identity(3)).unwrap();
        assert!(matches!(
            f.regularized_solve(1.0, &[1.0, 2.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 2
            })
        ));
    }

    #[test]
    fn norm_handles_large_entries() {
        assert_relative_eq!(norm(&[3e200, 4e200]), 5e200, max_relative = 1e-15);
        assert_eq!(norm(&[0.0, 0.0]), 0.0);
    }
}
