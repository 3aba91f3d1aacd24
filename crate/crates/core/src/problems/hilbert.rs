use std::f64::consts::{PI, SQRT_2};

use super::ProblemInstance;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

/// Shifted Hilbert matrix with entries `1/(i + j + 1)` for 1-based `i, j`,
/// so the top-left entry is `1/3`.
pub fn hilbert(m: usize) -> Result<DenseMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    DenseMatrix::from_fn(m, m, |i, j| 1.0 / (i + j + 3) as f64)
}

/// Hilbert system with exact solution `y_k = sqrt(k / 2)` and `f = H y`.
pub fn hilbert_problem(m: usize) -> Result<ProblemInstance> {
    let a = hilbert(m)?;
    let y = Vector::new((1..=m).map(|k| (0.5 * k as f64).sqrt()).collect())?;
    let f = a.matvec(&y)?;
    let tol = 1e-10 * f.norm();
    Ok(ProblemInstance {
        name: format!("hilbert-{m}"),
        a,
        f_exact: f,
        y_exact: y,
        consistency_tol: tol,
    })
}

/// Leading term of the asymptotic smallest eigenvalue of the Hilbert matrix,
/// `2^{15/4} pi^{3/2} sqrt(m) (sqrt(2) + 1)^{-(4m + 4)}`.
///
/// Underflows to zero (or a subnormal) for `m` beyond roughly 200.
pub fn min_sigma_asymptotic(m: usize) -> f64 {
    let m = m as f64;
    // Evaluate in logs so the huge power does not overflow before the product.
    let log =
        3.75 * 2f64.ln() + 1.5 * PI.ln() + 0.5 * m.ln() - (4.0 * m + 4.0) * (SQRT_2 + 1.0).ln();
    log.exp()
}
