#![allow(dead_code)]

use dsm_core::linalg::DenseMatrix;
use proptest::prelude::*;

/// Square matrix with entries in [-1, 1] plus a random right-hand side.
pub fn system(max_m: usize) -> impl Strategy<Value = (DenseMatrix, Vec<f64>)> {
    (2..=max_m).prop_flat_map(|m| {
        (
            prop::collection::vec(-1.0f64..1.0, m * m),
            prop::collection::vec(-1.0f64..1.0, m),
        )
            .prop_map(move |(a, g)| (DenseMatrix::from_row_major(m, m, a).unwrap(), g))
    })
}

/// Well-posed square matrix: identity-dominated so `sigma_min >= 1/2`.
pub fn well_posed(m: usize) -> impl Strategy<Value = (DenseMatrix, Vec<f64>)> {
    (
        prop::collection::vec(-0.5f64 / m as f64..0.5 / m as f64, m * m),
        prop::collection::vec(-1.0f64..1.0, m),
    )
        .prop_map(move |(e, y)| {
            let a =
                DenseMatrix::from_fn(m, m, |i, j| e[i * m + j] + if i == j { 1.0 } else { 0.0 })
                    .unwrap();
            (a, y)
        })
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting.
pub fn gauss_solve(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        let pivot = m[col].clone();
        for row in col + 1..n {
            let factor = m[row][col] / pivot[col];
            for (x, p) in m[row][col..].iter_mut().zip(&pivot[col..]) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

/// `A^T A + a I` as nested rows.
pub fn normal_matrix(a: &DenseMatrix, shift: f64) -> Vec<Vec<f64>> {
    let n = a.cols();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..a.rows()).map(|k| a[(k, i)] * a[(k, j)]).sum::<f64>()
                        + if i == j { shift } else { 0.0 }
                })
                .collect()
        })
        .collect()
}

/// `A A^T + a I` as nested rows.
pub fn gram_matrix(a: &DenseMatrix, shift: f64) -> Vec<Vec<f64>> {
    normal_matrix(&a.transpose(), shift)
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
