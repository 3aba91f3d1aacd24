//! Benchmark problems and the noise model.

pub mod fredholm;
pub mod hilbert;
pub mod noise;
pub mod quadrature;

use std::fmt::Write as _;

pub use fredholm::{fredholm_a, fredholm_b, FredholmKind, GalerkinGrid};
pub use hilbert::{hilbert, hilbert_problem, min_sigma_asymptotic};
pub use noise::{add_noise, NoiseSpec, DEFAULT_SEED};

use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

/// A discretized test equation `A y = f` with known solution.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub a: DenseMatrix,
    pub f_exact: Vector,
    pub y_exact: Vector,
    /// Bound on `||A y_exact - f_exact||` that this instance guarantees.
    pub consistency_tol: f64,
}

impl ProblemInstance {
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn consistency_residual(&self) -> f64 {
        self.a
            .matvec(&self.y_exact)
            .expect("square instance")
            .distance(&self.f_exact)
    }

    /// Plain-text dump: `m` on the first line, then the `m*m` matrix entries
    /// in row-major order, then `f`, then `y`, one value per line with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.m()).unwrap();
        let values = self
            .a
            .as_row_major()
            .iter()
            .chain(self.f_exact.iter())
            .chain(self.y_exact.iter());
        for v in values {
            writeln!(out, "{v:.16e}").unwrap();
        }
        out
    }

    /// Parse the format written by [`ProblemInstance::to_text`].
    pub fn from_text(name: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let m: usize = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty problem file".into()))?
            .parse()
            .map_err(|e| Error::InvalidInput(format!("bad dimension line: {e}")))?;
        let values = lines
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad value {l:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let expected = m * m + 2 * m;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                actual: values.len(),
            });
        }
        let a = DenseMatrix::from_row_major(m, m, values[..m * m].to_vec())?;
        let f = Vector::new(values[m * m..m * m + m].to_vec())?;
        let y = Vector::new(values[m * m + m..].to_vec())?;
        let mut inst = Self {
            name: name.to_string(),
            a,
            f_exact: f,
            y_exact: y,
            consistency_tol: 0.0,
        };
        inst.consistency_tol = inst.consistency_residual();
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_layout() {
        let p = hilbert_problem(2).unwrap();
        let text = p.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 4 + 2 + 2);
        assert_eq!(lines[0], "2");
        assert_eq!(lines[1], "3.3333333333333331e-1");
        assert_eq!(lines[2], "2.5000000000000000e-1");
    }

    #[test]
    fn text_round_trip_is_exact() {
        let p = fredholm_b(6).unwrap();
        let q = ProblemInstance::from_text("copy", &p.to_text()).unwrap();
        assert_eq!(p.a, q.a);
        assert_eq!(p.f_exact, q.f_exact);
        assert_eq!(p.y_exact, q.y_exact);
    }

    #[test]
    fn truncated_text_rejected() {
        let p = hilbert_problem(3).unwrap();
        let text = p.to_text();
        let cut: String = text.lines().take(5).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            ProblemInstance::from_text("x", &cut),
            Err(Error::DimensionMismatch {
                expected: 15,
                actual: 4
            })
        ));
    }
}
