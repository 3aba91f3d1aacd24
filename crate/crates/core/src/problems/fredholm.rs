//! Galerkin discretization of first-kind integral equations
//! `f(s) = int k(s, t) u(t) dt` with orthonormal box functions
//! `phi_i = sqrt(m/c1)` on `[s_{i-1}, s_i]` (data side) and
//! `psi_j = sqrt(m/c2)` on `[t_{j-1}, t_j]` (solution side).
//!
//! Entries are computed by tensor Gauss-Legendre quadrature. Both kernels are
//! smooth except along lines `t - s = const`; cells crossed by such a line are
//! split exactly, so the rule stays high order on every piece.

use std::f64::consts::PI;

use super::quadrature::GaussLegendre;
use super::ProblemInstance;
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Vector};

pub const DEFAULT_POINTS: usize = 4;

/// Box-function grid: `s_i = d1 + i d2/m`, `t_i = d3 + i d4/m`, `i = 0..=m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalerkinGrid {
    pub c1: f64,
    pub c2: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub m: usize,
}

impl GalerkinGrid {
    pub fn new(c1: f64, c2: f64, d1: f64, d2: f64, d3: f64, d4: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 cells, got {m}"
            )));
        }
        if !(c1 > 0.0 && c2 > 0.0 && d2 > 0.0 && d4 > 0.0) {
            return Err(Error::InvalidInput(
                "grid scales and widths must be positive".into(),
            ));
        }
        Ok(Self {
            c1,
            c2,
            d1,
            d2,
            d3,
            d4,
            m,
        })
    }

    pub fn s_node(&self, i: usize) -> f64 {
        self.d1 + i as f64 * self.d2 / self.m as f64
    }

    pub fn t_node(&self, i: usize) -> f64 {
        self.d3 + i as f64 * self.d4 / self.m as f64
    }

    pub fn phi_height(&self) -> f64 {
        (self.m as f64 / self.c1).sqrt()
    }

    pub fn psi_height(&self) -> f64 {
        (self.m as f64 / self.c2).sqrt()
    }

    /// `A_ij = int int k(s, t) phi_i(s) psi_j(t) ds dt`.
    ///
    /// `kinks` lists the offsets `c` of the lines `t - s = c` where the
    /// kernel loses smoothness.
    pub fn assemble_operator(
        &self,
        kernel: impl Fn(f64, f64) -> f64,
        kinks: &[f64],
        points: usize,
    ) -> Result<DenseMatrix> {
        let rule = GaussLegendre::new(points);
        let scale = self.phi_height() * self.psi_height();
        let m = self.m;
        let mut data = Vec::with_capacity(m * m);
        let mut s_breaks = Vec::new();
        let mut t_breaks = Vec::new();
        for i in 0..m {
            let (s0, s1) = (self.s_node(i), self.s_node(i + 1));
            for j in 0..m {
                let (t0, t1) = (self.t_node(j), self.t_node(j + 1));
                // The inner integral in t changes form where a kink line
                // enters or leaves the t-cell.
                s_breaks.clear();
                for c in kinks {
                    s_breaks.push(t0 - c);
                    s_breaks.push(t1 - c);
                }
                let value = rule.integrate_split(s0, s1, &s_breaks, |s| {
                    t_breaks.clear();
                    t_breaks.extend(kinks.iter().map(|c| s + c));
                    rule.integrate_split(t0, t1, &t_breaks, |t| kernel(s, t))
                });
                data.push(scale * value);
            }
        }
        let a = DenseMatrix::from_row_major(m, m, data)
            .map_err(|e| Error::NumericalFailure(format!("operator assembly: {e}")))?;
        Ok(a)
    }

    /// `f_i = int f(s) phi_i(s) ds`.
    pub fn project_data(
        &self,
        f: impl Fn(f64) -> f64,
        kinks: &[f64],
        points: usize,
    ) -> Result<Vector> {
        let rule = GaussLegendre::new(points);
        let h = self.phi_height();
        let v = (0..self.m)
            .map(|i| h * rule.integrate_split(self.s_node(i), self.s_node(i + 1), kinks, &f))
            .collect();
        Vector::new(v).map_err(|e| Error::NumericalFailure(format!("data projection: {e}")))
    }

    /// `y_j = int u(t) psi_j(t) dt`.
    pub fn project_solution(
        &self,
        u: impl Fn(f64) -> f64,
        kinks: &[f64],
        points: usize,
    ) -> Result<Vector> {
        let rule = GaussLegendre::new(points);
        let h = self.psi_height();
        let v = (0..self.m)
            .map(|j| h * rule.integrate_split(self.t_node(j), self.t_node(j + 1), kinks, &u))
            .collect();
        Vector::new(v).map_err(|e| Error::NumericalFailure(format!("solution projection: {e}")))
    }
}

/// Kernel of the first test equation, `k(z) = 1 + cos(pi z / 3)` on `|z| < 3`.
pub fn phillips_kernel(z: f64) -> f64 {
    if z.abs() < 3.0 {
        1.0 + (PI * z / 3.0).cos()
    } else {
        0.0
    }
}

/// Right-hand side consistent with the kernel above and solution `u = k`:
/// `f(s) = (6 - |s|)(1 + cos(pi s/3)/2) + 9/(2 pi) sin(pi |s|/3)` on `|s| <= 6`.
pub fn phillips_data(s: f64) -> f64 {
    let a = s.abs();
    if a > 6.0 {
        return 0.0;
    }
    (6.0 - a) * (1.0 + 0.5 * (PI * s / 3.0).cos()) + 9.0 / (2.0 * PI) * (PI * a / 3.0).sin()
}

/// Green's-function kernel of the second test equation.
pub fn green_kernel(s: f64, t: f64) -> f64 {
    if s < t {
        s * (t - 1.0)
    } else {
        t * (s - 1.0)
    }
}

pub fn green_data(s: f64) -> f64 {
    (s * s * s - s) / 6.0
}

/// Which of the two integral equations to discretize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FredholmKind {
    /// `f(s) = int k(t - s) u(t) dt` with `s, t in [-6, 6]`, solution `u = k`
    /// (so `u` vanishes outside `[-3, 3]`).
    Phillips,
    /// `f(s) = int_0^1 k(s, t) u(t) dt` on `s in (0, 1)`, solution `u(t) = t`.
    Green,
}

impl FredholmKind {
    pub fn grid(&self, m: usize) -> Result<GalerkinGrid> {
        match self {
            FredholmKind::Phillips => GalerkinGrid::new(12.0, 12.0, -6.0, 12.0, -6.0, 12.0, m),
            FredholmKind::Green => GalerkinGrid::new(1.0, 1.0, 0.0, 1.0, 0.0, 1.0, m),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FredholmKind::Phillips => "fredholm-a",
            FredholmKind::Green => "fredholm-b",
        }
    }

    pub fn operator(&self, m: usize, points: usize) -> Result<DenseMatrix> {
        let grid = self.grid(m)?;
        match self {
            FredholmKind::Phillips => {
                grid.assemble_operator(|s, t| phillips_kernel(t - s), &[-3.0, 3.0], points)
            }
            FredholmKind::Green => grid.assemble_operator(green_kernel, &[0.0], points),
        }
    }

    /// Assemble the full instance with a `points`-per-dimension rule.
    pub fn instance(&self, m: usize, points: usize) -> Result<ProblemInstance> {
        let grid = self.grid(m)?;
        let a = self.operator(m, points)?;
        let (f, y) = match self {
            FredholmKind::Phillips => (
                grid.project_data(phillips_data, &[0.0], points)?,
                grid.project_solution(phillips_kernel, &[-3.0, 3.0], points)?,
            ),
            FredholmKind::Green => (
                grid.project_data(green_data, &[], points)?,
                grid.project_solution(|t| t, &[], points)?,
            ),
        };
        // Box projection of a Lipschitz solution leaves an O(h^2) residual
        // in the data; this bound is loose for both equations.
        let h = 1.0 / m as f64;
        let consistency_tol = 10.0 * h * h * f.norm();
        Ok(ProblemInstance {
            name: format!("{}-{m}", self.name()),
            a,
            f_exact: f,
            y_exact: y,
            consistency_tol,
        })
    }
}

pub fn fredholm_a(m: usize) -> Result<ProblemInstance> {
    FredholmKind::Phillips.instance(m, DEFAULT_POINTS)
}

pub fn fredholm_b(m: usize) -> Result<ProblemInstance> {
    FredholmKind::Green.instance(m, DEFAULT_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kernel_is_even() {
        for z in [0.1, 0.7, 1.5, 2.9, 3.0, 4.2] {
            assert_eq!(phillips_kernel(z), phillips_kernel(-z));
        }
        assert_eq!(phillips_kernel(3.0), 0.0);
    }

    #[test]
    fn phillips_data_vanishes_at_support_edge() {
        assert!(phillips_data(6.0).abs() < 1e-14);
        assert!(phillips_data(-6.0).abs() < 1e-14);
        assert_eq!(phillips_data(6.5), 0.0);
    }

    #[test]
    fn phillips_data_matches_convolution() {
        // f(s) = int_{-3}^{3} k(t - s) k(t) dt, integrated independently with a
        // fine composite midpoint rule.
        let n = 200_000;
        for s in [-5.0, -2.5, 0.0, 1.0, 4.4] {
            let h = 6.0 / n as f64;
            let mut acc = 0.0;
            for i in 0..n {
                let t = -3.0 + (i as f64 + 0.5) * h;
                acc += phillips_kernel(t - s) * phillips_kernel(t);
            }
            assert_relative_eq!(
                acc * h,
                phillips_data(s),
                max_relative = 1e-8,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn green_kernel_reproduces_data() {
        // int_0^1 k(s, t) t dt in closed form, piece by piece.
        for s in [0.25f64, 0.5, 0.75] {
            let left = (s - 1.0) * s.powi(3) / 3.0;
            let right = s * ((1.0 / 3.0 - 0.5) - (s.powi(3) / 3.0 - s * s / 2.0));
            assert_relative_eq!(left + right, green_data(s), max_relative = 1e-14);
            let g = GaussLegendre::new(4);
            let num = g.integrate_split(0.0, 1.0, &[s], |t| green_kernel(s, t) * t);
            assert_relative_eq!(num, green_data(s), max_relative = 1e-14);
        }
    }

    #[test]
    fn grids_are_increasing() {
        for kind in [FredholmKind::Phillips, FredholmKind::Green] {
            let g = kind.grid(7).unwrap();
            for i in 0..7 {
                assert!(g.s_node(i + 1) > g.s_node(i));
                assert!(g.t_node(i + 1) > g.t_node(i));
            }
        }
        assert!(FredholmKind::Green.grid(1).is_err());
    }

    #[test]
    fn box_functions_orthonormal() {
        for kind in [FredholmKind::Phillips, FredholmKind::Green] {
            let g = kind.grid(9).unwrap();
            let width_t = g.t_node(1) - g.t_node(0);
            let width_s = g.s_node(1) - g.s_node(0);
            assert_relative_eq!(g.psi_height().powi(2) * width_t, 1.0, max_relative = 1e-14);
            assert_relative_eq!(g.phi_height().powi(2) * width_s, 1.0, max_relative = 1e-14);
            // Projecting psi_j itself recovers the unit vector e_j.
            let j = 4;
            let (t0, t1) = (g.t_node(j), g.t_node(j + 1));
            let h = g.psi_height();
            let e = g
                .project_solution(|t| if t > t0 && t < t1 { h } else { 0.0 }, &[t0, t1], 4)
                .unwrap();
            for (k, v) in e.iter().enumerate() {
                assert_relative_eq!(*v, if k == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }
}
