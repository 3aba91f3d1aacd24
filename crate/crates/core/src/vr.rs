//! Variational regularization baseline: the Tikhonov solution
//! `u(a) = (A^T A + a I)^{-1} A^T f_delta` with `a` chosen so that
//! `||A u(a) - f_delta||^2 = (C delta)^2`, solved by Newton's method.
//!
//! Newton on this equation is only locally convergent, so the initial
//! parameter is halved, `alpha0 / 2^k` for `k = 0, 1, ...`, until a run
//! converges. Each halving level restarts Newton from scratch.

use crate::error::{check_len, check_positive, Error, Result};
use crate::linalg::{norm, SpectralFactors, Vector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VrConfig {
    /// Initial parameter before halving.
    pub alpha0: f64,
    pub c: f64,
    pub delta: f64,
    /// Newton stops once `|phi(a)| <= newton_tol_factor * (C delta)^2`.
    pub newton_tol_factor: f64,
    pub max_newton_iters: usize,
    pub max_halvings: u32,
}

impl Default for VrConfig {
    fn default() -> Self {
        Self {
            alpha0: 1.0,
            c: 1.01,
            delta: 1e-2,
            newton_tol_factor: 1e-3,
            max_newton_iters: 50,
            max_halvings: 40,
        }
    }
}

impl VrConfig {
    pub fn validate(&self) -> Result<()> {
        check_positive("alpha0", self.alpha0)?;
        if !(self.c.is_finite() && self.c > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "C must exceed 1, got {}",
                self.c
            )));
        }
        check_positive("delta", self.delta)?;
        check_positive("newton_tol_factor", self.newton_tol_factor)?;
        if self.max_newton_iters == 0 || self.max_halvings == 0 {
            return Err(Error::InvalidParameter(
                "iteration limits must be positive".into(),
            ));
        }
        Ok(())
    }

    fn target(&self) -> f64 {
        let cd = self.c * self.delta;
        cd * cd
    }
}

#[derive(Debug, Clone)]
pub struct VrReport {
    pub solution: Vector,
    pub a_final: f64,
    /// Number of halvings applied to `alpha0` before Newton converged.
    pub k_delta: u32,
    pub newton_iters: usize,
    pub converged: bool,
}

/// Residual equation `||A u(a) - f_delta||^2 - (C delta)^2`.
pub fn phi(factors: &SpectralFactors, a: f64, f_noisy: &[f64], c: f64, delta: f64) -> Result<f64> {
    check_positive("regularization parameter", a)?;
    let beta = factors.left_coefficients(f_noisy)?;
    let cd = c * delta;
    Ok(residual_sq(factors.singular_values(), &beta, a) - cd * cd)
}

/// Derivative of [`phi`] in `a`: `sum_i 2 a sigma_i^2 beta_i^2 / (sigma_i^2 + a)^3`.
pub fn phi_prime(factors: &SpectralFactors, a: f64, f_noisy: &[f64]) -> Result<f64> {
    check_positive("regularization parameter", a)?;
    let beta = factors.left_coefficients(f_noisy)?;
    Ok(residual_sq_derivative(factors.singular_values(), &beta, a))
}

fn residual_sq(sigma: &[f64], beta: &[f64], a: f64) -> f64 {
    sigma
        .iter()
        .zip(beta)
        .map(|(s, b)| {
            let r = a / (s * s + a) * b;
            r * r
        })
        .sum()
}

fn residual_sq_derivative(sigma: &[f64], beta: &[f64], a: f64) -> f64 {
    sigma
        .iter()
        .zip(beta)
        .map(|(s, b)| {
            let s2 = s * s;
            let d = s2 + a;
            2.0 * a * s2 * b * b / (d * d * d)
        })
        .sum()
}

/// Outcome of one Newton run: converged parameter and update count.
fn newton(
    sigma: &[f64],
    beta: &[f64],
    start: f64,
    target: f64,
    cfg: &VrConfig,
) -> Option<(f64, usize)> {
    let tol = cfg.newton_tol_factor * target;
    let mut a = start;
    for iter in 0..=cfg.max_newton_iters {
        let value = residual_sq(sigma, beta, a) - target;
        if value.abs() <= tol {
            return Some((a, iter));
        }
        if iter == cfg.max_newton_iters {
            break;
        }
        let slope = residual_sq_derivative(sigma, beta, a);
        if slope == 0.0 || !slope.is_finite() {
            return None;
        }
        a -= value / slope;
        if !(a.is_finite() && a > 0.0) {
            return None;
        }
    }
    None
}

/// Solves the residual equation by Newton's method with the halving restart.
pub fn vr_solve(factors: &SpectralFactors, f_noisy: &[f64], cfg: &VrConfig) -> Result<VrReport> {
    cfg.validate()?;
    check_len(factors.dim(), f_noisy.len())?;
    let data_norm = norm(f_noisy);
    let target_norm = cfg.c * cfg.delta;
    if data_norm <= target_norm {
        return Err(Error::NoRoot {
            data_norm,
            target: target_norm,
        });
    }
    let beta = factors.left_coefficients(f_noisy)?;
    let sigma = factors.singular_values();
    let target = cfg.target();

    for k in 0..=cfg.max_halvings {
        let start = cfg.alpha0 / 2f64.powi(k as i32);
        if let Some((a, iters)) = newton(sigma, &beta, start, target, cfg) {
            return Ok(VrReport {
                solution: factors.regularized_solve(a, f_noisy)?,
                a_final: a,
                k_delta: k,
                newton_iters: iters,
                converged: true,
            });
        }
    }
    Err(Error::ConvergenceFailure {
        attempts: cfg.max_halvings + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{svd, DenseMatrix};
    use approx::assert_relative_eq;

    fn unit() -> SpectralFactors {
        svd(&DenseMatrix::identity(1)).unwrap()
    }

    #[test]
    fn scalar_phi_has_root_at_one() {
        // phi(a) = (a/(1+a))^2 - 0.25
        let f = unit();
        assert_relative_eq!(
            phi(&f, 1.0, &[1.0], 1.25, 0.4).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            phi(&f, 3.0, &[1.0], 1.25, 0.4).unwrap(),
            0.5625 - 0.25,
            epsilon = 1e-15
        );
    }

    #[test]
    fn scalar_phi_prime() {
        assert_relative_eq!(
            phi_prime(&unit(), 1.0, &[1.0]).unwrap(),
            0.25,
            max_relative = 1e-15
        );
        assert_eq!(phi_prime(&unit(), 2.0, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn large_parameter_limit() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| 1.0 / (i + j + 1) as f64).unwrap();
        let f = svd(&a).unwrap();
        let data = [0.3, -1.0, 2.0];
        let v = phi(&f, 1e12, &data, 1.01, 0.1).unwrap();
        let expected = norm(&data).powi(2) - (0.101f64).powi(2);
        assert_relative_eq!(v, expected, max_relative = 1e-6);
    }

    #[test]
    fn rejects_bad_parameter() {
        assert!(matches!(
            phi(&unit(), 0.0, &[1.0], 1.1, 0.1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            phi_prime(&unit(), -1.0, &[1.0]),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn scalar_solve_from_four() {
        // From a = 4 the first Newton step overshoots below zero (phi is
        // concave for a > 1/2), so one halving is needed; from a = 2 it lands
        // on the root a = 1.
        let cfg = VrConfig {
            alpha0: 4.0,
            c: 1.25,
            delta: 0.4,
            ..Default::default()
        };
        let rep = vr_solve(&unit(), &[1.0], &cfg).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.k_delta, 1);
        assert!(rep.newton_iters <= 10);
        assert!(phi(&unit(), rep.a_final, &[1.0], 1.25, 0.4).unwrap().abs() <= 1e-3 * 0.25);
        assert_relative_eq!(rep.a_final, 1.0, max_relative = 1e-2);
        assert_relative_eq!(
            rep.solution[0],
            1.0 / (1.0 + rep.a_final),
            max_relative = 1e-14
        );
    }

    #[test]
    fn no_root_when_data_too_small() {
        let cfg = VrConfig {
            c: 1.1,
            delta: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            vr_solve(&unit(), &[1.0], &cfg),
            Err(Error::NoRoot { .. })
        ));
    }

    #[test]
    fn convergence_failure_after_all_halvings() {
        // Root is at a = 1; starting from 1e30 with only two halvings, Newton
        // shoots negative every time.
        let cfg = VrConfig {
            alpha0: 1e30,
            c: 1.25,
            delta: 0.4,
            max_halvings: 2,
            ..Default::default()
        };
        assert!(matches!(
            vr_solve(&unit(), &[1.0], &cfg),
            Err(Error::ConvergenceFailure { attempts: 3 })
        ));
    }
}
