//! Second scheme: the stationary iterated-Tikhonov recursion with its
//! parameter replaced by the schedule `a_n = alpha0 q^n`,
//! `u_{n+1} = a_n T_{a_n}^{-1} u_n + T_{a_n}^{-1} A^T f`, `u_1 = 0`.
//!
//! The stopping statistic is the Tikhonov residual at the current parameter,
//! `W_n = ||A T_{a_n}^{-1} A^T f_delta - f_delta|| = a_n ||Q_{a_n}^{-1} f_delta||`,
//! which is nonincreasing in `n`.

use super::{IterationTrace, SchemeConfig, SolveReport, StopReason, TraceRecord};
use crate::error::{check_len, Error, Result};
use crate::linalg::{SpectralFactors, Vector};

/// `u_{n+1}` from `u_n`. Iterates are numbered from `n = 1`.
pub fn is2_step(
    factors: &SpectralFactors,
    u: &[f64],
    n: usize,
    cfg: &SchemeConfig,
    f_noisy: &[f64],
) -> Result<Vector> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "second scheme iterates start at n = 1".into(),
        ));
    }
    check_len(factors.dim(), u.len())?;
    let a = cfg.schedule(n);
    let damped = factors.apply_t_inverse(a, u)?;
    let tik = factors.regularized_solve(a, f_noisy)?;
    Ok(damped.lincomb(a, 1.0, &tik))
}

/// Iterates `u_1 ..= u_n` with `u_1 = 0`, no stopping rule.
pub fn is2_run_fixed(
    factors: &SpectralFactors,
    data: &[f64],
    cfg: &SchemeConfig,
    n: usize,
) -> Result<Vec<Vector>> {
    cfg.validate()?;
    check_len(factors.dim(), data.len())?;
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let mut u = Vector::zeros(factors.dim());
    out.push(u.clone());
    for k in 1..n {
        u = is2_step(factors, &u, k, cfg, data)?;
        out.push(u.clone());
    }
    Ok(out)
}

/// Runs the second scheme and stops at the first `n` with
/// `W_n <= C delta^eps`, returning `u_n`.
pub fn is2_solve(
    factors: &SpectralFactors,
    f_noisy: &[f64],
    cfg: &SchemeConfig,
) -> Result<SolveReport> {
    check_len(factors.dim(), f_noisy.len())?;
    cfg.check_noisy_run(f_noisy)?;
    let threshold = cfg.threshold();
    let beta = factors.left_coefficients(f_noisy)?;

    let mut u = Vector::zeros(factors.dim());
    let mut update_norm = 0.0;
    let mut trace = IterationTrace::default();
    let mut iterates = cfg.capture_iterates.then(|| vec![u.clone()]);

    for n in 1..=cfg.n_max {
        let a = cfg.schedule(n);
        let w = crate::linalg::discrepancy_from_coefficients(factors.singular_values(), &beta, a);
        trace.records.push(TraceRecord {
            n,
            a_n: a,
            stat: w,
            update_norm,
        });
        if w <= threshold {
            return Ok(SolveReport {
                solution: u,
                stop_index: n,
                stop_reason: StopReason::DiscrepancyMet,
                trace,
                alpha0_used: cfg.alpha0,
                iterates,
            });
        }
        if n == cfg.n_max {
            break;
        }
        let next = is2_step(factors, &u, n, cfg, f_noisy)?;
        update_norm = next.distance(&u);
        u = next;
        if let Some(list) = iterates.as_mut() {
            list.push(u.clone());
        }
    }

    Ok(SolveReport {
        solution: u,
        stop_index: cfg.n_max,
        stop_reason: StopReason::CapReached,
        trace,
        alpha0_used: cfg.alpha0,
        iterates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{svd, DenseMatrix};
    use approx::assert_relative_eq;

    #[test]
    fn first_step_on_identity() {
        let f = svd(&DenseMatrix::identity(1)).unwrap();
        let cfg = SchemeConfig {
            q: 0.5,
            alpha0: 1.0,
            ..Default::default()
        };
        let u2 = is2_step(&f, &[0.0], 1, &cfg, &[1.0]).unwrap();
        assert_relative_eq!(u2[0], 1.0 / 1.5, max_relative = 1e-15);
        assert!(is2_step(&f, &[0.0], 0, &cfg, &[1.0]).is_err());
    }

    #[test]
    fn zero_data_stays_zero() {
        let f = svd(&DenseMatrix::from_fn(3, 3, |i, j| 1.0 / (i + j + 1) as f64).unwrap()).unwrap();
        let cfg = SchemeConfig::default();
        let mut u = Vector::zeros(3);
        for n in 1..10 {
            u = is2_step(&f, &u, n, &cfg, &[0.0; 3]).unwrap();
            assert!(u.iter().all(|x| *x == 0.0));
        }
    }

    #[test]
    fn stat_is_tikhonov_residual() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| 1.0 / (i + j + 1) as f64).unwrap();
        let f = svd(&a).unwrap();
        let data = [1.0, 2.0, -1.0];
        let cfg = SchemeConfig {
            delta: 1e-4,
            ..Default::default()
        };
        let rep = is2_solve(&f, &data, &cfg).unwrap();
        for r in &rep.trace.records {
            let x = f.regularized_solve(r.a_n, &data).unwrap();
            let resid = a.matvec(&x).unwrap().distance(&data);
            assert_relative_eq!(r.stat, resid, max_relative = 1e-9);
        }
    }

    #[test]
    fn immediate_stop_returns_initial_iterate() {
        // W_1 = a/(1+a) ||f|| with a = 0.25 is 0.2; a threshold above that but
        // below ||f|| = 1 stops at n = 1.
        let f = svd(&DenseMatrix::identity(1)).unwrap();
        let cfg = SchemeConfig {
            delta: 0.3,
            c: 1.1,
            ..Default::default()
        };
        let rep = is2_solve(&f, &[1.0], &cfg).unwrap();
        assert_eq!(rep.stop_index, 1);
        assert_eq!(rep.solution[0], 0.0);
    }

    #[test]
    fn captured_iterates_match_fixed_run() {
        let f = svd(&DenseMatrix::from_fn(4, 4, |i, j| 1.0 / (i + j + 2) as f64).unwrap()).unwrap();
        let data = [1.0, 0.5, -0.2, 0.3];
        let cfg = SchemeConfig {
            delta: 1e-3,
            capture_iterates: true,
            ..Default::default()
        };
        let rep = is2_solve(&f, &data, &cfg).unwrap();
        let fixed = is2_run_fixed(&f, &data, &cfg, rep.stop_index).unwrap();
        assert_eq!(rep.iterates.unwrap(), fixed);
        assert_eq!(&rep.solution, fixed.last().unwrap());
    }

    #[test]
    fn cap_reached_reported() {
        let f = svd(&DenseMatrix::identity(1)).unwrap();
        let cfg = SchemeConfig {
            n_max: 3,
            delta: 1e-9,
            ..Default::default()
        };
        let rep = is2_solve(&f, &[1.0], &cfg).unwrap();
        assert_eq!(rep.stop_reason, StopReason::CapReached);
        assert_eq!(rep.stop_index, 3);
    }
}
