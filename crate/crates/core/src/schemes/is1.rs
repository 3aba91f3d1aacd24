//! First scheme: exponential averaging of Tikhonov solutions along the
//! schedule, stopped by the averaged discrepancy
//! `G_n = q G_{n-1} + (1 - q) a_n ||Q_{a_n}^{-1} f_delta||`, `G_0 = 0`.

use super::{
    IterationTrace, SchemeConfig, SolveReport, StopReason, TraceRecord, MAX_ALPHA0_DOUBLINGS,
};
use crate::error::{check_len, Error, Result};
use crate::linalg::{SpectralFactors, Vector};

/// `u_{n+1} = q u_n + (1 - q) T_{alpha0 q^{n+1}}^{-1} A^T f`.
pub fn is1_step(
    factors: &SpectralFactors,
    u: &[f64],
    n: usize,
    cfg: &SchemeConfig,
    f_noisy: &[f64],
) -> Result<Vector> {
    check_len(factors.dim(), u.len())?;
    let tik = factors.regularized_solve(cfg.schedule(n + 1), f_noisy)?;
    Ok(tik.lincomb(1.0 - cfg.q, cfg.q, u))
}

/// The `n`-th iterate from `u_0 = 0` written as a single weighted sum,
/// `sum_{j<n} (q^{n-j-1} - q^{n-j}) T_{alpha0 q^{j+1}}^{-1} A^T f`.
pub fn closed_form_iterate(
    factors: &SpectralFactors,
    n: usize,
    cfg: &SchemeConfig,
    f: &[f64],
) -> Result<Vector> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "closed form is defined for n >= 1".into(),
        ));
    }
    let q = cfg.q;
    let mut acc = Vector::zeros(factors.dim());
    for j in 0..n {
        let weight = q.powi((n - j - 1) as i32) - q.powi((n - j) as i32);
        let tik = factors.regularized_solve(cfg.schedule(j + 1), f)?;
        acc = acc.lincomb(1.0, weight, &tik);
    }
    Ok(acc)
}

/// One step of the `G_n` recursion.
pub fn g_stat_step(
    factors: &SpectralFactors,
    g_prev: f64,
    n: usize,
    cfg: &SchemeConfig,
    f_noisy: &[f64],
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "G recursion starts at n = 1".into(),
        ));
    }
    let disc = factors.discrepancy_norm(cfg.schedule(n), f_noisy)?;
    Ok(cfg.q * g_prev + (1.0 - cfg.q) * disc)
}

/// Iterates `u_1 ..= u_n` from `u_0 = 0` without any stopping rule. With
/// exact data this is the noise-free sequence.
pub fn is1_run_fixed(
    factors: &SpectralFactors,
    data: &[f64],
    cfg: &SchemeConfig,
    n: usize,
) -> Result<Vec<Vector>> {
    cfg.validate()?;
    check_len(factors.dim(), data.len())?;
    let mut u = Vector::zeros(factors.dim());
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        u = is1_step(factors, &u, k, cfg, data)?;
        out.push(u.clone());
    }
    Ok(out)
}

/// Doubles `alpha0` until `G_1 > C delta^eps`.
fn admissible_alpha0(
    factors: &SpectralFactors,
    cfg: &SchemeConfig,
    f_noisy: &[f64],
) -> Result<f64> {
    let threshold = cfg.threshold();
    let mut alpha0 = cfg.alpha0;
    for doublings in 0..=MAX_ALPHA0_DOUBLINGS {
        let trial = SchemeConfig { alpha0, ..*cfg };
        if g_stat_step(factors, 0.0, 1, &trial, f_noisy)? > threshold {
            return Ok(alpha0);
        }
        if doublings < MAX_ALPHA0_DOUBLINGS {
            alpha0 *= 2.0;
        }
    }
    Err(Error::AssumptionFailure {
        doublings: MAX_ALPHA0_DOUBLINGS,
        last_alpha0: alpha0,
    })
}

/// Runs the first scheme from `u_0 = 0` and stops at the first `n` with
/// `G_n <= C delta^eps`.
///
/// `alpha0` is first doubled (at most [`MAX_ALPHA0_DOUBLINGS`] times) until
/// `G_1 > C delta^eps`; the value actually used is reported.
pub fn is1_solve(
    factors: &SpectralFactors,
    f_noisy: &[f64],
    cfg: &SchemeConfig,
) -> Result<SolveReport> {
    check_len(factors.dim(), f_noisy.len())?;
    cfg.check_noisy_run(f_noisy)?;

    let alpha0 = admissible_alpha0(factors, cfg, f_noisy)?;
    let adjusted = alpha0 != cfg.alpha0;
    let run = SchemeConfig { alpha0, ..*cfg };
    let threshold = run.threshold();

    let mut u = Vector::zeros(factors.dim());
    let mut g = 0.0;
    let mut trace = IterationTrace::default();
    let mut iterates = run.capture_iterates.then(Vec::new);

    for n in 1..=run.n_max {
        let next = is1_step(factors, &u, n - 1, &run, f_noisy)?;
        g = g_stat_step(factors, g, n, &run, f_noisy)?;
        trace.records.push(TraceRecord {
            n,
            a_n: run.schedule(n),
            stat: g,
            update_norm: next.distance(&u),
        });
        u = next;
        if let Some(list) = iterates.as_mut() {
            list.push(u.clone());
        }
        if g <= threshold {
            let stop_reason = if adjusted {
                StopReason::AssumptionAdjustedThenMet
            } else {
                StopReason::DiscrepancyMet
            };
            return Ok(SolveReport {
                solution: u,
                stop_index: n,
                stop_reason,
                trace,
                alpha0_used: alpha0,
                iterates,
            });
        }
    }

    Ok(SolveReport {
        solution: u,
        stop_index: run.n_max,
        stop_reason: StopReason::CapReached,
        trace,
        alpha0_used: alpha0,
        iterates,
    })
}
