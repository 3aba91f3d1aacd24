//! Iterative regularization schemes driven by a geometric schedule
//! `a_n = alpha0 * q^n`, each with an a posteriori stopping rule.
//!
//! * [`is1`]: `u_{n+1} = q u_n + (1 - q) T_{a_{n+1}}^{-1} A^T f`, stopped by
//!   the exponentially averaged discrepancy `G_n`.
//! * [`is2`]: `u_{n+1} = a_n T_{a_n}^{-1} u_n + T_{a_n}^{-1} A^T f`, stopped
//!   by the plain Tikhonov residual `W_n`.
//!
//! Both stop at the first `n` whose statistic is `<= C * delta^eps`.

pub mod is1;
pub mod is2;

pub use is1::{closed_form_iterate, g_stat_step, is1_run_fixed, is1_solve, is1_step};
pub use is2::{is2_run_fixed, is2_solve, is2_step};

use crate::error::{Error, Result};
use crate::linalg::Vector;

pub const DEFAULT_N_MAX: usize = 200;

/// Maximum number of times `alpha0` is doubled while looking for a value
/// with `G_1 > C delta^eps`.
pub const MAX_ALPHA0_DOUBLINGS: u32 = 60;

/// Schedule and stopping parameters shared by both schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    /// Ratio of the geometric schedule, in `(0, 1)`.
    pub q: f64,
    pub alpha0: f64,
    /// Discrepancy constant, `> 1`.
    pub c: f64,
    /// Exponent on the noise level, in `(0, 1)`.
    pub eps: f64,
    /// Iteration cap.
    pub n_max: usize,
    /// Noise level `||f_delta - f||`.
    pub delta: f64,
    /// Keep every iterate in the report.
    pub capture_iterates: bool,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            q: 0.25,
            alpha0: 1.0,
            c: 1.01,
            eps: 0.99,
            n_max: DEFAULT_N_MAX,
            delta: 1e-2,
            capture_iterates: false,
        }
    }
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("q must lie in (0, 1), got {}", self.q));
        }
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            return bad(format!("alpha0 must be positive, got {}", self.alpha0));
        }
        if !(self.c.is_finite() && self.c > 1.0) {
            return bad(format!("C must exceed 1, got {}", self.c));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps must lie in (0, 1), got {}", self.eps));
        }
        if self.n_max == 0 {
            return bad("n_max must be at least 1".into());
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return bad(format!(
                "delta must be finite and nonnegative, got {}",
                self.delta
            ));
        }
        Ok(())
    }

    /// Stopping threshold `C delta^eps`.
    pub fn threshold(&self) -> f64 {
        self.c * self.delta.powf(self.eps)
    }

    /// `alpha0 * q^n`.
    pub fn schedule(&self, n: usize) -> f64 {
        self.alpha0 * self.q.powi(n as i32)
    }

    /// Validation shared by the discrepancy-stopped solvers.
    pub(crate) fn check_noisy_run(&self, f_noisy: &[f64]) -> Result<()> {
        self.validate()?;
        if self.delta <= 0.0 {
            return Err(Error::InvalidParameter(
                "discrepancy stopping needs delta > 0; use the fixed-count runs for exact data"
                    .into(),
            ));
        }
        let data_norm = crate::linalg::norm(f_noisy);
        if data_norm <= self.threshold() {
            return Err(Error::Precondition(format!(
                "||f_delta|| = {data_norm:e} must exceed C*delta^eps = {:e}",
                self.threshold()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    DiscrepancyMet,
    CapReached,
    /// `alpha0` had to be enlarged before the run, which then met the rule.
    AssumptionAdjustedThenMet,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::DiscrepancyMet => "discrepancy-met",
            StopReason::CapReached => "cap-reached",
            StopReason::AssumptionAdjustedThenMet => "assumption-adjusted-then-met",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One iteration: the iterate index `n`, the regularization value used to
/// reach it, the stopping statistic, and `||u_n - u_{n-1}||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub a_n: f64,
    pub stat: f64,
    pub update_norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
}

impl IterationTrace {
    pub fn stats(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.stat).collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vector,
    pub stop_index: usize,
    pub stop_reason: StopReason,
    pub trace: IterationTrace,
    pub alpha0_used: f64,
    /// `u_1 ..= u_{stop_index}` when `capture_iterates` was set.
    pub iterates: Option<Vec<Vector>>,
}

impl SolveReport {
    pub fn final_stat(&self) -> f64 {
        self.trace.records.last().map_or(f64::NAN, |r| r.stat)
    }
}
