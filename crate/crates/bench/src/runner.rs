//! Batch execution: noise, solve, and score every (delta, seed, method).

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spec::{ExperimentSpec, Method, PreparedProblem};
use dsm_core::linalg::Vector;
use dsm_core::problems::{add_noise, NoiseSpec};
use dsm_core::schemes::{is1_solve, is2_solve};
use dsm_core::vr::vr_solve;
use dsm_core::{relative_error, Error};

pub const NEWTON_CONVERGED: &str = "newton-converged";

/// One solver run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub method: Method,
    pub problem: String,
    pub m: usize,
    pub delta: f64,
    pub seed: u64,
    pub q: f64,
    /// Start value the solver actually used: the doubled `alpha0` for IS1,
    /// the halved Newton start for VR.
    pub alpha0_used: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub eps: f64,
    /// NaN for failed runs.
    pub rel_err: f64,
    /// Stopping index for the iterative schemes, Newton steps for VR.
    pub iterations: usize,
    /// Stop reason, or `failed:<kind>` when the solver returned an error.
    pub stop_reason: String,
}

impl ResultRow {
    pub fn failed(&self) -> bool {
        self.stop_reason.starts_with("failed:")
    }

    /// Number of halvings VR needed, recovered from `alpha0_used`.
    pub fn halvings(&self, alpha0: f64) -> Option<u32> {
        if self.method != Method::Vr || self.failed() {
            return None;
        }
        Some((alpha0 / self.alpha0_used).log2().round() as u32)
    }
}

fn failure_kind(err: &Error) -> &'static str {
    match err {
        Error::InvalidInput(_) => "invalid-input",
        Error::InvalidParameter(_) => "invalid-parameter",
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::NumericalFailure(_) => "numerical-failure",
        Error::Precondition(_) => "precondition",
        Error::AssumptionFailure { .. } => "assumption-failure",
        Error::ConvergenceFailure { .. } => "convergence-failure",
        Error::NoRoot { .. } => "no-root",
    }
}

/// Runs a single method and returns its row plus the computed solution.
pub fn solve_one(
    spec: &ExperimentSpec,
    prepared: &PreparedProblem,
    method: Method,
    q: f64,
    delta: f64,
    seed: u64,
    noisy: &[f64],
) -> (ResultRow, Option<Vector>) {
    let inst = &prepared.instance;
    let mut row = ResultRow {
        method,
        problem: spec.problem.to_string(),
        m: inst.m(),
        delta,
        seed,
        q,
        alpha0_used: spec.alpha0,
        c: spec.c_for(method),
        eps: spec.eps,
        rel_err: f64::NAN,
        iterations: 0,
        stop_reason: String::new(),
    };
    let outcome = match method {
        Method::Is1 | Method::Is2 => {
            let cfg = spec.scheme_config(method, q, delta);
            let solve = if method == Method::Is1 {
                is1_solve
            } else {
                is2_solve
            };
            solve(&prepared.factors, noisy, &cfg).map(|r| {
                (
                    r.solution,
                    r.stop_index,
                    r.alpha0_used,
                    r.stop_reason.as_str().to_string(),
                )
            })
        }
        Method::Vr => {
            let cfg = spec.vr_config(delta);
            vr_solve(&prepared.factors, noisy, &cfg).map(|r| {
                let start = cfg.alpha0 / 2f64.powi(r.k_delta as i32);
                (
                    r.solution,
                    r.newton_iters,
                    start,
                    NEWTON_CONVERGED.to_string(),
                )
            })
        }
    };
    match outcome {
        Ok((solution, iterations, alpha0_used, reason)) => {
            row.rel_err = relative_error(&solution, &inst.y_exact);
            row.iterations = iterations;
            row.alpha0_used = alpha0_used;
            row.stop_reason = reason;
            (row, Some(solution))
        }
        Err(err) => {
            if let Error::AssumptionFailure { last_alpha0, .. } = err {
                row.alpha0_used = last_alpha0;
            }
            row.stop_reason = format!("failed:{}", failure_kind(&err));
            (row, None)
        }
    }
}

fn run_prepared(
    spec: &ExperimentSpec,
    prepared: &PreparedProblem,
    q: f64,
) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::with_capacity(spec.deltas.len() * spec.seeds.len() * spec.methods.len());
    for &delta in &spec.deltas {
        for &seed in &spec.seeds {
            let noisy = add_noise(&prepared.instance.f_exact, NoiseSpec::new(delta, seed)?)?;
            for &method in &spec.methods {
                rows.push(solve_one(spec, prepared, method, q, delta, seed, &noisy).0);
            }
        }
    }
    Ok(rows)
}

/// Rows in `(delta, seed, method)` order, as listed in the spec.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let prepared = PreparedProblem::new(spec.problem, spec.m)?;
    run_with(spec, &prepared)
}

/// Like [`run_experiment`] on an already factored instance.
pub fn run_with(spec: &ExperimentSpec, prepared: &PreparedProblem) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    run_prepared(spec, prepared, spec.q)
}

/// Result of [`q_sweep`]: rows in `(q, delta, seed, method)` order.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub q_values: Vec<f64>,
    pub rows: Vec<ResultRow>,
}

impl SweepTable {
    /// Median iteration counts of `method` per q value, over successful rows.
    pub fn median_iterations(&self, method: Method) -> Vec<Option<f64>> {
        self.q_values
            .iter()
            .map(|q| {
                median(
                    self.rows
                        .iter()
                        .filter(|r| r.method == method && r.q == *q && !r.failed())
                        .map(|r| r.iterations as f64),
                )
            })
            .collect()
    }

    /// Whether median iterations never decrease as q grows.
    pub fn iterations_monotone_in_q(&self, method: Method) -> bool {
        let mut pairs: Vec<(f64, f64)> = self
            .q_values
            .iter()
            .zip(self.median_iterations(method))
            .filter_map(|(q, it)| it.map(|it| (*q, it)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

pub fn q_sweep(spec: &ExperimentSpec, q_values: &[f64]) -> Result<SweepTable> {
    let prepared = PreparedProblem::new(spec.problem, spec.m)?;
    q_sweep_with(spec, q_values, &prepared)
}

pub fn q_sweep_with(
    spec: &ExperimentSpec,
    q_values: &[f64],
    prepared: &PreparedProblem,
) -> Result<SweepTable> {
    let checked = ExperimentSpec {
        q_values: q_values.to_vec(),
        ..spec.clone()
    };
    checked.validate()?;
    if q_values.is_empty() {
        return Err(crate::error::BenchError::Spec(
            "q sweep needs at least one value".into(),
        ));
    }
    let mut rows = Vec::new();
    for &q in q_values {
        rows.extend(run_prepared(
            &ExperimentSpec {
                q,
                ..checked.clone()
            },
            prepared,
            q,
        )?);
    }
    Ok(SweepTable {
        q_values: q_values.to_vec(),
        rows,
    })
}

/// Median of the values; the mean of the middle pair for even counts.
pub fn median(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let mut v: Vec<f64> = values.into_iter().collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}
