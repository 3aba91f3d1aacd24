//! CSV and markdown rendering of result rows.

use std::fmt::Write as _;

use crate::error::{BenchError, Result};
use crate::runner::{median, ResultRow};
use crate::spec::Method;

pub const CSV_HEADER: &str =
    "method,problem,m,delta,seed,q,alpha0_used,C,eps,rel_err,iterations,stop_reason";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

pub fn emit(rows: &[ResultRow], format: Format) -> Result<String> {
    if rows.is_empty() {
        return Err(BenchError::Spec("nothing to emit: no result rows".into()));
    }
    match format {
        Format::Csv => to_csv(rows),
        Format::Markdown => Ok(to_markdown(rows)),
    }
}

/// Floats are written in shortest round-trip form, so [`parse_csv`]
/// recovers the rows bit for bit.
pub fn to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != CSV_HEADER {
        return Err(BenchError::Spec(format!(
            "unexpected csv header {header:?}"
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(BenchError::from))
        .collect()
}

/// `x` rounded to `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

fn fmt_iterations(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v}")
    } else {
        format!("{v:.1}")
    }
}

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Median relative error and iteration count per method, one line per
/// `(q, delta)` cell.
pub fn to_markdown(rows: &[ResultRow]) -> String {
    let first = &rows[0];
    let qs = distinct(rows.iter().map(|r| r.q));
    let deltas = distinct(rows.iter().map(|r| r.delta));
    let mut methods: Vec<Method> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    let mut seeds: Vec<u64> = rows.iter().map(|r| r.seed).collect();
    seeds.sort_unstable();
    seeds.dedup();
    let show_q = qs.len() > 1;
    let show_delta = deltas.len() > 1 || !show_q;

    let mut out = String::new();
    writeln!(
        out,
        "Problem {} (m = {}), medians over {} seed(s) of successful runs",
        first.problem,
        first.m,
        seeds.len()
    )
    .unwrap();
    writeln!(out).unwrap();

    let mut header = String::from("|");
    let mut rule = String::from("|");
    if show_q {
        header.push_str(" q |");
        rule.push_str("---|");
    }
    if show_delta {
        header.push_str(" delta |");
        rule.push_str("---|");
    }
    for m in &methods {
        write!(header, " {0} Rel.Err | {0} Iter |", m.label()).unwrap();
        rule.push_str("---|---|");
    }
    writeln!(out, "{header}\n{rule}").unwrap();

    let mut failures = 0;
    for &q in &qs {
        for &delta in &deltas {
            let cell: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| r.q == q && r.delta == delta)
                .collect();
            if cell.is_empty() {
                continue;
            }
            let mut line = String::from("|");
            if show_q {
                write!(line, " {q} |").unwrap();
            }
            if show_delta {
                write!(line, " {delta} |").unwrap();
            }
            for m in &methods {
                let ok: Vec<&&ResultRow> = cell
                    .iter()
                    .filter(|r| r.method == *m && !r.failed())
                    .collect();
                failures += cell.iter().filter(|r| r.method == *m && r.failed()).count();
                let err = median(ok.iter().map(|r| r.rel_err));
                let it = median(ok.iter().map(|r| r.iterations as f64));
                match (err, it) {
                    (Some(e), Some(i)) => {
                        write!(line, " {} | {} |", sig(e, 3), fmt_iterations(i)).unwrap()
                    }
                    _ => line.push_str(" n/a | n/a |"),
                }
            }
            writeln!(out, "{line}").unwrap();
        }
    }
    if failures > 0 {
        writeln!(
            out,
            "\n{failures} of {} runs failed and are excluded.",
            rows.len()
        )
        .unwrap();
    }
    out
}
