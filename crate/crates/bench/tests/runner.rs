use dsm_bench::runner::{q_sweep_with, run_with, solve_one};
use dsm_bench::*;
use dsm_core::problems::{add_noise, NoiseSpec};
use dsm_core::relative_error;

fn small_spec() -> ExperimentSpec {
    ExperimentSpec {
        m: 40,
        deltas: vec![0.03, 0.01],
        seeds: vec![1, 2],
        ..Default::default()
    }
}

fn same_rows(a: &[ResultRow], b: &[ResultRow]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            let nan_eq = x.rel_err.is_nan() && y.rel_err.is_nan();
            (x == y)
                || (nan_eq
                    && ResultRow {
                        rel_err: 0.0,
                        ..x.clone()
                    } == ResultRow {
                        rel_err: 0.0,
                        ..y.clone()
                    })
        })
}

#[test]
fn rows_come_in_delta_seed_method_order() {
    let spec = small_spec();
    let rows = run_experiment(&spec).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3);
    let keys: Vec<(f64, u64, Method)> = rows.iter().map(|r| (r.delta, r.seed, r.method)).collect();
    let mut expected = Vec::new();
    for d in &spec.deltas {
        for s in &spec.seeds {
            for m in &spec.methods {
                expected.push((*d, *s, *m));
            }
        }
    }
    assert_eq!(keys, expected);
}

#[test]
fn identical_specs_give_identical_bytes() {
    let spec = small_spec();
    let a = emit(&run_experiment(&spec).unwrap(), Format::Csv).unwrap();
    let b = emit(&run_experiment(&spec).unwrap(), Format::Csv).unwrap();
    assert_eq!(a, b);
}

#[test]
fn csv_parses_back_exactly() {
    let spec = ExperimentSpec {
        problem: ProblemKind::FredholmB,
        m: 60,
        alpha0: 4.0,
        deltas: vec![0.05, 0.01],
        ..small_spec()
    };
    let rows = run_experiment(&spec).unwrap();
    let text = emit(&rows, Format::Csv).unwrap();
    assert!(text.starts_with(CSV_HEADER));
    assert!(same_rows(&parse_csv(&text).unwrap(), &rows));
}

#[test]
fn stored_error_matches_recomputed_error() {
    let spec = small_spec();
    let prepared = PreparedProblem::new(spec.problem, spec.m).unwrap();
    let noisy = add_noise(&prepared.instance.f_exact, NoiseSpec::new(0.01, 7).unwrap()).unwrap();
    for method in Method::ALL {
        let (row, solution) = solve_one(&spec, &prepared, method, spec.q, 0.01, 7, &noisy);
        let recomputed = relative_error(&solution.unwrap(), &prepared.instance.y_exact);
        assert!((recomputed - row.rel_err).abs() <= 1e-14 * row.rel_err.max(1.0));
    }
}

#[test]
fn empty_method_list_is_a_spec_error() {
    let spec = ExperimentSpec {
        methods: vec![],
        ..small_spec()
    };
    assert!(matches!(run_experiment(&spec), Err(BenchError::Spec(_))));
}

#[test]
fn failures_become_rows() {
    // Noise larger than the data: every solver refuses, the batch still completes.
    let spec = ExperimentSpec {
        problem: ProblemKind::FredholmB,
        m: 30,
        deltas: vec![1.0],
        ..small_spec()
    };
    let rows = run_experiment(&spec).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.failed() && r.rel_err.is_nan()));
    assert!(rows.iter().any(|r| r.stop_reason == "failed:no-root"));
    assert!(rows.iter().any(|r| r.stop_reason == "failed:precondition"));
}

#[test]
fn single_value_sweep_equals_plain_run() {
    let spec = small_spec();
    let prepared = PreparedProblem::new(spec.problem, spec.m).unwrap();
    let sweep = q_sweep_with(&spec, &[spec.q], &prepared).unwrap();
    assert_eq!(sweep.rows, run_with(&spec, &prepared).unwrap());
}

#[test]
fn hilbert_iterations_grow_with_q() {
    let spec = ExperimentSpec {
        methods: vec![Method::Is1, Method::Is2],
        ..Default::default()
    };
    let sweep = q_sweep(&spec, &[0.5, 0.25, 0.125]).unwrap();
    assert!(sweep.iterations_monotone_in_q(Method::Is1));
    assert!(sweep.iterations_monotone_in_q(Method::Is2));
}

#[test]
fn mean_error_shrinks_with_noise_on_hilbert() {
    let spec = ExperimentSpec {
        deltas: vec![0.05, 0.03, 0.01],
        seeds: (1..=20).collect(),
        methods: vec![Method::Is1, Method::Is2],
        ..Default::default()
    };
    let rows = run_experiment(&spec).unwrap();
    for method in [Method::Is1, Method::Is2] {
        let means: Vec<f64> = spec
            .deltas
            .iter()
            .map(|d| {
                let errs: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.method == method && r.delta == *d)
                    .map(|r| r.rel_err)
                    .collect();
                errs.iter().sum::<f64>() / errs.len() as f64
            })
            .collect();
        assert!(
            means[0] >= means[1] && means[1] >= means[2],
            "{method}: {means:?}"
        );
    }
}
