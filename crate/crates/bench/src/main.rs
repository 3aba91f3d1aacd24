use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use dsm_bench::manifest::{write_manifest, RunManifest};
use dsm_bench::runner::{q_sweep_with, run_with};
use dsm_bench::{
    emit, ExperimentSpec, Format, Method, PreparedProblem, ProblemKind, ResultRow, SpecFile,
};

#[derive(Parser)]
#[command(
    name = "dsm-bench",
    version,
    about = "Run regularization experiments on benchmark problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every (delta, seed, method) combination and report the results.
    Run(RunArgs),
    /// Repeat the run for each q value.
    SweepQ(SweepArgs),
    /// Write a problem instance as plain text.
    ExportProblem(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Hilbert,
    FredholmA,
    FredholmB,
}

impl From<ProblemArg> for ProblemKind {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Hilbert => ProblemKind::Hilbert,
            ProblemArg::FredholmA => ProblemKind::FredholmA,
            ProblemArg::FredholmB => ProblemKind::FredholmB,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Is1,
    Is2,
    Vr,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Is1 => Method::Is1,
            MethodArg::Is2 => Method::Is2,
            MethodArg::Vr => Method::Vr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

#[derive(Args)]
struct SpecArgs {
    /// Start from a named preset (table2 ... table7).
    #[arg(long)]
    preset: Option<String>,
    /// Flat `key = value` file with experiment fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    problem: Option<ProblemArg>,
    #[arg(long)]
    m: Option<usize>,
    /// Absolute noise level; repeat for several.
    #[arg(long = "delta")]
    deltas: Vec<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    alpha0: Option<f64>,
    /// Discrepancy constant for all three methods.
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    #[arg(long = "method", value_enum)]
    methods: Vec<MethodArg>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output file; stdout when absent. CSV output also gets a manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    spec: SpecArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Sweep value; repeat for several. Defaults to 0.5, 0.25, 0.125.
    #[arg(long = "q-value")]
    q_values: Vec<f64>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, value_enum)]
    problem: ProblemArg,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status: 0 success, 2 some rows failed, 1 bad input or I/O error.
enum Outcome {
    Clean,
    RowFailures,
}

fn build_spec(args: &SpecArgs) -> anyhow::Result<ExperimentSpec> {
    let mut preset = args.preset.clone();
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let file = SpecFile::parse(&text)?;
            preset = preset.or(file.preset.clone());
            Some(file)
        }
        None => None,
    };
    let base = match preset {
        Some(name) => ExperimentSpec::preset(&name)?,
        None => ExperimentSpec::default(),
    };
    let mut spec = match file {
        Some(file) => file.apply(base),
        None => base,
    };
    if let Some(p) = args.problem {
        spec.problem = p.into();
    }
    if let Some(m) = args.m {
        spec.m = m;
    }
    if !args.deltas.is_empty() {
        spec.deltas = args.deltas.clone();
    }
    if let Some(q) = args.q {
        spec.q = q;
    }
    if let Some(a) = args.alpha0 {
        spec.alpha0 = a;
    }
    if let Some(c) = args.c {
        spec.c_is1 = c;
        spec.c_is2 = c;
        spec.c_vr = c;
    }
    if let Some(e) = args.eps {
        spec.eps = e;
    }
    if !args.seeds.is_empty() {
        spec.seeds = args.seeds.clone();
    }
    if !args.methods.is_empty() {
        spec.methods = args.methods.iter().map(|m| (*m).into()).collect();
    }
    spec.validate()?;
    Ok(spec)
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(
    command: &str,
    args: &SpecArgs,
    spec: &ExperimentSpec,
    prepared: &PreparedProblem,
    q_values: &[f64],
    rows: &[ResultRow],
) -> anyhow::Result<Outcome> {
    let format = match args.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Markdown => Format::Markdown,
    };
    write_output(args.out.as_deref(), &emit(rows, format)?)?;
    let failed = rows.iter().filter(|r| r.failed()).count();
    if let (Some(path), Format::Csv) = (args.out.as_deref(), format) {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            command,
            spec,
            seeds: &spec.seeds,
            q_values,
            rows: rows.len(),
            failed_rows: failed,
            condition_number: prepared.factors.condition_number(),
        };
        write_manifest(path, &manifest)?;
    }
    if failed > 0 {
        eprintln!("{failed} of {} runs failed; see stop_reason", rows.len());
        Ok(Outcome::RowFailures)
    } else {
        Ok(Outcome::Clean)
    }
}

fn execute(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Run(args) => {
            let spec = build_spec(&args.spec)?;
            let prepared = PreparedProblem::new(spec.problem, spec.m)?;
            let rows = run_with(&spec, &prepared)?;
            report("run", &args.spec, &spec, &prepared, &[spec.q], &rows)
        }
        Command::SweepQ(args) => {
            let spec = build_spec(&args.spec)?;
            let q_values = if args.q_values.is_empty() {
                spec.q_values.clone()
            } else {
                args.q_values.clone()
            };
            let prepared = PreparedProblem::new(spec.problem, spec.m)?;
            let table = q_sweep_with(&spec, &q_values, &prepared)?;
            for method in &spec.methods {
                if *method != Method::Vr && !table.iterations_monotone_in_q(*method) {
                    eprintln!(
                        "note: {} iteration counts are not monotone in q",
                        method.label()
                    );
                }
            }
            report(
                "sweep-q",
                &args.spec,
                &spec,
                &prepared,
                &q_values,
                &table.rows,
            )
        }
        Command::ExportProblem(args) => {
            let kind: ProblemKind = args.problem.into();
            let inst = kind.instance(args.m)?;
            write_output(args.out.as_deref(), &inst.to_text())?;
            Ok(Outcome::Clean)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::RowFailures) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
