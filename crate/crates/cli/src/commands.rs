use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use relshape_core::census::{DEFAULT_EXEMPLARS, MAX_CENSUS_ORDER, MIN_CENSUS_ORDER};
use relshape_core::format::format_sig;
use relshape_core::polynomial::to_f64;
use relshape_core::reliability::sample;
use relshape_core::shape::analyze as analyze_shape;
use relshape_core::verify::{run_suite, CheckResult, VerifyConfig};
use relshape_core::{census_of_order, run_census_stream, stream_graph6, Execution};

use crate::config::{CSV_DIGITS, DEFAULT_SAMPLES, MONTE_CARLO_TRIALS, THRESHOLD_TOL};
use crate::error::CliError;
use crate::input::GraphSelector;
use crate::report::{self, CensusDocument};

type Outcome = Result<ExitCode, CliError>;

const EMBEDDED_FIXTURES: [(usize, &str); 6] = [
    (2, include_str!("../../core/fixtures/connected2.g6")),
    (3, include_str!("../../core/fixtures/connected3.g6")),
    (4, include_str!("../../core/fixtures/connected4.g6")),
    (5, include_str!("../../core/fixtures/connected5.g6")),
    (6, include_str!("../../core/fixtures/connected6.g6")),
    (7, include_str!("../../core/fixtures/connected7.g6")),
];

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    graph: GraphSelector,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[command(flatten)]
    graph: GraphSelector,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["n", "input"])))]
pub struct CensusArgs {
    /// Order of the graphs to generate (2 to 8).
    #[arg(long)]
    n: Option<usize>,
    /// graph6 file, one graph per line, all of one order.
    #[arg(long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Exemplar graph6 strings kept per predicate.
    #[arg(long, default_value_t = DEFAULT_EXEMPLARS)]
    exemplars: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Which {
    F,
    F1,
    F2,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    graph: GraphSelector,
    /// Evenly spaced points on [0, 1], endpoints included.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, value_enum, default_value = "f")]
    which: Which,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Include the order-8 census.
    #[arg(long)]
    slow: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Directory with `connected<n>.g6` files to check instead of the built-in ones.
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
}

fn execution(jobs: Option<usize>) -> Result<Execution, CliError> {
    if jobs == Some(0) {
        return Err(CliError::usage("--jobs must be at least 1"));
    }
    Ok(Execution::with_threads(jobs))
}

fn emit(text: &str) -> Result<(), CliError> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn emit_json<T: Serialize>(doc: &T) -> Result<(), CliError> {
    emit(&(serde_json::to_string_pretty(doc)? + "\n"))
}

pub fn analyze(args: &AnalyzeArgs, tol: &BigRational) -> Outcome {
    let loaded = args.graph.load()?;
    let shape = analyze_shape(&loaded.rel, tol)?;
    let doc = report::analysis(&loaded, &shape);
    if args.json {
        emit_json(&doc)?;
    } else {
        emit(&report::render_analysis(&doc))?;
    }
    Ok(if doc.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

pub fn coeffs(args: &CoeffsArgs) -> Outcome {
    let loaded = args.graph.load()?;
    let doc = report::coeffs(&loaded);
    if args.json {
        emit_json(&doc)?;
    } else {
        emit(&report::render_coeffs(&doc))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn census(args: &CensusArgs, tol: &BigRational) -> Outcome {
    let exec = execution(args.jobs)?;
    let summary = match (&args.n, &args.input) {
        (Some(n), None) => {
            if !(MIN_CENSUS_ORDER..=MAX_CENSUS_ORDER).contains(n) {
                return Err(CliError::usage(format!(
                    "--n must be between {MIN_CENSUS_ORDER} and {MAX_CENSUS_ORDER}"
                )));
            }
            census_of_order(*n, tol, exec, args.exemplars)?
        }
        (None, Some(path)) => {
            let file = File::open(path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            run_census_stream(
                stream_graph6(BufReader::new(file)),
                tol,
                exec,
                args.exemplars,
            )?
        }
        _ => return Err(CliError::usage("exactly one of --n, --input is required")),
    };
    if args.json {
        emit_json(&CensusDocument {
            schema_version: report::SCHEMA_VERSION,
            summary: &summary,
        })?;
    } else {
        emit(&report::render_census(&summary))?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn plot(args: &PlotArgs) -> Outcome {
    if args.samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    let loaded = args.graph.load()?;
    let poly = match args.which {
        Which::F => loaded.rel.poly().clone(),
        Which::F1 => loaded.rel.derivative(),
        Which::F2 => loaded.rel.second_derivative(),
    };
    let mut csv = String::from("p,value\n");
    for (p, v) in sample(&poly, args.samples)? {
        csv.push_str(&format_sig(to_f64(&p), CSV_DIGITS));
        csv.push(',');
        csv.push_str(&format_sig(to_f64(&v), CSV_DIGITS));
        csv.push('\n');
    }
    emit(&csv)?;
    Ok(ExitCode::SUCCESS)
}

fn load_fixtures(dir: &Path) -> Result<Vec<(usize, String)>, CliError> {
    let mut out = Vec::new();
    for n in MIN_CENSUS_ORDER..=7 {
        let path = dir.join(format!("connected{n}.g6"));
        if path.exists() {
            let text = fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
            out.push((n, text));
        }
    }
    if out.is_empty() {
        return Err(CliError::usage(format!(
            "no connected<n>.g6 files in {}",
            dir.display()
        )));
    }
    Ok(out)
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema_version: u32,
    passed: bool,
    checks: &'a [CheckResult],
}

pub fn verify(args: &VerifyArgs, tol: &BigRational) -> Outcome {
    let mut cfg = VerifyConfig::new(tol.clone());
    cfg.slow = args.slow;
    cfg.exec = execution(args.jobs)?;
    cfg.threshold_tol = THRESHOLD_TOL;
    cfg.monte_carlo_trials = MONTE_CARLO_TRIALS;
    cfg.fixtures = match &args.fixtures {
        Some(dir) => load_fixtures(dir)?,
        None => EMBEDDED_FIXTURES
            .iter()
            .map(|(n, s)| (*n, s.to_string()))
            .collect(),
    };
    let checks = run_suite(&cfg)?;
    let passed = checks.iter().all(|c| c.passed);
    if args.json {
        emit_json(&VerifyDocument {
            schema_version: report::SCHEMA_VERSION,
            passed,
            checks: &checks,
        })?;
    } else {
        let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut text = String::new();
        for c in &checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            text.push_str(&format!(
                "{:>8}  {status}  {:<width$}  {}\n",
                c.id, c.name, c.detail
            ));
        }
        text.push_str(if passed {
            "all checks passed\n"
        } else {
            "some checks failed\n"
        });
        emit(&text)?;
    }
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
