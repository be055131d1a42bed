//! Command-line front end.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::benchmarks::{self, load_manifest, save_manifest, BenchmarkCase, SUITE_NAMES};
use crate::error::{Error, Result};
use crate::harness::{score_benchmark, verify_counterexamples, HarnessConfig};
use crate::ideal::{State, VariableSet};
use crate::rankers::ranker_by_name;
use crate::search::{hill_climb, RankerTemplate, SearchConfig};
use crate::simulator::DEFAULT_CAP;
use crate::trace::trace;

pub const THREADS_ENV: &str = "BLOWUP_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "blowup-lab", version, about = "Blow-up simulator, rankers and descent harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Window {
    /// Bounded-delay window.
    #[arg(long, default_value_t = 5)]
    m: usize,
    /// Step cap per trajectory.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

impl Window {
    fn config(&self) -> HarnessConfig {
        HarnessConfig {
            m: self.m.max(1),
            cap: self.cap,
            ..HarnessConfig::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Score a ranker on a builtin suite or a manifest file.
    Run {
        #[arg(long)]
        ranker: String,
        /// Builtin suite name or manifest path.
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        window: Window,
        /// Use the saturated score as the objective (reported either way).
        #[arg(long)]
        saturated: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Per-step CSV trace of one polynomial.
    Trace {
        #[arg(long)]
        ranker: String,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value = "x,y,w,z", value_delimiter = ',')]
        vars: Vec<String>,
        #[command(flatten)]
        window: Window,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check the two bounded-delay counterexamples and the repaired ranker.
    VerifyCounterexamples,
    /// Write a builtin suite as a JSON manifest.
    ExportSuite {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Parse every case of a manifest.
    ValidateManifest { path: PathBuf },
    /// Hill-climb template weights against a suite.
    Search {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value = "disc_lex")]
        template: String,
        #[command(flatten)]
        window: Window,
        /// Write best weights JSON here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write the improvement history CSV here instead of stdout.
        #[arg(long)]
        history: Option<PathBuf>,
    },
}

/// Exit codes: 0 success, 1 unsolved or failed check, 2 usage or unknown
/// ranker/suite, 3 manifest error.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownRanker(_) | Error::UnknownSuite(_) => 2,
        Error::Manifest(_) | Error::Case { .. } | Error::Json(_) => 3,
        _ => 1,
    }
}

fn load_suite(spec: &str) -> Result<(String, Vec<BenchmarkCase>)> {
    if SUITE_NAMES.contains(&spec) {
        return Ok((spec.to_string(), benchmarks::suite(spec)?));
    }
    let path = Path::new(spec);
    if path.is_file() {
        let cases = load_manifest(path).map_err(|e| match e {
            Error::Io(io) => Error::Manifest(io.to_string()),
            other => other,
        })?;
        let name = path.file_stem().map_or(spec.to_string(), |s| s.to_string_lossy().into_owned());
        return Ok((name, cases));
    }
    Err(Error::UnknownSuite(spec.to_string()))
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Run {
            ranker,
            suite,
            window,
            saturated,
            json,
        } => {
            let ranker = ranker_by_name(&ranker)?;
            let (name, cases) = load_suite(&suite)?;
            let cfg = HarnessConfig {
                saturated,
                ..window.config()
            };
            let report = score_benchmark(&name, &cases, &ranker, &cfg)?;
            let mut text = report.to_json()?;
            text.push('\n');
            emit(&text, json.as_deref(), out)?;
            if json.is_some() {
                writeln!(
                    out,
                    "{} on {}: {}/{} solved, {} violations, max plateau {}",
                    report.ranker,
                    report.suite,
                    report.totals.solved,
                    report.totals.cases,
                    report.totals.violations,
                    report.totals.max_plateau
                )?;
            }
            Ok(if report.all_solved() { 0 } else { 1 })
        }
        Command::Trace {
            ranker,
            poly,
            p,
            vars,
            window,
            csv,
        } => {
            let ranker = ranker_by_name(&ranker)?;
            let vars = Arc::new(VariableSet::from_names(&vars, p)?);
            let state = State::parse(&poly, vars)?;
            let (text, eval) = trace(state, &ranker, &window.config())?;
            emit(&text, csv.as_deref(), out)?;
            Ok(if eval.report.solved { 0 } else { 1 })
        }
        Command::VerifyCounterexamples => {
            let report = verify_counterexamples()?;
            for f in &report.findings {
                writeln!(
                    out,
                    "{} {}: {} at m={} (delay violations {}, initial rank {}): {}",
                    if f.holds { "PASS" } else { "FAIL" },
                    f.label,
                    f.ranker,
                    f.m,
                    f.delay_violations,
                    f.initial_rank,
                    f.expectation
                )?;
            }
            Ok(if report.all_hold() { 0 } else { 1 })
        }
        Command::ExportSuite { suite, out: path } => {
            let cases = benchmarks::suite(&suite)?;
            save_manifest(&cases, &path)?;
            writeln!(out, "wrote {} cases to {}", cases.len(), path.display())?;
            Ok(0)
        }
        Command::ValidateManifest { path } => {
            let cases = load_manifest(&path).map_err(|e| match e {
                Error::Io(io) => Error::Manifest(format!("{}: {io}", path.display())),
                other => other,
            })?;
            writeln!(out, "{}: {} valid cases", path.display(), cases.len())?;
            Ok(0)
        }
        Command::Search {
            suite,
            budget,
            seed,
            restarts,
            template,
            window,
            json,
            history,
        } => {
            let (name, cases) = load_suite(&suite)?;
            let template = RankerTemplate::preset(&template)?;
            let cfg = window.config();
            let result = hill_climb(&template, &name, &cases, &cfg, &SearchConfig { budget, seed, restarts })?;
            let mut text = serde_json::to_string_pretty(&result)?;
            text.push('\n');
            emit(&text, json.as_deref(), out)?;
            emit(&result.history_csv(), history.as_deref(), out)?;
            Ok(0)
        }
    }
}

fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok());
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run_command_with<I, S>(argv: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version print to stdout and succeed.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match with_pool(|| execute(cli, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    run_command_with(argv, &mut out, &mut err)
}
