use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use conic_partition::io::{
    config_for_tolerance, generate, oracle_check, oracle_check_problem, parse_block_spec, run_classification,
    GenOptions, OracleSummary, Planted, ProblemFile, ReportFile, RunOptions,
};
use conic_partition::partition::Method;
use conic_partition::solver::SolverConfig;

const OK: u8 = 0;
const INPUT_ERROR: u8 = 1;
const PARTIAL: u8 = 2;

#[derive(Parser)]
#[command(name = "conic-partition", version, about = "Strict-complementarity partitions of multifold conic systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Facial,
    Auxiliary,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the blocks of a problem file.
    Classify {
        path: PathBuf,
        /// Threshold separating zero from positive optima.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Rational simplex; all-orthant problems with exact entries only.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Facial)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads for independent solves.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        /// Recorded in the report; the classifier itself is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random problem file with entries in [-2, 2].
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Comma separated blocks, e.g. soc:3,orthant:2 or orthant:1x6.
        #[arg(long, default_value = "orthant:1x6")]
        blocks: String,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        /// none or lp-oracle.
        #[arg(long, default_value = "none")]
        planted: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the floating classifier with the exact partition.
    OracleCheck {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Check one all-orthant problem file instead of generated ones.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Re-verify the certificates stored in a report file.
    Certify { path: PathBuf },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(INPUT_ERROR)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_problem(path: &PathBuf) -> Result<ProblemFile, String> {
    ProblemFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(k: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(k)
        .build()
        .map_err(|e| e.to_string())?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_k: usize, f: impl FnOnce() -> T + Send) -> Result<T, String> {
    Ok(f())
}

#[allow(clippy::too_many_arguments)]
fn classify(
    path: PathBuf,
    tol: f64,
    exact: bool,
    method: MethodArg,
    format: Format,
    parallel: usize,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> ExitCode {
    let problem = match load_problem(&path) {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let config = config_for_tolerance(tol);
    if let Err(e) = config.validate() {
        return fail(e);
    }
    let method = match (exact, method) {
        (true, _) => Method::ExactLp,
        (false, MethodArg::Facial) => Method::FacialReduction,
        (false, MethodArg::Auxiliary) => Method::AuxiliaryTests,
    };
    let opts = RunOptions {
        config,
        method,
        parallel: parallel > 1,
        seed,
    };
    let report = match with_threads(parallel.max(1), || run_classification(&problem, &opts)) {
        Ok(Ok(r)) => r,
        Ok(Err(e)) => return fail(e),
        Err(e) => return fail(e),
    };
    let text = match format {
        Format::Json => report.to_json(),
        Format::Text => report.text(),
    };
    if let Err(e) = emit(&text, out.as_ref()) {
        return fail(e);
    }
    if report.report.is_full() {
        ExitCode::from(OK)
    } else {
        ExitCode::from(PARTIAL)
    }
}

fn summary_exit(summary: &OracleSummary) -> ExitCode {
    println!("{summary}");
    if summary.passed() {
        ExitCode::from(OK)
    } else {
        ExitCode::from(PARTIAL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Classify {
            path,
            tol,
            exact,
            method,
            format,
            parallel,
            seed,
            out,
        } => classify(path, tol, exact, method, format, parallel, seed, out),
        Command::Gen {
            seed,
            m,
            blocks,
            density,
            planted,
            out,
        } => {
            let opts = match (parse_block_spec(&blocks), planted.parse::<Planted>()) {
                (Ok(blocks), Ok(planted)) => GenOptions {
                    seed,
                    m,
                    blocks,
                    density,
                    planted,
                },
                (Err(e), _) | (_, Err(e)) => return fail(e),
            };
            match generate(&opts) {
                Ok(p) => match emit(&p.to_json(), out.as_ref()) {
                    Ok(()) => ExitCode::from(OK),
                    Err(e) => fail(e),
                },
                Err(e) => fail(e),
            }
        }
        Command::OracleCheck {
            count,
            seed,
            m,
            n,
            file,
        } => {
            let config = SolverConfig::default();
            let summary = match file {
                Some(path) => {
                    let problem = match load_problem(&path) {
                        Ok(p) => p,
                        Err(e) => return fail(e),
                    };
                    let mut s = OracleSummary::default();
                    for _ in 0..count.min(1) {
                        if let Err(e) = oracle_check_problem(&problem, &config, &mut s) {
                            return fail(e);
                        }
                    }
                    s
                }
                None => match oracle_check(count, seed, m, n, &config) {
                    Ok(s) => s,
                    Err(e) => return fail(e),
                },
            };
            summary_exit(&summary)
        }
        Command::Certify { path } => {
            let report = match read(&path).and_then(|t| ReportFile::parse(&t).map_err(|e| e.to_string())) {
                Ok(r) => r,
                Err(e) => return fail(e),
            };
            match report.verify() {
                Ok(v) if v.ok => {
                    println!("certificates verified");
                    ExitCode::from(OK)
                }
                Ok(v) => {
                    for msg in &v.violations {
                        println!("{msg}");
                    }
                    ExitCode::from(PARTIAL)
                }
                Err(e) => fail(e),
            }
        }
    }
}
