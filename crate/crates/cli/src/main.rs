//! `ridgekit`: command-line front end. Every run prints a JSON RunReport
//! (or CSV with `--csv`); exit 0 on success, 1 on a domain failure, 2 on a
//! usage error.

mod approx;
mod bolts;
mod cycles;
mod input;
mod report;
mod sigmoid;
mod smooth;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use input::{Ctx, Failure};
use report::{Outcome, RunReport, SCHEMA};

#[derive(Debug, Parser)]
#[command(name = "ridgekit", version, about = "Ridge-function approximation toolkit")]
struct Cli {
    /// Print the RunReport as JSON (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print tables as CSV instead of the JSON report.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Cycle certificates, τ-closure, orbits and exact representation.
    Cycles {
        #[command(subcommand)]
        cmd: CyclesCmd,
    },
    /// Best approximation by sums of ridge functions.
    Approx {
        #[command(subcommand)]
        cmd: ApproxCmd,
    },
    /// Bolt error formulas on axis-parallel polygons.
    Bolts(bolts::BoltsArgs),
    /// Smooth ridge decomposition in the plane.
    Smooth {
        #[command(subcommand)]
        cmd: SmoothCmd,
    },
    /// The universal sigmoid and the two-neuron fitter.
    Sigmoid {
        #[command(subcommand)]
        cmd: SigmoidCmd,
    },
}

#[derive(Debug, Subcommand)]
enum CyclesCmd {
    Check(cycles::CheckArgs),
}

#[derive(Debug, Subcommand)]
enum ApproxCmd {
    /// Uniform norm, two directions in the plane.
    Uniform(approx::UniformArgs),
    /// L₂ norm over an r-set.
    L2(approx::L2Args),
}

#[derive(Debug, Subcommand)]
enum SmoothCmd {
    Decompose(smooth::DecomposeArgs),
}

#[derive(Debug, Subcommand)]
enum SigmoidCmd {
    Eval(sigmoid::EvalArgs),
    /// σ on a range, laid out as (t, σ) column pairs (CSV by default).
    Table(sigmoid::TableArgs),
    Fit(sigmoid::FitArgs),
}

/// RIDGEKIT_THREADS, if set, must be a positive integer.
fn thread_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("RIDGEKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(input::usage(format!("RIDGEKIT_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

fn dispatch(cmd: &Cmd, ctx: &mut Ctx) -> Result<Outcome, Failure> {
    match cmd {
        Cmd::Cycles { cmd: CyclesCmd::Check(a) } => cycles::check(a, ctx),
        Cmd::Approx { cmd: ApproxCmd::Uniform(a) } => approx::uniform(a, ctx),
        Cmd::Approx { cmd: ApproxCmd::L2(a) } => approx::l2(a, ctx),
        Cmd::Bolts(a) => bolts::run(a, ctx),
        Cmd::Smooth { cmd: SmoothCmd::Decompose(a) } => smooth::decompose_cmd(a, ctx),
        Cmd::Sigmoid { cmd: SigmoidCmd::Eval(a) } => sigmoid::eval(a, ctx),
        Cmd::Sigmoid { cmd: SigmoidCmd::Table(a) } => sigmoid::table(a, ctx),
        Cmd::Sigmoid { cmd: SigmoidCmd::Fit(a) } => sigmoid::fit(a, ctx),
    }
}

/// Writes to stdout; a closed pipe is not an error worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let start = Instant::now();
    let threads = match thread_cap() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("ridgekit: {e}");
            return ExitCode::from(2);
        }
    };
    let command = argv[1..].to_vec();
    let mut ctx = Ctx::new(&command);
    let result = dispatch(&cli.cmd, &mut ctx);
    let (status, message, results, csv, code) = match result {
        Ok(o) => match o.failure {
            None => ("ok", None, o.results, o.csv, 0),
            Some(m) => ("domain_error", Some(m), o.results, None, 1),
        },
        Err(Failure::Domain(m)) => ("domain_error", Some(m), serde_json::Value::Null, None, 1),
        Err(Failure::Usage(m)) => {
            eprintln!("ridgekit: {m}\nrun `ridgekit --help` for the command grammar");
            return ExitCode::from(2);
        }
    };
    let table_default = matches!(cli.cmd, Cmd::Sigmoid { cmd: SigmoidCmd::Table(_) });
    if let Some(csv) = csv.filter(|_| cli.csv || (table_default && !cli.json)) {
        emit(&csv);
        return ExitCode::from(code);
    }
    let report = RunReport {
        schema: SCHEMA,
        tool: "ridgekit",
        version: env!("CARGO_PKG_VERSION"),
        command,
        inputs_digest: ctx.digest(),
        threads,
        status,
        message,
        results,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    emit(&(serde_json::to_string_pretty(&report).expect("report serializes") + "\n"));
    ExitCode::from(code)
}
