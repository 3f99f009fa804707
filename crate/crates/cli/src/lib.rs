//! Command-line front end: build stages, bracket the hybrid difference set and
//! run the verification suites, writing JSON or CSV reports.

#![allow(clippy::result_large_err)]

pub mod config;
mod report;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use cantor_core::cantor::{CantorStage, DEFAULT_BUDGET};
use cantor_core::difference::{diff_bracket, DiffBracket};
use clap::{Args, Parser, Subcommand};

pub use config::{load_spec, CliError, Format, RunConfig};
pub use report::Report;
pub use verify::{verify, Assertion, Status, Theorem, VerifyReport};

#[derive(Debug, Parser)]
#[command(
    name = "cantor-diff",
    version,
    about = "Exact finite-stage brackets for the hybrid difference set of Cantor sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stages 0..=max-stage as JSON, gap tables as CSV.
    Construct(CommonArgs),
    /// Measures of inner, outer and missing_outer per stage.
    DiffBounds(CommonArgs),
    /// Run one verification suite; exit code 1 if an assertion fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        theorem: Theorem,
    },
    /// Missing mass in the centre and edge zones of [-1, 1] per stage.
    MeasureScan(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON spec file, or a preset: ternary, half, perturbed, tab, fat4, fat16.
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = 8)]
    pub max_stage: usize,
    /// Most components a stage may hold.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    /// Write reports (and per-stage files) into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write gnuplot-style `n value` files, into --out or the working directory.
    #[arg(long)]
    pub plot_data: bool,
}

/// `diff_bracket` for every stage, one worker per stage, in stage order.
pub fn brackets(stages: &[CantorStage]) -> Vec<DiffBracket> {
    if stages.len() < 2 {
        return stages.iter().map(diff_bracket).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = stages
            .iter()
            .map(|s| scope.spawn(move || diff_bracket(s)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("bracket worker panicked"))
            .collect()
    })
}

/// Runs a parsed command line. `Ok(false)` means some assertion failed.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, CliError> {
    let (common, theorem) = match &cli.command {
        Command::Construct(c) | Command::DiffBounds(c) | Command::MeasureScan(c) => (c, None),
        Command::Verify { common, theorem } => (common, Some(*theorem)),
    };
    let spec = load_spec(&common.spec)?;
    let (config, warning) = RunConfig::new(
        spec,
        common.max_stage,
        common.budget,
        theorem,
        common.out.clone(),
        common.format,
        common.plot_data,
    );
    if let Some(w) = warning {
        let _ = writeln!(stderr, "{w}");
    }
    let (report, passed) = match cli.command {
        Command::Construct(_) => (report::construct(&config)?, true),
        Command::DiffBounds(_) => (report::diff_bounds(&config)?, true),
        Command::MeasureScan(_) => (report::measure_scan(&config)?, true),
        Command::Verify { theorem, .. } => {
            let v = verify(theorem, &config.spec, config.max_stage, config.budget)?;
            let _ = writeln!(
                stderr,
                "verify {}: {} ({} assertions, {} failed, {} flagged)",
                theorem.name(),
                v.verdict.label(),
                v.assertions.len(),
                v.with_status(Status::Fail).count(),
                v.with_status(Status::Flag).count()
            );
            for a in v.with_status(Status::Fail).chain(v.with_status(Status::Flag)) {
                let _ = writeln!(
                    stderr,
                    "  {}: {} {}",
                    a.status.label(),
                    a.name,
                    a.witness.as_deref().unwrap_or("")
                );
            }
            let passed = v.passed();
            (report::verify_report(&v)?, passed)
        }
    };
    report.deliver(&config, stdout)?;
    Ok(passed)
}
