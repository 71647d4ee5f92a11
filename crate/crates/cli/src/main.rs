//! `acoustic`: exact solutions of `u_tt = K(x)² u_xx` from a JSON scene.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use commands::{RunOptions, RunResult};
use config::SceneConfig;
use failure::Failure;
use output::{pretty, Format, Outputs};

#[derive(Debug, Parser)]
#[command(
    name = "acoustic",
    version,
    about = "Exact acoustic wave solutions and their verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scene configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Table format; the run summary is always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Refinement levels for `bench` and `transform`, overriding the config.
    #[arg(long, global = true)]
    levels: Option<usize>,

    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Tabulate K and the Laplace invariant h over the x axis.
    Invariant,
    /// Evaluate an exact solution on the (t, x) grid.
    Solution,
    /// Residual check of an exact solution on the (t, x) grid.
    Residual,
    /// Pull a plane wave through a conformal map or Kelvin inversion.
    Transform,
    /// Integrate a Riccati family and compare with its closed form.
    Riccati,
    /// Leapfrog convergence study against an exact solution.
    Bench,
    /// Print the JSON schema of the scene configuration.
    Schema,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Invariant => "invariant",
            Command::Solution => "solution",
            Command::Residual => "residual",
            Command::Transform => "transform",
            Command::Riccati => "riccati",
            Command::Bench => "bench",
            Command::Schema => "schema",
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    if let Command::Schema = cli.command {
        let schema = serde_json::to_value(config::schema()).expect("schema serializes");
        print!("{}", pretty(&schema));
        return Ok(true);
    }
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Failure::Config("--config is required".into()))?;
    let cfg = SceneConfig::load(path)?;
    let opts = RunOptions {
        levels: cli.levels,
        seed: cli.seed,
    };
    let result: RunResult = match cli.command {
        Command::Invariant => commands::invariant(&cfg)?,
        Command::Solution | Command::Residual => commands::solution(&cfg)?,
        Command::Transform => commands::transform(&cfg, opts)?,
        Command::Riccati => commands::riccati(&cfg, opts)?,
        Command::Bench => commands::bench(&cfg, opts)?,
        Command::Schema => unreachable!("handled above"),
    };

    let stem = format!("{}_{}", cfg.name, cli.command.name());
    let ext = match cli.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    let summary = json!({
        "command": cli.command.name(),
        "config": cfg,
        "format": cli.format,
        "seed": cli.seed,
        "levels_override": cli.levels,
        "tolerances": cfg.tolerances,
        "results": result.report,
        "failures": result.failures,
        "pass": result.pass(),
    });
    let mut out = Outputs::default();
    out.add(format!("{stem}.{ext}"), result.table.render(cli.format));
    out.add(format!("{stem}_summary.json"), pretty(&summary));
    for p in out.commit(&cli.out)? {
        println!("wrote {}", p.display());
    }
    for f in &result.failures {
        eprintln!("FAIL: {f}");
    }
    Ok(result.pass())
}

/// Runs the command and reports any failure on stderr; returns the exit code.
fn execute(cli: &Cli) -> u8 {
    let failure = match run(cli) {
        Ok(true) => return 0,
        Ok(false) => Failure::Tolerance(format!(
            "{} run did not meet its tolerances",
            cli.command.name()
        )),
        Err(f) => f,
    };
    eprintln!("error: {failure}");
    failure.exit_code()
}

fn main() -> ExitCode {
    ExitCode::from(execute(&Cli::parse()))
}
