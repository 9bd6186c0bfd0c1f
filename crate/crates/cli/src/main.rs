use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levy_lil::scenario::{run_scenario, Overrides, RunOptions, Scenario, Stage};
use levy_lil::Error;

/// Run symbol, norming, classification, simulation and verification
/// analyses described by a JSON scenario file.
#[derive(Parser)]
#[command(name = "levy-lil", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbol tables, sector constants and lower envelopes.
    Symbol(Common),
    /// Norming functions and the regularity constant.
    Norming(Common),
    /// Integral and liminf classifiers.
    Classify(Common),
    /// Path ensembles.
    Simulate(Common),
    /// Monte Carlo checks (simulates as needed).
    Verify(Common),
    /// Every analysis in the scenario.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of simulated paths.
    #[arg(long)]
    paths: Option<usize>,
    /// Override the grid step count (points per level for geometric grids).
    #[arg(long)]
    steps: Option<usize>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<String>,
    /// Omit timestamps so reruns produce identical files.
    #[arg(long)]
    canonical_output: bool,
}

fn run(common: &Common, stages: &[Stage]) -> levy_lil::Result<()> {
    let mut scenario = Scenario::from_path(&common.scenario)?;
    scenario.apply(&Overrides {
        seed: common.seed,
        paths: common.paths,
        steps: common.steps,
        output_dir: common.out.clone(),
    })?;
    let summary = run_scenario(
        &scenario,
        stages,
        RunOptions {
            canonical: common.canonical_output,
        },
    )?;
    println!("scenario {} (seed {})", summary.scenario_hash, summary.seed);
    for a in &summary.analyses {
        match &a.status {
            Some(s) => println!("{:02} {:<32} {} [{}]", a.index, a.kind, a.json, s),
            None => println!("{:02} {:<32} {}", a.index, a.kind, a.json),
        }
    }
    println!("report: {}", summary.output_dir.join("report.json").display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, stages): (&Common, &[Stage]) = match &cli.command {
        Command::Symbol(c) => (c, &[Stage::Symbol]),
        Command::Norming(c) => (c, &[Stage::Norming]),
        Command::Classify(c) => (c, &[Stage::Classify]),
        Command::Simulate(c) => (c, &[Stage::Simulate]),
        Command::Verify(c) => (c, &[Stage::Verify]),
        Command::Report(c) => (c, &Stage::ALL),
    };
    match run(common, stages) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() || matches!(e, Error::Io(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
