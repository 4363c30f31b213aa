use clap::{Parser, Subcommand};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rwadyn::{figure1_preset, parse_config, run_scenario, Model, RunError, ScenarioConfig};

/// Finite-temperature memory-kernel dynamics of rotating-wave models:
/// batch runner producing CSV results and a run manifest.
#[derive(Parser)]
#[command(name = "rwadyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a key = value config file.
    Run { config: PathBuf },
    /// Run a built-in scenario.
    Preset {
        #[command(subcommand)]
        preset: Preset,
    },
    /// Run a config as a side-by-side comparison of the memory-kernel and
    /// discrete-bath population curves.
    Compare { config: PathBuf },
}

#[derive(Subcommand)]
enum Preset {
    /// Two-level population curve: Ω = 5γ, βγ = 0.5, p = 0.3, γt ∈ [0, 10].
    Figure1 {
        /// Coupling in units of the density width, g/γ.
        #[arg(long)]
        g: f64,
        /// Result CSV path; the manifest lands next to it.
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path) -> Result<ScenarioConfig, RunError> {
    let text = fs::read_to_string(path)?;
    Ok(parse_config(&text)?)
}

fn real_main() -> Result<(), RunError> {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Command::Run { config } => load(&config)?,
        Command::Preset {
            preset: Preset::Figure1 { g, out },
        } => figure1_preset(g, out)?,
        Command::Compare { config } => {
            let mut cfg = load(&config)?;
            cfg.model = Model::OracleCompare;
            cfg
        }
    };
    let summary = run_scenario(&cfg)?;
    println!(
        "wrote {} ({} rows) and {}",
        summary.csv_path.display(),
        summary.rows,
        summary.manifest_path.display()
    );
    if let Some(diff) = summary.max_abs_diff {
        println!("max |rho11_volterra - rho11_oracle| = {diff:.3e}");
    }
    Ok(())
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
