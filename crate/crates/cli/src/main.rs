use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ponderomotive::commands::{self, Context};
use ponderomotive::config::{Format, MethodChoice, RunConfig};
use ponderomotive::{CliError, Result};

#[derive(Parser)]
#[command(name = "ponderomotive", version, about = "Ponderomotive squeezing with dispersive and dissipative coupling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration (flat key = value); defaults apply when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Overrides run.method.
    #[arg(long, global = true, value_enum)]
    method: Option<MethodChoice>,
    /// Overrides output.format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Overrides run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Operating point versus drive power.
    SteadyState,
    /// Spectrum along frequency at the optimal (or configured) angle.
    Spectrum,
    /// Spectrum over angle and frequency, with depth contours.
    SpectrumMap,
    /// Optimal squeezing versus thermal occupancy.
    ThermalScan,
    /// Stability over power and effective detuning.
    StabilityMap,
    /// Smallest unstable drive power.
    CriticalPower,
    /// Bare couplings from a reference operating point.
    Calibrate,
    /// Oracle suites; prints one PASS/FAIL line per check.
    Selftest,
}

fn run(cli: &Cli) -> Result<String> {
    let mut config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(m) = cli.method {
        config.run.method = m;
    }
    if let Some(f) = cli.format {
        config.output.format = f;
    }
    if let Some(s) = cli.seed {
        config.run.seed = s;
    }
    let ctx = Context::new(config, &cli.out);
    let outcome = match cli.command {
        Command::SteadyState => commands::steady_state(&ctx),
        Command::Spectrum => commands::spectrum(&ctx),
        Command::SpectrumMap => commands::spectrum_map(&ctx),
        Command::ThermalScan => commands::thermal_scan(&ctx),
        Command::StabilityMap => commands::stability_map(&ctx),
        Command::CriticalPower => commands::critical_power_cmd(&ctx),
        Command::Calibrate => commands::calibrate(&ctx),
        Command::Selftest => commands::selftest_cmd(&ctx),
    }?;
    let mut text = outcome.report;
    for f in &outcome.files {
        text.push_str(&format!("\nwrote {}", f.display()));
    }
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
