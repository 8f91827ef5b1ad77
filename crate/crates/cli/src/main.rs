//! Command-line driver: scenario ingestion, architecture assessment and
//! comparison, wholesale forecasting and availability analysis.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 validation error (the message
//! names the offending field), 3 infeasible architecture or exceeded
//! capacity (the feasibility report is printed when available).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use backhaul_core::economics::assess;
use backhaul_core::error::Error;
use backhaul_core::report::{
    availability_report, compare, render_assessment, render_availability, render_comparison,
    render_forecast, OutputFormat, ReportEnvelope,
};
use backhaul_core::scenario::{self, ArchitectureConfig, Scenario};

#[derive(Parser)]
#[command(
    name = "backhaul",
    version,
    about = "Techno-economic dimensioning and assessment of rural backhaul architectures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario file (TOML)
    #[arg(long)]
    scenario: PathBuf,
    /// Output format: table, structured or csv
    #[arg(long, default_value = "table")]
    format: String,
    /// Write the report to this path instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Assess one architecture end to end
    Assess {
        #[command(flatten)]
        common: CommonArgs,
        /// Architecture id from the scenario file
        #[arg(long)]
        arch: String,
        /// Forecast horizon in years (integrated architectures)
        #[arg(long)]
        years: Option<u32>,
    },
    /// Compare several architectures side by side
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Architecture id; repeat the flag for each architecture
        #[arg(long = "arch", required = true, num_args = 1)]
        archs: Vec<String>,
        #[arg(long)]
        years: Option<u32>,
    },
    /// Wholesale demand, capacity and income forecast
    Forecast {
        #[command(flatten)]
        common: CommonArgs,
        /// Architecture id; defaults to the scenario's only integrated one
        #[arg(long)]
        arch: Option<String>,
        /// Number of forecast years (default: the whole demand schedule)
        #[arg(long)]
        years: Option<u32>,
    },
    /// Availability of the scenario's path models and offer tiers
    Availability {
        #[command(flatten)]
        common: CommonArgs,
        /// Analyze a single path model instead of all of them
        #[arg(long)]
        model: Option<String>,
        /// Monte Carlo trials; 0 skips the simulation
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Seed of the Monte Carlo generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let Error::Infeasible {
                report: Some(report),
                ..
            } = &err
            {
                eprintln!("  coverage ok (single platform):  {}", report.coverage_ok);
                eprintln!("  fronthaul ok (single platform): {}", report.fronthaul_ok);
                eprintln!(
                    "  gateway ok:                     {}",
                    report
                        .gateway_ok
                        .map(|ok| ok.to_string())
                        .unwrap_or_else(|| "unknown".to_string())
                );
                eprintln!("  platforms required:             {}", report.platforms_required);
                eprintln!(
                    "  binding constraint:             {}",
                    report.binding_constraint.as_str()
                );
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Assess { common, arch, years } => {
            let (scenario, format) = load(&common)?;
            let report = assess(&scenario, &arch, years, scenario.assessment.discount_rate)?;
            let envelope = ReportEnvelope::new("assess", &scenario);
            emit(
                &common,
                render_assessment(&envelope, &scenario, &report, format),
            )
        }
        Command::Compare { common, archs, years } => {
            let (scenario, format) = load(&common)?;
            if archs.len() < 2 {
                return Err(Error::validation(
                    "--arch",
                    "compare needs at least two architectures",
                ));
            }
            let table = compare(&scenario, &archs, years, scenario.assessment.discount_rate);
            let envelope = ReportEnvelope::new("compare", &scenario);
            emit(&common, render_comparison(&envelope, &table, format))
        }
        Command::Forecast { common, arch, years } => {
            let (scenario, format) = load(&common)?;
            let arch_id = match arch {
                Some(id) => id,
                None => only_integrated(&scenario)?,
            };
            let horizon = years.or(scenario.assessment.horizon_years);
            let report = assess(&scenario, &arch_id, horizon, scenario.assessment.discount_rate)?;
            let rows = report.forecast.as_ref().ok_or_else(|| {
                Error::validation(
                    "--arch",
                    format!("architecture '{arch_id}' is not an integrated architecture"),
                )
            })?;
            let envelope = ReportEnvelope::new("forecast", &scenario);
            emit(
                &common,
                render_forecast(
                    &envelope,
                    &arch_id,
                    report.sellable_links.unwrap_or(0),
                    rows,
                    format,
                ),
            )
        }
        Command::Availability {
            common,
            model,
            trials,
            seed,
        } => {
            let (scenario, format) = load(&common)?;
            let report = availability_report(&scenario, model.as_deref(), trials, seed)?;
            let envelope = ReportEnvelope::new("availability", &scenario);
            emit(&common, render_availability(&envelope, &report, format))
        }
    }
}

fn load(common: &CommonArgs) -> Result<(Scenario, OutputFormat), Error> {
    let format: OutputFormat = common.format.parse()?;
    let scenario = scenario::load(&common.scenario)?;
    Ok((scenario, format))
}

fn only_integrated(scenario: &Scenario) -> Result<String, Error> {
    let mut integrated = scenario
        .architectures
        .iter()
        .filter(|(_, arch)| matches!(arch, ArchitectureConfig::Integrated(_)))
        .map(|(id, _)| id.clone());
    match (integrated.next(), integrated.next()) {
        (Some(id), None) => Ok(id),
        (None, _) => Err(Error::validation(
            "--arch",
            "scenario defines no integrated architecture",
        )),
        (Some(_), Some(_)) => Err(Error::validation(
            "--arch",
            "scenario defines several integrated architectures; pick one with --arch",
        )),
    }
}

fn emit(common: &CommonArgs, output: String) -> Result<(), Error> {
    match &common.out {
        Some(path) => std::fs::write(path, output)?,
        None => print!("{output}"),
    }
    Ok(())
}
