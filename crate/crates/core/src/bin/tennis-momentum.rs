use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tennis_momentum::pipeline::{self, RunConfig, Settings};
use tennis_momentum::Result;

#[derive(Parser)]
#[command(name = "tennis-momentum", version, about = "Point-by-point tennis momentum analytics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit per-match models and write momentum series, swings and performance.
    Momentum(Flags),
    /// Compare point-victor models with fitted momentum against a noise baseline.
    Significance(Flags),
    /// Predict the momentum series and align predicted with actual swings.
    PredictSwings(Flags),
    /// Exact Shapley attributions of the momentum regression model.
    Explain(Flags),
    /// Sobol sensitivity indices of the momentum regression model.
    Sobol(Flags),
    /// Write simulated matches as point-by-point CSV.
    Simulate(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum GrowthArg {
    Level,
    Leaf,
}

#[derive(Args)]
struct Flags {
    /// Point-by-point CSV files.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    states: Option<usize>,
    /// winner_server, winner_server_break or winner.
    #[arg(long)]
    codec: Option<String>,
    /// Chronological training fraction.
    #[arg(long)]
    split: Option<f64>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum)]
    growth: Option<GrowthArg>,
    #[arg(long)]
    hysteresis: Option<f64>,
    /// TOML file of key = value settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            input: (!self.input.is_empty()).then(|| self.input.clone()),
            out: self.out.clone(),
            seed: self.seed,
            beta: self.beta,
            states: self.states,
            codec: self.codec.clone(),
            split: self.split,
            rounds: self.rounds,
            growth: self.growth.map(|g| match g {
                GrowthArg::Level => "level".to_string(),
                GrowthArg::Leaf => "leaf".to_string(),
            }),
            hysteresis: self.hysteresis,
            ..Settings::default()
        }
    }

    fn run_config(&self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        RunConfig::from_settings(&file.layered(self.settings()))
    }
}

fn run(cli: Cli) -> Result<pipeline::CommandReport> {
    match cli.command {
        Command::Momentum(f) => pipeline::cmd_momentum(&f.run_config()?),
        Command::Significance(f) => pipeline::cmd_significance(&f.run_config()?),
        Command::PredictSwings(f) => pipeline::cmd_predict_swings(&f.run_config()?),
        Command::Explain(f) => pipeline::cmd_explain(&f.run_config()?),
        Command::Sobol(f) => pipeline::cmd_sobol(&f.run_config()?),
        Command::Simulate(f) => pipeline::cmd_simulate(&f.run_config()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for path in &report.written {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
