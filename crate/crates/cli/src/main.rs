mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use idcap_core::Error;

use commands::*;

#[derive(Debug, Parser)]
#[command(
    name = "idcap",
    version,
    about = "Identity capacity of threshold verification on the hypersphere"
)]
pub struct Cli {
    /// JSON file with settings for the subcommand; flags override its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (default 0, or the config's `seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; affects speed only.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Log cap measures over dimensions and angles.
    Capmeasure(CapmeasureArgs),
    /// Cap-volume packing bounds at the effective separation.
    Bounds(BoundsArgs),
    /// Fixed and random rate curves, or region boundaries.
    Rates(RatesArgs),
    /// Monte Carlo all-pairs separation of random codebooks.
    #[command(name = "mc-sep")]
    McSep(McSepArgs),
    /// Greedy or restricted spherical-code construction.
    Pack(PackArgs),
    /// Build or sample synthetic identity pipelines.
    #[command(subcommand)]
    Pipeline(PipelineCommand),
    /// Admissibility, capacity and mean-matrix report for a JSONL dataset.
    Audit(AuditArgs),
    /// Threshold for a target false-match rate from an ROC table.
    Calibrate(CalibrateArgs),
    /// Data behind a named figure.
    Figure(FigureArgs),
}

#[derive(Debug, Subcommand)]
enum PipelineCommand {
    /// Write a pipeline file (and its centers) to --out.
    Make(PipelineMakeArgs),
    /// Draw views from a pipeline file as a JSONL dataset.
    Sample(PipelineSampleArgs),
}

fn run(cli: Cli) -> idcap_core::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::param("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::param("threads", e.to_string()))?;
    }
    let ctx = Ctx::new(cli.config.as_deref(), cli.seed, cli.out, cli.format)?;
    match cli.command {
        Command::Capmeasure(a) => capmeasure(&ctx, &a),
        Command::Bounds(a) => bounds(&ctx, &a),
        Command::Rates(a) => rates(&ctx, &a),
        Command::McSep(a) => mc_sep(&ctx, &a),
        Command::Pack(a) => pack(&ctx, &a),
        Command::Pipeline(PipelineCommand::Make(a)) => pipeline_make(&ctx, &a),
        Command::Pipeline(PipelineCommand::Sample(a)) => pipeline_sample(&ctx, &a),
        Command::Audit(a) => audit(&ctx, &a),
        Command::Calibrate(a) => calibrate(&ctx, &a),
        Command::Figure(a) => figure(&ctx, &a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!(
                "error[E_USAGE]: {}",
                e.to_string().trim_start_matches("error: ").trim_end()
            );
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
