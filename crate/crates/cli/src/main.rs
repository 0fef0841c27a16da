mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use helmstab::{Error, Result};

use commands::Run;
use config::RunConfig;

#[derive(Parser)]
#[command(name = "helmstab", version, about = "Multi-frequency inverse source runs for the 2D Helmholtz equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize boundary Cauchy data.
    Forward,
    /// Cross-check the time-domain solution against the frequency-domain field.
    WaveCheck,
    /// Certify the functional bounds and the tail decay.
    Bounds,
    /// Ridge reconstruction of the source pair.
    Reconstruct {
        /// Fit data generated from the basis projection of the source.
        #[arg(long)]
        inverse_crime: bool,
    },
    /// Reconstruction error against the wave-number cap K.
    SweepExperiment,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Geometry(_) | Error::Singular(_) => 4,
        Error::Accuracy(_) | Error::Range(_) | Error::Conditioning(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot start {n} threads: {e}")))?;
    }
    let mut cfg = match &cli.common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    }
    .with_seed(cli.common.seed);
    if let Command::Reconstruct { inverse_crime: true } = cli.command {
        cfg.reconstruct.inverse_crime = true;
    }
    let out = cli.common.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out"));
    let r = Run { cfg: &cfg, out: &out };
    let (name, manifest) = match cli.command {
        Command::Forward => ("forward", commands::forward(&r)?),
        Command::WaveCheck => ("wave-check", commands::wave_check(&r)?),
        Command::Bounds => ("bounds", commands::bounds(&r)?),
        Command::Reconstruct { .. } => ("reconstruct", commands::reconstruct_cmd(&r)?),
        Command::SweepExperiment => ("sweep-experiment", commands::sweep_experiment(&r)?),
    };
    let files: Vec<&str> = manifest.artifacts.iter().map(|a| a.file.as_str()).collect();
    println!("{}", serde_json::json!({ "command": name, "out": out.display().to_string(), "artifacts": files }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!("{}", serde_json::json!({ "error": { "kind": e.kind(), "message": e.to_string() }, "exit_code": code }));
            ExitCode::from(code)
        }
    }
}
