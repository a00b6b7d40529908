mod commands;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use settings::CommonArgs;

/// Sliding-window polar codes: construction, encoding, decoding and BLER sweeps.
#[derive(Debug, Parser)]
#[command(name = "polar-swin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the reliability profile, frozen set and information set
    Construct {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Encode a K-bit message
    Encode {
        #[command(flatten)]
        common: CommonArgs,
        /// file with one line of K bits
        #[arg(long, value_name = "FILE")]
        message: PathBuf,
        /// also write the per-window partial codewords, one per line
        #[arg(long, value_name = "FILE")]
        emit_partials: Option<PathBuf>,
    },
    /// Decode N channel LLRs back to the K message bits
    Decode {
        #[command(flatten)]
        common: CommonArgs,
        /// file with one LLR per line (`-` for stdin)
        #[arg(long, value_name = "FILE")]
        llr: PathBuf,
        /// decide windows as their LLRs arrive
        #[arg(long)]
        streaming: bool,
    },
    /// BLER curve as CSV, simulated or from the SC bound
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Eb/N0 at which the SC bound reaches a target BLER
    TargetSnr {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1e-3)]
        target: f64,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("POLAR_SWIN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("invalid `POLAR_SWIN_THREADS` value `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("POLAR_SWIN_THREADS")
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Construct { common } => commands::construct(&common.merged()?),
        Command::Encode {
            common,
            message,
            emit_partials,
        } => commands::encode(&common.merged()?, &message, emit_partials.as_deref()),
        Command::Decode {
            common,
            llr,
            streaming,
        } => commands::decode(&common.merged()?, &llr, streaming),
        Command::Sweep { common } => commands::sweep(&common.merged()?),
        Command::TargetSnr { common, target } => commands::target(&common.merged()?, target),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
