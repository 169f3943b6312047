//! `sl2coh`: dimensions of `Ext^q(Δ(r), L(λ))` and `H^q(SL2, L(λ))` in positive
//! characteristic, weight scans, the `W_q` family generator and verification runs.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or format error.

mod commands;
mod render;
mod session;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sl2coh::{Prime, Weight};

#[derive(Debug, Parser)]
#[command(
    name = "sl2coh",
    version,
    about = "Cohomology of simple SL2-modules in positive characteristic"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Persistent dimension cache, loaded before and saved after the command.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_file: Option<PathBuf>,
    /// Recompute every entry of the loaded cache and fail on any mismatch.
    #[arg(long, global = true)]
    pub verify_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension of Ext^q(Δ(r), L(λ)).
    Ext {
        #[arg(long)]
        p: Prime,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value = "0")]
        r: Weight,
        #[arg(long)]
        lambda: Weight,
    },
    /// All weights λ ≤ bound with H^q(SL2, L(λ)) ≠ 0.
    Scan {
        #[arg(long)]
        p: Prime,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        bound: Weight,
        /// Keep only weights that are not Frobenius twists of q-cohomological weights.
        #[arg(long)]
        untwisted_only: bool,
        /// Split the scan across threads.
        #[arg(long)]
        parallel: bool,
    },
    /// The W_q weight families, symbolically and optionally expanded.
    Wq {
        #[arg(long)]
        q: u32,
        #[arg(long, requires = "bound")]
        p: Option<Prime>,
        #[arg(long, requires = "p")]
        bound: Option<Weight>,
    },
    /// Checks the closed-form lists for q ≤ 3 and, when p > 3, the W_q families.
    Verify {
        #[arg(long)]
        p: Prime,
        #[arg(long, default_value = "10000")]
        bound: Weight,
    },
    /// Largest dim H^q(SL2, L(λ)) over λ ≤ bound.
    Gamma {
        #[arg(long)]
        p: Prime,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        bound: Weight,
    },
    /// Inspect or move the cache file.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    /// Entry counts per prime and degree.
    Info,
    /// Write the cache in its file format to a path or standard output.
    Export {
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Merge a cache file into the cache.
    Import {
        #[arg(long, value_name = "PATH")]
        input: PathBuf,
    },
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Io(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

/// Rendered standard output, and whether every check it reports passed.
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match commands::run(&cli) {
        Ok(outcome) => outcome,
        Err(failure) => {
            let (Failure::Usage(err) | Failure::Io(err)) = &failure;
            eprintln!("error: {err:#}");
            return ExitCode::from(failure.code());
        }
    };
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = stdout
        .write_all(outcome.output.as_bytes())
        .and_then(|()| stdout.flush())
    {
        eprintln!("error: writing output: {err}");
        return ExitCode::from(3);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}
