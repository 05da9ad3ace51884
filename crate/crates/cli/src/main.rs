//! `dyncomm` — detect and track communities in dynamic networks.
//!
//! Subcommands: `slice` an edge stream into snapshots, `generate`
//! synthetic benchmarks, `detect` communities incrementally, run the
//! per-snapshot static `baseline`, and `eval` partition files into metric
//! series. Every run writes a manifest that pins its inputs and seed, and
//! refuses to reuse a non-empty output directory.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

mod commands;

#[derive(Parser)]
#[command(name = "dyncomm", version, about = "Dynamic community detection and tracking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate a timestamped edge stream into snapshot files.
    Slice {
        /// Edge stream: one `src dst timestamp` per line.
        #[arg(long)]
        input: PathBuf,
        /// Window width in timestamp ticks.
        #[arg(long)]
        window: u64,
        /// Fresh output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic benchmark with ground truth.
    Generate {
        /// Benchmark family: `kawadia` or `events`.
        #[arg(long)]
        kind: String,
        /// TOML config for the chosen generator.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Detect and track communities incrementally across snapshots.
    Detect {
        /// Directory of `snapshot_<t>.edges` files.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads for the expansion phase (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cluster every snapshot independently (the static baseline).
    Baseline {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute metric series from partition files.
    Eval {
        /// Partitions file written by `detect` or `baseline`.
        #[arg(long)]
        partitions: PathBuf,
        /// Snapshot directory; enables the persistence series.
        #[arg(long)]
        snapshots: Option<PathBuf>,
        /// Ground truth: a directory of `truth_<t>.labels` files or one
        /// static label file.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs write into fresh directories only.
fn prepare_out(out: &PathBuf) -> Result<()> {
    if out.exists() {
        if out.read_dir()?.next().is_some() {
            bail!("output directory {} is not empty", out.display());
        }
    } else {
        std::fs::create_dir_all(out)
            .with_context(|| format!("creating {}", out.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Slice { input, window, out } => {
            prepare_out(&out)?;
            commands::slice(&input, window, &out)
        }
        Command::Generate { kind, config, out } => {
            prepare_out(&out)?;
            commands::generate(&kind, &config, &out)
        }
        Command::Detect {
            input,
            seed,
            threads,
            out,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .context("configuring the worker pool")?;
            }
            prepare_out(&out)?;
            commands::detect(&input, seed, threads, &out)
        }
        Command::Baseline { input, seed, out } => {
            prepare_out(&out)?;
            commands::baseline(&input, seed, &out)
        }
        Command::Eval {
            partitions,
            snapshots,
            truth,
            out,
        } => {
            prepare_out(&out)?;
            commands::eval(&partitions, snapshots.as_deref(), truth.as_deref(), &out)
        }
    }
}
