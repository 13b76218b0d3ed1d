use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use slicegap::cli::{cmd_analyze, cmd_entropy, cmd_gap_scan, cmd_trifference, RunConfig, TrifferenceCmd};

#[derive(Parser)]
#[command(name = "slicegap", version, about = "Slice-rank gap certificates and trifference bounds")]
struct Args {
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 200_000)]
    max_iters: usize,
    #[arg(long, global = true, env = "SLICEGAP_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 1_000_000)]
    ordering_budget: u128,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a tensor and bound its asymptotic slice rank
    Analyze { file: PathBuf },
    /// Max-min marginal entropy of a support set
    Entropy { file: PathBuf },
    /// Check the entropy gap on random supports and orderings
    GapScan {
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        #[arg(short, long, default_value_t = 500)]
        trials: usize,
    },
    /// Trifferent codes
    Trifference {
        #[command(subcommand)]
        op: TrifferenceOp,
    },
}

#[derive(Subcommand)]
enum TrifferenceOp {
    Verify { file: PathBuf },
    Search { n: usize },
    Bound { n: usize },
    Certify { file: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = RunConfig {
        tol: args.tol,
        max_iters: args.max_iters,
        seed: args.seed,
        ordering_budget: args.ordering_budget,
        json: args.json,
    };
    let out = match &args.command {
        Command::Analyze { file } => cmd_analyze(file, &cfg),
        Command::Entropy { file } => cmd_entropy(file, &cfg),
        Command::GapScan { k, trials } => cmd_gap_scan(*k, *trials, &cfg),
        Command::Trifference { op } => {
            let cmd = match op {
                TrifferenceOp::Verify { file } => TrifferenceCmd::Verify(file),
                TrifferenceOp::Search { n } => TrifferenceCmd::Search(*n),
                TrifferenceOp::Bound { n } => TrifferenceCmd::Bound(*n),
                TrifferenceOp::Certify { file } => TrifferenceCmd::Certify(file),
            };
            cmd_trifference(cmd, &cfg)
        }
    };
    print!("{}", out.stdout);
    if !out.stderr.is_empty() {
        eprintln!("error: {}", out.stderr);
    }
    ExitCode::from(out.code as u8)
}
