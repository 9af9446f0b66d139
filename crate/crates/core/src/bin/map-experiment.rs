use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mapbb::harness::{self, median, ExperimentConfig, Pipeline, DEFAULT_WS};
use mapbb::Error;

/// Synthetic MAP experiment on random complete-graph models.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Number of nodes.
    #[arg(long, default_value_t = 12)]
    n: usize,
    /// Edge strength; repeat for a sweep. Defaults to 0.1 0.2 0.3 2.0.
    #[arg(long = "w")]
    w: Vec<f64>,
    /// Instances per edge strength.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed of the instance stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// bb, cuts, svf or all.
    #[arg(long, default_value = "all")]
    pipeline: Pipeline,
    /// Run on a stored model instead of random draws.
    #[arg(long)]
    model_file: Option<PathBuf>,
    /// Cutting-plane round limit.
    #[arg(long, default_value_t = 1000)]
    max_rounds: usize,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = ExperimentConfig {
        n: args.n,
        ws: if args.w.is_empty() { DEFAULT_WS.to_vec() } else { args.w },
        trials: args.trials,
        seed: args.seed,
        out_dir: args.out_dir,
        pipeline: args.pipeline,
        model_file: args.model_file,
        max_rounds: args.max_rounds,
    };
    match harness::run_experiment(&config) {
        Ok(summary) => {
            for b in &summary.batches {
                let col = |f: fn(&harness::TrialRecord) -> Option<usize>| {
                    let v: Vec<f64> = b.records.iter().filter_map(|r| f(r).map(|x| x as f64)).collect();
                    median(&v).map(|m| m.to_string()).unwrap_or_else(|| "-".into())
                };
                println!(
                    "w={:?}: {} instances in {:.1}s, median sv_upper {}, num_cuts {}, num_branches {}",
                    b.w,
                    b.records.len(),
                    b.seconds,
                    col(|r| r.sv_upper),
                    col(|r| r.num_cuts),
                    col(|r| r.num_branches),
                );
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e @ Error::OracleMismatch { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
