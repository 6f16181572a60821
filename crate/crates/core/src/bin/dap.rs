use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dap::env::{EnvId, EnvPair};
use dap::harness::{self, config::parse_list, ExperimentConfig, SweepAxis};
use dap::trainer::{self, AlgoKind};

#[derive(Parser)]
#[command(name = "dap", version, about = "Dual action policy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent and write config.txt, metrics.csv and policy.json.
    Train {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        algo: Option<AlgoKind>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a behavioral policy in the source domain and roll it in the target domain.
    Collect {
        #[arg(long)]
        env: EnvId,
        /// Training steps for the behavioral policy.
        #[arg(long)]
        steps: usize,
        #[arg(long = "dataset-size")]
        dataset_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Optional config for the behavioral SAC run.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evaluate a saved policy in its target domain.
    Eval {
        #[arg(long)]
        policy: PathBuf,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long, default_value = "0")]
        seeds: String,
    },
    /// Run one experiment per value and seed and write summary.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        axis: SweepAxis,
        #[arg(long)]
        values: String,
        #[arg(long, default_value = "0,1,2")]
        seeds: String,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig, Box<dyn std::error::Error>> {
    Ok(match path {
        Some(p) => ExperimentConfig::load_unchecked(p)?,
        None => ExperimentConfig::default(),
    })
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Train {
            config,
            algo,
            seed,
            out,
        } => {
            let mut cfg = load_config(config.as_ref())?;
            if let Some(a) = algo {
                cfg.algo = a;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.validate()?;
            let output = trainer::train(&cfg)?;
            harness::write_run_dir(&out, &cfg, &output)?;
            if let Some(last) = output.metrics.last() {
                println!(
                    "{} seed={} final target return {:.3} ± {:.3}",
                    cfg.algo, cfg.seed, last.eval_return_mean, last.eval_return_std
                );
            }
        }
        Command::Collect {
            env,
            steps,
            dataset_size,
            seed,
            out,
            config,
        } => {
            let mut cfg = load_config(config.as_ref())?;
            cfg.env = env;
            cfg.seed = seed;
            cfg.total_steps = steps;
            let policy = harness::train_behavioral_policy(&cfg)?;
            let pair = EnvPair::new(env).with_transition_noise(cfg.transition_noise);
            let dataset = harness::collect_dataset(&pair, &policy, dataset_size, seed)?;
            harness::save_dataset(&dataset, &out)?;
            println!("wrote {} transitions to {}", dataset.len(), out.display());
        }
        Command::Eval {
            policy,
            episodes,
            seeds,
        } => {
            let seeds: Vec<u64> = parse_list("--seeds", &seeds)?;
            let result = harness::eval_policy_file(&policy, episodes, &seeds)?;
            println!(
                "mean={:.6} std={:.6} episodes={}",
                result.mean,
                result.std,
                result.returns.len()
            );
        }
        Command::Sweep {
            config,
            axis,
            values,
            seeds,
            jobs,
            out,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let values: Vec<String> = parse_list("--values", &values)?;
            let seeds: Vec<u64> = parse_list("--seeds", &seeds)?;
            let jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let summary = harness::run_sweep(&cfg, axis, &values, &seeds, jobs, &out)?;
            print!("{}", summary.to_csv());
            if summary.failures() > 0 {
                eprintln!(
                    "{} of {} runs failed",
                    summary.failures(),
                    summary.runs.len()
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DAP_LOG_LEVEL", "error"))
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
