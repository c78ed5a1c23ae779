use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixent::harness::load_sweep_spec;
use mixent::{approximate, estimate, load_mixture, run_sweep, verify_overlaps, MixentError};
use serde_json::{Map, Value};

#[derive(Parser)]
#[command(
    name = "mixent",
    version,
    about = "Mixture differential entropy bounds and estimates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form bounds and approximation for one mixture, in bits.
    Report {
        #[arg(long)]
        mixture: PathBuf,
        /// Also run a Monte Carlo estimate with this many samples.
        #[arg(long)]
        mc_samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo entropy estimate with its standard error.
    Mc {
        #[arg(long)]
        mixture: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Separation sweep written as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare closed-form overlaps against quadrature on random 1-D pairs.
    VerifyOverlaps {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

enum Failure {
    Model(MixentError),
    Output(String),
    Tolerance,
}

impl From<MixentError> for Failure {
    fn from(e: MixentError) -> Self {
        Failure::Model(e)
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Report {
            mixture,
            mc_samples,
            seed,
        } => {
            let model = load_mixture(&mixture)?;
            let Value::Object(mut out) = to_json(&approximate(&model)?) else {
                unreachable!("reports serialize to objects")
            };
            if let Some(n) = mc_samples {
                let mc = estimate(&model, n, seed)?;
                out.insert("h_mc".into(), mc.entropy_bits.into());
                out.insert("se".into(), mc.std_error_bits.into());
            }
            println!("{}", Value::Object(out));
        }
        Command::Mc {
            mixture,
            samples,
            seed,
        } => {
            let model = load_mixture(&mixture)?;
            println!("{}", to_json(&estimate(&model, samples, seed)?));
        }
        Command::Sweep { config, out } => {
            let spec = load_sweep_spec(&config)?;
            let result = run_sweep(&spec)?;
            let file = File::create(&out)
                .map_err(|e| Failure::Output(format!("{}: {e}", out.display())))?;
            result
                .write_csv(BufWriter::new(file))
                .map_err(|e| Failure::Output(format!("{}: {e}", out.display())))?;
        }
        Command::VerifyOverlaps { trials, seed, tol } => {
            let report = verify_overlaps(trials, seed, tol)?;
            for p in &report.pairs {
                let mut line = Map::new();
                line.insert("pair".into(), p.pair.clone().into());
                line.insert("trials".into(), p.trials.into());
                line.insert("max_rel_error".into(), p.max_rel_error.into());
                if let Some(w) = &p.worst {
                    line.insert("worst".into(), to_json(w));
                }
                println!("{}", Value::Object(line));
            }
            if !report.passed() {
                return Err(Failure::Tolerance);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Model(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_kernel_precondition() { 3 } else { 2 })
        }
        Err(Failure::Output(msg)) => {
            eprintln!("error: OutputError: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Tolerance) => {
            eprintln!("error: ToleranceViolation: overlap kernels exceed tolerance");
            ExitCode::from(5)
        }
    }
}
