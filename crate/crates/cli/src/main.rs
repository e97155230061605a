use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dbal_core::algorithms::spec::{replay, RunSpec};
use dbal_core::disagreement::{theta_analytic, theta_estimate, ThetaMode};
use dbal_core::harness::{
    acceptance, emit_report, fit_rate, predicted_rate, run_experiment, ExperimentConfig, RateModel,
};
use dbal_core::{Hypothesis, HypothesisClass, Marginal};

/// Disagreement-based active learning experiments.
///
/// DBAL_OUT_DIR overrides the output directory of `run`; DBAL_THREADS sets
/// the number of worker threads.
#[derive(Parser)]
#[command(name = "dbal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and write the CSV and summary.
    Run {
        config: PathBuf,
        /// Output directory; wins over the config and DBAL_OUT_DIR.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the disagreement coefficient of one hypothesis.
    Theta {
        #[arg(long, value_enum)]
        class: ClassKind,
        /// Threshold z, interval "a,b" or halfspace normal "w1,...,wd".
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        h: Vec<f64>,
        /// Radii at or below r0 are skipped. With Monte Carlo masses, keep
        /// r0 well above 1/samples or the sup picks up sampling noise.
        #[arg(long, default_value_t = 1e-6)]
        r0: f64,
        /// Monte Carlo samples; exact masses when omitted (1-D only).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run acceptance criteria by number, or all of them.
    Check {
        #[arg(default_value = "all")]
        id: String,
    },
    /// Write the trace file of a run spec given as JSON.
    Trace {
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-execute a trace file and verify it line by line.
    Replay { trace: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    Thresholds,
    Intervals,
    Halfspaces,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    if let Ok(t) = std::env::var("DBAL_THREADS") {
        let n: usize = t.parse().context("DBAL_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Run { config, out } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(dir) = out.or_else(|| std::env::var_os("DBAL_OUT_DIR").map(PathBuf::from)) {
                cfg.output.dir = dir;
            }
            let curves = run_experiment(&cfg)?;
            let problem = cfg.problem.build()?;
            let noiseless = problem.nu_star() == 0.0;
            let mut fits = Vec::new();
            for c in &curves {
                for model in [RateModel::PowerLaw, RateModel::Exponential] {
                    if let Ok(f) = fit_rate(c, model) {
                        fits.push((c.algorithm.clone(), f));
                    }
                }
                let pred = predicted_rate(&c.algorithm, problem.tsybakov(), noiseless);
                for s in &c.summaries {
                    println!("{:<14} n={:<8} median={:.4e} iqr=[{:.4e}, {:.4e}]", c.algorithm, s.n, s.median, s.q1, s.q3);
                }
                for (_, f) in fits.iter().filter(|(a, _)| *a == c.algorithm) {
                    println!("{:<14} fit {:<12} slope={:.4} R^2={:.3}", c.algorithm, f.model.name(), f.slope, f.r2);
                }
                match pred {
                    Some(p) => match p.slope {
                        Some(s) => println!("{:<14} predicted {} slope {s:.4}", c.algorithm, p.model.name()),
                        None => println!("{:<14} predicted {}", c.algorithm, p.model.name()),
                    },
                    None => println!("{:<14} no rate prediction for this problem", c.algorithm),
                }
            }
            let paths = emit_report(&curves, &fits, &cfg, &[])?;
            println!("wrote {} and {}", paths.csv.display(), paths.summary.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Theta {
            class,
            h,
            r0,
            samples,
            seed,
        } => {
            let (class, hyp, marginal) = match (class, h.as_slice()) {
                (ClassKind::Thresholds, [z]) => (HypothesisClass::Thresholds, Hypothesis::threshold(*z)?, Marginal::Uniform),
                (ClassKind::Intervals, [a, b]) => (HypothesisClass::Intervals, Hypothesis::interval(*a, *b)?, Marginal::Uniform),
                (ClassKind::Halfspaces, w) if w.len() >= 2 => (
                    HypothesisClass::Halfspaces { dim: w.len() },
                    Hypothesis::halfspace(w.to_vec())?,
                    Marginal::sphere(w.len())?,
                ),
                _ => bail!("--h needs one value for thresholds, two for intervals, at least two for halfspaces"),
            };
            let mode = match samples {
                Some(samples) => ThetaMode::MonteCarlo { samples, seed },
                None => ThetaMode::Exact,
            };
            let est = theta_estimate(&class, &hyp, &marginal, r0, None, mode)?;
            let analytic = theta_analytic(&class, &hyp, &marginal).ok();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({ "analytic": analytic, "estimate": est }))?
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { id } => {
            let ids: Vec<u8> = if id == "all" {
                acceptance::CRITERIA.iter().map(|c| c.0).collect()
            } else {
                vec![id.parse().context("criterion id must be 1-10 or `all`")?]
            };
            let mut all_pass = true;
            for i in ids {
                let o = acceptance::run_criterion(i);
                println!("{}", o.line());
                if !o.pass {
                    if let Some(why) = acceptance::shortfall(i) {
                        println!("      known shortfall: {why}");
                    }
                }
                all_pass &= o.pass;
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Trace { spec, output } => {
            let text = std::fs::read_to_string(&spec).with_context(|| format!("reading {}", spec.display()))?;
            let spec: RunSpec = serde_json::from_str(&text)?;
            let lines = spec.trace_lines()?.join("\n") + "\n";
            match output {
                Some(p) => std::fs::write(p, lines)?,
                None => print!("{lines}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { trace } => {
            let text = std::fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            match replay(&text) {
                Ok(n) => {
                    println!("verified {n} events");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}
