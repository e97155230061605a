use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use super::acceptance::CriterionOutcome;
use super::config::ExperimentConfig;
use super::fit::{predicted_rate, RateFit};
use super::runner::LearningCurve;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ReportPaths {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

#[derive(Serialize)]
struct Row<'a> {
    algorithm: &'a str,
    n: usize,
    trial: usize,
    excess_error: f64,
    labels_used: usize,
    unlabeled_used: usize,
    seed: u64,
}

const HEADER: [&str; 7] = ["algorithm", "n", "trial", "excess_error", "labels_used", "unlabeled_used", "seed"];

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// One row per (algorithm, budget, trial). Wall time is left out so that
/// the file is reproducible byte for byte.
pub fn write_csv<W: Write>(out: W, curves: &[LearningCurve]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(HEADER).map_err(csv_err)?;
    for c in curves {
        for r in &c.records {
            w.serialize(Row {
                algorithm: &c.algorithm,
                n: r.n,
                trial: r.trial,
                excess_error: r.excess_error,
                labels_used: r.labels_used,
                unlabeled_used: r.unlabeled_used,
                seed: r.seed,
            })
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.3}"))
}

fn summary_text(
    curves: &[LearningCurve],
    fits: &[(String, RateFit)],
    cfg: &ExperimentConfig,
    criteria: &[CriterionOutcome],
) -> Result<String> {
    let problem = cfg.problem.build()?;
    let noiseless = problem.nu_star() == 0.0;
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", cfg.name);
    let _ = writeln!(
        s,
        "budgets {:?}, {} trials per budget, base seed {}\n",
        cfg.budgets, cfg.trials, cfg.base_seed
    );
    let _ = writeln!(s, "## Median excess error\n");
    let _ = writeln!(s, "| algorithm | n | median | q1 | q3 | failures |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for c in curves {
        for b in &c.summaries {
            let _ = writeln!(
                s,
                "| {} | {} | {:.3e} | {:.3e} | {:.3e} | {} |",
                c.algorithm, b.n, b.median, b.q1, b.q3, b.failures
            );
        }
    }
    let _ = writeln!(s, "\n## Rates\n");
    let _ = writeln!(
        s,
        "| algorithm | model | fitted slope | bootstrap 95% | R^2 | budgets | predicted model | predicted slope |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|");
    for c in curves {
        let pred = predicted_rate(&c.algorithm, problem.tsybakov(), noiseless);
        let (pm, ps) = match pred {
            Some(p) => (p.model.name().to_string(), fmt_opt(p.slope)),
            None => ("-".into(), "-".into()),
        };
        let mut any = false;
        for (_, f) in fits.iter().filter(|(a, _)| *a == c.algorithm) {
            any = true;
            let _ = writeln!(
                s,
                "| {} | {} | {:.4} | [{:.4}, {:.4}] | {:.3} | {}..{} | {} | {} |",
                c.algorithm,
                f.model.name(),
                f.slope,
                f.bootstrap.0,
                f.bootstrap.1,
                f.r2,
                f.range.0,
                f.range.1,
                pm,
                ps
            );
        }
        if !any {
            let _ = writeln!(s, "| {} | - | - | - | - | - | {} | {} |", c.algorithm, pm, ps);
        }
    }
    if !criteria.is_empty() {
        let _ = writeln!(s, "\n## Acceptance\n");
        for c in criteria {
            let _ = writeln!(s, "- {}", c.line());
        }
    }
    Ok(s)
}

/// Writes the CSV and the markdown summary into `cfg.output.dir`.
pub fn emit_report(
    curves: &[LearningCurve],
    fits: &[(String, RateFit)],
    cfg: &ExperimentConfig,
    criteria: &[CriterionOutcome],
) -> Result<ReportPaths> {
    std::fs::create_dir_all(&cfg.output.dir)?;
    let csv = cfg.output.dir.join(&cfg.output.csv);
    let summary = cfg.output.dir.join(&cfg.output.summary);
    write_csv(std::io::BufWriter::new(std::fs::File::create(&csv)?), curves)?;
    std::fs::write(&summary, summary_text(curves, fits, cfg, criteria)?)?;
    Ok(ReportPaths { csv, summary })
}
