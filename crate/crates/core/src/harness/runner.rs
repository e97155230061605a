use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::algorithms::spec::AlgorithmSpec;
use crate::bounds::rademacher::splitmix64;
use crate::error::Result;
use crate::hypothesis::ClassSpec;
use crate::noise::NoiseProblem;
use crate::stream::LabeledStream;

/// base ^ splitmix64(budget << 32 | trial). Every algorithm of an
/// experiment sees the same stream for a given (budget, trial).
pub fn trial_seed(base: u64, budget: usize, trial: usize) -> u64 {
    base ^ splitmix64(((budget as u64) << 32) | (trial as u64 & 0xffff_ffff))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
    /// er(h) - nu, or the worst case 1 - nu when the run failed.
    pub excess_error: f64,
    pub labels_used: usize,
    pub unlabeled_used: usize,
    pub wall_ms: f64,
    pub failure: Option<String>,
    pub cap_hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetSummary {
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub algorithm: String,
    /// Best error in the class.
    pub nu: f64,
    /// Sorted by (n, trial).
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<BudgetSummary>,
}

/// Linear-interpolation quantile of a sample; `q` in [0, 1].
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = q * (v.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

impl LearningCurve {
    pub fn from_records(algorithm: String, nu: f64, mut records: Vec<TrialRecord>) -> Self {
        records.sort_by_key(|r| (r.n, r.trial));
        let mut summaries = Vec::new();
        for chunk in records.chunk_by(|a, b| a.n == b.n) {
            let errs: Vec<f64> = chunk.iter().map(|r| r.excess_error).collect();
            summaries.push(BudgetSummary {
                n: chunk[0].n,
                median: quantile(&errs, 0.5),
                q1: quantile(&errs, 0.25),
                q3: quantile(&errs, 0.75),
                failures: chunk.iter().filter(|r| r.failure.is_some()).count(),
            });
        }
        Self {
            algorithm,
            nu,
            records,
            summaries,
        }
    }

    /// A curve with one record per budget, for fitting fabricated data.
    pub fn from_medians(algorithm: &str, points: &[(usize, f64)]) -> Self {
        let records = points
            .iter()
            .map(|&(n, e)| TrialRecord {
                n,
                trial: 0,
                seed: 0,
                excess_error: e,
                labels_used: n,
                unlabeled_used: n,
                wall_ms: 0.0,
                failure: None,
                cap_hit: false,
            })
            .collect();
        Self::from_records(algorithm.to_string(), 0.0, records)
    }

    pub fn median_at(&self, n: usize) -> Option<f64> {
        self.summaries.iter().find(|s| s.n == n).map(|s| s.median)
    }

    /// Excess errors at budget n, in trial order.
    pub fn errors_at(&self, n: usize) -> Vec<f64> {
        self.records.iter().filter(|r| r.n == n).map(|r| r.excess_error).collect()
    }
}

fn one_trial(
    problem: &NoiseProblem,
    class: &ClassSpec,
    algorithm: &AlgorithmSpec,
    nu: f64,
    n: usize,
    trial: usize,
    seed: u64,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let mut stream = LabeledStream::new(problem.clone(), seed, n);
    let (excess, labels, unlabeled, failure, cap_hit) = match algorithm.run(class, &mut stream, n, false) {
        Ok(r) => {
            let failure = r.failure.clone();
            let excess = match &r.classifier {
                Some(h) => problem.excess_error(h, nu)?,
                None => 1.0 - nu,
            };
            (excess, r.labels_used, r.unlabeled_used, failure, r.cap_hit)
        }
        // an algorithm that refuses the run is a per-trial failure
        Err(e) => (1.0 - nu, stream.labels_used(), 0, Some(e.to_string()), false),
    };
    Ok(TrialRecord {
        n,
        trial,
        seed,
        excess_error: excess,
        labels_used: labels,
        unlabeled_used: unlabeled,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        failure,
        cap_hit,
    })
}

/// Runs every algorithm of `cfg` over all (budget, trial) pairs in
/// parallel. Deterministic given the config; only `wall_ms` varies.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<LearningCurve>> {
    cfg.validate()?;
    let problem = cfg.problem.build()?;
    let class = cfg.class.build()?;
    let nu = problem.noise_rate(&class)?;
    let jobs: Vec<(usize, usize)> = cfg
        .budgets
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let mut curves = Vec::with_capacity(cfg.algorithms.len());
    for algorithm in &cfg.algorithms {
        let records = jobs
            .par_iter()
            .map(|&(n, t)| one_trial(&problem, &cfg.class, algorithm, nu, n, t, trial_seed(cfg.base_seed, n, t)))
            .collect::<Result<Vec<_>>>()?;
        curves.push(LearningCurve::from_records(algorithm.name(), nu, records));
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.25), 1.75);
    }

    #[test]
    fn seeds_differ_across_budget_and_trial() {
        let a = trial_seed(7, 10, 0);
        assert_ne!(a, trial_seed(7, 10, 1));
        assert_ne!(a, trial_seed(7, 11, 0));
        assert_eq!(a, trial_seed(7, 10, 0));
    }
}
