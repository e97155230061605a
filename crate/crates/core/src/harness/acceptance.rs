//! The acceptance suite. Each criterion runs a fixed, seeded experiment and
//! reports PASS or FAIL with the numbers behind the verdict.
//!
//! Three criteria cannot pass with the published bound constants at these
//! sample sizes; they are listed in [`shortfall`] and still reported as FAIL.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, OutputConfig};
use super::fit::{fit_rate, RateModel};
use super::runner::{quantile, run_experiment, trial_seed, LearningCurve};
use crate::algorithms::spec::{AlgorithmSpec, RunSpec, StreamSpec};
use crate::algorithms::trace::TraceEvent;
use crate::algorithms::{dhm, erm, replay, DhmOptions, MassMode, ThresholdKind};
use crate::bounds::{hat_bound, vc_deviation, LocalBoundConfig, RademacherDraw};
use crate::disagreement::{dyadic_grid, lemma_checks, theta_analytic, theta_estimate, LemmaConfig, ThetaMode, ThetaValue};
use crate::error::{Error, Result};
use crate::hypothesis::{ClassSpec, GridClass, Hypothesis, HypothesisClass};
use crate::marginal::Marginal;
use crate::noise::ProblemSpec;
use crate::sample::{Label, LabeledPoint};
use crate::stream::LabeledStream;

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "disagreement coefficient values"),
    (2, "VC deviation bound coverage"),
    (3, "realizable CAL decay"),
    (4, "kappa = 2 rate separation"),
    (5, "kappa = 1 exponential regime"),
    (6, "label inference soundness"),
    (7, "localized bound validity"),
    (8, "model selection adaptivity"),
    (9, "hand-simulation traces and replay"),
    (10, "disagreement coefficient inequalities"),
];

/// Criteria that fail for a known, documented reason rather than a defect.
pub fn shortfall(id: u8) -> Option<&'static str> {
    match id {
        4 => Some(
            "with the localized bound's constants the inference threshold stays at 1 for every \
             budget up to 2^13, so the active learner queries every point and matches passive ERM",
        ),
        5 => Some(
            "at budgets 64..512 the confidence widths exceed the achievable error gaps: A2 never \
             shrinks its region and the VC inference threshold is never met, so both learners \
             reduce to passive ERM, whose 1/n curve is not exponential",
        ),
        8 => Some(
            "the localized bound is vacuous at these budgets, so every comparison passes and the \
             smallest class (thresholds) is accepted although the Bayes classifier is an interval",
        ),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {}: {} ({:.1} s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

/// Runs one criterion; errors are reported as a FAIL with the message.
pub fn run_criterion(id: u8) -> CriterionOutcome {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown criterion", |c| c.1)
        .to_string();
    let start = Instant::now();
    let result = match id {
        1 => theta_values(),
        2 => deviation_coverage(),
        3 => cal_decay(),
        4 => kappa_two(),
        5 => kappa_one(),
        6 => inference_soundness(),
        7 => local_bound_validity(),
        8 => adaptivity(),
        9 => hand_traces(),
        10 => lemma_suite(),
        _ => Err(Error::InvalidParameter(format!("no criterion {id}"))),
    };
    let (pass, detail) = match result {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionOutcome {
        id,
        title,
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<CriterionOutcome> {
    CRITERIA.iter().map(|c| run_criterion(c.0)).collect()
}

type Verdict = Result<(bool, String)>;

fn experiment(
    name: &str,
    problem: ProblemSpec,
    class: ClassSpec,
    algorithms: Vec<AlgorithmSpec>,
    budgets: Vec<usize>,
    trials: usize,
    base_seed: u64,
) -> ExperimentConfig {
    ExperimentConfig {
        name: name.into(),
        problem,
        class,
        algorithms,
        budgets,
        trials,
        base_seed,
        output: OutputConfig::default(),
    }
}

fn curve<'a>(curves: &'a [LearningCurve], name: &str) -> Result<&'a LearningCurve> {
    curves
        .iter()
        .find(|c| c.algorithm == name)
        .ok_or_else(|| Error::Config(format!("no curve for {name}")))
}

fn dhm_spec(threshold: ThresholdKind) -> AlgorithmSpec {
    AlgorithmSpec::Dhm {
        delta: 0.05,
        threshold,
        unlabeled_cap: crate::algorithms::DEFAULT_UNLABELED_CAP,
        bound: LocalBoundConfig::empirical(),
        rademacher_seed: 0,
    }
}

fn theta_values() -> Verdict {
    let u = Marginal::Uniform;
    let thr = HypothesisClass::Thresholds;
    let int = HypothesisClass::Intervals;
    let h_t = Hypothesis::threshold(0.5)?;
    let h_i = Hypothesis::interval(0.4, 0.6)?;
    let exact = |v: ThetaValue| match v {
        ThetaValue::Exact { value } => value,
        ThetaValue::Bracket { .. } => f64::NAN,
    };
    let a_t = exact(theta_analytic(&thr, &h_t, &u)?);
    let a_i = exact(theta_analytic(&int, &h_i, &u)?);
    // 0.6 - 0.4 is not exactly 0.2 in binary
    let analytic_ok = a_t == 2.0 && (a_i - 5.0).abs() <= 1e-12;

    let e_t = theta_estimate(&thr, &h_t, &u, 1e-6, None, ThetaMode::Exact)?.value;
    let e_i = theta_estimate(&int, &h_i, &u, 1e-6, None, ThetaMode::Exact)?.value;
    let exact_ok = (e_t - a_t).abs() <= 1e-9 && (e_i - a_i).abs() <= 1e-9;

    let mc = |seed| ThetaMode::MonteCarlo {
        samples: 1_000_000,
        seed,
    };
    let m_t = theta_estimate(&thr, &h_t, &u, 0.0, Some(&dyadic_grid(8)), mc(11))?.value;
    let m_i = theta_estimate(&int, &h_i, &u, 0.0, Some(&dyadic_grid(12)), mc(12))?.value;
    let mc_ok = (m_t / a_t - 1.0).abs() <= 0.05 && (m_i / a_i - 1.0).abs() <= 0.05;

    let d3 = HypothesisClass::Halfspaces { dim: 3 };
    let w = Hypothesis::halfspace(vec![1.0, 0.0, 0.0])?;
    let sphere = Marginal::sphere(3)?;
    let bracket = theta_analytic(&d3, &w, &sphere)?;
    let s = theta_estimate(&d3, &w, &sphere, 0.0, Some(&dyadic_grid(10)), mc(13))?.value;
    let sphere_ok = bracket.contains(s);
    Ok((
        analytic_ok && exact_ok && mc_ok && sphere_ok,
        format!(
            "analytic {a_t}, {a_i:.12}; exact {e_t:.12}, {e_i:.12}; MC {m_t:.4}, {m_i:.4}; sphere d=3 MC {s:.4} in {bracket:?}"
        ),
    ))
}

fn deviation_coverage() -> Verdict {
    let problem = ProblemSpec::BoundedThreshold {
        c: 0.25,
        z_star: 0.5,
        marginal: Marginal::Uniform,
    }
    .build()?;
    let grid = GridClass::thresholds(512)?;
    let true_err: Vec<f64> = grid.members().iter().map(|h| problem.true_error(h)).collect::<Result<_>>()?;
    let (m, delta, trials) = (200, 0.1, 1000);
    let g = vc_deviation(m, delta, 1);
    let mut violations = 0;
    for t in 0..trials {
        let mut s = LabeledStream::new(problem.clone(), trial_seed(0xc0ffee, m, t), m);
        let mut pts = Vec::with_capacity(m);
        for i in 1..=m {
            let x = s.point_1d(i).ok_or(Error::IndexOutOfRange(i))?;
            pts.push((x, s.query_label(i)?));
        }
        let bad = grid.members().iter().zip(&true_err).any(|(h, e)| {
            let emp = pts.iter().filter(|(x, y)| h.predict_1d(*x) != *y).count() as f64 / m as f64;
            (emp - e).abs() > g
        });
        violations += bad as usize;
    }
    let frac = violations as f64 / trials as f64;
    Ok((
        frac <= delta,
        format!("G(200, 0.1) = {g:.4}; violation fraction {frac:.3} (allowed {delta})"),
    ))
}

fn cal_decay() -> Verdict {
    let cfg = experiment(
        "realizable CAL",
        ProblemSpec::NoiselessThreshold {
            z_star: 0.5,
            marginal: Marginal::Uniform,
        },
        ClassSpec::Thresholds,
        vec![
            AlgorithmSpec::Cal {
                unlabeled_cap: usize::MAX,
                skip_ahead: true,
            },
            AlgorithmSpec::Passive,
        ],
        (10..=60).collect(),
        100,
        3,
    );
    let curves = run_experiment(&cfg)?;
    let cal = curve(&curves, "cal")?;
    let passive = curve(&curves, "passive")?;
    let fit = fit_rate(cal, RateModel::Exponential)?;
    let (c50, p50) = (cal.median_at(50).unwrap_or(f64::NAN), passive.median_at(50).unwrap_or(f64::NAN));
    Ok((
        fit.slope < 0.0 && fit.r2 >= 0.9 && c50 <= p50 / 3.0,
        format!(
            "exponential fit slope {:.4}, R^2 {:.3} over n = {}..{}; median at 50: CAL {c50:.3e}, passive {p50:.3e}",
            fit.slope, fit.r2, fit.range.0, fit.range.1
        ),
    ))
}

fn kappa_two() -> Verdict {
    let cfg = experiment(
        "kappa 2",
        ProblemSpec::PolynomialThreshold {
            alpha: 1.0,
            z_star: 0.5,
            marginal: Marginal::Uniform,
        },
        ClassSpec::Thresholds,
        vec![AlgorithmSpec::Passive, dhm_spec(ThresholdKind::Local)],
        (6..=13).map(|k| 1usize << k).collect(),
        100,
        4,
    );
    let curves = run_experiment(&cfg)?;
    let p = fit_rate(curve(&curves, "passive")?, RateModel::PowerLaw)?;
    let a = fit_rate(curve(&curves, "dhm_local")?, RateModel::PowerLaw)?;
    let passive_ok = (p.slope + 2.0 / 3.0).abs() <= 0.15;
    let active_ok = a.slope <= -0.8 && !(a.bootstrap.0 <= p.slope && p.slope <= a.bootstrap.1);
    Ok((
        passive_ok && active_ok,
        format!(
            "passive slope {:.3} (target -0.667 +- 0.15); active slope {:.3}, bootstrap [{:.3}, {:.3}] (needs <= -0.8 and to exclude passive)",
            p.slope, a.slope, a.bootstrap.0, a.bootstrap.1
        ),
    ))
}

fn kappa_one() -> Verdict {
    let cfg = experiment(
        "kappa 1",
        ProblemSpec::BoundedThreshold {
            c: 0.25,
            z_star: 0.5,
            marginal: Marginal::Uniform,
        },
        ClassSpec::Thresholds,
        vec![
            AlgorithmSpec::A2 {
                delta: 0.05,
                mass_mode: MassMode::Auto,
                unlabeled_cap: crate::algorithms::DEFAULT_UNLABELED_CAP,
            },
            dhm_spec(ThresholdKind::Vc),
            AlgorithmSpec::Passive,
        ],
        vec![64, 128, 256, 512],
        100,
        5,
    );
    let curves = run_experiment(&cfg)?;
    let a2 = fit_rate(curve(&curves, "a2")?, RateModel::Exponential)?;
    let dhm = fit_rate(curve(&curves, "dhm_vc")?, RateModel::Exponential)?;
    let p = fit_rate(curve(&curves, "passive")?, RateModel::PowerLaw)?;
    Ok((
        a2.r2 >= 0.85 && dhm.r2 >= 0.85 && (p.slope + 1.0).abs() <= 0.2,
        format!(
            "A2 exponential R^2 {:.3} (slope {:.3e}); DHM exponential R^2 {:.3} (slope {:.3e}); passive power-law slope {:.3}",
            a2.r2, a2.slope, dhm.r2, dhm.slope, p.slope
        ),
    ))
}

fn inference_soundness() -> Verdict {
    let (n, delta, seeds) = (1024, 0.05, 100);
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, spec) in [
        (
            "noiseless",
            ProblemSpec::NoiselessThreshold {
                z_star: 0.5,
                marginal: Marginal::Uniform,
            },
        ),
        (
            "bounded c=0.25",
            ProblemSpec::BoundedThreshold {
                c: 0.25,
                z_star: 0.5,
                marginal: Marginal::Uniform,
            },
        ),
    ] {
        let problem = spec.build()?;
        let target = problem.bayes();
        let opts = DhmOptions {
            delta,
            threshold: ThresholdKind::Vc,
            trace: false,
            ..DhmOptions::default()
        };
        let mut bad_runs = 0;
        let mut inferred = Vec::with_capacity(seeds);
        for t in 0..seeds {
            let mut s = LabeledStream::new(problem.clone(), trial_seed(0x50d, n, t), n);
            let r = dhm(&HypothesisClass::Thresholds, &mut s, n, &opts)?;
            inferred.push(r.inferred.len() as f64);
            bad_runs += r.inferred.iter().any(|p| target.predict_unchecked(s.seen(p.index)) != p.label) as usize;
        }
        let frac = bad_runs as f64 / seeds as f64;
        ok &= frac <= delta;
        parts.push(format!(
            "{name}: {frac:.2} of runs with a wrong inferred label, median |L| = {}",
            quantile(&inferred, 0.5)
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn local_bound_validity() -> Verdict {
    let problem = ProblemSpec::BoundedThreshold {
        c: 0.25,
        z_star: 0.5,
        marginal: Marginal::Uniform,
    }
    .build()?;
    let class = HypothesisClass::Thresholds;
    let nu = problem.noise_rate(&class)?;
    let (m, trials) = (512, 200);
    let mut covered = 0;
    let mut vacuous = 0;
    let mut excess = Vec::with_capacity(trials);
    for t in 0..trials {
        let seed = trial_seed(0x10ca1, m, t);
        let mut s = LabeledStream::new(problem.clone(), seed, m);
        let mut sample = Vec::with_capacity(m);
        for i in 1..=m {
            let x = s.point_1d(i).ok_or(Error::IndexOutOfRange(i))?;
            sample.push(LabeledPoint::new(i, x, s.query_label(i)?));
        }
        let h = erm(&class, &sample)?.ok_or(Error::EmptyVersionSpace)?;
        let e = problem.excess_error(&h, nu)?;
        let b = hat_bound(&sample, 0.05, &[], &class, &LocalBoundConfig::empirical(), &RademacherDraw::new(seed))?;
        covered += (e <= b.value) as usize;
        vacuous += b.vacuous as usize;
        excess.push(e);
    }
    let frac = covered as f64 / trials as f64;
    Ok((
        frac >= 0.95,
        format!(
            "covered in {frac:.3} of trials; bound vacuous in {vacuous} of {trials}; median excess {:.3e}",
            quantile(&excess, 0.5)
        ),
    ))
}

fn adaptivity() -> Verdict {
    let n = 1024;
    let structure = vec![ClassSpec::Thresholds, ClassSpec::Intervals];
    let cfg = experiment(
        "adaptivity",
        ProblemSpec::BoundedInterval {
            a: 0.3,
            b: 0.7,
            c: 0.25,
            marginal: Marginal::Uniform,
        },
        ClassSpec::Intervals,
        vec![
            AlgorithmSpec::ModelSelect {
                structure: structure.clone(),
                delta: 0.05,
                unlabeled_cap: crate::algorithms::DEFAULT_UNLABELED_CAP,
                bound: LocalBoundConfig::empirical(),
                rademacher_seed: 0,
            },
            dhm_spec(ThresholdKind::Local),
        ],
        vec![n],
        50,
        8,
    );
    let curves = run_experiment(&cfg)?;
    let ms = curve(&curves, "model_select")?;
    let single = curve(&curves, "dhm_local")?;
    let (em, es) = (ms.median_at(n).unwrap_or(f64::NAN), single.median_at(n).unwrap_or(f64::NAN));

    // budget audit and label use, read back from traced runs
    let problem = cfg.problem.build()?;
    let mut audit_ok = true;
    for r in &ms.records {
        let mut s = LabeledStream::new(problem.clone(), r.seed, n);
        let run = cfg.algorithms[0].run(&cfg.class, &mut s, n, true)?;
        audit_ok &= run.labels_used <= n
            && run
                .trace
                .iter()
                .any(|e| matches!(e, TraceEvent::BudgetAudit { total, budget } if total <= budget));
    }
    Ok((
        em <= 4.0 * es && audit_ok,
        format!("median excess at n={n}: model selection {em:.3e}, single class {es:.3e} (allowed 4x); budget audit held: {audit_ok}"),
    ))
}

/// The three small fixtures; each is checked against hand-derived events
/// and then replayed from its own trace text.
pub fn hand_fixtures() -> Result<Vec<(RunSpec, Vec<TraceEvent>)>> {
    let h = |z| Hypothesis::threshold(z);
    let three = ClassSpec::Members {
        members: vec![h(0.25)?, h(0.5)?, h(0.75)?],
    };
    use Label::{Neg, Pos};
    let cal = RunSpec::Algorithm {
        class: three.clone(),
        stream: StreamSpec::Fixed {
            dim: 1,
            points: vec![0.6, 0.1, 0.3, 0.8, 0.45],
            labels: vec![Pos, Neg, Neg, Pos, Neg],
        },
        budget: 10,
        algorithm: AlgorithmSpec::Cal {
            unlabeled_cap: crate::algorithms::DEFAULT_UNLABELED_CAP,
            skip_ahead: false,
        },
    };
    let cal_events = vec![
        TraceEvent::Query {
            t: 1,
            index: 1,
            label: Pos,
            dis_mass: None,
        },
        TraceEvent::Query {
            t: 2,
            index: 3,
            label: Neg,
            dis_mass: None,
        },
        TraceEvent::Return {
            classifier: Some(h(0.5)?),
            labels_used: 2,
            unlabeled_used: 3,
            failure: None,
        },
    ];
    let learn = RunSpec::Learn {
        class: three.clone(),
        points: vec![0.3, 0.6, 0.8],
        l: vec![(1, Pos)],
        q: vec![(2, Neg), (3, Pos)],
    };
    let learn_empty = RunSpec::Learn {
        class: ClassSpec::Thresholds,
        points: vec![0.3, 0.8],
        l: vec![(1, Pos), (2, Neg)],
        q: vec![],
    };
    let learn_vacuous = RunSpec::Learn {
        class: three,
        points: vec![],
        l: vec![],
        q: vec![],
    };
    let rad = RunSpec::Rademacher {
        h1: h(0.25)?,
        h2: h(0.75)?,
        points: vec![0.1, 0.5, 0.9],
        signs: vec![1, -1, 1],
    };
    Ok(vec![
        (cal, cal_events),
        (learn, vec![TraceEvent::Learn { result: Some(h(0.25)?) }]),
        (learn_empty, vec![TraceEvent::Learn { result: None }]),
        (learn_vacuous, vec![TraceEvent::Learn { result: Some(h(0.25)?) }]),
        (rad, vec![TraceEvent::Rademacher { value: -2.0 / 3.0 }]),
    ])
}

fn hand_traces() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, (spec, expected)) in hand_fixtures()?.into_iter().enumerate() {
        let got = spec.execute()?;
        let same = got == expected;
        let text = spec.trace_lines()?.join("\n");
        let replayed = replay(&text).map(|n| n == expected.len());
        ok &= same && replayed == Ok(true);
        notes.push(format!("fixture {}: events {}, replay {:?}", k + 1, if same { "match" } else { "differ" }, replayed));
    }
    Ok((ok, notes.join("; ")))
}

fn lemma_suite() -> Verdict {
    let checks = lemma_checks(&LemmaConfig::default())?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
    Ok((
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} inequalities hold with 3-stderr slack", checks.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    ))
}
