//! Serializable run descriptions and trace replay.
//!
//! A trace file is JSON Lines: the first line is the [`RunSpec`], every
//! following line a [`TraceEvent`]. Replaying re-executes the spec and
//! requires every event line to match byte for byte.

use serde::{Deserialize, Serialize};

use super::model_select::{model_select, ModelSelectOptions, NestedStructure};
use super::trace::TraceEvent;
use super::{a2, cal, dhm, learn_constrained, passive_erm, A2Options, CalOptions, DhmOptions, MassMode, RunResult};
use super::{ThresholdKind, DEFAULT_UNLABELED_CAP};
use crate::bounds::{rademacher_process, LocalBoundConfig, RademacherDraw};
use crate::error::{Error, Result};
use crate::hypothesis::{ClassSpec, Hypothesis};
use crate::noise::ProblemSpec;
use crate::sample::{Label, LabeledPoint};
use crate::stream::LabeledStream;

fn default_cap() -> usize {
    DEFAULT_UNLABELED_CAP
}

fn default_delta() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum StreamSpec {
    /// I.i.d. draws from a synthetic problem.
    Problem { problem: ProblemSpec, seed: u64 },
    /// A finite stream with fixed points and labels.
    Fixed {
        #[serde(default = "one")]
        dim: usize,
        points: Vec<f64>,
        labels: Vec<Label>,
    },
}

fn one() -> usize {
    1
}

impl StreamSpec {
    pub fn open(&self, budget: usize) -> Result<LabeledStream> {
        match self {
            StreamSpec::Problem { problem, seed } => Ok(LabeledStream::new(problem.build()?, *seed, budget)),
            StreamSpec::Fixed { dim, points, labels } => {
                LabeledStream::from_labeled(*dim, points.clone(), labels.clone(), budget)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum AlgorithmSpec {
    Cal {
        #[serde(default = "default_cap")]
        unlabeled_cap: usize,
        #[serde(default)]
        skip_ahead: bool,
    },
    A2 {
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default)]
        mass_mode: MassMode,
        #[serde(default = "default_cap")]
        unlabeled_cap: usize,
    },
    Dhm {
        #[serde(default = "default_delta")]
        delta: f64,
        threshold: ThresholdKind,
        #[serde(default = "default_cap")]
        unlabeled_cap: usize,
        #[serde(default)]
        bound: LocalBoundConfig,
        #[serde(default)]
        rademacher_seed: u64,
    },
    ModelSelect {
        structure: Vec<ClassSpec>,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default = "default_cap")]
        unlabeled_cap: usize,
        #[serde(default)]
        bound: LocalBoundConfig,
        #[serde(default)]
        rademacher_seed: u64,
    },
    Passive,
}

impl AlgorithmSpec {
    pub fn name(&self) -> String {
        match self {
            AlgorithmSpec::Cal { .. } => "cal".into(),
            AlgorithmSpec::A2 { .. } => "a2".into(),
            AlgorithmSpec::Dhm { threshold, .. } => match threshold {
                ThresholdKind::Vc => "dhm_vc".into(),
                ThresholdKind::Local => "dhm_local".into(),
            },
            AlgorithmSpec::ModelSelect { .. } => "model_select".into(),
            AlgorithmSpec::Passive => "passive".into(),
        }
    }

    /// Runs the algorithm on `class` over an open stream with budget `n`.
    pub fn run(&self, class: &ClassSpec, stream: &mut LabeledStream, n: usize, trace: bool) -> Result<RunResult> {
        match self {
            AlgorithmSpec::Cal {
                unlabeled_cap,
                skip_ahead,
            } => cal(
                &class.build()?,
                stream,
                n,
                &CalOptions {
                    unlabeled_cap: *unlabeled_cap,
                    skip_ahead: *skip_ahead,
                    trace,
                },
            ),
            AlgorithmSpec::A2 {
                delta,
                mass_mode,
                unlabeled_cap,
            } => a2(
                &class.build()?,
                stream,
                n,
                &A2Options {
                    delta: *delta,
                    mass_mode: *mass_mode,
                    unlabeled_cap: *unlabeled_cap,
                    trace,
                },
            ),
            AlgorithmSpec::Dhm {
                delta,
                threshold,
                unlabeled_cap,
                bound,
                rademacher_seed,
            } => dhm(
                &class.build()?,
                stream,
                n,
                &DhmOptions {
                    delta: *delta,
                    threshold: *threshold,
                    unlabeled_cap: *unlabeled_cap,
                    bound: *bound,
                    rademacher_seed: *rademacher_seed,
                    trace,
                },
            ),
            AlgorithmSpec::ModelSelect {
                structure,
                delta,
                unlabeled_cap,
                bound,
                rademacher_seed,
            } => {
                let classes = structure.iter().map(|c| c.build()).collect::<Result<_>>()?;
                model_select(
                    &NestedStructure::new(classes)?,
                    stream,
                    n,
                    &ModelSelectOptions {
                        delta: *delta,
                        unlabeled_cap: *unlabeled_cap,
                        bound: *bound,
                        rademacher_seed: *rademacher_seed,
                        trace,
                    },
                )
            }
            AlgorithmSpec::Passive => passive_erm(&class.build()?, stream, n, trace),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "run", rename_all = "snake_case")]
pub enum RunSpec {
    /// One algorithm run.
    Algorithm {
        class: ClassSpec,
        stream: StreamSpec,
        budget: usize,
        #[serde(flatten)]
        algorithm: AlgorithmSpec,
    },
    /// Learn_C(L, Q) on explicit points; `l` and `q` hold 1-based indices
    /// into `points`.
    Learn {
        class: ClassSpec,
        points: Vec<f64>,
        l: Vec<(usize, Label)>,
        q: Vec<(usize, Label)>,
    },
    /// R(h1 - h2; S) with explicit signs.
    Rademacher {
        h1: Hypothesis,
        h2: Hypothesis,
        points: Vec<f64>,
        signs: Vec<i8>,
    },
}

fn pairs(points: &[f64], v: &[(usize, Label)]) -> Result<Vec<LabeledPoint>> {
    v.iter()
        .map(|(i, y)| {
            if *i == 0 || *i > points.len() {
                return Err(Error::IndexOutOfRange(*i));
            }
            Ok(LabeledPoint::new(*i, points[i - 1], *y))
        })
        .collect()
}

impl RunSpec {
    /// Executes the spec with tracing on and returns its events.
    pub fn execute(&self) -> Result<Vec<TraceEvent>> {
        match self {
            RunSpec::Algorithm {
                class,
                stream,
                budget,
                algorithm,
            } => {
                let mut s = stream.open(*budget)?;
                Ok(algorithm.run(class, &mut s, *budget, true)?.trace)
            }
            RunSpec::Learn { class, points, l, q } => {
                let result = learn_constrained(&class.build()?, &pairs(points, l)?, &pairs(points, q)?)?;
                Ok(vec![TraceEvent::Learn { result }])
            }
            RunSpec::Rademacher { h1, h2, points, signs } => {
                let draw = RademacherDraw::from_signs(signs.clone())?;
                let sample: Vec<(usize, &[f64])> =
                    points.iter().enumerate().map(|(i, x)| (i + 1, std::slice::from_ref(x))).collect();
                let f = |x: &[f64]| h1.predict_unchecked(x).sign() - h2.predict_unchecked(x).sign();
                Ok(vec![TraceEvent::Rademacher {
                    value: rademacher_process(f, &sample, &draw)?,
                }])
            }
        }
    }

    /// The full trace file: spec line followed by event lines.
    pub fn trace_lines(&self) -> Result<Vec<String>> {
        let mut out = vec![to_line(self)?];
        for e in self.execute()? {
            out.push(to_line(&e)?);
        }
        Ok(out)
    }
}

fn to_line<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string(v).map_err(|e| Error::Config(e.to_string()))
}

/// Re-executes a trace file and checks it line by line. Returns the number
/// of event lines verified.
pub fn replay(text: &str) -> Result<usize> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let head = lines.next().ok_or_else(|| Error::Config("empty trace file".into()))?;
    let spec: RunSpec = serde_json::from_str(head).map_err(|e| Error::Config(format!("trace header: {e}")))?;
    let expected: Vec<&str> = lines.collect();
    let got = spec.trace_lines()?;
    let got = &got[1..];
    for k in 0..expected.len().max(got.len()) {
        let e = expected.get(k).copied().unwrap_or("<end of file>");
        let g = got.get(k).map(String::as_str).unwrap_or("<end of trace>");
        if e != g {
            return Err(Error::ReplayMismatch {
                line: k + 2,
                expected: e.to_string(),
                got: g.to_string(),
            });
        }
    }
    Ok(got.len())
}
