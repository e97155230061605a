//! Model selection over a nested sequence of classes, with DHM (localized
//! threshold) run on each class and a localized-bound comparison between
//! them.

use serde::{Deserialize, Serialize};

use super::dhm::{dhm, local_bound, DhmOptions, ThresholdKind};
use super::erm::ConstrainedErm;
use super::trace::{Trace, TraceEvent};
use super::{RunResult, DEFAULT_UNLABELED_CAP};
use crate::bounds::{LocalBoundConfig, RademacherDraw};
use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass};
use crate::sample::{IndexedLabel, Label};
use crate::stream::LabeledStream;

/// C_1 subset C_2 subset ... with nesting checked on probe labelings.
#[derive(Debug, Clone)]
pub struct NestedStructure {
    classes: Vec<HypothesisClass>,
}

/// Interior probe points; every labeling of up to three of them realised by
/// C_i must be realised by C_{i+1}.
const PROBES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

fn realizable(class: &HypothesisClass, pts: &[(f64, Label)]) -> Result<bool> {
    let mut e = ConstrainedErm::new(class)?;
    for (x, y) in pts {
        e.add_l(&[*x], *y);
    }
    Ok(!e.is_empty())
}

impl NestedStructure {
    pub fn new(classes: Vec<HypothesisClass>) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidParameter("empty class structure".into()));
        }
        if classes.iter().any(|c| c.dim() != 1) {
            return Err(Error::Unsupported("model selection needs 1-D classes".into()));
        }
        for (i, w) in classes.windows(2).enumerate() {
            for mask in 1u32..(1 << PROBES.len()) {
                let idx: Vec<usize> = (0..PROBES.len()).filter(|k| mask >> k & 1 == 1).collect();
                if idx.len() > 3 {
                    continue;
                }
                for labels in 0u32..(1 << idx.len()) {
                    let pts: Vec<(f64, Label)> = idx
                        .iter()
                        .enumerate()
                        .map(|(b, k)| (PROBES[*k], Label::from_bool(labels >> b & 1 == 1)))
                        .collect();
                    if realizable(&w[0], &pts)? && !realizable(&w[1], &pts)? {
                        return Err(Error::NotNested(format!(
                            "class {} realises {:?} but class {} does not",
                            i + 1,
                            pts,
                            i + 2
                        )));
                    }
                }
            }
        }
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[HypothesisClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSelectOptions {
    pub delta: f64,
    pub unlabeled_cap: usize,
    pub bound: LocalBoundConfig,
    pub rademacher_seed: u64,
    pub trace: bool,
}

impl Default for ModelSelectOptions {
    fn default() -> Self {
        Self {
            delta: 0.05,
            unlabeled_cap: DEFAULT_UNLABELED_CAP,
            bound: LocalBoundConfig::empirical(),
            rademacher_seed: 0,
            trace: true,
        }
    }
}

struct Level {
    l: Vec<IndexedLabel>,
    q: Vec<IndexedLabel>,
    h: Option<Hypothesis>,
    bound: f64,
}

fn mistakes(h: &Hypothesis, stream: &LabeledStream, pairs: &[&[IndexedLabel]]) -> (usize, usize) {
    let mut wrong = 0;
    let mut total = 0;
    for set in pairs {
        for p in *set {
            wrong += (h.predict_unchecked(stream.seen(p.index)) != p.label) as usize;
            total += 1;
        }
    }
    (wrong, total)
}

/// Runs the classes from the largest index down, each with budget
/// floor(n / 2i^2) and confidence delta / 2i^2, and keeps the last h_i that
/// is not significantly worse than every larger class on that class's data.
/// Indices beyond the number of classes are skipped.
pub fn model_select(
    structure: &NestedStructure,
    stream: &mut LabeledStream,
    n: usize,
    opts: &ModelSelectOptions,
) -> Result<RunResult> {
    if n < 2 {
        return Err(Error::InvalidParameter("model selection needs n >= 2".into()));
    }
    let mut trace = Trace::new(opts.trace);
    let imax = ((n / 2) as f64).sqrt().floor() as usize;
    let imax = {
        // guard the float square root
        let mut i = imax;
        while (i + 1) * (i + 1) <= n / 2 {
            i += 1;
        }
        while i * i > n / 2 {
            i -= 1;
        }
        i
    };
    let top = imax.min(structure.len());
    let audit: usize = (1..=imax).map(|i| n / (2 * i * i)).sum();
    trace.push(TraceEvent::BudgetAudit { total: audit, budget: n });
    if audit > n {
        return Err(Error::InvalidParameter(format!("budget audit failed: {audit} > {n}")));
    }
    let draw = RademacherDraw::new(opts.rademacher_seed);
    let mut levels: Vec<Option<Level>> = (0..=top).map(|_| None).collect();
    let mut chosen: Option<Hypothesis> = None;
    let mut unlabeled = 0;
    let mut inferred_all = Vec::new();
    let mut queried_all = Vec::new();
    let mut cap_hit = false;
    for i in (1..=top).rev() {
        let class = &structure.classes[i - 1];
        let budget = n / (2 * i * i);
        let delta_i = opts.delta / (2 * i * i) as f64;
        let sub = dhm(
            class,
            stream,
            budget,
            &DhmOptions {
                delta: delta_i,
                threshold: ThresholdKind::Local,
                unlabeled_cap: opts.unlabeled_cap,
                bound: opts.bound,
                rademacher_seed: opts.rademacher_seed,
                trace: false,
            },
        )?;
        unlabeled = unlabeled.max(sub.unlabeled_used);
        cap_hit |= sub.cap_hit;
        // Learn_{C_i}(union of L_j for j >= i, Q_i)
        let mut erm = ConstrainedErm::new(class)?;
        for lev in levels.iter().flatten() {
            for p in &lev.l {
                erm.add_l(stream.seen(p.index), p.label);
            }
        }
        for p in &sub.inferred {
            erm.add_l(stream.seen(p.index), p.label);
        }
        for p in &sub.queried {
            erm.add_q(stream.seen(p.index), p.label, 1);
        }
        let h = erm.learn().map(|x| x.0);
        trace.push(TraceEvent::Subroutine {
            class: i,
            budget,
            delta: delta_i,
            inferred: sub.inferred.len(),
            queried: sub.queried.len(),
            learned: h.clone(),
        });
        let bound = local_bound(class, stream, &sub.inferred, &sub.queried, delta_i, &opts.bound, &draw)?;
        inferred_all.extend(sub.inferred.iter().copied());
        queried_all.extend(sub.queried.iter().copied());
        let level = Level {
            l: sub.inferred,
            q: sub.queried,
            h,
            bound,
        };
        if let Some(hi) = &level.h {
            let mut ok = true;
            for j in i + 1..=top {
                let lj = levels[j].as_ref().unwrap();
                let Some(hj) = &lj.h else { continue };
                let (wi, tot) = mistakes(hi, stream, &[&lj.l, &lj.q]);
                let (wj, _) = mistakes(hj, stream, &[&lj.l, &lj.q]);
                let gap = if tot == 0 { 0.0 } else { (wi as f64 - wj as f64) / tot as f64 };
                let allowed = 1.5 * lj.bound;
                let pass = gap <= allowed;
                trace.push(TraceEvent::Compare { i, j, gap, allowed, pass });
                if !pass {
                    ok = false;
                    break;
                }
            }
            if ok {
                trace.push(TraceEvent::Accept {
                    class: i,
                    classifier: hi.clone(),
                });
                chosen = Some(hi.clone());
            }
        }
        levels[i] = Some(level);
    }
    let failure = chosen.is_none().then(|| "no class produced an acceptable classifier".to_string());
    let mut r = RunResult::finish(chosen, failure, stream.labels_used(), unlabeled, trace);
    r.inferred = inferred_all;
    r.queried = queried_all;
    r.cap_hit = cap_hit;
    Ok(r)
}
