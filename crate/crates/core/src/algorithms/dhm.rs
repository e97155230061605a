//! DHM: infer a label when every member of C[L] that disagrees with it is
//! confidently worse than the best member that agrees; request it otherwise.

use serde::{Deserialize, Serialize};

use super::erm::ConstrainedErm;
use super::trace::{Trace, TraceEvent};
use super::{pow2_capped, RunResult, DEFAULT_UNLABELED_CAP};
use crate::bounds::local::hat_bound_floor;
use crate::bounds::{dhm_beta, dhm_threshold_vc, hat_bound, LocalBoundConfig, RademacherDraw};
use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass};
use crate::sample::{IndexedLabel, Label, LabeledPoint};
use crate::stream::LabeledStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    /// beta^2 + beta (sqrt(er(h_y)) + sqrt(er(h_-y))) with the shatter coefficient.
    Vc,
    /// 3 times the localized Rademacher bound of L u Q given L.
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DhmOptions {
    pub delta: f64,
    pub threshold: ThresholdKind,
    /// Cap on scanned points on top of the 2^n guard.
    pub unlabeled_cap: usize,
    pub bound: LocalBoundConfig,
    pub rademacher_seed: u64,
    pub trace: bool,
}

impl Default for DhmOptions {
    fn default() -> Self {
        Self {
            delta: 0.05,
            threshold: ThresholdKind::Vc,
            unlabeled_cap: DEFAULT_UNLABELED_CAP,
            bound: LocalBoundConfig::empirical(),
            rademacher_seed: 0,
            trace: true,
        }
    }
}

/// Everything DHM keeps besides the engine.
struct Sets {
    l: Vec<IndexedLabel>,
    q: Vec<IndexedLabel>,
}

fn as_points(stream: &LabeledStream, pairs: &[IndexedLabel]) -> Vec<LabeledPoint> {
    pairs
        .iter()
        .map(|p| LabeledPoint::new(p.index, stream.seen_1d(p.index), p.label))
        .collect()
}

/// The localized bound of L u Q with constraint L.
pub(crate) fn local_bound(
    class: &HypothesisClass,
    stream: &LabeledStream,
    l: &[IndexedLabel],
    q: &[IndexedLabel],
    delta: f64,
    cfg: &LocalBoundConfig,
    draw: &RademacherDraw,
) -> Result<f64> {
    if l.len() + q.len() == 0 {
        return Ok(f64::INFINITY);
    }
    if hat_bound_floor(l.len() + q.len(), delta, cfg) >= 1.0 {
        return Ok(1.0);
    }
    let lp = as_points(stream, l);
    let mut s = lp.clone();
    s.extend(as_points(stream, q));
    Ok(hat_bound(&s, delta, &lp, class, cfg, draw)?.value)
}

/// DHM with budget n. Returns the classifier Learn(L, Q) together with the
/// inferred set L and queried set Q.
pub fn dhm(class: &HypothesisClass, stream: &mut LabeledStream, n: usize, opts: &DhmOptions) -> Result<RunResult> {
    if opts.threshold == ThresholdKind::Local && class.dim() != 1 {
        return Err(Error::Unsupported("the localized threshold needs a 1-D class".into()));
    }
    let mut trace = Trace::new(opts.trace);
    let mut erm = ConstrainedErm::new(class)?;
    let draw = RademacherDraw::new(opts.rademacher_seed);
    let cap = pow2_capped(n, opts.unlabeled_cap);
    let mut sets = Sets {
        l: Vec::new(),
        q: Vec::new(),
    };
    let mut m = 0usize;
    let mut cap_hit = false;
    let mut anomalies = 0;
    let mut failure = None;
    loop {
        if sets.q.len() >= n {
            break;
        }
        if m >= cap {
            cap_hit = m < pow2_capped(n, usize::MAX);
            if cap_hit {
                trace.push(TraceEvent::CapHit { index: m });
            }
            break;
        }
        let Some(x) = stream.point(m + 1) else { break };
        let x = x.to_vec();
        m += 1;
        let seen = sets.l.len() + sets.q.len();
        let inferred = if let Some(y) = erm.forced(&x) {
            // the other label leaves C[L] empty
            Some((y, f64::NAN))
        } else if erm.is_empty() {
            failure = Some("C[L] is empty".to_string());
            break;
        } else {
            test_labels(class, stream, &erm, &sets, &x, m, seen, opts, &draw, &mut anomalies, &mut trace)?
        };
        match inferred {
            Some((y, delta)) => {
                erm.add_l(&x, y);
                sets.l.push(IndexedLabel::new(m, y));
                trace.push_with(|| TraceEvent::Infer {
                    index: m,
                    label: y,
                    delta: if delta.is_nan() { f64::INFINITY } else { delta },
                });
            }
            None => {
                let y = stream.query_label(m)?;
                erm.add_q(&x, y, draw.sign(m));
                sets.q.push(IndexedLabel::new(m, y));
                trace.push_with(|| TraceEvent::Query {
                    t: sets.q.len(),
                    index: m,
                    label: y,
                    dis_mass: None,
                });
            }
        }
    }
    let h = if failure.is_some() { None } else { erm.learn().map(|x| x.0) };
    if h.is_none() && failure.is_none() {
        failure = Some("C[L] is empty".to_string());
    }
    let mut r = RunResult::finish(h, failure, stream.labels_used(), m, trace);
    r.inferred = sets.l;
    r.queried = sets.q;
    r.cap_hit = cap_hit;
    r.anomalies = anomalies;
    Ok(r)
}

/// Steps 3-4 for a point in DIS(C[L]); returns the inferred label and the
/// threshold it beat, or `None` to request the label.
#[allow(clippy::too_many_arguments)]
fn test_labels(
    class: &HypothesisClass,
    stream: &LabeledStream,
    erm: &ConstrainedErm,
    sets: &Sets,
    x: &[f64],
    m: usize,
    seen: usize,
    opts: &DhmOptions,
    draw: &RademacherDraw,
    anomalies: &mut usize,
    trace: &mut Trace,
) -> Result<Option<(Label, f64)>> {
    // a threshold of at least 1 can never be beaten by an error difference
    let floor = match opts.threshold {
        ThresholdKind::Vc => {
            let b = dhm_beta(seen, opts.delta, class.ln_shatter(2 * seen));
            b * b
        }
        ThresholdKind::Local => {
            if seen == 0 {
                f64::INFINITY
            } else {
                3.0 * hat_bound_floor(seen, opts.delta, &opts.bound)
            }
        }
    };
    if floor >= 1.0 {
        return Ok(None);
    }
    let denom = seen as f64;
    let er = |h: &Option<(Hypothesis, usize)>| h.as_ref().map(|(_, e)| *e as f64 / denom);
    let hp = erm.learn_with(x, Label::Pos);
    let hn = erm.learn_with(x, Label::Neg);
    let (ep, en) = (er(&hp), er(&hn));
    let local = match opts.threshold {
        ThresholdKind::Local => Some(3.0 * local_bound(class, stream, &sets.l, &sets.q, opts.delta, &opts.bound, draw)?),
        ThresholdKind::Vc => None,
    };
    let threshold = |ey: f64, eny: f64| match local {
        Some(v) => v,
        None => {
            let b = dhm_beta(seen, opts.delta, class.ln_shatter(2 * seen));
            dhm_threshold_vc(ey, eny, b)
        }
    };
    let passes = |ey: Option<f64>, eny: Option<f64>| -> Option<f64> {
        match (ey, eny) {
            (Some(_), None) => Some(f64::NAN),
            (Some(a), Some(b)) => {
                let t = threshold(a, b);
                (b - a > t).then_some(t)
            }
            (None, _) => None,
        }
    };
    let pos = passes(ep, en);
    let neg = passes(en, ep);
    if pos.is_some() && neg.is_some() {
        *anomalies += 1;
        trace.push(TraceEvent::Anomaly {
            index: m,
            detail: "both labels pass the inference test".into(),
        });
    }
    Ok(match (pos, neg) {
        (Some(t), _) => Some((Label::Pos, t)),
        (None, Some(t)) => Some((Label::Neg, t)),
        _ => None,
    })
}
