use serde::{Deserialize, Serialize};

use super::trace::{Trace, TraceEvent};
use super::{RunResult, DEFAULT_UNLABELED_CAP};
use crate::error::Result;
use crate::hypothesis::HypothesisClass;
use crate::region::Region;
use crate::sample::IndexedLabel;
use crate::stream::LabeledStream;
use crate::version_space::VersionSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalOptions {
    /// Stop after scanning this many stream points without finishing.
    pub unlabeled_cap: usize,
    /// Jump straight to the next point in DIS(V) when the stream allows it.
    pub skip_ahead: bool,
    pub trace: bool,
}

impl Default for CalOptions {
    fn default() -> Self {
        Self {
            unlabeled_cap: DEFAULT_UNLABELED_CAP,
            skip_ahead: false,
            trace: true,
        }
    }
}

/// CAL: request a label only when the point falls in DIS(V), then keep the
/// consistent members. Returns the smallest-parameter member of the final V.
pub fn cal(class: &HypothesisClass, stream: &mut LabeledStream, n: usize, opts: &CalOptions) -> Result<RunResult> {
    let mut trace = Trace::new(opts.trace);
    let mut v = VersionSpace::full(class);
    let mut dis = v.disagreement_region()?;
    let mut t = 0;
    let mut m = 0;
    let mut queried = Vec::new();
    let mut cap_hit = false;
    let mut failure = None;
    let skip = opts.skip_ahead && stream.can_skip();
    while t < n && !dis.is_structurally_empty() {
        if m >= opts.unlabeled_cap {
            cap_hit = true;
            trace.push(TraceEvent::CapHit { index: m });
            break;
        }
        if skip {
            match stream.skip_to(&dis, opts.unlabeled_cap)? {
                Some(i) => m = i,
                None => {
                    m = opts.unlabeled_cap;
                    cap_hit = true;
                    trace.push(TraceEvent::CapHit { index: m });
                    break;
                }
            }
        } else {
            let Some(x) = stream.point(m + 1) else { break };
            m += 1;
            if !dis.contains(x) {
                continue;
            }
        }
        let x = stream.seen(m).to_vec();
        let y = stream.query_label(m)?;
        t += 1;
        queried.push(IndexedLabel::new(m, y));
        trace.push_with(|| TraceEvent::Query {
            t,
            index: m,
            label: y,
            dis_mass: None,
        });
        v = v.restrict_point(&x, y)?;
        if v.is_empty() {
            failure = Some("version space became empty".to_string());
            dis = Region::empty();
        } else {
            dis = v.disagreement_region()?;
        }
    }
    let h = v.representative();
    let mut r = RunResult::finish(h, failure, stream.labels_used(), m, trace);
    r.queried = queried;
    r.cap_hit = cap_hit;
    Ok(r)
}
