use super::erm::ConstrainedErm;
use super::trace::{Trace, TraceEvent};
use super::RunResult;
use crate::error::Result;
use crate::hypothesis::HypothesisClass;
use crate::sample::IndexedLabel;
use crate::stream::LabeledStream;

/// Requests the first `n_labels` labels and returns exact ERM.
pub fn passive_erm(class: &HypothesisClass, stream: &mut LabeledStream, n_labels: usize, trace: bool) -> Result<RunResult> {
    let mut tr = Trace::new(trace);
    let mut erm = ConstrainedErm::new(class)?;
    let mut queried = Vec::with_capacity(n_labels);
    let mut m = 0;
    while m < n_labels {
        let Some(x) = stream.point(m + 1) else { break };
        let x = x.to_vec();
        m += 1;
        let y = stream.query_label(m)?;
        erm.add_q(&x, y, 1);
        queried.push(IndexedLabel::new(m, y));
        tr.push_with(|| TraceEvent::Query {
            t: m,
            index: m,
            label: y,
            dis_mass: None,
        });
    }
    let h = erm.learn().map(|x| x.0);
    let mut r = RunResult::finish(h, None, stream.labels_used(), m, tr);
    r.queried = queried;
    Ok(r)
}
