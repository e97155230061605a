//! The learning procedures: CAL, A2, DHM, nested-class model selection and
//! a passive ERM baseline. Each consumes a [`LabeledStream`] and returns a
//! [`RunResult`] carrying the classifier and an audit trace.
//!
//! [`LabeledStream`]: crate::stream::LabeledStream

mod a2;
mod cal;
mod dhm;
mod erm;
mod model_select;
mod passive;
pub mod spec;
pub mod trace;

pub use a2::{a2, A2Options, MassMode};
pub use cal::{cal, CalOptions};
pub use dhm::{dhm, DhmOptions, ThresholdKind};
pub use erm::{erm, learn_constrained};
pub use model_select::{model_select, ModelSelectOptions, NestedStructure};
pub use passive::passive_erm;
pub use spec::{replay, AlgorithmSpec, RunSpec, StreamSpec};
pub use trace::{Trace, TraceEvent};

use serde::{Deserialize, Serialize};

use crate::hypothesis::Hypothesis;
use crate::sample::IndexedLabel;

/// Default cap on unlabeled points scanned by one run.
pub const DEFAULT_UNLABELED_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// `None` when the run ended in a failure state.
    pub classifier: Option<Hypothesis>,
    pub labels_used: usize,
    /// Largest stream index examined.
    pub unlabeled_used: usize,
    pub failure: Option<String>,
    /// Pairs whose labels were inferred (DHM's L).
    pub inferred: Vec<IndexedLabel>,
    /// Pairs whose labels were requested.
    pub queried: Vec<IndexedLabel>,
    pub cap_hit: bool,
    pub early_exit: bool,
    pub anomalies: usize,
    pub trace: Vec<TraceEvent>,
}

impl RunResult {
    pub(crate) fn finish(
        classifier: Option<Hypothesis>,
        failure: Option<String>,
        labels_used: usize,
        unlabeled_used: usize,
        mut trace: Trace,
    ) -> Self {
        trace.push(TraceEvent::Return {
            classifier: classifier.clone(),
            labels_used,
            unlabeled_used,
            failure: failure.clone(),
        });
        Self {
            classifier,
            labels_used,
            unlabeled_used,
            failure,
            inferred: Vec::new(),
            queried: Vec::new(),
            cap_hit: false,
            early_exit: false,
            anomalies: 0,
            trace: trace.into_events(),
        }
    }
}

/// 2^n capped, without overflow.
pub(crate) fn pow2_capped(n: usize, cap: usize) -> usize {
    if n >= usize::BITS as usize - 1 {
        cap
    } else {
        (1usize << n).min(cap)
    }
}
