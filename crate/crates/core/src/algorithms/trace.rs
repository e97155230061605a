//! Audit records emitted by the algorithms.
//!
//! A trace serialises as JSON Lines, one event per line. Infinite bound
//! values serialise as `null`.

use serde::{Deserialize, Serialize};

use crate::hypothesis::Hypothesis;
use crate::sample::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum TraceEvent {
    /// A label request; `t` counts requests so far including this one.
    Query {
        t: usize,
        index: usize,
        label: Label,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        dis_mass: Option<f64>,
    },
    /// A label inferred into L with the threshold it had to beat.
    Infer { index: usize, label: Label, delta: f64 },
    /// A2 step: region and version-space masses and the confidence width.
    Step {
        t: usize,
        region_mass: f64,
        dis_mass: f64,
        beta: f64,
        best: Hypothesis,
    },
    /// A2 sampling region replaced by DIS(V).
    Reset { t: usize, region_mass: f64 },
    /// A2 returned before spending the budget because P(R) was negligible.
    EarlyExit { t: usize, region_mass: f64 },
    /// The unlabeled-point cap stopped the scan.
    CapHit { index: usize },
    Anomaly { index: usize, detail: String },
    /// One DHM run inside model selection.
    Subroutine {
        class: usize,
        budget: usize,
        delta: f64,
        inferred: usize,
        queried: usize,
        learned: Option<Hypothesis>,
    },
    /// Model-selection test of class i against class j.
    Compare {
        i: usize,
        j: usize,
        gap: f64,
        allowed: f64,
        pass: bool,
    },
    Accept { class: usize, classifier: Hypothesis },
    BudgetAudit { total: usize, budget: usize },
    /// Result of a hand-specified Learn evaluation.
    Learn { result: Option<Hypothesis> },
    /// Result of a hand-specified Rademacher evaluation.
    Rademacher { value: f64 },
    Return {
        classifier: Option<Hypothesis>,
        labels_used: usize,
        unlabeled_used: usize,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        failure: Option<String>,
    },
}

/// Collects events when enabled; otherwise only counts them.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    enabled: bool,
    events: Vec<TraceEvent>,
}

impl Trace {
    pub fn new(enabled: bool) -> Self {
        Self {
            enabled,
            events: Vec::new(),
        }
    }

    pub fn push(&mut self, e: TraceEvent) {
        if self.enabled {
            self.events.push(e);
        }
    }

    /// Like `push`, but builds the event only when tracing.
    pub fn push_with<F: FnOnce() -> TraceEvent>(&mut self, f: F) {
        if self.enabled {
            self.events.push(f());
        }
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn into_events(self) -> Vec<TraceEvent> {
        self.events
    }
}
