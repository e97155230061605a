//! Constrained empirical risk minimisation, maintained incrementally.
//!
//! The engine holds C[L] for a growing constraint set L and the mistake
//! counts on a growing labeled set Q. Queries of the form "best member that
//! also labels x as y" are what DHM asks twice per stream point.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypothesis::{GridClass, Hypothesis, HypothesisClass};
use crate::profile::{split_1d, Constraint, Point1, Profile};
use crate::sample::{Label, LabeledPoint};

#[derive(Debug, Clone)]
enum Engine {
    OneD {
        c: Constraint,
        /// Q points in DIS(C[L]), sorted by x
        free: Vec<Point1>,
        /// mistakes every member of C[L] makes on the other Q points
        fixed: usize,
    },
    Grid {
        class: Arc<GridClass>,
        alive: Vec<bool>,
        /// per-member mistakes on Q
        err: Vec<usize>,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct ConstrainedErm {
    engine: Engine,
    q_len: usize,
}

impl ConstrainedErm {
    pub fn new(class: &HypothesisClass) -> Result<Self> {
        let engine = match class {
            HypothesisClass::Grid(g) => Engine::Grid {
                class: g.clone(),
                alive: vec![true; g.len()],
                err: vec![0; g.len()],
            },
            HypothesisClass::Thresholds | HypothesisClass::Intervals => Engine::OneD {
                c: Constraint::new(class)?,
                free: Vec::new(),
                fixed: 0,
            },
            _ => {
                return Err(Error::Unsupported(format!(
                    "constrained ERM over {}; use a grid",
                    class.name()
                )))
            }
        };
        Ok(Self { engine, q_len: 0 })
    }

    pub fn is_empty(&self) -> bool {
        match &self.engine {
            Engine::OneD { c, .. } => c.is_empty(),
            Engine::Grid { alive, .. } => !alive.iter().any(|a| *a),
        }
    }

    /// The label all of C[L] gives x, if they agree.
    pub fn forced(&self, x: &[f64]) -> Option<Label> {
        match &self.engine {
            Engine::OneD { c, .. } => c.forced_point(x),
            Engine::Grid { .. } if self.is_empty() => None,
            Engine::Grid { class, alive, .. } => {
                let mut it = class.members().iter().zip(alive).filter(|(_, a)| **a);
                let first = it.next()?.0.predict_unchecked(x);
                it.all(|(h, _)| h.predict_unchecked(x) == first).then_some(first)
            }
        }
    }

    /// Adds (x, y) to L. The caller guarantees C[L + (x, y)] is nonempty
    /// or accepts an empty engine.
    pub fn add_l(&mut self, x: &[f64], y: Label) {
        match &mut self.engine {
            Engine::OneD { c, free, fixed } => {
                c.add_point(x, y);
                let mut keep = Vec::with_capacity(free.len());
                for p in free.drain(..) {
                    match c.forced(p.x) {
                        Some(l) => *fixed += (l != p.y) as usize,
                        None => keep.push(p),
                    }
                }
                *free = keep;
            }
            Engine::Grid { class, alive, .. } => {
                for (a, h) in alive.iter_mut().zip(class.members()) {
                    *a = *a && h.predict_unchecked(x) == y;
                }
            }
        }
    }

    /// Adds a labeled point to Q; `xi` is its Rademacher sign.
    pub fn add_q(&mut self, x: &[f64], y: Label, xi: i8) {
        self.q_len += 1;
        match &mut self.engine {
            Engine::OneD { c, free, fixed } => match c.forced(x[0]) {
                Some(l) => *fixed += (l != y) as usize,
                None => {
                    let pos = free.partition_point(|p| p.x <= x[0]);
                    free.insert(pos, Point1 { x: x[0], y, xi });
                }
            },
            Engine::Grid { class, err, .. } => {
                for (e, h) in err.iter_mut().zip(class.members()) {
                    *e += (h.predict_unchecked(x) != y) as usize;
                }
            }
        }
    }

    /// Learn(L, Q): the member of C[L] with fewest mistakes on Q.
    pub fn learn(&self) -> Option<(Hypothesis, usize)> {
        match &self.engine {
            Engine::OneD { c, free, fixed } => {
                if c.is_empty() {
                    return None;
                }
                Profile::build_1d(c, free, *fixed, self.q_len).learn()
            }
            Engine::Grid { class, alive, err } => best_alive(class, alive, err, |_| true),
        }
    }

    /// Learn(L + (x, y), Q).
    pub fn learn_with(&self, x: &[f64], y: Label) -> Option<(Hypothesis, usize)> {
        match &self.engine {
            Engine::OneD { c, free, fixed } => {
                let mut c2 = c.clone();
                c2.add_point(x, y);
                if c2.is_empty() {
                    return None;
                }
                let (free2, fixed2) = split_1d(&c2, free.iter().copied());
                Profile::build_1d(&c2, &free2, fixed + fixed2, self.q_len).learn()
            }
            Engine::Grid { class, alive, err } => {
                best_alive(class, alive, err, |h: &Hypothesis| h.predict_unchecked(x) == y)
            }
        }
    }
}

fn best_alive<F: Fn(&Hypothesis) -> bool>(
    class: &GridClass,
    alive: &[bool],
    err: &[usize],
    keep: F,
) -> Option<(Hypothesis, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (k, h) in class.members().iter().enumerate() {
        if alive[k] && keep(h) && best.is_none_or(|(_, e)| err[k] < e) {
            best = Some((k, err[k]));
        }
    }
    best.map(|(k, e)| (class.members()[k].clone(), e))
}

/// Learn_C(L, Q) = argmin over { h in C : er_L(h) = 0 } of er_Q(h), with
/// ties broken toward the smallest parameter (lowest grid index); `None`
/// when no member is consistent with L.
pub fn learn_constrained(
    class: &HypothesisClass,
    l: &[LabeledPoint],
    q: &[LabeledPoint],
) -> Result<Option<Hypothesis>> {
    if class.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: class.dim(),
            got: 1,
        });
    }
    let mut e = ConstrainedErm::new(class)?;
    for p in l {
        e.add_l(&[p.x], p.label);
    }
    for p in q {
        e.add_q(&[p.x], p.label, 1);
    }
    Ok(e.learn().map(|(h, _)| h))
}

/// Passive ERM on a labeled sample.
pub fn erm(class: &HypothesisClass, sample: &[LabeledPoint]) -> Result<Option<Hypothesis>> {
    learn_constrained(class, &[], sample)
}
