//! A2 with the VC confidence bounds.
//!
//! Thresholds are handled exactly: V is a union of parameter ranges that is
//! refined at the sample points of Q, so the mistake count is constant on
//! each cell. Grid classes track per-member mistakes. Masses are exact when
//! the disagreement region is an interval union and Monte Carlo otherwise.

use serde::{Deserialize, Serialize};

use super::trace::{Trace, TraceEvent};
use super::{RunResult, DEFAULT_UNLABELED_CAP};
use crate::bounds::vc_deviation;
use crate::error::{Error, Result};
use crate::hypothesis::{GridClass, Hypothesis, HypothesisClass};
use crate::marginal::Marginal;
use crate::region::{McPool, Region};
use crate::sample::{IndexedLabel, Label};
use crate::stream::LabeledStream;
use crate::version_space::VersionSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum MassMode {
    /// Exact where the region is an interval union, otherwise Monte Carlo
    /// with the default pool.
    #[default]
    Auto,
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A2Options {
    pub delta: f64,
    pub mass_mode: MassMode,
    pub unlabeled_cap: usize,
    pub trace: bool,
}

impl Default for A2Options {
    fn default() -> Self {
        Self {
            delta: 0.05,
            mass_mode: MassMode::Auto,
            unlabeled_cap: DEFAULT_UNLABELED_CAP,
            trace: true,
        }
    }
}

const AUTO_POOL: usize = 100_000;
const AUTO_SEED: u64 = 0xa2a2;

struct Masses {
    marginal: Marginal,
    pool: Option<McPool>,
}

impl Masses {
    fn new(marginal: &Marginal, mode: MassMode) -> Self {
        let pool = match mode {
            MassMode::MonteCarlo { samples, seed } => Some(McPool::draw(marginal, samples, seed)),
            _ => None,
        };
        Self {
            marginal: marginal.clone(),
            pool,
        }
    }

    fn mass(&mut self, region: &Region, mode: MassMode) -> Result<f64> {
        if let Some(pool) = &self.pool {
            return Ok(pool.mass(region)?.value);
        }
        if let Some(v) = region.exact_mass(&self.marginal)? {
            return Ok(v);
        }
        if mode == MassMode::Exact {
            return Err(Error::Unsupported("exact mass of a non-interval region".into()));
        }
        self.pool = Some(McPool::draw(&self.marginal, AUTO_POOL, AUTO_SEED));
        Ok(self.pool.as_ref().unwrap().mass(region)?.value)
    }
}

/// The working version space with mistake counts on the current Q.
enum State {
    /// Closed z-ranges, sorted and disjoint.
    Thresholds { pieces: Vec<(f64, f64)> },
    Grid { class: std::sync::Arc<GridClass>, alive: Vec<bool>, err: Vec<usize> },
}

impl State {
    fn new(class: &HypothesisClass) -> Result<Self> {
        match class {
            HypothesisClass::Thresholds => Ok(State::Thresholds {
                pieces: vec![(0.0, 1.0)],
            }),
            HypothesisClass::Grid(g) => Ok(State::Grid {
                class: g.clone(),
                alive: vec![true; g.len()],
                err: vec![0; g.len()],
            }),
            _ => Err(Error::Unsupported(format!("A2 over {}; use a grid", class.name()))),
        }
    }

    fn version_space(&self) -> VersionSpace {
        match self {
            State::Thresholds { pieces } => VersionSpace::Thresholds { pieces: pieces.clone() },
            State::Grid { class, alive, .. } => VersionSpace::Grid {
                class: class.clone(),
                alive: alive.clone(),
            },
        }
    }

    fn reset_q(&mut self) {
        if let State::Grid { err, .. } = self {
            err.iter_mut().for_each(|e| *e = 0);
        }
    }

    fn add_q(&mut self, x: &[f64], y: Label) {
        if let State::Grid { class, err, .. } = self {
            for (e, h) in err.iter_mut().zip(class.members()) {
                *e += (h.predict_unchecked(x) != y) as usize;
            }
        }
    }

    /// Prunes V to members with mistakes <= min + slack, returning the
    /// minimum mistake count and the smallest-parameter minimiser.
    fn prune(&mut self, q: &[(f64, Label)], slack: f64) -> (usize, Hypothesis) {
        match self {
            State::Thresholds { pieces } => {
                let cells = threshold_cells(pieces, q);
                let min = cells.iter().map(|c| c.2).min().unwrap();
                let best = cells.iter().find(|c| c.2 == min).unwrap().0;
                let limit = min as f64 + slack + 1e-9;
                let mut out: Vec<(f64, f64)> = Vec::new();
                for (lo, hi, e) in cells {
                    if e as f64 > limit {
                        continue;
                    }
                    match out.last_mut() {
                        Some(last) if last.1.next_up() >= lo => last.1 = hi,
                        _ => out.push((lo, hi)),
                    }
                }
                *pieces = out;
                (min, Hypothesis::Threshold { z: best })
            }
            State::Grid { class, alive, err } => {
                let min = alive.iter().zip(err.iter()).filter(|(a, _)| **a).map(|(_, e)| *e).min().unwrap();
                let limit = min as f64 + slack + 1e-9;
                for (a, e) in alive.iter_mut().zip(err.iter()) {
                    *a = *a && *e as f64 <= limit;
                }
                let k = (0..err.len()).find(|k| alive[*k] && err[*k] == min).unwrap();
                (min, class.members()[k].clone())
            }
        }
    }
}

/// Cells (lo, hi, mistakes) of threshold pieces refined at the sample points:
/// h_z is constant for z in (x_k, x_{k+1}].
fn threshold_cells(pieces: &[(f64, f64)], q: &[(f64, Label)]) -> Vec<(f64, f64, usize)> {
    let mut xs: Vec<(f64, Label)> = q.to_vec();
    xs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // mistakes with z below every point: all predicted positive
    let neg_total = xs.iter().filter(|p| !p.1.is_pos()).count();
    let mut out = Vec::new();
    for &(lo, hi) in pieces {
        // first point with x >= lo is predicted positive for z = lo
        let mut k = xs.partition_point(|p| p.0 < lo);
        let pos_below = xs[..k].iter().filter(|p| p.1.is_pos()).count();
        let neg_below = k - pos_below;
        let mut err = pos_below + neg_total - neg_below;
        let mut start = lo;
        while k < xs.len() && xs[k].0 < hi {
            // z in [start, xs[k].0] shares the labeling
            out.push((start, xs[k].0, err));
            // for z just above xs[k].0 that point turns negative
            err = if xs[k].1.is_pos() { err + 1 } else { err - 1 };
            start = xs[k].0.next_up();
            k += 1;
            while k < xs.len() && xs[k].0 < start {
                err = if xs[k].1.is_pos() { err + 1 } else { err - 1 };
                k += 1;
            }
        }
        if start <= hi {
            out.push((start, hi, err));
        }
    }
    out
}

/// A2: sample labels only inside a frozen region R, prune V with the VC
/// bounds at confidence delta / n, shrink R once P(DIS(V)) halves, and
/// return the step minimiser with the smallest confidence width.
pub fn a2(class: &HypothesisClass, stream: &mut LabeledStream, n: usize, opts: &A2Options) -> Result<RunResult> {
    let marginal = stream
        .problem()
        .map(|p| p.marginal().clone())
        .ok_or_else(|| Error::Unsupported("A2 needs the marginal to compute region masses".into()))?;
    let mut trace = Trace::new(opts.trace);
    let d = class.vc_dimension();
    let dprime = opts.delta / n.max(1) as f64;
    let mut masses = Masses::new(&marginal, opts.mass_mode);
    let mut state = State::new(class)?;
    let mut region = state.version_space().disagreement_region()?;
    let mut p_region = masses.mass(&region, opts.mass_mode)?;
    let mut q: Vec<(f64, Label)> = Vec::new();
    let mut queried = Vec::new();
    let mut m = 0;
    let mut best: Option<(f64, Hypothesis)> = None;
    let mut last: Option<Hypothesis> = None;
    let (mut early_exit, mut cap_hit) = (false, false);
    let mut failure = None;
    let mut dis_mass = p_region;
    for t in 1..=n {
        if dis_mass <= 0.5 * p_region {
            region = state.version_space().disagreement_region()?;
            p_region = dis_mass;
            q.clear();
            state.reset_q();
            trace.push(TraceEvent::Reset { t, region_mass: p_region });
            if p_region <= 0.5f64.powi(n.min(1100) as i32) {
                early_exit = true;
                trace.push(TraceEvent::EarlyExit { t, region_mass: p_region });
                break;
            }
        }
        // next point in R
        let x = loop {
            if m >= opts.unlabeled_cap {
                cap_hit = true;
                break None;
            }
            match stream.point(m + 1) {
                None => break None,
                Some(x) => {
                    m += 1;
                    if region.contains(x) {
                        break Some(x.to_vec());
                    }
                }
            }
        };
        let Some(x) = x else {
            if cap_hit {
                trace.push(TraceEvent::CapHit { index: m });
            }
            break;
        };
        let y = stream.query_label(m)?;
        queried.push(IndexedLabel::new(m, y));
        trace.push_with(|| TraceEvent::Query {
            t,
            index: m,
            label: y,
            dis_mass: None,
        });
        q.push((x[0], y));
        state.add_q(&x, y);
        let g = vc_deviation(q.len(), dprime, d);
        let qn = q.len() as f64;
        // LB(h) <= min UB  <=>  er_Q(h) <= min er_Q + 2G, unless the clamp at 1 binds
        let (min, h_t) = state.prune(&q, if g.is_finite() { 2.0 * g * qn } else { f64::INFINITY });
        let er_min = min as f64 / qn;
        let ub = (er_min + g).min(1.0);
        let lb = (er_min - g).max(0.0);
        let beta = (ub - lb) * p_region;
        let v = state.version_space();
        if v.is_empty() {
            failure = Some("version space became empty".to_string());
            break;
        }
        dis_mass = masses.mass(&v.disagreement_region()?, opts.mass_mode)?;
        trace.push_with(|| TraceEvent::Step {
            t,
            region_mass: p_region,
            dis_mass,
            beta,
            best: h_t.clone(),
        });
        if best.as_ref().is_none_or(|(b, _)| beta < *b) {
            best = Some((beta, h_t.clone()));
        }
        last = Some(h_t);
    }
    let h = if early_exit {
        last.or_else(|| state.version_space().representative())
    } else {
        best.map(|b| b.1).or_else(|| state.version_space().representative())
    };
    let h = if failure.is_some() { None } else { h };
    let mut r = RunResult::finish(h, failure, stream.labels_used(), m, trace);
    r.queried = queried;
    r.early_exit = early_exit;
    r.cap_hit = cap_hit;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_cover_pieces_with_correct_counts() {
        let q = [(0.3, Label::Neg), (0.6, Label::Pos)];
        let cells = threshold_cells(&[(0.0, 1.0)], &q);
        assert_eq!(cells.len(), 3);
        assert_eq!(cells[0], (0.0, 0.3, 1));
        assert_eq!(cells[1], (0.3f64.next_up(), 0.6, 0));
        assert_eq!(cells[2], (0.6f64.next_up(), 1.0, 1));
    }
}
