//! Induced labelings of a constrained class on a finite sample.
//!
//! Everything empirical (constrained ERM, the eps-minimal subsets, their
//! empirical diameter and Rademacher sup) only depends on how C[L] labels the
//! sample. For thresholds and intervals those labelings are cuts and blocks
//! of the sorted sample, so each quantity is an exact combinatorial
//! computation. Points on which all of C[L] agree are "fixed": they add the
//! same error to every member and cancel from differences, so only their
//! mistake count is kept.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypothesis::{GridClass, Hypothesis, HypothesisClass};
use crate::sample::Label;

/// A sample point with its label and Rademacher sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Point1 {
    pub x: f64,
    pub y: Label,
    pub xi: i8,
}

/// C[L] for a 1-D class or a grid, in summary form.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Constraint {
    /// Thresholds with z in (lo, hi].
    Thresholds { lo: f64, hi: f64 },
    /// Intervals containing [pmin, pmax] and lying inside (left, right).
    Anchored { left: f64, pmin: f64, pmax: f64, right: f64 },
    /// No positive seen yet: intervals (or the empty labeling) avoiding `negs`.
    Avoid { negs: Vec<f64> },
    Grid { class: Arc<GridClass>, alive: Vec<bool> },
    Empty,
}

impl Constraint {
    pub fn new(class: &HypothesisClass) -> Result<Self> {
        match class {
            HypothesisClass::Thresholds => Ok(Constraint::Thresholds {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
            }),
            HypothesisClass::Intervals => Ok(Constraint::Avoid { negs: Vec::new() }),
            HypothesisClass::Grid(g) => Ok(Constraint::Grid {
                class: g.clone(),
                alive: vec![true; g.len()],
            }),
            _ => Err(Error::Unsupported(format!(
                "exact empirical computations over {}; use a grid",
                class.name()
            ))),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Constraint::Thresholds { lo, hi } => lo >= hi || *lo >= 1.0,
            Constraint::Anchored { left, pmin, pmax, right } => !(left < pmin && pmin <= pmax && pmax < right),
            Constraint::Avoid { .. } => false,
            Constraint::Grid { alive, .. } => !alive.iter().any(|a| *a),
            Constraint::Empty => true,
        }
    }

    /// Adds the labeled point (x, y) for a 1-D point.
    pub fn add(&mut self, x: f64, y: Label) {
        self.add_point(&[x], y)
    }

    pub fn add_point(&mut self, x: &[f64], y: Label) {
        let x1 = x[0];
        let next = match (&mut *self, y) {
            (Constraint::Thresholds { lo, .. }, Label::Neg) => {
                *lo = lo.max(x1);
                None
            }
            (Constraint::Thresholds { hi, .. }, Label::Pos) => {
                *hi = hi.min(x1);
                None
            }
            (Constraint::Anchored { pmin, pmax, .. }, Label::Pos) => {
                *pmin = pmin.min(x1);
                *pmax = pmax.max(x1);
                None
            }
            (Constraint::Anchored { left, pmin, pmax, right }, Label::Neg) => {
                if x1 < *pmin {
                    *left = left.max(x1);
                    None
                } else if x1 > *pmax {
                    *right = right.min(x1);
                    None
                } else {
                    Some(Constraint::Empty)
                }
            }
            (Constraint::Avoid { negs }, Label::Neg) => {
                let pos = negs.partition_point(|v| *v < x1);
                if negs.get(pos) != Some(&x1) {
                    negs.insert(pos, x1);
                }
                None
            }
            (Constraint::Avoid { negs }, Label::Pos) => {
                let pos = negs.partition_point(|v| *v < x1);
                if negs.get(pos) == Some(&x1) {
                    Some(Constraint::Empty)
                } else {
                    Some(Constraint::Anchored {
                        left: if pos > 0 { negs[pos - 1] } else { f64::NEG_INFINITY },
                        pmin: x1,
                        pmax: x1,
                        right: negs.get(pos).copied().unwrap_or(f64::INFINITY),
                    })
                }
            }
            (Constraint::Grid { class, alive }, _) => {
                for (a, h) in alive.iter_mut().zip(class.members()) {
                    *a = *a && h.predict_unchecked(x) == y;
                }
                None
            }
            (Constraint::Empty, _) => None,
        };
        if let Some(n) = next {
            *self = n;
        }
        if self.is_empty() {
            *self = Constraint::Empty;
        }
    }

    /// The label every member of C[L] gives x, or `None` when x is in DIS(C[L]).
    pub fn forced(&self, x: f64) -> Option<Label> {
        self.forced_point(&[x])
    }

    pub fn forced_point(&self, x: &[f64]) -> Option<Label> {
        let x1 = x[0];
        match self {
            Constraint::Thresholds { lo, hi } => {
                if x1 <= *lo {
                    Some(Label::Neg)
                } else if x1 >= *hi {
                    Some(Label::Pos)
                } else {
                    None
                }
            }
            Constraint::Anchored { left, pmin, pmax, right } => {
                if *pmin <= x1 && x1 <= *pmax {
                    Some(Label::Pos)
                } else if x1 <= *left || x1 >= *right {
                    Some(Label::Neg)
                } else {
                    None
                }
            }
            Constraint::Avoid { negs } => negs.binary_search_by(|v| v.total_cmp(&x1)).ok().map(|_| Label::Neg),
            Constraint::Grid { class, alive } => {
                let mut it = class.members().iter().zip(alive).filter(|(_, a)| **a);
                let first = it.next()?.0.predict_unchecked(x);
                it.all(|(h, _)| h.predict_unchecked(x) == first).then_some(first)
            }
            Constraint::Empty => None,
        }
    }
}

/// Summary statistics of the eps-minimal labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct EpsStats {
    /// max over pairs of the number of sample points they label differently
    pub disagree: usize,
    /// max minus min over members of sum_i xi_i h(X_i)
    pub xi_spread: i64,
}

#[derive(Debug, Clone)]
enum Body {
    Cuts {
        lo: f64,
        hi: f64,
        xs: Vec<f64>,
        err: Vec<usize>,
        xi_prefix: Vec<i64>,
    },
    Anchored {
        left: f64,
        pmin: f64,
        pmax: f64,
        right: f64,
        lx: Vec<f64>,
        lerr: Vec<usize>,
        lxi: Vec<i64>,
        rx: Vec<f64>,
        rerr: Vec<usize>,
        rxi: Vec<i64>,
    },
    Avoid {
        base: usize,
        gaps: Vec<GapData>,
    },
    Grid {
        /// distinct labelings: (first member, errors, xi sum, pattern)
        labelings: Vec<(usize, usize, i64, Vec<u64>)>,
        class: Arc<GridClass>,
    },
    Empty,
}

#[derive(Debug, Clone)]
struct GapData {
    lo: f64,
    xs: Vec<f64>,
    /// prefix sums of +1 (negative point) / -1 (positive point)
    w: Vec<i64>,
    xi: Vec<i64>,
}

#[derive(Debug, Clone)]
pub(crate) struct Profile {
    body: Body,
    /// mistakes on fixed points, common to every member
    fixed: usize,
    total: usize,
}

fn prefix<I: Iterator<Item = i64>>(it: I) -> Vec<i64> {
    let mut out = vec![0];
    let mut acc = 0;
    for v in it {
        acc += v;
        out.push(acc);
    }
    out
}

impl Profile {
    /// Builds the profile from free points (sorted by x) of a 1-D constraint.
    pub fn build_1d(c: &Constraint, free: &[Point1], fixed: usize, total: usize) -> Self {
        debug_assert!(free.windows(2).all(|w| w[0].x <= w[1].x));
        let body = match c {
            Constraint::Empty => Body::Empty,
            Constraint::Thresholds { lo, hi } => {
                let f = free.len();
                // cut k: the first k free points are predicted negative
                let pos_before = prefix(free.iter().map(|p| p.y.is_pos() as i64));
                let neg_total = free.iter().filter(|p| !p.y.is_pos()).count() as i64;
                let neg_before = prefix(free.iter().map(|p| (!p.y.is_pos()) as i64));
                let err = (0..=f)
                    .map(|k| (pos_before[k] + neg_total - neg_before[k]) as usize)
                    .collect();
                Body::Cuts {
                    lo: *lo,
                    hi: *hi,
                    xs: free.iter().map(|p| p.x).collect(),
                    err,
                    xi_prefix: prefix(free.iter().map(|p| p.xi as i64)),
                }
            }
            Constraint::Anchored { left, pmin, pmax, right } => {
                let (l, r): (Vec<Point1>, Vec<Point1>) = free.iter().partition(|p| p.x < *pmin);
                // start i: left points with rank >= i are positive
                let lpos = prefix(l.iter().map(|p| p.y.is_pos() as i64));
                let lneg_total = l.iter().filter(|p| !p.y.is_pos()).count() as i64;
                let lneg = prefix(l.iter().map(|p| (!p.y.is_pos()) as i64));
                let lxi_p = prefix(l.iter().map(|p| p.xi as i64));
                let lt = *lxi_p.last().unwrap();
                // end j: right points with rank < j are positive
                let rneg = prefix(r.iter().map(|p| (!p.y.is_pos()) as i64));
                let rpos_total = r.iter().filter(|p| p.y.is_pos()).count() as i64;
                let rpos = prefix(r.iter().map(|p| p.y.is_pos() as i64));
                let rxi_p = prefix(r.iter().map(|p| p.xi as i64));
                let rt = *rxi_p.last().unwrap();
                Body::Anchored {
                    left: *left,
                    pmin: *pmin,
                    pmax: *pmax,
                    right: *right,
                    lerr: (0..=l.len())
                        .map(|i| (lpos[i] + lneg_total - lneg[i]) as usize)
                        .collect(),
                    lxi: (0..=l.len()).map(|i| lt - 2 * lxi_p[i]).collect(),
                    lx: l.iter().map(|p| p.x).collect(),
                    rerr: (0..=r.len())
                        .map(|j| (rneg[j] + rpos_total - rpos[j]) as usize)
                        .collect(),
                    rxi: (0..=r.len()).map(|j| 2 * rxi_p[j] - rt).collect(),
                    rx: r.iter().map(|p| p.x).collect(),
                }
            }
            Constraint::Avoid { negs } => {
                let base = free.iter().filter(|p| p.y.is_pos()).count();
                let mut bounds = vec![0.0];
                bounds.extend(negs.iter().copied());
                bounds.push(1.0);
                let mut gaps = Vec::new();
                let mut k = 0;
                for wdw in bounds.windows(2) {
                    let (lo, hi) = (wdw[0], wdw[1]);
                    let start = k;
                    while k < free.len() && free[k].x < hi {
                        k += 1;
                    }
                    let pts: Vec<&Point1> = free[start..k].iter().filter(|p| p.x > lo).collect();
                    if pts.is_empty() {
                        continue;
                    }
                    gaps.push(GapData {
                        lo,
                        xs: pts.iter().map(|p| p.x).collect(),
                        w: prefix(pts.iter().map(|p| if p.y.is_pos() { -1 } else { 1 })),
                        xi: prefix(pts.iter().map(|p| p.xi as i64)),
                    });
                }
                Body::Avoid { base, gaps }
            }
            Constraint::Grid { .. } => unreachable!("grids use build_grid"),
        };
        Profile { body, fixed, total }
    }

    /// Builds a grid profile from all sample points (flat coordinates).
    pub fn build_grid(
        class: &Arc<GridClass>,
        alive: &[bool],
        dim: usize,
        xs: &[f64],
        ys: &[Label],
        xis: &[i8],
    ) -> Self {
        let words = ys.len().div_ceil(64);
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        let mut labelings = Vec::new();
        for (m, h) in class.members().iter().enumerate() {
            if !alive[m] {
                continue;
            }
            let mut pat = vec![0u64; words];
            let mut err = 0;
            let mut xi = 0i64;
            for (i, y) in ys.iter().enumerate() {
                let p = h.predict_unchecked(&xs[i * dim..(i + 1) * dim]);
                if p.is_pos() {
                    pat[i / 64] |= 1 << (i % 64);
                }
                err += (p != *y) as usize;
                xi += xis[i] as i64 * p.sign() as i64;
            }
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(pat.clone()) {
                e.insert(labelings.len());
                labelings.push((m, err, xi, pat));
            }
        }
        let body = if labelings.is_empty() {
            Body::Empty
        } else {
            Body::Grid {
                labelings,
                class: class.clone(),
            }
        };
        Profile {
            body,
            fixed: 0,
            total: ys.len(),
        }
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.body, Body::Empty)
    }

    /// Minimum number of mistakes over C[L] on the sample.
    pub fn min_err(&self) -> Option<usize> {
        let body_min = match &self.body {
            Body::Empty => return None,
            Body::Cuts { err, .. } => *err.iter().min().unwrap(),
            Body::Anchored { lerr, rerr, .. } => lerr.iter().min().unwrap() + rerr.iter().min().unwrap(),
            Body::Avoid { base, gaps } => {
                let best = gaps.iter().map(|g| min_block(&g.w).0).min().unwrap_or(0).min(0);
                (*base as i64 + best) as usize
            }
            Body::Grid { labelings, .. } => labelings.iter().map(|l| l.1).min().unwrap(),
        };
        Some(body_min + self.fixed)
    }

    /// Constrained ERM with ties broken toward the smallest parameter (lowest
    /// grid index). Returns the hypothesis and its mistake count.
    pub fn learn(&self) -> Option<(Hypothesis, usize)> {
        let min = self.min_err()?;
        let h = match &self.body {
            Body::Empty => return None,
            Body::Cuts { lo, hi, xs, err, .. } => {
                let k = err.iter().position(|e| e + self.fixed == min).unwrap();
                let below = if k == 0 { *lo } else { xs[k - 1].max(*lo) };
                let z = if below.is_finite() { below.next_up().max(0.0) } else { 0.0 };
                debug_assert!(z <= hi.min(1.0));
                Hypothesis::Threshold { z }
            }
            Body::Anchored {
                left,
                pmin,
                pmax,
                right,
                lx,
                lerr,
                rx,
                rerr,
                ..
            } => {
                let i = lerr.iter().position(|e| *e == *lerr.iter().min().unwrap()).unwrap();
                let j = rerr.iter().position(|e| *e == *rerr.iter().min().unwrap()).unwrap();
                let below = if i == 0 { *left } else { lx[i - 1].max(*left) };
                let a = if below.is_finite() { below.next_up().max(0.0f64.next_up()) } else { 0.0f64.next_up() };
                let b = if j == 0 { *pmax } else { rx[j - 1] };
                let b = b.max(a.next_up());
                debug_assert!(a <= *pmin && b < right.min(1.0));
                Hypothesis::Interval { a, b }
            }
            Body::Avoid { base, gaps } => {
                let target = min as i64 - self.fixed as i64 - *base as i64;
                if target == 0 {
                    let a = 0.0f64.next_up();
                    Hypothesis::Interval { a, b: a.next_up() }
                } else {
                    let (g, i, j) = gaps
                        .iter()
                        .enumerate()
                        .find_map(|(gi, g)| first_block_with(&g.w, target).map(|(i, j)| (gi, i, j)))
                        .unwrap();
                    let gap = &gaps[g];
                    let below = if i == 0 { gap.lo } else { gap.xs[i - 1] };
                    Hypothesis::Interval {
                        a: below.next_up(),
                        b: gap.xs[j - 1],
                    }
                }
            }
            Body::Grid { labelings, class } => {
                let m = labelings.iter().filter(|l| l.1 == min).map(|l| l.0).min().unwrap();
                class.members()[m].clone()
            }
        };
        Some((h, min))
    }

    /// Statistics of { h in C[L] : err(h) <= min_err + eps_count }.
    pub fn eps_stats(&self, eps_count: f64) -> Option<EpsStats> {
        let min = self.min_err()? - self.fixed;
        let thr = min as f64 + eps_count + 1e-9;
        let ok = |e: usize| (e as f64) <= thr;
        Some(match &self.body {
            Body::Empty => return None,
            Body::Cuts { err, xi_prefix, .. } => {
                let ks: Vec<usize> = (0..err.len()).filter(|k| ok(err[*k])).collect();
                let (pmin, pmax) = ks.iter().fold((i64::MAX, i64::MIN), |(a, b), k| {
                    (a.min(xi_prefix[*k]), b.max(xi_prefix[*k]))
                });
                EpsStats {
                    disagree: ks.last().unwrap() - ks.first().unwrap(),
                    xi_spread: 2 * (pmax - pmin),
                }
            }
            Body::Anchored {
                lerr, lxi, rerr, rxi, ..
            } => {
                // right ends ordered by error, with running extrema
                let mut order: Vec<usize> = (0..rerr.len()).collect();
                order.sort_by_key(|j| rerr[*j]);
                let mut run = Vec::with_capacity(order.len());
                let (mut xmax, mut xmin, mut jmax, mut jmin) = (i64::MIN, i64::MAX, i64::MIN, i64::MAX);
                for &j in &order {
                    xmax = xmax.max(rxi[j]);
                    xmin = xmin.min(rxi[j]);
                    jmax = jmax.max(j as i64);
                    jmin = jmin.min(j as i64);
                    run.push((rerr[j], xmax, xmin, jmax, jmin));
                }
                let mut s = [i64::MIN, i64::MAX, i64::MIN, i64::MAX, i64::MIN, i64::MAX];
                for (i, le) in lerr.iter().enumerate() {
                    let budget = thr - *le as f64;
                    let cnt = run.partition_point(|r| (r.0 as f64) <= budget);
                    if cnt == 0 {
                        continue;
                    }
                    let (_, xmax, xmin, jmax, jmin) = run[cnt - 1];
                    let i = i as i64;
                    s[0] = s[0].max(lxi[i as usize] + xmax);
                    s[1] = s[1].min(lxi[i as usize] + xmin);
                    s[2] = s[2].max(i + jmax);
                    s[3] = s[3].min(i + jmin);
                    s[4] = s[4].max(i - jmin);
                    s[5] = s[5].min(i - jmax);
                }
                EpsStats {
                    disagree: (s[2] - s[3]).max(s[4] - s[5]) as usize,
                    xi_spread: s[0] - s[1],
                }
            }
            Body::Avoid { base, gaps } => avoid_stats(*base, gaps, thr),
            Body::Grid { labelings, .. } => {
                let kept: Vec<&(usize, usize, i64, Vec<u64>)> = labelings.iter().filter(|l| ok(l.1)).collect();
                let mut d = 0;
                for (i, a) in kept.iter().enumerate() {
                    for b in &kept[i + 1..] {
                        let h: u32 = a.3.iter().zip(&b.3).map(|(x, y)| (x ^ y).count_ones()).sum();
                        d = d.max(h as usize);
                    }
                }
                let xmax = kept.iter().map(|l| l.2).max().unwrap();
                let xmin = kept.iter().map(|l| l.2).min().unwrap();
                EpsStats {
                    disagree: d,
                    xi_spread: xmax - xmin,
                }
            }
        })
    }
}

/// Minimum of w[j] - w[i] over i < j, as (value, i, j) with the
/// lexicographically smallest (i, j).
fn min_block(w: &[i64]) -> (i64, usize, usize) {
    let mut best = (i64::MAX, 0, 0);
    let mut arg_max = 0;
    for j in 1..w.len() {
        if w[j - 1] > w[arg_max] {
            arg_max = j - 1;
        }
        let v = w[j] - w[arg_max];
        if v < best.0 {
            best = (v, arg_max, j);
        }
    }
    best
}

/// Lexicographically smallest (i, j), i < j, with w[j] - w[i] == target,
/// given that target is the minimum.
fn first_block_with(w: &[i64], target: i64) -> Option<(usize, usize)> {
    if min_block(w).0 != target {
        return None;
    }
    let n = w.len();
    let mut suffix_min = vec![i64::MAX; n + 1];
    for j in (0..n).rev() {
        suffix_min[j] = suffix_min[j + 1].min(w[j]);
    }
    for i in 0..n - 1 {
        if suffix_min[i + 1] - w[i] == target {
            let j = (i + 1..n).find(|j| w[*j] - w[i] == target).unwrap();
            return Some((i, j));
        }
    }
    None
}

fn avoid_stats(base: usize, gaps: &[GapData], thr: f64) -> EpsStats {
    let ok = |e: i64| (e as f64) <= thr;
    let empty_ok = ok(base as i64);
    let mut min_len = if empty_ok { 0 } else { usize::MAX };
    let mut max_len = 0usize;
    let (mut xi_max, mut xi_min) = if empty_ok { (0i64, 0i64) } else { (i64::MIN, i64::MAX) };
    let mut best_within = 0usize;
    let mut gap_max_len: Vec<usize> = Vec::new();
    for g in gaps {
        let f = g.xs.len();
        // per gap: best lengths for the disjoint case and extrema for crossings
        let mut end_best = vec![0usize; f + 1]; // max len of a kept block ending at j
        let mut start_best = vec![0usize; f + 1]; // max len of a kept block starting at i
        let mut d_start = vec![i64::MIN; f + 1]; // max (i + j) for blocks starting at i
        let mut c_end = vec![i64::MAX; f + 1]; // min (i + j) for blocks ending at j
        let mut any = false;
        let mut glen = 0;
        for i in 0..f {
            for j in i + 1..=f {
                let e = base as i64 + g.w[j] - g.w[i];
                if !ok(e) {
                    continue;
                }
                any = true;
                let len = j - i;
                glen = glen.max(len);
                min_len = min_len.min(len);
                end_best[j] = end_best[j].max(len);
                start_best[i] = start_best[i].max(len);
                d_start[i] = d_start[i].max((i + j) as i64);
                c_end[j] = c_end[j].min((i + j) as i64);
                let x = 2 * (g.xi[j] - g.xi[i]);
                xi_max = xi_max.max(x);
                xi_min = xi_min.min(x);
            }
        }
        if !any {
            continue;
        }
        max_len = max_len.max(glen);
        gap_max_len.push(glen);
        // disjoint pairs inside the gap
        let mut left_best = vec![0usize; f + 1];
        for s in 1..=f {
            left_best[s] = left_best[s - 1].max(end_best[s]);
        }
        let mut right_best = vec![0usize; f + 2];
        for s in (0..=f).rev() {
            right_best[s] = right_best[s + 1].max(start_best[s]);
        }
        for s in 0..=f {
            if left_best[s] > 0 && right_best[s] > 0 {
                best_within = best_within.max(left_best[s] + right_best[s]);
            }
        }
        // crossing pairs: (i2 + j2) - (i1 + j1) over i2 < j1
        let mut run = i64::MIN;
        for u in 1..=f {
            run = run.max(d_start[u - 1]);
            if c_end[u] != i64::MAX && run != i64::MIN {
                best_within = best_within.max((run - c_end[u]).max(0) as usize);
            }
        }
    }
    gap_max_len.sort_unstable_by(|a, b| b.cmp(a));
    let across = if gap_max_len.len() >= 2 {
        gap_max_len[0] + gap_max_len[1]
    } else {
        0
    };
    let nested = if min_len == usize::MAX { 0 } else { max_len - min_len.min(max_len) };
    EpsStats {
        disagree: nested.max(best_within).max(across),
        xi_spread: if xi_max == i64::MIN { 0 } else { xi_max - xi_min },
    }
}

/// Splits a 1-D sample into free points (sorted) and the fixed mistake count.
pub(crate) fn split_1d(c: &Constraint, pts: impl IntoIterator<Item = Point1>) -> (Vec<Point1>, usize) {
    let mut free = Vec::new();
    let mut fixed = 0;
    for p in pts {
        match c.forced(p.x) {
            Some(l) => fixed += (l != p.y) as usize,
            None => free.push(p),
        }
    }
    free.sort_by(|a, b| a.x.total_cmp(&b.x));
    (free, fixed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, Label)]) -> Vec<Point1> {
        v.iter().map(|(x, y)| Point1 { x: *x, y: *y, xi: 1 }).collect()
    }

    #[test]
    fn threshold_erm_picks_smallest_cell_parameter() {
        let c = Constraint::new(&HypothesisClass::Thresholds).unwrap();
        let (free, fixed) = split_1d(&c, pts(&[(0.2, Label::Neg), (0.6, Label::Pos), (0.8, Label::Pos)]));
        let p = Profile::build_1d(&c, &free, fixed, 3);
        let (h, e) = p.learn().unwrap();
        assert_eq!(e, 0);
        assert_eq!(h, Hypothesis::Threshold { z: 0.2f64.next_up() });
    }

    #[test]
    fn anchored_intervals() {
        let mut c = Constraint::new(&HypothesisClass::Intervals).unwrap();
        c.add(0.5, Label::Pos);
        c.add(0.1, Label::Neg);
        assert!(matches!(c, Constraint::Anchored { .. }));
        assert_eq!(c.forced(0.05), Some(Label::Neg));
        assert_eq!(c.forced(0.3), None);
        let (free, fixed) = split_1d(&c, pts(&[(0.3, Label::Pos), (0.7, Label::Neg), (0.05, Label::Pos)]));
        assert_eq!(fixed, 1);
        let p = Profile::build_1d(&c, &free, fixed, 3);
        let (h, e) = p.learn().unwrap();
        assert_eq!(e, 1);
        assert_eq!(h, Hypothesis::Interval { a: 0.1f64.next_up(), b: 0.5 });
    }

    #[test]
    fn avoid_phase_prefers_empty_on_ties() {
        let c = Constraint::new(&HypothesisClass::Intervals).unwrap();
        let (free, fixed) = split_1d(&c, pts(&[(0.3, Label::Neg), (0.6, Label::Neg)]));
        let p = Profile::build_1d(&c, &free, fixed, 2);
        let (h, e) = p.learn().unwrap();
        assert_eq!(e, 0);
        let Hypothesis::Interval { a, .. } = h else { panic!() };
        assert!(a < 1e-300);
        let (free, fixed) = split_1d(&c, pts(&[(0.3, Label::Neg), (0.6, Label::Pos)]));
        let p = Profile::build_1d(&c, &free, fixed, 2);
        assert_eq!(p.learn().unwrap().0, Hypothesis::Interval { a: 0.3f64.next_up(), b: 0.6 });
    }

    #[test]
    fn min_block_is_lexicographic() {
        assert_eq!(min_block(&[0, -1, 0, -1]), (-1, 0, 1));
        assert_eq!(first_block_with(&[0, 1, 0, -1], -2), Some((1, 3)));
        assert_eq!(first_block_with(&[0, -1, 0, -1], -1), Some((0, 1)));
    }
}
