//! The labeled data stream with a label-request budget.
//!
//! Points and their hidden labels are drawn in index order from a seeded
//! ChaCha RNG, so the stream is a pure function of (source, seed). Indices
//! are 1-based. Re-requesting a revealed label is free.
//!
//! [`LabeledStream::skip_to`] jumps over a geometric number of points that
//! miss a region and draws the next point conditionally on it, which has
//! the same law as scanning but never materialises the skipped points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::noise::NoiseProblem;
use crate::region::Region;
use crate::sample::Label;

#[derive(Debug, Clone)]
enum Source {
    Problem(NoiseProblem),
    /// Fixed points, labels drawn from the problem's posterior.
    Points(NoiseProblem, Vec<f64>),
    /// Fixed points and labels.
    Labeled(Vec<f64>, Vec<Label>),
}

#[derive(Debug, Clone)]
pub struct LabeledStream {
    source: Source,
    dim: usize,
    rng: ChaCha8Rng,
    xs: Vec<f64>,
    ys: Vec<Label>,
    revealed: Vec<bool>,
    /// Logical index of each stored point, once a skip has happened.
    index: Option<Vec<usize>>,
    budget: usize,
    used: usize,
}

impl LabeledStream {
    pub fn new(problem: NoiseProblem, seed: u64, budget: usize) -> Self {
        let dim = problem.dim();
        Self::from_source(Source::Problem(problem), dim, seed, budget)
    }

    /// Fixed points whose labels are drawn from `problem`.
    pub fn with_points(problem: NoiseProblem, points: Vec<f64>, seed: u64, budget: usize) -> Result<Self> {
        let dim = problem.dim();
        if !points.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: points.len() % dim,
            });
        }
        Ok(Self::from_source(Source::Points(problem, points), dim, seed, budget))
    }

    /// Fixed points with fixed labels, for hand-checkable runs.
    pub fn from_labeled(dim: usize, points: Vec<f64>, labels: Vec<Label>, budget: usize) -> Result<Self> {
        if dim == 0 || points.len() != labels.len() * dim {
            return Err(Error::InvalidParameter("points and labels disagree in length".into()));
        }
        Ok(Self::from_source(Source::Labeled(points, labels), dim, 0, budget))
    }

    fn from_source(source: Source, dim: usize, seed: u64, budget: usize) -> Self {
        Self {
            source,
            dim,
            rng: ChaCha8Rng::seed_from_u64(seed),
            xs: Vec::new(),
            ys: Vec::new(),
            revealed: Vec::new(),
            index: None,
            budget,
            used: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn problem(&self) -> Option<&NoiseProblem> {
        match &self.source {
            Source::Problem(p) | Source::Points(p, _) => Some(p),
            Source::Labeled(..) => None,
        }
    }

    /// Number of points, when the stream is finite.
    pub fn finite_len(&self) -> Option<usize> {
        match &self.source {
            Source::Problem(_) => None,
            Source::Points(_, pts) | Source::Labeled(pts, _) => Some(pts.len() / self.dim),
        }
    }

    /// Largest index generated so far.
    pub fn last_index(&self) -> usize {
        match &self.index {
            Some(ix) => ix.last().copied().unwrap_or(0),
            None => self.ys.len(),
        }
    }

    /// Storage slot of index i, if it was materialised.
    fn slot(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        match &self.index {
            None => (i <= self.ys.len()).then(|| i - 1),
            Some(ix) => ix.binary_search(&i).ok(),
        }
    }

    fn push(&mut self, i: usize, x: &[f64], y: Label) {
        self.xs.extend_from_slice(x);
        self.ys.push(y);
        self.revealed.push(false);
        if let Some(ix) = &mut self.index {
            ix.push(i);
        }
    }

    /// Materialises points up to index m; false if the stream ends before m.
    pub fn ensure(&mut self, m: usize) -> bool {
        let mut buf = vec![0.0; self.dim];
        while self.last_index() < m {
            let i = self.ys.len();
            let y = match &self.source {
                Source::Problem(p) => {
                    p.marginal().sample_into(&mut self.rng, &mut buf);
                    p.sample_label(&buf, &mut self.rng)
                }
                Source::Points(p, pts) => {
                    let Some(x) = pts.get(i * self.dim..(i + 1) * self.dim) else {
                        return false;
                    };
                    buf.copy_from_slice(x);
                    p.sample_label(&buf, &mut self.rng)
                }
                Source::Labeled(pts, labels) => {
                    let Some(x) = pts.get(i * self.dim..(i + 1) * self.dim) else {
                        return false;
                    };
                    buf.copy_from_slice(x);
                    labels[i]
                }
            };
            let next = self.last_index() + 1;
            self.push(next, &buf.clone(), y);
        }
        true
    }

    /// Whether [`skip_to`](Self::skip_to) can be used: an i.i.d. source
    /// with a 1-D marginal.
    pub fn can_skip(&self) -> bool {
        matches!(&self.source, Source::Problem(p) if p.marginal().is_one_dimensional())
    }

    /// The first index after the last generated one whose point lies in
    /// `region` (a 1-D interval union), or `None` if that index would exceed
    /// `cap`. The points jumped over are never generated.
    pub fn skip_to(&mut self, region: &Region, cap: usize) -> Result<Option<usize>> {
        let Source::Problem(p) = &self.source else {
            return Err(Error::Unsupported("skipping needs an i.i.d. source".into()));
        };
        let Region::Intervals(pieces) = region else {
            return Err(Error::Unsupported("skipping needs a 1-D interval region".into()));
        };
        let pc = p.marginal().require_pieces()?;
        let masses: Vec<f64> = pieces.iter().map(|(lo, hi)| pc.mass(*lo, *hi)).collect();
        let total: f64 = masses.iter().sum();
        let last = self.last_index();
        if total <= 0.0 {
            return Ok(None);
        }
        // failures before the first hit, by inversion; exact for masses far
        // below machine epsilon where rejection samplers stall
        let gap = if total >= 1.0 {
            0
        } else {
            let u = 1.0 - self.rng.random::<f64>();
            let g = (u.ln() / (-total).ln_1p()).floor();
            if g >= u64::MAX as f64 {
                u64::MAX
            } else {
                g as u64
            }
        };
        let i = (last as u64).saturating_add(gap).saturating_add(1);
        if i > cap as u64 {
            return Ok(None);
        }
        let i = i as usize;
        // X given X in region: pick a piece by mass, then invert the CDF
        let mut u = self.rng.random::<f64>() * total;
        let mut k = 0;
        while k + 1 < masses.len() && u >= masses[k] {
            u -= masses[k];
            k += 1;
        }
        let (lo, hi) = pieces[k];
        let x = pc.quantile_lower((pc.cdf(lo) + u).min(pc.cdf(hi))).clamp(lo, hi.next_down().max(lo));
        let y = p.sample_label(&[x], &mut self.rng);
        if self.index.is_none() {
            self.index = Some((1..=self.ys.len()).collect());
        }
        self.push(i, &[x], y);
        Ok(Some(i))
    }

    /// X_i, or `None` past the end of a finite stream.
    /// `None` also for an index that a skip jumped over.
    pub fn point(&mut self, i: usize) -> Option<&[f64]> {
        if i == 0 || !self.ensure(i) {
            return None;
        }
        let k = self.slot(i)?;
        Some(&self.xs[k * self.dim..(k + 1) * self.dim])
    }

    pub fn point_1d(&mut self, i: usize) -> Option<f64> {
        self.point(i).map(|x| x[0])
    }

    /// X_i for an already materialised index.
    pub fn seen(&self, i: usize) -> &[f64] {
        let k = self.slot(i).expect("index was never materialised");
        &self.xs[k * self.dim..(k + 1) * self.dim]
    }

    pub fn seen_1d(&self, i: usize) -> f64 {
        self.seen(i)[0]
    }

    /// Requests Y_i, charging the budget unless it was revealed before.
    pub fn query_label(&mut self, i: usize) -> Result<Label> {
        if i == 0 || !self.ensure(i) {
            return Err(Error::IndexOutOfRange(i));
        }
        let k = self.slot(i).ok_or(Error::IndexOutOfRange(i))?;
        if !self.revealed[k] {
            if self.used >= self.budget {
                return Err(Error::BudgetExhausted(self.used));
            }
            self.used += 1;
            self.revealed[k] = true;
        }
        Ok(self.ys[k])
    }

    pub fn is_revealed(&self, i: usize) -> bool {
        self.slot(i).is_some_and(|k| self.revealed[k])
    }

    pub fn labels_used(&self) -> usize {
        self.used
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.used
    }

    /// Number of points actually generated.
    pub fn materialized(&self) -> usize {
        self.ys.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marginal::Marginal;
    use crate::noise::ThresholdFlavor;

    fn problem() -> NoiseProblem {
        NoiseProblem::threshold(ThresholdFlavor::Bounded { c: 0.25 }, 0.5, Marginal::Uniform).unwrap()
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = LabeledStream::new(problem(), 11, 10);
        let mut b = LabeledStream::new(problem(), 11, 10);
        for i in 1..50 {
            assert_eq!(a.point_1d(i), b.point_1d(i));
        }
        assert_eq!(a.query_label(7), b.query_label(7));
    }

    #[test]
    fn budget_is_enforced_and_repeats_are_free() {
        let mut s = LabeledStream::new(problem(), 1, 2);
        s.query_label(1).unwrap();
        s.query_label(1).unwrap();
        s.query_label(5).unwrap();
        assert_eq!(s.labels_used(), 2);
        assert_eq!(s.query_label(6), Err(Error::BudgetExhausted(2)));
        assert!(s.query_label(5).is_ok());
    }

    #[test]
    fn skipping_lands_in_the_region() {
        let mut s = LabeledStream::new(problem(), 3, 10);
        s.ensure(4);
        let r = Region::intervals(vec![(0.2, 0.21), (0.7, 0.705)]).unwrap();
        let mut last = 4;
        for _ in 0..50 {
            let i = s.skip_to(&r, usize::MAX).unwrap().unwrap();
            assert!(i > last);
            assert!(r.contains(s.seen(i)));
            last = i;
        }
        assert!(s.materialized() < last);
        assert!(s.query_label(last).is_ok());
        assert_eq!(s.skip_to(&r, last).unwrap(), None);
    }

    #[test]
    fn fixed_stream_ends() {
        let mut s = LabeledStream::from_labeled(1, vec![0.1, 0.2], vec![Label::Neg, Label::Pos], 5).unwrap();
        assert_eq!(s.point_1d(2), Some(0.2));
        assert_eq!(s.point_1d(3), None);
        assert_eq!(s.query_label(3), Err(Error::IndexOutOfRange(3)));
    }
}
