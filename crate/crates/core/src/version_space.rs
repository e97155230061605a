//! Version spaces: subsets of a hypothesis class, with their disagreement
//! regions and diameters.
//!
//! Threshold and interval subsets are kept as unions of closed parameter
//! boxes. Because parameters are `f64`, an open bound such as `z > x` is
//! stored exactly as `z >= next_up(x)`, so membership is never approximate.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hypothesis::{GridClass, Hypothesis, HypothesisClass};
use crate::marginal::{Marginal, Pieces};
use crate::region::{normalize, subtract, Region, MAX_PIECES};
use crate::sample::Label;

#[derive(Debug, Clone, PartialEq)]
pub enum IntervalPiece {
    /// Intervals [a, b] with a in `a`, b in `b` (both closed ranges).
    Box { a: (f64, f64), b: (f64, f64) },
    /// Every interval lying strictly inside (lo, hi).
    Gap { lo: f64, hi: f64 },
    /// A disagreement ball around an interval, with its positive-set
    /// summary precomputed in instance coordinates.
    Ball {
        center: (f64, f64),
        radius: f64,
        union_pos: (f64, f64),
        inter_pos: Option<(f64, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum VersionSpace {
    /// Thresholds h_z with z in a union of closed ranges.
    Thresholds { pieces: Vec<(f64, f64)> },
    Intervals { pieces: Vec<IntervalPiece> },
    /// Halfspaces whose normal makes an angle of at most pi * radius with `center`.
    HalfspaceCap { center: Vec<f64>, radius: f64 },
    Grid { class: Arc<GridClass>, alive: Vec<bool> },
    Union(Vec<VersionSpace>),
}

impl VersionSpace {
    /// The whole class.
    pub fn full(class: &HypothesisClass) -> Self {
        match class {
            HypothesisClass::Thresholds => VersionSpace::Thresholds {
                pieces: vec![(0.0, 1.0)],
            },
            HypothesisClass::Intervals => VersionSpace::Intervals {
                pieces: vec![IntervalPiece::Gap { lo: 0.0, hi: 1.0 }],
            },
            HypothesisClass::Halfspaces { dim } => {
                let mut center = vec![0.0; *dim];
                center[0] = 1.0;
                VersionSpace::HalfspaceCap { center, radius: 1.0 }
            }
            HypothesisClass::Grid(g) => VersionSpace::Grid {
                class: g.clone(),
                alive: vec![true; g.len()],
            },
            HypothesisClass::Union(parts) => VersionSpace::Union(parts.iter().map(Self::full).collect()),
        }
    }

    /// C[L]: members consistent with every labeled point.
    pub fn consistent(class: &HypothesisClass, labeled: &[(f64, Label)]) -> Result<Self> {
        let mut v = Self::full(class);
        for &(x, y) in labeled {
            v = v.restrict(x, y)?;
        }
        Ok(v)
    }

    /// Members h with P(h(X) != center(X)) <= radius.
    pub fn ball(class: &HypothesisClass, center: &Hypothesis, radius: f64, marginal: &Marginal) -> Result<Self> {
        if radius < 0.0 {
            return Err(Error::InvalidParameter("negative ball radius".into()));
        }
        match class {
            HypothesisClass::Thresholds => {
                let p = marginal.require_pieces()?;
                Ok(VersionSpace::Thresholds {
                    pieces: threshold_ball(center, radius, &p)?,
                })
            }
            HypothesisClass::Intervals => {
                let p = marginal.require_pieces()?;
                let Hypothesis::Interval { a, b } = center else {
                    return Err(Error::Unsupported("interval ball around a non-interval".into()));
                };
                Ok(VersionSpace::Intervals {
                    pieces: vec![interval_ball(*a, *b, radius, &p)],
                })
            }
            HypothesisClass::Halfspaces { dim } => {
                let (Hypothesis::Halfspace { w }, Marginal::Sphere { dim: md }) = (center, marginal) else {
                    return Err(Error::Unsupported(
                        "halfspace balls need a halfspace center and the uniform sphere".into(),
                    ));
                };
                if w.len() != *dim || md != dim {
                    return Err(Error::DimensionMismatch {
                        expected: *dim,
                        got: w.len(),
                    });
                }
                Ok(VersionSpace::HalfspaceCap {
                    center: w.clone(),
                    radius: radius.min(1.0),
                })
            }
            HypothesisClass::Grid(g) => {
                let alive = g
                    .members()
                    .iter()
                    .map(|h| Ok(h.disagreement(center, marginal)? <= radius))
                    .collect::<Result<Vec<bool>>>()?;
                Ok(VersionSpace::Grid {
                    class: g.clone(),
                    alive,
                })
            }
            HypothesisClass::Union(parts) => Ok(VersionSpace::Union(
                parts
                    .iter()
                    .map(|c| Self::ball(c, center, radius, marginal))
                    .collect::<Result<_>>()?,
            )),
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            VersionSpace::Thresholds { pieces } => pieces.is_empty(),
            VersionSpace::Intervals { pieces } => pieces.is_empty(),
            VersionSpace::HalfspaceCap { .. } => false,
            VersionSpace::Grid { alive, .. } => !alive.iter().any(|a| *a),
            VersionSpace::Union(parts) => parts.iter().all(|p| p.is_empty()),
        }
    }

    /// V intersected with { h : h(x) = y }.
    pub fn restrict(&self, x: f64, y: Label) -> Result<Self> {
        Ok(match self {
            VersionSpace::Thresholds { pieces } => {
                let pieces = pieces
                    .iter()
                    .filter_map(|&(lo, hi)| {
                        let (lo, hi) = match y {
                            Label::Pos => (lo, hi.min(x)),
                            Label::Neg => (lo.max(x.next_up()), hi),
                        };
                        (lo <= hi).then_some((lo, hi))
                    })
                    .collect();
                VersionSpace::Thresholds { pieces }
            }
            VersionSpace::Intervals { pieces } => {
                let mut out = Vec::new();
                for p in pieces {
                    restrict_interval_piece(p, x, y, &mut out)?;
                }
                VersionSpace::Intervals { pieces: out }
            }
            VersionSpace::HalfspaceCap { .. } => {
                return Err(Error::Unsupported(
                    "label constraints on continuous halfspaces; use a grid".into(),
                ))
            }
            VersionSpace::Grid { class, alive } => {
                let alive = class
                    .members()
                    .iter()
                    .zip(alive)
                    .map(|(h, a)| *a && h.predict_1d(x) == y)
                    .collect();
                VersionSpace::Grid {
                    class: class.clone(),
                    alive,
                }
            }
            VersionSpace::Union(parts) => {
                VersionSpace::Union(parts.iter().map(|p| p.restrict(x, y)).collect::<Result<_>>()?)
            }
        })
    }

    /// Like `restrict` for points of any dimension; only grids support d > 1.
    pub fn restrict_point(&self, x: &[f64], y: Label) -> Result<Self> {
        match self {
            VersionSpace::Grid { class, alive } => {
                if x.len() != class.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: class.dim(),
                        got: x.len(),
                    });
                }
                let alive = class
                    .members()
                    .iter()
                    .zip(alive)
                    .map(|(h, a)| *a && h.predict_unchecked(x) == y)
                    .collect();
                Ok(VersionSpace::Grid {
                    class: class.clone(),
                    alive,
                })
            }
            VersionSpace::Union(parts) => Ok(VersionSpace::Union(
                parts.iter().map(|p| p.restrict_point(x, y)).collect::<Result<_>>()?,
            )),
            _ if x.len() == 1 => self.restrict(x[0], y),
            _ => Err(Error::DimensionMismatch {
                expected: 1,
                got: x.len(),
            }),
        }
    }

    pub fn contains(&self, h: &Hypothesis) -> bool {
        match (self, h) {
            (VersionSpace::Thresholds { pieces }, Hypothesis::Threshold { z }) => {
                pieces.iter().any(|(lo, hi)| lo <= z && z <= hi)
            }
            (VersionSpace::Intervals { pieces }, Hypothesis::Interval { a, b }) => pieces.iter().any(|p| match p {
                IntervalPiece::Box { a: ar, b: br } => ar.0 <= *a && *a <= ar.1 && br.0 <= *b && *b <= br.1,
                IntervalPiece::Gap { lo, hi } => lo < a && b < hi,
                IntervalPiece::Ball { .. } => false,
            }),
            (VersionSpace::HalfspaceCap { center, radius }, Hypothesis::Halfspace { w }) => {
                let c: f64 = center.iter().zip(w).map(|(a, b)| a * b).sum();
                c.clamp(-1.0, 1.0).acos() / std::f64::consts::PI <= *radius
            }
            (VersionSpace::Grid { class, alive }, _) => {
                class.members().iter().zip(alive).any(|(m, a)| *a && m == h)
            }
            (VersionSpace::Union(parts), _) => parts.iter().any(|p| p.contains(h)),
            _ => false,
        }
    }

    /// The member with the smallest parameter (lowest index for grids).
    pub fn representative(&self) -> Option<Hypothesis> {
        match self {
            VersionSpace::Thresholds { pieces } => pieces
                .iter()
                .map(|p| p.0)
                .min_by(f64::total_cmp)
                .map(|z| Hypothesis::Threshold { z }),
            VersionSpace::Intervals { pieces } => pieces
                .iter()
                .filter_map(|p| match p {
                    IntervalPiece::Box { a, b } => {
                        let a0 = a.0.max(0.0_f64.next_up());
                        let b0 = b.0.max(a0.next_up());
                        (b0 <= b.1 && b0 < 1.0).then_some((a0, b0))
                    }
                    IntervalPiece::Gap { lo, hi } => {
                        let a0 = lo.next_up();
                        let b0 = a0.next_up();
                        (b0 < *hi).then_some((a0, b0))
                    }
                    IntervalPiece::Ball { center, .. } => Some(*center),
                })
                .min_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)))
                .map(|(a, b)| Hypothesis::Interval { a, b }),
            VersionSpace::HalfspaceCap { center, .. } => Some(Hypothesis::Halfspace { w: center.clone() }),
            VersionSpace::Grid { class, alive } => class
                .members()
                .iter()
                .zip(alive)
                .find(|(_, a)| **a)
                .map(|(h, _)| h.clone()),
            VersionSpace::Union(parts) => parts.iter().find_map(|p| p.representative()),
        }
    }

    /// DIS(V): the points on which two members of V disagree.
    pub fn disagreement_region(&self) -> Result<Region> {
        if self.is_empty() {
            return Ok(Region::empty());
        }
        if let Some(summary) = self.positive_summary() {
            let region = summary.disagreement();
            if region.len() <= MAX_PIECES {
                return Ok(Region::Intervals(region));
            }
            return match self.alive_members() {
                Some(members) => Ok(Region::Disagreement { members }),
                None => Err(Error::RegionOverflow(region.len())),
            };
        }
        match self {
            VersionSpace::HalfspaceCap { center, radius } => {
                if *radius >= 0.5 {
                    Ok(Region::Everything { dim: center.len() })
                } else {
                    Ok(Region::Band {
                        normal: center.clone(),
                        half_width: (std::f64::consts::PI * radius).sin(),
                    })
                }
            }
            _ => match self.alive_members() {
                Some(members) => Ok(Region::Disagreement { members }),
                None => Err(Error::Unsupported("disagreement region of this version space".into())),
            },
        }
    }

    /// sup over pairs in V of P(h1 != h2).
    pub fn diameter(&self, marginal: &Marginal) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyVersionSpace);
        }
        match self {
            VersionSpace::Thresholds { pieces } => {
                let p = marginal.require_pieces()?;
                let lo = pieces.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
                let hi = pieces.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
                Ok(p.mass(lo, hi))
            }
            VersionSpace::Intervals { pieces } => {
                let p = marginal.require_pieces()?;
                let mut best: f64 = 0.0;
                for (i, p1) in pieces.iter().enumerate() {
                    for p2 in &pieces[i..] {
                        best = best.max(piece_pair_diameter(p1, p2, &p)?);
                    }
                }
                Ok(best)
            }
            VersionSpace::HalfspaceCap { radius, .. } => Ok((2.0 * radius).min(1.0)),
            VersionSpace::Grid { .. } | VersionSpace::Union(_) => {
                let Some(members) = self.alive_members() else {
                    return Err(Error::Unsupported("diameter of a union with continuous parts".into()));
                };
                let mut best: f64 = 0.0;
                for (i, h1) in members.iter().enumerate() {
                    for h2 in &members[i + 1..] {
                        best = best.max(h1.disagreement(h2, marginal)?);
                    }
                }
                Ok(best)
            }
        }
    }

    /// Surviving members, when V is a finite set.
    pub fn alive_members(&self) -> Option<Vec<Hypothesis>> {
        match self {
            VersionSpace::Grid { class, alive } => Some(
                class
                    .members()
                    .iter()
                    .zip(alive)
                    .filter(|(_, a)| **a)
                    .map(|(h, _)| h.clone())
                    .collect(),
            ),
            VersionSpace::Union(parts) => {
                let mut all = Vec::new();
                for p in parts {
                    all.extend(p.alive_members()?);
                }
                Some(all)
            }
            _ => None,
        }
    }

    /// Union and intersection of positive sets, for 1-D version spaces.
    pub(crate) fn positive_summary(&self) -> Option<PositiveSummary> {
        let mut s = PositiveSummary::default();
        self.fold_positive(&mut s)?;
        Some(s)
    }

    fn fold_positive(&self, s: &mut PositiveSummary) -> Option<()> {
        match self {
            VersionSpace::Thresholds { pieces } => {
                for &(lo, hi) in pieces {
                    s.add(lo, 1.0, Some((hi, 1.0)));
                }
            }
            VersionSpace::Intervals { pieces } => {
                for p in pieces {
                    match p {
                        IntervalPiece::Box { a, b } => {
                            s.add(a.0, b.1, (a.1 <= b.0).then_some((a.1, b.0)));
                        }
                        IntervalPiece::Gap { lo, hi } => s.add(*lo, *hi, None),
                        IntervalPiece::Ball {
                            union_pos, inter_pos, ..
                        } => s.add(union_pos.0, union_pos.1, *inter_pos),
                    }
                }
            }
            VersionSpace::HalfspaceCap { .. } => return None,
            VersionSpace::Grid { class, alive } => {
                for (h, a) in class.members().iter().zip(alive) {
                    if *a {
                        let (lo, hi) = h.positive_set()?;
                        s.add(lo, hi, Some((lo, hi)));
                    }
                }
            }
            VersionSpace::Union(parts) => {
                for p in parts {
                    p.fold_positive(s)?;
                }
            }
        }
        Some(())
    }
}

/// Union of positive sets and their common intersection.
#[derive(Debug, Clone, Default)]
pub(crate) struct PositiveSummary {
    union: Vec<(f64, f64)>,
    inter: Option<(f64, f64)>,
    empty_inter: bool,
    seen: bool,
}

impl PositiveSummary {
    /// Adds a family whose positive sets cover [lo, hi] and all contain `common`.
    fn add(&mut self, lo: f64, hi: f64, common: Option<(f64, f64)>) {
        self.union.push((lo, hi));
        match (common, self.seen) {
            (None, _) => self.empty_inter = true,
            (Some(c), false) => self.inter = Some(c),
            (Some(c), true) => {
                if let Some(i) = self.inter {
                    self.inter = Some((i.0.max(c.0), i.1.min(c.1)));
                }
            }
        }
        self.seen = true;
    }

    pub(crate) fn disagreement(&self) -> Vec<(f64, f64)> {
        let union = normalize(self.union.clone());
        match self.inter {
            Some((lo, hi)) if !self.empty_inter && lo < hi => subtract(&union, (lo, hi)),
            _ => union,
        }
    }
}

/// { z : P(h_z != center) <= r }, solved on the CDF scale where the
/// disagreement is piecewise linear in F(z).
fn threshold_ball(center: &Hypothesis, r: f64, p: &Pieces) -> Result<Vec<(f64, f64)>> {
    let (ca, cb) = center
        .positive_set()
        .ok_or_else(|| Error::Unsupported("threshold ball around a halfspace".into()))?;
    let (pa, pb) = (p.cdf(ca), p.cdf(cb));
    // |[u, 1] xor [pa, pb]| on the CDF scale
    let g = |u: f64| (1.0 - u) + (pb - pa) - 2.0 * (pb - u.max(pa)).max(0.0);
    let mut knots = [0.0, pa, pb, 1.0];
    knots.sort_by(f64::total_cmp);
    let mut spans: Vec<(f64, f64)> = Vec::new();
    for w in knots.windows(2) {
        let (u0, u1) = (w[0], w[1]);
        let (g0, g1) = (g(u0), g(u1));
        let span = if u1 <= u0 {
            (g0 <= r).then_some((u0, u0))
        } else if g0 <= r && g1 <= r {
            Some((u0, u1))
        } else if g0 <= r {
            Some((u0, u0 + (r - g0) / (g1 - g0) * (u1 - u0)))
        } else if g1 <= r {
            Some((u0 + (r - g0) / (g1 - g0) * (u1 - u0), u1))
        } else {
            None
        };
        if let Some(s) = span {
            match spans.last_mut() {
                Some(last) if s.0 <= last.1 => last.1 = last.1.max(s.1),
                _ => spans.push(s),
            }
        }
    }
    Ok(spans
        .into_iter()
        .map(|(u0, u1)| (p.quantile_lower(u0), p.quantile_upper(u1)))
        .collect())
}

fn interval_ball(a: f64, b: f64, r: f64, p: &Pieces) -> IntervalPiece {
    let (ua, ub) = (p.cdf(a), p.cdf(b));
    let w = ub - ua;
    let q = |u: f64| p.quantile_lower(u.clamp(0.0, 1.0));
    let (union_pos, inter_pos) = if r > w {
        // arbitrarily short intervals elsewhere are within reach
        ((0.0, 1.0), None)
    } else {
        let inter = (ua + r <= ub - r).then(|| (q(ua + r), q(ub - r)));
        ((q(ua - r), q(ub + r)), inter)
    };
    IntervalPiece::Ball {
        center: (a, b),
        radius: r,
        union_pos,
        inter_pos,
    }
}

fn restrict_interval_piece(p: &IntervalPiece, x: f64, y: Label, out: &mut Vec<IntervalPiece>) -> Result<()> {
    let push_box = |out: &mut Vec<IntervalPiece>, a: (f64, f64), b: (f64, f64)| {
        if a.0 <= a.1 && b.0 <= b.1 && a.0 < b.1 {
            out.push(IntervalPiece::Box { a, b });
        }
    };
    match (p, y) {
        (IntervalPiece::Box { a, b }, Label::Pos) => push_box(out, (a.0, a.1.min(x)), (b.0.max(x), b.1)),
        (IntervalPiece::Box { a, b }, Label::Neg) => {
            // x < a, or (a <= x and b < x)
            push_box(out, (a.0.max(x.next_up()), a.1), *b);
            push_box(out, (a.0, a.1.min(x)), (b.0, b.1.min(x.next_down())));
        }
        (IntervalPiece::Gap { lo, hi }, Label::Pos) => {
            if *lo < x && x < *hi {
                push_box(out, (lo.next_up(), x), (x, hi.next_down()));
            }
        }
        (IntervalPiece::Gap { lo, hi }, Label::Neg) => {
            if *lo < x && x < *hi {
                out.push(IntervalPiece::Gap { lo: *lo, hi: x });
                out.push(IntervalPiece::Gap { lo: x, hi: *hi });
            } else {
                out.push(p.clone());
            }
        }
        (IntervalPiece::Ball { .. }, _) => {
            return Err(Error::Unsupported("label constraints on an interval ball".into()))
        }
    }
    Ok(())
}

fn piece_ranges(p: &IntervalPiece) -> Result<((f64, f64), (f64, f64))> {
    match p {
        IntervalPiece::Box { a, b } => Ok((*a, *b)),
        IntervalPiece::Gap { lo, hi } => Ok(((*lo, *hi), (*lo, *hi))),
        IntervalPiece::Ball { .. } => Err(Error::Unsupported("diameter of an interval ball".into())),
    }
}

/// Exact sup of P([a1,b1] xor [a2,b2]) over two pieces. The objective is
/// piecewise linear on the CDF scale with kinks where coordinates coincide,
/// so the sup is attained with every coordinate at some piece endpoint.
fn piece_pair_diameter(p1: &IntervalPiece, p2: &IntervalPiece, p: &Pieces) -> Result<f64> {
    let (a1r, b1r) = piece_ranges(p1)?;
    let (a2r, b2r) = piece_ranges(p2)?;
    let mut cands: Vec<f64> = [a1r, b1r, a2r, b2r].iter().flat_map(|r| [r.0, r.1]).collect();
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let within = |r: (f64, f64)| -> Vec<f64> { cands.iter().copied().filter(|c| r.0 <= *c && *c <= r.1).collect() };
    let (a1s, b1s, a2s, b2s) = (within(a1r), within(b1r), within(a2r), within(b2r));
    let mut best: f64 = 0.0;
    for &a1 in &a1s {
        for &b1 in b1s.iter().filter(|b| **b >= a1) {
            let m1 = p.mass(a1, b1);
            for &a2 in &a2s {
                for &b2 in b2s.iter().filter(|b| **b >= a2) {
                    let both = p.mass(a1.max(a2), b1.min(b2));
                    best = best.max(m1 + p.mass(a2, b2) - 2.0 * both);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region_of(v: &VersionSpace) -> Vec<(f64, f64)> {
        match v.disagreement_region().unwrap() {
            Region::Intervals(p) => p,
            other => panic!("unexpected region {other:?}"),
        }
    }

    #[test]
    fn grid_thresholds_disagree_between_extremes() {
        let g = GridClass::from_members(vec![
            Hypothesis::Threshold { z: 0.25 },
            Hypothesis::Threshold { z: 0.5 },
            Hypothesis::Threshold { z: 0.75 },
        ])
        .unwrap();
        let v = VersionSpace::full(&HypothesisClass::grid(g));
        assert_eq!(region_of(&v), vec![(0.25, 0.75)]);
    }

    #[test]
    fn threshold_range_diameter() {
        let v = VersionSpace::Thresholds {
            pieces: vec![(0.3, 0.5)],
        };
        assert!((v.diameter(&Marginal::Uniform).unwrap() - 0.2).abs() < 1e-12);
        let single = VersionSpace::Thresholds {
            pieces: vec![(0.4, 0.4)],
        };
        assert_eq!(single.diameter(&Marginal::Uniform).unwrap(), 0.0);
        assert!(region_of(&single).is_empty());
    }

    #[test]
    fn consistent_thresholds() {
        let v = VersionSpace::consistent(&HypothesisClass::Thresholds, &[(0.3, Label::Neg), (0.6, Label::Pos)]).unwrap();
        assert_eq!(region_of(&v), vec![(0.3_f64.next_up(), 0.6)]);
        let e = VersionSpace::consistent(&HypothesisClass::Thresholds, &[(0.3, Label::Pos), (0.8, Label::Neg)]).unwrap();
        assert!(e.is_empty());
    }

    #[test]
    fn interval_ball_regimes() {
        let c = Hypothesis::Interval { a: 0.4, b: 0.6 };
        let u = Marginal::Uniform;
        let small = VersionSpace::ball(&HypothesisClass::Intervals, &c, 0.05, &u).unwrap();
        let m = |v: &VersionSpace| {
            v.disagreement_region()
                .unwrap()
                .exact_mass(&u)
                .unwrap()
                .unwrap()
        };
        assert!((m(&small) - 0.2).abs() < 1e-12);
        let mid = VersionSpace::ball(&HypothesisClass::Intervals, &c, 0.15, &u).unwrap();
        assert!((m(&mid) - 0.5).abs() < 1e-12);
        let big = VersionSpace::ball(&HypothesisClass::Intervals, &c, 0.21, &u).unwrap();
        assert!((m(&big) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_point_splits_interval_space() {
        let v = VersionSpace::full(&HypothesisClass::Intervals)
            .restrict(0.5, Label::Neg)
            .unwrap();
        assert!(v.contains(&Hypothesis::Interval { a: 0.1, b: 0.4 }));
        assert!(!v.contains(&Hypothesis::Interval { a: 0.4, b: 0.6 }));
        let v = v.restrict(0.2, Label::Pos).unwrap();
        assert!(v.contains(&Hypothesis::Interval { a: 0.1, b: 0.4 }));
        assert!(!v.contains(&Hypothesis::Interval { a: 0.3, b: 0.4 }));
        // members all lie inside (0, 0.5); only the point 0.2 is common
        assert_eq!(region_of(&v), vec![(0.0_f64.next_up(), 0.5_f64.next_down())]);
    }
}
