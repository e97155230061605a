//! Hypotheses and hypothesis classes.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::marginal::Marginal;
use crate::sample::Label;

/// A classifier. Thresholds and intervals act on [0, 1]; halfspaces are
/// homogeneous with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Hypothesis {
    /// +1 iff x >= z.
    Threshold { z: f64 },
    /// +1 iff a <= x <= b.
    Interval { a: f64, b: f64 },
    /// +1 iff <w, x> >= 0.
    Halfspace { w: Vec<f64> },
}

impl Hypothesis {
    pub fn threshold(z: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::InvalidParameter(format!("threshold {z} outside [0, 1]")));
        }
        Ok(Hypothesis::Threshold { z })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < b && b < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "interval [{a}, {b}] needs 0 < a < b < 1"
            )));
        }
        Ok(Hypothesis::Interval { a, b })
    }

    /// Normalises `w`; fails on the zero vector.
    pub fn halfspace(w: Vec<f64>) -> Result<Self> {
        let n = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidParameter("halfspace normal must be nonzero".into()));
        }
        Ok(Hypothesis::Halfspace {
            w: w.into_iter().map(|v| v / n).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Hypothesis::Halfspace { w } => w.len(),
            _ => 1,
        }
    }

    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(self.predict_unchecked(x))
    }

    pub(crate) fn predict_unchecked(&self, x: &[f64]) -> Label {
        match self {
            Hypothesis::Halfspace { w } => {
                Label::from_bool(w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() >= 0.0)
            }
            _ => self.predict_1d(x[0]),
        }
    }

    /// Prediction for a scalar point; halfspaces are treated as 1-D.
    pub fn predict_1d(&self, x: f64) -> Label {
        match self {
            Hypothesis::Threshold { z } => Label::from_bool(x >= *z),
            Hypothesis::Interval { a, b } => Label::from_bool(*a <= x && x <= *b),
            Hypothesis::Halfspace { w } => Label::from_bool(w[0] * x >= 0.0),
        }
    }

    /// The positive set of a 1-D hypothesis as a closed interval.
    pub fn positive_set(&self) -> Option<(f64, f64)> {
        match self {
            Hypothesis::Threshold { z } => Some((*z, 1.0)),
            Hypothesis::Interval { a, b } => Some((*a, *b)),
            Hypothesis::Halfspace { .. } => None,
        }
    }

    /// Order used for tie-breaking: kind first, then parameters lexicographically.
    pub fn cmp_params(&self, other: &Self) -> Ordering {
        fn rank(h: &Hypothesis) -> u8 {
            match h {
                Hypothesis::Threshold { .. } => 0,
                Hypothesis::Interval { .. } => 1,
                Hypothesis::Halfspace { .. } => 2,
            }
        }
        match (self, other) {
            (Hypothesis::Threshold { z: a }, Hypothesis::Threshold { z: b }) => a.total_cmp(b),
            (Hypothesis::Interval { a: a1, b: b1 }, Hypothesis::Interval { a: a2, b: b2 }) => {
                a1.total_cmp(a2).then(b1.total_cmp(b2))
            }
            (Hypothesis::Halfspace { w: w1 }, Hypothesis::Halfspace { w: w2 }) => w1
                .iter()
                .zip(w2)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal),
            _ => rank(self).cmp(&rank(other)),
        }
    }

    /// P(h != g) under a 1-D marginal, or under the uniform sphere for halfspaces.
    pub fn disagreement(&self, other: &Self, marginal: &Marginal) -> Result<f64> {
        match (self, other) {
            (Hypothesis::Halfspace { w: w1 }, Hypothesis::Halfspace { w: w2 }) => {
                if !matches!(marginal, Marginal::Sphere { .. }) {
                    return Err(Error::Unsupported(
                        "halfspace disagreement outside the uniform sphere".into(),
                    ));
                }
                let c: f64 = w1.iter().zip(w2).map(|(a, b)| a * b).sum();
                Ok(c.clamp(-1.0, 1.0).acos() / std::f64::consts::PI)
            }
            _ => {
                let p = marginal.require_pieces()?;
                let (Some(s1), Some(s2)) = (self.positive_set(), other.positive_set()) else {
                    return Err(Error::Unsupported("mixed 1-D and halfspace disagreement".into()));
                };
                let m1 = p.mass(s1.0, s1.1);
                let m2 = p.mass(s2.0, s2.1);
                let lo = s1.0.max(s2.0);
                let hi = s1.1.min(s2.1);
                let both = p.mass(lo, hi);
                Ok((m1 + m2 - 2.0 * both).max(0.0))
            }
        }
    }
}

/// A finite class given by explicit members.
#[derive(Debug, Clone, PartialEq)]
pub struct GridClass {
    members: Vec<Hypothesis>,
    vc_dim: usize,
    dim: usize,
}

impl GridClass {
    pub fn from_members(members: Vec<Hypothesis>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidParameter("empty grid class".into()));
        };
        let dim = first.dim();
        if members.iter().any(|h| h.dim() != dim) {
            return Err(Error::InvalidParameter("grid members differ in dimension".into()));
        }
        // log2 |C| bounds the VC dimension of any finite class; so does the
        // VC dimension of the parametric family the members come from.
        let log_size = (usize::BITS - 1 - members.len().leading_zeros()) as usize;
        let kinds: Vec<usize> = {
            let mut v = Vec::new();
            if members.iter().any(|h| matches!(h, Hypothesis::Threshold { .. })) {
                v.push(1);
            }
            if members.iter().any(|h| matches!(h, Hypothesis::Interval { .. })) {
                v.push(2);
            }
            if members.iter().any(|h| matches!(h, Hypothesis::Halfspace { .. })) {
                v.push(dim);
            }
            v
        };
        let family = kinds.iter().sum::<usize>() + kinds.len() - 1;
        Ok(Self {
            vc_dim: log_size.min(family).max(1),
            members,
            dim,
        })
    }

    /// `size` thresholds evenly spaced on [0, 1], endpoints included.
    pub fn thresholds(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::InvalidParameter("threshold grid needs >= 2 members".into()));
        }
        Self::from_members(
            (0..size)
                .map(|k| Hypothesis::Threshold {
                    z: k as f64 / (size - 1) as f64,
                })
                .collect(),
        )
    }

    /// All intervals with endpoints on the lattice {k / resolution}, 0 < a < b < 1.
    pub fn intervals(resolution: usize) -> Result<Self> {
        if resolution < 3 {
            return Err(Error::InvalidParameter("interval grid needs resolution >= 3".into()));
        }
        let r = resolution as f64;
        let mut members = Vec::new();
        for i in 1..resolution {
            for j in (i + 1)..resolution {
                members.push(Hypothesis::Interval {
                    a: i as f64 / r,
                    b: j as f64 / r,
                });
            }
        }
        Self::from_members(members)
    }

    /// Unit normals: evenly spaced angles in the plane, seeded random draws otherwise.
    pub fn halfspaces(dim: usize, size: usize, seed: u64) -> Result<Self> {
        if dim < 2 || size == 0 {
            return Err(Error::InvalidParameter("halfspace grid needs dim >= 2".into()));
        }
        let members = if dim == 2 {
            (0..size)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / size as f64;
                    Hypothesis::Halfspace {
                        w: vec![t.cos(), t.sin()],
                    }
                })
                .collect()
        } else {
            let sphere = Marginal::Sphere { dim };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..size)
                .map(|_| {
                    let mut w = vec![0.0; dim];
                    sphere.sample_into(&mut rng, &mut w);
                    Hypothesis::Halfspace { w }
                })
                .collect()
        };
        Self::from_members(members)
    }

    pub fn members(&self) -> &[Hypothesis] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vc_dimension(&self) -> usize {
        self.vc_dim
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.members.iter().all(|h| h.positive_set().is_some())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HypothesisClass {
    Thresholds,
    Intervals,
    Halfspaces { dim: usize },
    Grid(Arc<GridClass>),
    Union(Vec<HypothesisClass>),
}

impl HypothesisClass {
    pub fn grid(g: GridClass) -> Self {
        HypothesisClass::Grid(Arc::new(g))
    }

    pub fn dim(&self) -> usize {
        match self {
            HypothesisClass::Thresholds | HypothesisClass::Intervals => 1,
            HypothesisClass::Halfspaces { dim } => *dim,
            HypothesisClass::Grid(g) => g.dim(),
            HypothesisClass::Union(parts) => parts.first().map_or(1, |p| p.dim()),
        }
    }

    pub fn vc_dimension(&self) -> usize {
        match self {
            HypothesisClass::Thresholds => 1,
            HypothesisClass::Intervals => 2,
            HypothesisClass::Halfspaces { dim } => *dim,
            HypothesisClass::Grid(g) => g.vc_dimension(),
            HypothesisClass::Union(parts) => {
                parts.iter().map(|p| p.vc_dimension()).sum::<usize>() + parts.len().saturating_sub(1)
            }
        }
    }

    /// ln S(C, m), the log of the shatter coefficient (growth function).
    pub fn ln_shatter(&self, m: usize) -> f64 {
        let mf = m as f64;
        match self {
            HypothesisClass::Thresholds => (mf + 1.0).ln(),
            HypothesisClass::Intervals => (mf * (mf + 1.0) / 2.0 + 1.0).ln(),
            HypothesisClass::Halfspaces { dim } => ln_cover_count(m, *dim),
            HypothesisClass::Grid(g) => {
                let family = match g.members.first() {
                    Some(Hypothesis::Threshold { .. }) if g.vc_dim == 1 => (mf + 1.0).ln(),
                    _ => ln_sauer(m, g.vc_dim),
                };
                (g.len() as f64).ln().min(family)
            }
            HypothesisClass::Union(parts) => {
                let logs: Vec<f64> = parts.iter().map(|p| p.ln_shatter(m)).collect();
                let mx = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let total = mx + logs.iter().map(|l| (l - mx).exp()).sum::<f64>().ln();
                total.min(mf * std::f64::consts::LN_2)
            }
        }
    }

    pub fn shatter_coefficient(&self, m: usize) -> f64 {
        self.ln_shatter(m).exp()
    }

    /// Whether `h` belongs to the class.
    pub fn contains(&self, h: &Hypothesis) -> bool {
        match (self, h) {
            (HypothesisClass::Thresholds, Hypothesis::Threshold { .. }) => true,
            (HypothesisClass::Intervals, Hypothesis::Interval { .. }) => true,
            (HypothesisClass::Halfspaces { dim }, Hypothesis::Halfspace { w }) => w.len() == *dim,
            (HypothesisClass::Grid(g), _) => g.members.contains(h),
            (HypothesisClass::Union(parts), _) => parts.iter().any(|p| p.contains(h)),
            _ => false,
        }
    }

    /// Whether every member acts on [0, 1] with an interval positive set.
    pub fn is_one_dimensional(&self) -> bool {
        match self {
            HypothesisClass::Thresholds | HypothesisClass::Intervals => true,
            HypothesisClass::Halfspaces { .. } => false,
            HypothesisClass::Grid(g) => g.is_one_dimensional(),
            HypothesisClass::Union(parts) => parts.iter().all(|p| p.is_one_dimensional()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            HypothesisClass::Thresholds => "thresholds".into(),
            HypothesisClass::Intervals => "intervals".into(),
            HypothesisClass::Halfspaces { dim } => format!("halfspaces-{dim}"),
            HypothesisClass::Grid(g) => format!("grid-{}", g.len()),
            HypothesisClass::Union(parts) => {
                parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("+")
            }
        }
    }
}

/// Cover's count of homogeneous halfspace dichotomies of m points in general
/// position in R^d: 2 * sum_{k<d} binom(m-1, k).
fn ln_cover_count(m: usize, d: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let terms: Vec<f64> = (0..d.min(m)).map(|k| ln_binom(m - 1, k)).collect();
    let mx = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    std::f64::consts::LN_2 + mx + terms.iter().map(|t| (t - mx).exp()).sum::<f64>().ln()
}

/// Sauer's bound sum_{k<=d} binom(m, k).
fn ln_sauer(m: usize, d: usize) -> f64 {
    let terms: Vec<f64> = (0..=d.min(m)).map(|k| ln_binom(m, k)).collect();
    let mx = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    mx + terms.iter().map(|t| (t - mx).exp()).sum::<f64>().ln()
}

fn ln_binom(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// A serialisable description from which a class can be rebuilt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClassSpec {
    Thresholds,
    Intervals,
    Halfspaces { dim: usize },
    ThresholdGrid { size: usize },
    IntervalGrid { resolution: usize },
    HalfspaceGrid { dim: usize, size: usize, seed: u64 },
    Members { members: Vec<Hypothesis> },
    Union { parts: Vec<ClassSpec> },
}

impl ClassSpec {
    pub fn build(&self) -> Result<HypothesisClass> {
        Ok(match self {
            ClassSpec::Thresholds => HypothesisClass::Thresholds,
            ClassSpec::Intervals => HypothesisClass::Intervals,
            ClassSpec::Halfspaces { dim } => HypothesisClass::Halfspaces { dim: *dim },
            ClassSpec::ThresholdGrid { size } => HypothesisClass::grid(GridClass::thresholds(*size)?),
            ClassSpec::IntervalGrid { resolution } => {
                HypothesisClass::grid(GridClass::intervals(*resolution)?)
            }
            ClassSpec::HalfspaceGrid { dim, size, seed } => {
                HypothesisClass::grid(GridClass::halfspaces(*dim, *size, *seed)?)
            }
            ClassSpec::Members { members } => HypothesisClass::grid(GridClass::from_members(members.clone())?),
            ClassSpec::Union { parts } => {
                HypothesisClass::Union(parts.iter().map(|p| p.build()).collect::<Result<_>>()?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_and_interval_predictions() {
        let h = Hypothesis::threshold(0.5).unwrap();
        assert_eq!(h.predict(&[0.5]).unwrap(), Label::Pos);
        assert_eq!(h.predict(&[0.49]).unwrap(), Label::Neg);
        let g = Hypothesis::interval(0.2, 0.4).unwrap();
        assert_eq!(g.predict_1d(0.2), Label::Pos);
        assert_eq!(g.predict_1d(0.41), Label::Neg);
        assert!(Hypothesis::interval(0.4, 0.2).is_err());
        assert!(Hypothesis::interval(0.0, 0.2).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let h = Hypothesis::halfspace(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            h.predict(&[1.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        );
    }

    #[test]
    fn shatter_coefficients() {
        assert_eq!(HypothesisClass::Thresholds.shatter_coefficient(10).round(), 11.0);
        assert_eq!(HypothesisClass::Intervals.shatter_coefficient(10).round(), 56.0);
        // four points on a circle: 2 * (1 + 3) = 8 homogeneous dichotomies
        let hs = HypothesisClass::Halfspaces { dim: 2 };
        assert_eq!(hs.shatter_coefficient(4).round(), 8.0);
        assert_eq!(HypothesisClass::Thresholds.shatter_coefficient(0), 1.0);
    }

    #[test]
    fn grid_vc_dimension() {
        let g = GridClass::from_members(vec![
            Hypothesis::Threshold { z: 0.25 },
            Hypothesis::Threshold { z: 0.5 },
            Hypothesis::Threshold { z: 0.75 },
        ])
        .unwrap();
        assert_eq!(g.vc_dimension(), 1);
        assert_eq!(GridClass::intervals(16).unwrap().vc_dimension(), 2);
    }

    #[test]
    fn interval_disagreement_mass() {
        let u = Marginal::Uniform;
        let h = Hypothesis::interval(0.2, 0.4).unwrap();
        let g = Hypothesis::interval(0.3, 0.6).unwrap();
        assert!((h.disagreement(&g, &u).unwrap() - 0.3).abs() < 1e-12);
        let far = Hypothesis::interval(0.7, 0.8).unwrap();
        assert!((h.disagreement(&far, &u).unwrap() - 0.3).abs() < 1e-12);
    }
}
