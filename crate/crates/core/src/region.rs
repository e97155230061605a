//! Measurable subsets of the instance space and their probability mass.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::Hypothesis;
use crate::marginal::Marginal;

/// Cap on the number of pieces of a 1-D region. Disagreement regions of
/// thresholds and intervals need at most a handful; more means a bug.
pub const MAX_PIECES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    /// Sorted, disjoint half-open pieces [lo, hi) of [0, 1].
    Intervals(Vec<(f64, f64)>),
    /// { x : |<normal, x>| < half_width }.
    Band { normal: Vec<f64>, half_width: f64 },
    Everything { dim: usize },
    /// Points where at least two members disagree.
    Disagreement { members: Vec<Hypothesis> },
    Union(Vec<Region>),
}

impl Region {
    pub fn empty() -> Self {
        Region::Intervals(Vec::new())
    }

    /// Normalises arbitrary pieces: clip to [0, 1], drop empties, merge overlaps.
    pub fn intervals(pieces: Vec<(f64, f64)>) -> Result<Self> {
        let merged = normalize(pieces);
        if merged.len() > MAX_PIECES {
            return Err(Error::RegionOverflow(merged.len()));
        }
        Ok(Region::Intervals(merged))
    }

    pub fn is_structurally_empty(&self) -> bool {
        match self {
            Region::Intervals(p) => p.is_empty(),
            Region::Band { half_width, .. } => *half_width <= 0.0,
            Region::Everything { .. } => false,
            Region::Disagreement { members } => members.len() < 2,
            Region::Union(parts) => parts.iter().all(|r| r.is_structurally_empty()),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Intervals(p) => contains_1d(p, x[0]),
            Region::Band { normal, half_width } => {
                normal.iter().zip(x).map(|(a, b)| a * b).sum::<f64>().abs() < *half_width
            }
            Region::Everything { .. } => true,
            Region::Disagreement { members } => {
                let mut it = members.iter();
                match it.next() {
                    None => false,
                    Some(first) => {
                        let l = first.predict_unchecked(x);
                        it.any(|h| h.predict_unchecked(x) != l)
                    }
                }
            }
            Region::Union(parts) => parts.iter().any(|r| r.contains(x)),
        }
    }

    pub fn contains_1d(&self, x: f64) -> bool {
        match self {
            Region::Intervals(p) => contains_1d(p, x),
            _ => self.contains(&[x]),
        }
    }

    /// Probability mass: exact for 1-D interval unions, Monte Carlo otherwise.
    pub fn mass(&self, marginal: &Marginal, mc: &MassConfig) -> Result<MassEstimate> {
        if let Some(v) = self.exact_mass(marginal)? {
            return Ok(MassEstimate::exact(v));
        }
        McPool::draw(marginal, mc.samples, mc.seed).mass(self)
    }

    pub fn exact_mass(&self, marginal: &Marginal) -> Result<Option<f64>> {
        match self {
            Region::Everything { .. } => Ok(Some(1.0)),
            Region::Intervals(p) if p.is_empty() => Ok(Some(0.0)),
            Region::Intervals(p) => {
                let Some(pc) = marginal.pieces() else {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        got: marginal.dim(),
                    });
                };
                Ok(Some(p.iter().map(|(lo, hi)| pc.mass(*lo, *hi)).sum::<f64>().min(1.0)))
            }
            _ => Ok(None),
        }
    }
}

fn contains_1d(p: &[(f64, f64)], x: f64) -> bool {
    // pieces are sorted; a binary search is overkill for <= 16 of them
    p.iter().any(|(lo, hi)| *lo <= x && x < *hi)
}

pub(crate) fn normalize(mut pieces: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pieces.retain_mut(|p| {
        p.0 = p.0.max(0.0);
        p.1 = p.1.min(1.0);
        p.0 < p.1
    });
    pieces.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(pieces.len());
    for (lo, hi) in pieces {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// `a` minus the single piece `cut`.
pub(crate) fn subtract(a: &[(f64, f64)], cut: (f64, f64)) -> Vec<(f64, f64)> {
    if cut.0 >= cut.1 {
        return a.to_vec();
    }
    let mut out = Vec::with_capacity(a.len() + 1);
    for &(lo, hi) in a {
        if hi <= cut.0 || lo >= cut.1 {
            out.push((lo, hi));
            continue;
        }
        if lo < cut.0 {
            out.push((lo, cut.0));
        }
        if hi > cut.1 {
            out.push((cut.1, hi));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for MassConfig {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassEstimate {
    pub value: f64,
    pub stderr: f64,
    pub exact: bool,
}

impl MassEstimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            stderr: 0.0,
            exact: true,
        }
    }
}

/// A fixed pool of unlabeled draws, reused so that masses of nested regions
/// are estimated with common random numbers.
#[derive(Debug, Clone)]
pub struct McPool {
    dim: usize,
    points: Vec<f64>,
}

impl McPool {
    pub fn draw(marginal: &Marginal, samples: usize, seed: u64) -> Self {
        let dim = marginal.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = vec![0.0; samples * dim];
        for chunk in points.chunks_mut(dim) {
            marginal.sample_into(&mut rng, chunk);
        }
        Self { dim, points }
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.points.chunks(self.dim)
    }

    pub fn mass(&self, region: &Region) -> Result<MassEstimate> {
        if self.is_empty() {
            return Err(Error::InvalidParameter("Monte Carlo pool is empty".into()));
        }
        if let Region::Everything { .. } = region {
            return Ok(MassEstimate::exact(1.0));
        }
        let n = self.len();
        let hits = self.points().filter(|x| region.contains(x)).count();
        let p = hits as f64 / n as f64;
        Ok(MassEstimate {
            value: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            exact: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_merges_and_clips() {
        let r = Region::intervals(vec![(0.5, 0.7), (-0.2, 0.1), (0.6, 0.9), (0.9, 1.3)]).unwrap();
        assert_eq!(r, Region::Intervals(vec![(0.0, 0.1), (0.5, 1.0)]));
    }

    #[test]
    fn too_many_pieces_is_an_error() {
        let pieces = (0..20).map(|k| (k as f64 / 20.0, k as f64 / 20.0 + 0.01)).collect();
        assert_eq!(Region::intervals(pieces), Err(Error::RegionOverflow(20)));
    }

    #[test]
    fn exact_mass_under_uniform() {
        let r = Region::intervals(vec![(0.1, 0.3), (0.5, 0.6)]).unwrap();
        let m = r.mass(&Marginal::Uniform, &MassConfig::default()).unwrap();
        assert!(m.exact);
        assert!((m.value - 0.3).abs() < 1e-12);
    }

    #[test]
    fn subtract_splits_pieces() {
        let a = vec![(0.0, 0.5), (0.6, 1.0)];
        assert_eq!(subtract(&a, (0.4, 0.7)), vec![(0.0, 0.4), (0.7, 1.0)]);
    }

    #[test]
    fn mc_mass_tracks_exact() {
        let r = Region::intervals(vec![(0.2, 0.45)]).unwrap();
        let pool = McPool::draw(&Marginal::Uniform, 200_000, 3);
        let est = pool.mass(&r).unwrap();
        assert!((est.value - 0.25).abs() < 4.0 * est.stderr);
    }
}
