//! Marginal distributions over the instance space.
//!
//! One-dimensional marginals live on [0, 1] and expose their CDF and
//! generalised inverses, which is what makes exact mass computation and
//! CDF-transformed balls possible. The sphere marginal only supports sampling.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Marginal {
    /// Uniform on [0, 1].
    #[default]
    Uniform,
    /// Piece `i` is `[breaks[i], breaks[i+1])` carrying mass `weights[i]`.
    PiecewiseUniform { breaks: Vec<f64>, weights: Vec<f64> },
    /// Uniform on the unit sphere in R^dim.
    Sphere { dim: usize },
    Mixture { components: Vec<(f64, Marginal)> },
}

impl Marginal {
    pub fn piecewise(breaks: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if breaks.len() != weights.len() + 1 || weights.is_empty() {
            return Err(Error::InvalidParameter(
                "piecewise marginal needs one more break than weights".into(),
            ));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks[0] < 0.0 || breaks[breaks.len() - 1] > 1.0 {
            return Err(Error::InvalidParameter("breaks must increase within [0, 1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter("weights must be nonnegative and sum to 1".into()));
        }
        Ok(Marginal::PiecewiseUniform { breaks, weights })
    }

    /// Uniform on the subinterval [lo, hi] of [0, 1].
    pub fn uniform_on(lo: f64, hi: f64) -> Result<Self> {
        Self::piecewise(vec![lo, hi], vec![1.0])
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("sphere needs dim >= 2".into()));
        }
        Ok(Marginal::Sphere { dim })
    }

    pub fn mixture(components: Vec<(f64, Marginal)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("empty mixture".into()));
        }
        let total: f64 = components.iter().map(|c| c.0).sum();
        if components.iter().any(|c| c.0 < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter("mixture weights must sum to 1".into()));
        }
        let d = components[0].1.dim();
        if components.iter().any(|c| c.1.dim() != d) {
            return Err(Error::InvalidParameter("mixture components differ in dimension".into()));
        }
        Ok(Marginal::Mixture { components })
    }

    pub fn dim(&self) -> usize {
        match self {
            Marginal::Uniform | Marginal::PiecewiseUniform { .. } => 1,
            Marginal::Sphere { dim } => *dim,
            Marginal::Mixture { components } => components[0].1.dim(),
        }
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.dim() == 1
    }

    /// Flattened piecewise-uniform form of a 1-D marginal.
    pub fn pieces(&self) -> Option<Pieces> {
        match self {
            Marginal::Uniform => Some(Pieces {
                breaks: vec![0.0, 1.0],
                weights: vec![1.0],
            }),
            Marginal::PiecewiseUniform { breaks, weights } => Some(Pieces {
                breaks: breaks.clone(),
                weights: weights.clone(),
            }),
            Marginal::Sphere { .. } => None,
            Marginal::Mixture { components } => {
                let parts: Option<Vec<(f64, Pieces)>> =
                    components.iter().map(|(w, m)| m.pieces().map(|p| (*w, p))).collect();
                let parts = parts?;
                let mut breaks: Vec<f64> = parts.iter().flat_map(|(_, p)| p.breaks.iter().copied()).collect();
                breaks.sort_by(f64::total_cmp);
                breaks.dedup();
                let weights = breaks
                    .windows(2)
                    .map(|w| parts.iter().map(|(c, p)| c * p.mass(w[0], w[1])).sum())
                    .collect();
                Some(Pieces { breaks, weights })
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(self.require_pieces()?.cdf(x))
    }

    /// Mass of the half-open interval [lo, hi).
    pub fn interval_mass(&self, lo: f64, hi: f64) -> Result<f64> {
        Ok(self.require_pieces()?.mass(lo, hi))
    }

    pub(crate) fn require_pieces(&self) -> Result<Pieces> {
        self.pieces()
            .ok_or_else(|| Error::Unsupported("CDF of a non 1-D marginal".into()))
    }

    pub fn sample_1d<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Marginal::Uniform => rng.random::<f64>(),
            Marginal::PiecewiseUniform { breaks, weights } => {
                let u: f64 = rng.random();
                let mut cum = 0.0;
                let last = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
                for (i, w) in weights.iter().enumerate() {
                    cum += w;
                    if (u < cum && *w > 0.0) || i == last {
                        let v: f64 = rng.random();
                        return breaks[i] + v * (breaks[i + 1] - breaks[i]);
                    }
                }
                unreachable!("weights are nonempty")
            }
            Marginal::Mixture { components } => pick(components, rng).sample_1d(rng),
            Marginal::Sphere { .. } => panic!("sample_1d on a sphere marginal"),
        }
    }

    /// Draw one point into `out`, which must have length `self.dim()`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match self {
            Marginal::Sphere { .. } => loop {
                let mut norm = 0.0;
                for v in out.iter_mut() {
                    *v = rng.sample(StandardNormal);
                    norm += *v * *v;
                }
                if norm > 1e-300 {
                    let s = norm.sqrt();
                    out.iter_mut().for_each(|v| *v /= s);
                    return;
                }
            },
            Marginal::Mixture { components } if self.dim() > 1 => pick(components, rng).sample_into(rng, out),
            _ => out[0] = self.sample_1d(rng),
        }
    }
}

fn pick<'a, R: Rng + ?Sized>(components: &'a [(f64, Marginal)], rng: &mut R) -> &'a Marginal {
    let u: f64 = rng.random();
    let mut cum = 0.0;
    for (w, m) in components {
        cum += w;
        if u < cum {
            return m;
        }
    }
    &components[components.len() - 1].1
}

/// Piecewise-uniform view of a 1-D marginal.
#[derive(Debug, Clone, PartialEq)]
pub struct Pieces {
    pub breaks: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Pieces {
    pub fn cdf(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
            if x >= hi {
                acc += w;
            } else {
                if x > lo {
                    acc += w * (x - lo) / (hi - lo);
                }
                break;
            }
        }
        acc.min(1.0)
    }

    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            0.0
        } else {
            (self.cdf(hi) - self.cdf(lo)).max(0.0)
        }
    }

    /// inf { x in [0,1] : F(x) >= u }.
    pub fn quantile_lower(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let mut cum = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > 0.0 && cum + w >= u {
                let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
                return (lo + (u - cum) / w * (hi - lo)).clamp(lo, hi);
            }
            cum += w;
        }
        self.breaks[self.breaks.len() - 1]
    }

    /// sup { x in [0,1] : F(x) <= u }.
    pub fn quantile_upper(&self, u: f64) -> f64 {
        if u >= 1.0 {
            return 1.0;
        }
        let u = u.max(0.0);
        let mut cum = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            if *w > 0.0 && cum + w > u {
                let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
                return (lo + (u - cum) / w * (hi - lo)).clamp(lo, hi);
            }
            cum += w;
        }
        1.0
    }

    /// Density on each piece, for integrating functions against the marginal.
    pub fn densities(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, w)| {
                let (lo, hi) = (self.breaks[i], self.breaks[i + 1]);
                (lo, hi, w / (hi - lo))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn quantiles_invert_cdf() {
        let m = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.75, 0.25]).unwrap();
        let p = m.pieces().unwrap();
        for k in 1..100 {
            let u = k as f64 / 100.0;
            assert!((p.cdf(p.quantile_lower(u)) - u).abs() < 1e-12);
            assert!((p.cdf(p.quantile_upper(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_quantile_skips_flat_tail() {
        let m = Marginal::uniform_on(0.0, 0.5).unwrap();
        let p = m.pieces().unwrap();
        assert_eq!(p.quantile_upper(1.0), 1.0);
        assert_eq!(p.quantile_lower(1.0), 0.5);
        assert!((p.quantile_upper(0.5) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mixture_of_halves_is_uniform() {
        let m = Marginal::mixture(vec![
            (0.5, Marginal::uniform_on(0.0, 0.5).unwrap()),
            (0.5, Marginal::uniform_on(0.5, 1.0).unwrap()),
        ])
        .unwrap();
        for x in [0.1, 0.37, 0.5, 0.81] {
            assert!((m.cdf(x).unwrap() - x).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_samples_are_unit() {
        let m = Marginal::sphere(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut x = [0.0; 3];
        for _ in 0..100 {
            m.sample_into(&mut rng, &mut x);
            let n: f64 = x.iter().map(|v| v * v).sum();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn piecewise_sampling_matches_weights() {
        let m = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.75, 0.25]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let left = (0..n).filter(|_| m.sample_1d(&mut rng) < 0.5).count();
        assert!((left as f64 / n as f64 - 0.75).abs() < 0.01);
    }
}
