use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rademacher signs indexed by stream position. Signs are a pure hash of
/// (seed, index), so they are "materialised" lazily without shared state;
/// explicit signs can be pinned for the first few indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RademacherDraw {
    seed: u64,
    #[serde(default)]
    pinned: Vec<i8>,
}

impl RademacherDraw {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            pinned: Vec::new(),
        }
    }

    /// Signs for indices 1..=signs.len(); later indices fall back to seed 0.
    pub fn from_signs(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidParameter("Rademacher signs must be +-1".into()));
        }
        Ok(Self {
            seed: 0,
            pinned: signs,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// xi_i for a 1-based index.
    pub fn sign(&self, index: usize) -> i8 {
        if index >= 1 && index <= self.pinned.len() {
            return self.pinned[index - 1];
        }
        if splitmix64(self.seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)) >> 63 == 0 {
            1
        } else {
            -1
        }
    }
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// R(f; S) = (1/|S|) sum_i xi_i f(X_i) over indexed points.
pub fn rademacher_process<F>(f: F, sample: &[(usize, &[f64])], draw: &RademacherDraw) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let total: f64 = sample.iter().map(|(i, x)| draw.sign(*i) as f64 * f(x)).sum();
    Ok(total / sample.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signs_are_deterministic_and_balanced() {
        let d = RademacherDraw::new(42);
        let e = RademacherDraw::new(42);
        let n = 100_000;
        let sum: i64 = (1..=n).map(|i| d.sign(i) as i64).sum();
        assert!((1..=1000).all(|i| d.sign(i) == e.sign(i)));
        assert!((sum as f64 / n as f64).abs() < 0.02);
    }

    #[test]
    fn empty_sample_is_an_error() {
        let d = RademacherDraw::new(1);
        assert_eq!(rademacher_process(|_| 1.0, &[], &d), Err(Error::EmptySample));
    }
}
