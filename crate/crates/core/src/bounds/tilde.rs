//! Distribution-dependent counterparts of the localized bound.
//!
//! These need the true error function, so they are defined for threshold
//! classes on threshold-type problems, where the eps-minimal set is a
//! parameter interval computed exactly. The Rademacher-type expectation is
//! estimated by Monte Carlo over fresh samples and reported with its
//! standard error; treat the results as diagnostics.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::confidence_s;
use super::local::LocalBoundConfig;
use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass};
use crate::noise::NoiseProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TildeConfig {
    pub constants: LocalBoundConfig,
    /// Fresh samples averaged per expectation.
    pub outer: usize,
    pub seed: u64,
}

impl Default for TildeConfig {
    fn default() -> Self {
        Self {
            constants: LocalBoundConfig::distributional(),
            outer: 50,
            seed: 0x711de,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

fn require_thresholds(class: &HypothesisClass) -> Result<()> {
    match class {
        HypothesisClass::Thresholds => Ok(()),
        _ => Err(Error::Unsupported(
            "distribution-dependent bounds are implemented for thresholds".into(),
        )),
    }
}

/// Parameter range [lo, hi] of C(eps) = { h_z : er(h_z) - nu <= eps }.
pub fn eps_set(eps: f64, problem: &NoiseProblem) -> Result<(f64, f64)> {
    problem.threshold_eps_range(eps, &[(0.0, 1.0)])
}

/// diam(eps; C) for thresholds; equals P(DIS(C(eps))).
pub fn true_diameter(eps: f64, problem: &NoiseProblem, class: &HypothesisClass) -> Result<f64> {
    require_thresholds(class)?;
    let (lo, hi) = eps_set(eps, problem)?;
    problem.marginal().interval_mass(lo, hi)
}

/// sup over pairs in C(eps) of |(er - er_m)(h1) - (er - er_m)(h2)| on one
/// sample, exact: er_m is constant between sample points and er(h_z) is
/// monotone away from the Bayes threshold.
fn sample_sup(problem: &NoiseProblem, zlo: f64, zhi: f64, xs: &[(f64, bool)]) -> Result<f64> {
    let er = |z: f64| problem.true_error(&Hypothesis::Threshold { z });
    let m = xs.len() as f64;
    let Hypothesis::Threshold { z: zstar } = problem.bayes() else {
        return Err(Error::Unsupported("non-threshold Bayes classifier".into()));
    };
    // mistakes of h_z for z just above the left end: x < z predicted negative
    let mut below_pos = xs.iter().filter(|(x, y)| *x < zlo && *y).count();
    let mut above_neg = xs.iter().filter(|(x, y)| *x >= zlo && !*y).count();
    let inside: Vec<(f64, bool)> = xs.iter().copied().filter(|(x, _)| *x >= zlo && *x < zhi).collect();
    let (mut gmax, mut gmin) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut left = zlo;
    let mut push = |a: f64, b: f64, mistakes: usize| -> Result<()> {
        let emp = mistakes as f64 / m;
        let mut cands = vec![er(a)?, er(b)?];
        if a < zstar && zstar < b {
            cands.push(er(zstar)?);
        }
        for c in cands {
            gmax = gmax.max(c - emp);
            gmin = gmin.min(c - emp);
        }
        Ok(())
    };
    for (x, y) in inside {
        // z in (left, x]: x is predicted positive
        push(left, x, below_pos + above_neg)?;
        if y {
            below_pos += 1;
        } else {
            above_neg -= 1;
        }
        left = x;
    }
    push(left, zhi, below_pos + above_neg)?;
    Ok(gmax - gmin)
}

/// phi(m, eps): expected localized sup over fresh samples of size m.
pub fn tilde_phi(m: usize, eps: f64, problem: &NoiseProblem, class: &HypothesisClass, cfg: &TildeConfig) -> Result<Estimate> {
    require_thresholds(class)?;
    if m == 0 || cfg.outer == 0 {
        return Err(Error::EmptySample);
    }
    let (zlo, zhi) = eps_set(eps, problem)?;
    let mut vals = Vec::with_capacity(cfg.outer);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ m as u64);
    let mut buf = [0.0];
    for _ in 0..cfg.outer {
        let xs: Vec<(f64, bool)> = (0..m)
            .map(|_| {
                problem.marginal().sample_into(&mut rng, &mut buf);
                (buf[0], problem.sample_label(&buf, &mut rng).is_pos())
            })
            .collect();
        vals.push(sample_sup(problem, zlo, zhi, &xs)?);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(Estimate {
        value: mean,
        stderr: (var / n).sqrt(),
    })
}

/// U-tilde(m, eps, delta).
pub fn tilde_u(
    m: usize,
    eps: f64,
    delta: f64,
    problem: &NoiseProblem,
    class: &HypothesisClass,
    cfg: &TildeConfig,
) -> Result<Estimate> {
    let k = &cfg.constants;
    let s = confidence_s(m, delta);
    let phi = tilde_phi(m, k.c * eps, problem, class, cfg)?;
    let d = true_diameter(k.c * eps, problem, class)?;
    let mf = m as f64;
    Ok(Estimate {
        value: k.k * (phi.value + (s * d / mf).sqrt() + s / mf),
        stderr: k.k * phi.stderr,
    })
}

/// The dyadic search on U-tilde; infinite at m = 0 and 1 when vacuous.
pub fn tilde_bound(m: usize, delta: f64, problem: &NoiseProblem, class: &HypothesisClass, cfg: &TildeConfig) -> Result<f64> {
    require_thresholds(class)?;
    if m == 0 {
        return Ok(f64::INFINITY);
    }
    let k = &cfg.constants;
    let floor = k.k * confidence_s(m, delta) / m as f64;
    let mut j = 0;
    loop {
        let target = 2f64.powi(j - 4);
        let pass = floor <= target && tilde_u(m, 2f64.powi(j), delta, problem, class, cfg)?.value <= target;
        if !pass {
            return Ok(if j == 0 { 1.0 } else { 2f64.powi(j + 1) });
        }
        if j == k.floor_exp {
            return Ok(2f64.powi(j));
        }
        j -= 1;
    }
}

/// tilde_bound evaluated on the grid {0, 1, 2, 4, ...}; a sum over l < m
/// uses the value at the grid point at or below l, which overstates it.
struct GridSums {
    points: Vec<usize>,
    values: Vec<f64>,
}

impl GridSums {
    fn new<F: FnMut(f64) -> Result<f64>>(
        max: usize,
        delta: f64,
        problem: &NoiseProblem,
        class: &HypothesisClass,
        cfg: &TildeConfig,
        mut f: F,
    ) -> Result<Self> {
        let mut points = vec![0usize];
        let mut p = 1;
        while p <= max {
            points.push(p);
            p *= 2;
        }
        let values = points
            .iter()
            .map(|&l| {
                let b = tilde_bound(l, delta, problem, class, cfg)?;
                f(6.0 * b)
            })
            .collect::<Result<_>>()?;
        Ok(Self { points, values })
    }

    /// sum over l in 0..m of the grid-step value.
    fn sum_below(&self, m: usize) -> f64 {
        let mut total = 0.0;
        for (k, &p) in self.points.iter().enumerate() {
            if p >= m {
                break;
            }
            let next = self.points.get(k + 1).copied().unwrap_or(usize::MAX).min(m);
            total += self.values[k] * (next - p) as f64;
        }
        total
    }
}

fn dis_mass(eps: f64, problem: &NoiseProblem, class: &HypothesisClass) -> Result<f64> {
    if eps >= 1.0 {
        return Ok(1.0);
    }
    true_diameter(eps, problem, class)
}

/// m-tilde(n, delta) = min { m : n <= log2(4 m^2 / delta) + 2e sum_{l<m} P(DIS(C(6 tilde_bound(l)))) }.
pub fn tilde_m(n: usize, delta: f64, problem: &NoiseProblem, class: &HypothesisClass, cfg: &TildeConfig) -> Result<usize> {
    require_thresholds(class)?;
    let rhs = |sums: &GridSums, m: usize| {
        (4.0 * (m as f64).powi(2) / delta).log2() + 2.0 * std::f64::consts::E * sums.sum_below(m)
    };
    let mut cap = 1usize << 10;
    loop {
        let sums = GridSums::new(cap, delta, problem, class, cfg, |e| dis_mass(e, problem, class))?;
        if rhs(&sums, cap) >= n as f64 {
            let (mut lo, mut hi) = (1usize, cap);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if rhs(&sums, mid) >= n as f64 {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            return Ok(lo);
        }
        if cap >= 1 << 30 {
            return Err(Error::Unsupported("m-tilde exceeds 2^30".into()));
        }
        cap <<= 2;
    }
}

/// r_C(n, delta) = max{ mean over l < m-tilde of diam(6 tilde_bound(l)), 2^-n }.
pub fn r_c(n: usize, delta: f64, problem: &NoiseProblem, class: &HypothesisClass, cfg: &TildeConfig) -> Result<f64> {
    let m = tilde_m(n, delta, problem, class, cfg)?;
    let sums = GridSums::new(m, delta, problem, class, cfg, |e| dis_mass(e, problem, class))?;
    Ok((sums.sum_below(m) / m as f64).max(0.5f64.powi(n as i32)))
}
