//! The disagreement coefficient: closed forms for the standard examples, a
//! grid estimator for arbitrary classes, and checks of the close-marginal,
//! mixture and union inequalities on fixed fixtures.
//!
//! theta_h = sup_{r > r0} P(DIS(B(h, r))) / r. The estimator takes the sup
//! over a finite grid of radii, so on a dyadic grid it can under-estimate by
//! up to a factor of two.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass};
use crate::marginal::Marginal;
use crate::region::{MassEstimate, McPool};
use crate::version_space::VersionSpace;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThetaValue {
    Exact { value: f64 },
    /// Certified interval; the exact value is not known in closed form.
    Bracket { lo: f64, hi: f64 },
}

impl ThetaValue {
    pub fn contains(&self, v: f64) -> bool {
        match *self {
            ThetaValue::Exact { value } => v == value,
            ThetaValue::Bracket { lo, hi } => lo <= v && v <= hi,
        }
    }
}

fn is_uniform_unit(m: &Marginal) -> bool {
    m.pieces()
        .is_some_and(|p| p.breaks == [0.0, 1.0] && (p.weights[0] - 1.0).abs() < 1e-12)
}

/// Closed-form theta_h for thresholds and intervals under the uniform
/// marginal, and the certified bracket for homogeneous halfspaces under the
/// uniform sphere.
pub fn theta_analytic(class: &HypothesisClass, h: &Hypothesis, marginal: &Marginal) -> Result<ThetaValue> {
    match (class, h, marginal) {
        (HypothesisClass::Thresholds, Hypothesis::Threshold { z }, m) if is_uniform_unit(m) => {
            // at z = 0 or 1 the ball only grows to one side
            let value = if 0.0 < *z && *z < 1.0 { 2.0 } else { 1.0 };
            Ok(ThetaValue::Exact { value })
        }
        (HypothesisClass::Intervals, Hypothesis::Interval { a, b }, m) if is_uniform_unit(m) => Ok(ThetaValue::Exact {
            value: (1.0 / (b - a)).max(4.0),
        }),
        (HypothesisClass::Halfspaces { dim }, Hypothesis::Halfspace { w }, Marginal::Sphere { dim: md })
            if dim == md && w.len() == *dim =>
        {
            let s = (*dim as f64).sqrt();
            Ok(ThetaValue::Bracket {
                lo: PI * s / 4.0,
                hi: PI * s,
            })
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form disagreement coefficient for {} at {h:?}",
            class.name()
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ThetaMode {
    /// Exact masses; 1-D marginals only.
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaEstimate {
    pub value: f64,
    /// Standard error of the ratio at the maximizing radius.
    pub stderr: f64,
    pub argmax_r: f64,
    /// Strictly decreasing, all above r0.
    pub r_grid: Vec<f64>,
    pub masses: Vec<MassEstimate>,
    pub r0: f64,
    pub mode: ThetaMode,
}

/// 2^-1, ..., 2^-20 restricted to (r0, 1].
pub fn default_r_grid(r0: f64) -> Vec<f64> {
    (1..=20).map(|k| 0.5f64.powi(k)).filter(|r| *r > r0).collect()
}

/// Dyadic radii from 2^-1 down to 2^-k_max.
pub fn dyadic_grid(k_max: i32) -> Vec<f64> {
    (1..=k_max).map(|k| 0.5f64.powi(k)).collect()
}

/// Radius at which an interval ball jumps to every short interval: just
/// above the center's mass. Missing it loses the 1/(b - a) branch.
fn boundary_radius(class: &HypothesisClass, h: &Hypothesis, marginal: &Marginal) -> Option<f64> {
    let Hypothesis::Interval { a, b } = h else { return None };
    let has_intervals = match class {
        HypothesisClass::Intervals => true,
        HypothesisClass::Union(parts) => parts.iter().any(|p| matches!(p, HypothesisClass::Intervals)),
        _ => false,
    };
    if !has_intervals {
        return None;
    }
    let p = marginal.pieces()?;
    Some((p.cdf(*b) - p.cdf(*a)).next_up())
}

/// sup over the grid of P(DIS(B(h, r))) / r. With `r_grid = None` the
/// default dyadic grid is used. Radii outside (r0, 1] are dropped. For
/// interval classes the boundary radius is added.
pub fn theta_estimate(
    class: &HypothesisClass,
    h: &Hypothesis,
    marginal: &Marginal,
    r0: f64,
    r_grid: Option<&[f64]>,
    mode: ThetaMode,
) -> Result<ThetaEstimate> {
    if !(r0 >= 0.0) {
        return Err(Error::InvalidParameter("r0 must be nonnegative".into()));
    }
    let pool = match mode {
        ThetaMode::Exact => {
            if !marginal.is_one_dimensional() {
                return Err(Error::Unsupported("exact masses need a 1-D marginal".into()));
            }
            None
        }
        ThetaMode::MonteCarlo { samples, seed } => {
            if samples < 10_000 {
                return Err(Error::InvalidParameter("Monte Carlo mode needs at least 10^4 samples".into()));
            }
            Some(McPool::draw(marginal, samples, seed))
        }
    };
    theta_with_pool(class, h, marginal, r0, r_grid, mode, pool.as_ref())
}

fn theta_with_pool(
    class: &HypothesisClass,
    h: &Hypothesis,
    marginal: &Marginal,
    r0: f64,
    r_grid: Option<&[f64]>,
    mode: ThetaMode,
    pool: Option<&McPool>,
) -> Result<ThetaEstimate> {
    let mut grid: Vec<f64> = match r_grid {
        Some(g) => g.to_vec(),
        None => default_r_grid(r0),
    };
    grid.extend(boundary_radius(class, h, marginal));
    grid.retain(|r| *r > r0 && *r <= 1.0);
    grid.sort_by(|a, b| b.total_cmp(a));
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::InvalidParameter("no radius of the grid lies in (r0, 1]".into()));
    }
    let mut masses = Vec::with_capacity(grid.len());
    let mut best = (f64::NEG_INFINITY, 0.0, grid[0]);
    for &r in &grid {
        let region = VersionSpace::ball(class, h, r, marginal)?.disagreement_region()?;
        let m = match pool {
            Some(p) => p.mass(&region)?,
            None => match region.exact_mass(marginal)? {
                Some(v) => MassEstimate::exact(v),
                None => return Err(Error::Unsupported("exact mass of this disagreement region".into())),
            },
        };
        if m.value / r > best.0 {
            best = (m.value / r, m.stderr / r, r);
        }
        masses.push(m);
    }
    Ok(ThetaEstimate {
        value: best.0,
        stderr: best.1,
        argmax_r: best.2,
        r_grid: grid,
        masses,
        r0,
        mode,
    })
}

/// Largest lambda with lambda P(A) <= P'(A) <= P(A) / lambda for every
/// measurable A, for two 1-D piecewise-uniform marginals; `None` when one
/// charges a set the other does not.
pub fn close_marginals_lambda(p: &Marginal, q: &Marginal) -> Result<Option<f64>> {
    let (pp, qp) = (p.require_pieces()?, q.require_pieces()?);
    let mut breaks: Vec<f64> = pp.breaks.iter().chain(&qp.breaks).copied().collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut lambda: f64 = 1.0;
    for w in breaks.windows(2) {
        let (a, b) = (pp.mass(w[0], w[1]), qp.mass(w[0], w[1]));
        match (a > 0.0, b > 0.0) {
            (false, false) => {}
            (true, true) => lambda = lambda.min(a / b).min(b / a),
            _ => return Ok(None),
        }
    }
    Ok(Some(lambda))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub lemma: u8,
    pub name: String,
    /// Named estimates entering the inequality.
    pub estimates: Vec<(String, f64, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl LemmaCheck {
    fn new(lemma: u8, name: &str, estimates: Vec<(String, f64, f64)>, lhs: f64, rhs: f64, slack: f64) -> Self {
        Self {
            lemma,
            name: name.to_string(),
            estimates,
            lhs,
            rhs,
            slack,
            pass: lhs <= rhs + slack,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaConfig {
    pub samples: usize,
    pub seed: u64,
    /// Smallest dyadic radius 2^-k_max.
    pub k_max: i32,
    /// Slack in combined standard errors.
    pub z: f64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            samples: 1_000_000,
            seed: 0x1e44a,
            k_max: 10,
            z: 3.0,
        }
    }
}

fn mc(cfg: &LemmaConfig, salt: u64) -> ThetaMode {
    ThetaMode::MonteCarlo {
        samples: cfg.samples,
        seed: cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15),
    }
}

fn est(name: &str, t: &ThetaEstimate) -> (String, f64, f64) {
    (name.to_string(), t.value, t.stderr)
}

fn combined(ses: &[f64]) -> f64 {
    ses.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Close marginals: lambda^2 theta <= theta' <= theta / lambda^2, with
/// lambda computed from the two marginals.
pub fn check_close_marginals(
    class: &HypothesisClass,
    h: &Hypothesis,
    p: &Marginal,
    q: &Marginal,
    cfg: &LemmaConfig,
) -> Result<Vec<LemmaCheck>> {
    let lambda = close_marginals_lambda(p, q)?
        .ok_or_else(|| Error::InvalidParameter("marginals are not mutually bounded".into()))?;
    let grid = dyadic_grid(cfg.k_max);
    let t = theta_estimate(class, h, p, 0.0, Some(&grid), mc(cfg, 1))?;
    let tq = theta_estimate(class, h, q, 0.0, Some(&grid), mc(cfg, 2))?;
    let l2 = lambda * lambda;
    let ests = vec![est("theta", &t), est("theta'", &tq), ("lambda".into(), lambda, 0.0)];
    let name = format!("close marginals, {} (lambda = {lambda})", class.name());
    Ok(vec![
        LemmaCheck::new(
            1,
            &format!("{name}: lower"),
            ests.clone(),
            l2 * t.value,
            tq.value,
            cfg.z * combined(&[l2 * t.stderr, tq.stderr]),
        ),
        LemmaCheck::new(
            1,
            &format!("{name}: upper"),
            ests,
            tq.value,
            t.value / l2,
            cfg.z * combined(&[tq.stderr, t.stderr / l2]),
        ),
    ])
}

/// Mixtures: theta under sum_i w_i P_i is at most the sum of the thetas
/// under each P_i.
pub fn check_mixture(
    class: &HypothesisClass,
    h: &Hypothesis,
    components: &[(f64, Marginal)],
    cfg: &LemmaConfig,
) -> Result<LemmaCheck> {
    let mix = Marginal::mixture(components.to_vec())?;
    let grid = dyadic_grid(cfg.k_max);
    let t = theta_estimate(class, h, &mix, 0.0, Some(&grid), mc(cfg, 3))?;
    let mut ests = vec![est("theta", &t)];
    let mut sum = 0.0;
    let mut ses = vec![t.stderr];
    for (k, (_, m)) in components.iter().enumerate() {
        let tk = theta_estimate(class, h, m, 0.0, Some(&grid), mc(cfg, 4 + k as u64))?;
        sum += tk.value;
        ses.push(tk.stderr);
        ests.push(est(&format!("theta_{}", k + 1), &tk));
    }
    Ok(LemmaCheck::new(
        2,
        &format!("mixture of {} components, {}", components.len(), class.name()),
        ests,
        t.value,
        sum,
        cfg.z * combined(&ses),
    ))
}

/// Unions: with h in both classes, max(theta_1, theta_2) <= theta <=
/// theta_1 + theta_2; otherwise theta <= theta_1 + theta_2 + 2. All three
/// estimates share one pool of draws.
pub fn check_union(
    c1: &HypothesisClass,
    c2: &HypothesisClass,
    h: &Hypothesis,
    marginal: &Marginal,
    cfg: &LemmaConfig,
) -> Result<Vec<LemmaCheck>> {
    let union = HypothesisClass::Union(vec![c1.clone(), c2.clone()]);
    let mode = mc(cfg, 5);
    let ThetaMode::MonteCarlo { samples, seed } = mode else { unreachable!() };
    let pool = McPool::draw(marginal, samples, seed);
    let grid = dyadic_grid(cfg.k_max);
    let est_on = |c: &HypothesisClass| theta_with_pool(c, h, marginal, 0.0, Some(&grid), mode, Some(&pool));
    let t = est_on(&union)?;
    let t1 = est_on(c1)?;
    let t2 = est_on(c2)?;
    let ests = vec![est("theta", &t), est("theta_1", &t1), est("theta_2", &t2)];
    let slack = cfg.z * combined(&[t.stderr, t1.stderr, t2.stderr]);
    let name = format!("union of {} and {}", c1.name(), c2.name());
    if c1.contains(h) && c2.contains(h) {
        Ok(vec![
            LemmaCheck::new(3, &format!("{name}: lower"), ests.clone(), t1.value.max(t2.value), t.value, slack),
            LemmaCheck::new(3, &format!("{name}: upper"), ests, t.value, t1.value + t2.value, slack),
        ])
    } else {
        Ok(vec![LemmaCheck::new(
            3,
            &format!("{name}: h outside one part"),
            ests,
            t.value,
            t1.value + t2.value + 2.0,
            slack,
        )])
    }
}

/// The fixture suite: close marginals at lambda = 1 (exact equality) and
/// lambda = 1/2, the two-halves mixture for thresholds, and unions of
/// thresholds with a finite class and with intervals.
pub fn lemma_checks(cfg: &LemmaConfig) -> Result<Vec<LemmaCheck>> {
    let mut out = Vec::new();
    let thresholds = HypothesisClass::Thresholds;
    let intervals = HypothesisClass::Intervals;
    let h_half = Hypothesis::threshold(0.5)?;
    let h_int = Hypothesis::interval(0.4, 0.6)?;
    let grid = dyadic_grid(cfg.k_max);

    // lambda = 1: identical marginals give identical exact estimates
    for (c, h) in [(&thresholds, &h_half), (&intervals, &h_int)] {
        let a = theta_estimate(c, h, &Marginal::Uniform, 0.0, Some(&grid), ThetaMode::Exact)?;
        let b = theta_estimate(c, h, &Marginal::uniform_on(0.0, 1.0)?, 0.0, Some(&grid), ThetaMode::Exact)?;
        out.push(LemmaCheck {
            lemma: 1,
            name: format!("close marginals, {} (lambda = 1): equality", c.name()),
            estimates: vec![est("theta", &a), est("theta'", &b)],
            lhs: a.value,
            rhs: b.value,
            slack: 0.0,
            pass: a.value == b.value,
        });
    }

    let skewed = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.25, 0.75])?;
    for (c, h) in [(&thresholds, &h_half), (&intervals, &h_int)] {
        out.extend(check_close_marginals(c, h, &Marginal::Uniform, &skewed, cfg)?);
    }

    out.push(check_mixture(
        &thresholds,
        &h_half,
        &[(0.5, Marginal::uniform_on(0.0, 0.5)?), (0.5, Marginal::uniform_on(0.5, 1.0)?)],
        cfg,
    )?);

    let finite = HypothesisClass::grid(crate::hypothesis::GridClass::from_members(vec![
        h_half.clone(),
        Hypothesis::interval(0.3, 0.6)?,
        Hypothesis::interval(0.45, 0.55)?,
        Hypothesis::interval(0.2, 0.9)?,
    ])?);
    out.extend(check_union(&thresholds, &finite, &h_half, &Marginal::Uniform, cfg)?);
    out.extend(check_union(&thresholds, &intervals, &h_int, &Marginal::Uniform, cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_values() {
        let u = Marginal::Uniform;
        let t = theta_analytic(&HypothesisClass::Thresholds, &Hypothesis::threshold(0.3).unwrap(), &u).unwrap();
        assert_eq!(t, ThetaValue::Exact { value: 2.0 });
        let i = theta_analytic(&HypothesisClass::Intervals, &Hypothesis::interval(0.1, 0.9).unwrap(), &u).unwrap();
        assert_eq!(i, ThetaValue::Exact { value: 4.0 });
    }

    #[test]
    fn lambda_of_skewed_halves() {
        let q = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.25, 0.75]).unwrap();
        assert_eq!(close_marginals_lambda(&Marginal::Uniform, &q).unwrap(), Some(0.5));
        let r = Marginal::uniform_on(0.0, 0.5).unwrap();
        assert_eq!(close_marginals_lambda(&Marginal::Uniform, &r).unwrap(), None);
    }

    #[test]
    fn grid_is_strictly_decreasing_above_r0() {
        let e = theta_estimate(
            &HypothesisClass::Intervals,
            &Hypothesis::interval(0.4, 0.6).unwrap(),
            &Marginal::Uniform,
            1e-3,
            None,
            ThetaMode::Exact,
        )
        .unwrap();
        assert!(e.r_grid.windows(2).all(|w| w[0] > w[1]));
        assert!(e.r_grid.iter().all(|r| *r > 1e-3));
    }
}
