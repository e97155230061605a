//! Data-dependent localized Rademacher bound.
//!
//! For eps > 0 the eps-minimal set is the members of C[L] whose empirical
//! error on S is within eps of the best. Over that set we measure the
//! empirical diameter D and the Rademacher sup phi, combine them into U, and
//! search dyadic scales for the smallest eps at which U stays below eps / 16
//! at every coarser scale.

use serde::{Deserialize, Serialize};

use super::confidence_s;
use super::rademacher::RademacherDraw;
use crate::error::{Error, Result};
use crate::hypothesis::HypothesisClass;
use crate::profile::{split_1d, Constraint, Point1, Profile};
use crate::sample::LabeledPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalBoundConfig {
    /// Multiplier on the localized complexity.
    pub k: f64,
    /// Widening factor for the eps-minimal set.
    pub c: f64,
    /// Smallest dyadic exponent searched.
    pub floor_exp: i32,
}

impl LocalBoundConfig {
    pub const fn empirical() -> Self {
        Self {
            k: 752.0,
            c: 1.5,
            floor_exp: -30,
        }
    }

    pub const fn distributional() -> Self {
        Self {
            k: 8272.0,
            c: 3.0,
            floor_exp: -30,
        }
    }
}

impl Default for LocalBoundConfig {
    fn default() -> Self {
        Self::empirical()
    }
}

/// Result of the dyadic search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    /// `f64::INFINITY` for the empty sample.
    pub value: f64,
    /// The test already fails at scale 1; `value` is then 1.
    pub vacuous: bool,
    /// Every scale down to the floor passed; `value` is the floor.
    pub hit_floor: bool,
    /// The first scale exponent that failed, i.e. the witness that
    /// value / 2 is not admissible.
    pub failed_exp: Option<i32>,
}

impl BoundValue {
    pub fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            vacuous: true,
            hit_floor: false,
            failed_exp: None,
        }
    }
}

/// Prefix sizes ceil(n / 2^k), largest first.
pub(crate) fn prefix_sizes(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = n;
    while c >= 1 {
        if out.last() != Some(&c) {
            out.push(c);
        }
        if c == 1 {
            break;
        }
        c = c.div_ceil(2);
    }
    out
}

/// Smallest value the search could return given only sample sizes; exact
/// when it is 1 (the test cannot pass at scale 1 for any prefix).
pub(crate) fn hat_bound_floor(n: usize, delta: f64, cfg: &LocalBoundConfig) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let best = prefix_sizes(n)
        .into_iter()
        .map(|c| cfg.k * confidence_s(c, delta) / c as f64)
        .fold(f64::INFINITY, f64::min);
    // need best <= 2^(j-4)
    let j = (best * 16.0).log2().ceil() as i32;
    if j > 0 {
        1.0
    } else {
        2f64.powi(j.max(cfg.floor_exp))
    }
}

/// U for one prefix profile at scale eps.
pub(crate) fn u_value(p: &Profile, eps: f64, delta: f64, cfg: &LocalBoundConfig) -> f64 {
    let n = p.total() as f64;
    let s = confidence_s(p.total(), delta);
    // an empty C[L] has nothing to localize: only the confidence term remains
    let (phi, d) = match p.eps_stats(cfg.c * eps * n) {
        Some(st) => (st.xi_spread as f64 / (2.0 * n), st.disagree as f64 / n),
        None => (0.0, 0.0),
    };
    cfg.k * (phi + (s * d / n).sqrt() + s / n)
}

/// The dyadic search over prefix profiles; `profile(c)` returns the profile
/// of the prefix holding the first `c` sample points.
pub(crate) fn search<F>(n: usize, delta: f64, cfg: &LocalBoundConfig, mut profile: F) -> Result<BoundValue>
where
    F: FnMut(usize) -> Result<Profile>,
{
    if n == 0 {
        return Ok(BoundValue::infinite());
    }
    let sizes = prefix_sizes(n);
    let mut cache: Vec<Option<Profile>> = vec![None; sizes.len()];
    let mut j = 0;
    loop {
        let target = 2f64.powi(j - 4);
        let eps = 2f64.powi(j);
        let mut pass = false;
        for (k, &c) in sizes.iter().enumerate() {
            if cfg.k * confidence_s(c, delta) / c as f64 > target {
                continue;
            }
            if cache[k].is_none() {
                cache[k] = Some(profile(c)?);
            }
            if u_value(cache[k].as_ref().unwrap(), eps, delta, cfg) <= target {
                pass = true;
                break;
            }
        }
        if !pass {
            return Ok(if j == 0 {
                BoundValue {
                    value: 1.0,
                    vacuous: true,
                    hit_floor: false,
                    failed_exp: Some(0),
                }
            } else {
                BoundValue {
                    value: 2f64.powi(j + 1),
                    vacuous: false,
                    hit_floor: false,
                    failed_exp: Some(j),
                }
            });
        }
        if j == cfg.floor_exp {
            return Ok(BoundValue {
                value: 2f64.powi(j),
                vacuous: false,
                hit_floor: true,
                failed_exp: None,
            });
        }
        j -= 1;
    }
}

fn to_points(s: &[LabeledPoint], draw: &RademacherDraw) -> Vec<Point1> {
    s.iter()
        .map(|p| Point1 {
            x: p.x,
            y: p.label,
            xi: draw.sign(p.index),
        })
        .collect()
}

/// Profile of C[L] on S.
pub(crate) fn profile_of(
    class: &HypothesisClass,
    l: &[LabeledPoint],
    s: &[LabeledPoint],
    draw: &RademacherDraw,
) -> Result<Profile> {
    let mut c = Constraint::new(class)?;
    for p in l {
        c.add(p.x, p.label);
    }
    if let Constraint::Grid { class: g, alive } = &c {
        let xs: Vec<f64> = s.iter().map(|p| p.x).collect();
        let ys: Vec<_> = s.iter().map(|p| p.label).collect();
        let xis: Vec<i8> = s.iter().map(|p| draw.sign(p.index)).collect();
        return Ok(Profile::build_grid(g, alive, 1, &xs, &ys, &xis));
    }
    let (free, fixed) = split_1d(&c, to_points(s, draw));
    Ok(Profile::build_1d(&c, &free, fixed, s.len()))
}

/// phi-hat(eps; L, S): half the largest Rademacher gap between two members
/// of the eps-minimal set.
pub fn hat_phi(
    eps: f64,
    l: &[LabeledPoint],
    s: &[LabeledPoint],
    class: &HypothesisClass,
    draw: &RademacherDraw,
) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let p = profile_of(class, l, s, draw)?;
    let st = p.eps_stats(eps * s.len() as f64).ok_or(Error::EmptyVersionSpace)?;
    Ok(st.xi_spread as f64 / (2.0 * s.len() as f64))
}

/// D-hat(eps; L, S): empirical diameter of the eps-minimal set.
pub fn hat_diameter(eps: f64, l: &[LabeledPoint], s: &[LabeledPoint], class: &HypothesisClass) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let p = profile_of(class, l, s, &RademacherDraw::new(0))?;
    let st = p.eps_stats(eps * s.len() as f64).ok_or(Error::EmptyVersionSpace)?;
    Ok(st.disagree as f64 / s.len() as f64)
}

/// U-hat(eps; L, S, delta).
pub fn hat_u(
    eps: f64,
    l: &[LabeledPoint],
    s: &[LabeledPoint],
    class: &HypothesisClass,
    delta: f64,
    cfg: &LocalBoundConfig,
    draw: &RademacherDraw,
) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySample);
    }
    let p = profile_of(class, l, s, draw)?;
    if p.is_empty() {
        return Err(Error::EmptyVersionSpace);
    }
    Ok(u_value(&p, eps, delta, cfg))
}

/// The localized excess-risk bound for ERM over C[L] on S, searching the
/// index prefixes S^(m), L^(m) on a dyadic grid of sizes.
pub fn hat_bound(
    s: &[LabeledPoint],
    delta: f64,
    l: &[LabeledPoint],
    class: &HypothesisClass,
    cfg: &LocalBoundConfig,
    draw: &RademacherDraw,
) -> Result<BoundValue> {
    let mut sorted = s.to_vec();
    sorted.sort_by_key(|p| p.index);
    search(sorted.len(), delta, cfg, |c| {
        let m = sorted[c - 1].index;
        let lm: Vec<LabeledPoint> = l.iter().filter(|p| p.index <= m).copied().collect();
        profile_of(class, &lm, &sorted[..c], draw)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Label;

    #[test]
    fn prefix_sizes_halve() {
        assert_eq!(prefix_sizes(10), vec![10, 5, 3, 2, 1]);
        assert_eq!(prefix_sizes(1), vec![1]);
    }

    #[test]
    fn empty_sample_is_infinite() {
        let b = hat_bound(
            &[],
            0.1,
            &[],
            &HypothesisClass::Thresholds,
            &LocalBoundConfig::default(),
            &RademacherDraw::new(0),
        )
        .unwrap();
        assert_eq!(b.value, f64::INFINITY);
    }

    #[test]
    fn single_point_is_vacuous() {
        let s = [LabeledPoint::new(1, 0.4, Label::Pos)];
        let b = hat_bound(
            &s,
            0.1,
            &[],
            &HypothesisClass::Thresholds,
            &LocalBoundConfig::default(),
            &RademacherDraw::new(0),
        )
        .unwrap();
        assert_eq!(b.value, 1.0);
        assert!(b.vacuous);
    }

    #[test]
    fn floor_matches_search_when_vacuous() {
        let cfg = LocalBoundConfig::default();
        assert_eq!(hat_bound_floor(512, 0.05, &cfg), 1.0);
    }
}
