//! Synthetic learning problems with controlled label noise.
//!
//! Every 1-D posterior has an explicit antiderivative for `1 - 2 eta`, so
//! true errors are exact: er(h) = E[eta] + integral over h's positive set of
//! (1 - 2 eta) dP.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{Hypothesis, HypothesisClass};
use crate::marginal::{Marginal, Pieces};
use crate::sample::Label;
use crate::version_space::VersionSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Posterior {
    /// eta(x) = 1/2 + sign(x - z) |x - z|^(1/alpha) / 2.
    PolynomialThreshold { z: f64, alpha: f64 },
    /// eta(x) = 1/2 + c sign(x - z), with x = z counted as positive.
    /// c = 1/2 is the noiseless threshold.
    BoundedThreshold { z: f64, c: f64 },
    /// eta = 1/2 + c on [a, b] and 1/2 - c elsewhere.
    BoundedInterval { a: f64, b: f64, c: f64 },
    /// Deterministic labels sign(<w, x>) on the sphere.
    NoiselessHalfspace { w: Vec<f64> },
}

/// Certified Tsybakov parameters: diam(eps) <= mu eps^(1/kappa) on the
/// dyadic scales 2^-1 .. 2^-10.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TsybakovTag {
    pub kappa: f64,
    pub mu: f64,
}

/// Entropy-with-bracketing parameters, carried for documentation only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyTag {
    pub alpha: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProblem {
    marginal: Marginal,
    posterior: Posterior,
    tsybakov: Option<TsybakovTag>,
    entropy: Option<EntropyTag>,
    nu_star: f64,
    mean_eta: f64,
}

/// Flavor of a threshold problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flavor", rename_all = "kebab-case")]
pub enum ThresholdFlavor {
    Polynomial { alpha: f64 },
    Bounded { c: f64 },
    Noiseless,
}

impl NoiseProblem {
    /// A threshold problem on a 1-D marginal, with Bayes classifier h_{z_star}.
    pub fn threshold(flavor: ThresholdFlavor, z_star: f64, marginal: Marginal) -> Result<Self> {
        if !(0.0 < z_star && z_star < 1.0) {
            return Err(Error::InvalidParameter(format!("z* = {z_star} outside (0, 1)")));
        }
        let (posterior, kappa) = match flavor {
            ThresholdFlavor::Polynomial { alpha } => {
                if !(alpha > 0.0) || !alpha.is_finite() {
                    return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
                }
                (Posterior::PolynomialThreshold { z: z_star, alpha }, (1.0 + alpha) / alpha)
            }
            ThresholdFlavor::Bounded { c } => {
                if !(0.0 < c && c < 0.5) {
                    return Err(Error::InvalidParameter(format!("margin c = {c} outside (0, 1/2)")));
                }
                (Posterior::BoundedThreshold { z: z_star, c }, 1.0)
            }
            ThresholdFlavor::Noiseless => (Posterior::BoundedThreshold { z: z_star, c: 0.5 }, 1.0),
        };
        let mut p = Self::build(marginal, posterior)?;
        let mu = p.certify_mu(kappa)?;
        p.tsybakov = Some(TsybakovTag { kappa, mu });
        Ok(p)
    }

    /// Bayes classifier h_[a,b] with bounded noise margin c.
    pub fn bounded_interval(a: f64, b: f64, c: f64, marginal: Marginal) -> Result<Self> {
        Hypothesis::interval(a, b)?;
        if !(0.0 < c && c <= 0.5) {
            return Err(Error::InvalidParameter(format!("margin c = {c} outside (0, 1/2]")));
        }
        let mut p = Self::build(marginal, Posterior::BoundedInterval { a, b, c })?;
        // er(h) - nu = 2c P(h xor h*) and two members of the eps-minimal set
        // are each within eps / 2c of h*.
        p.tsybakov = Some(TsybakovTag {
            kappa: 1.0,
            mu: 1.0 / c,
        });
        Ok(p)
    }

    pub fn noiseless_halfspace(w: Vec<f64>) -> Result<Self> {
        let Hypothesis::Halfspace { w } = Hypothesis::halfspace(w)? else {
            unreachable!()
        };
        let dim = w.len();
        Self::build(Marginal::sphere(dim)?, Posterior::NoiselessHalfspace { w })
    }

    fn build(marginal: Marginal, posterior: Posterior) -> Result<Self> {
        let mut p = Self {
            marginal,
            posterior,
            tsybakov: None,
            entropy: None,
            nu_star: 0.0,
            mean_eta: 0.5,
        };
        if let Some(pc) = p.marginal.pieces() {
            p.mean_eta = pc
                .densities()
                .map(|(lo, hi, d)| d * ((hi - lo) / 2.0 - (p.anti(hi) - p.anti(lo)) / 2.0))
                .sum();
            p.nu_star = p.true_error(&p.bayes())?;
        } else if !matches!(p.posterior, Posterior::NoiselessHalfspace { .. }) {
            return Err(Error::InvalidParameter("1-D posterior on a non 1-D marginal".into()));
        }
        Ok(p)
    }

    pub fn with_entropy_tag(mut self, alpha: f64, rho: f64) -> Self {
        self.entropy = Some(EntropyTag { alpha, rho });
        self
    }

    pub fn marginal(&self) -> &Marginal {
        &self.marginal
    }

    pub fn posterior(&self) -> &Posterior {
        &self.posterior
    }

    pub fn tsybakov(&self) -> Option<TsybakovTag> {
        self.tsybakov
    }

    pub fn entropy(&self) -> Option<EntropyTag> {
        self.entropy
    }

    pub fn dim(&self) -> usize {
        self.marginal.dim()
    }

    /// Bayes risk.
    pub fn nu_star(&self) -> f64 {
        self.nu_star
    }

    pub fn bayes(&self) -> Hypothesis {
        match &self.posterior {
            Posterior::PolynomialThreshold { z, .. } | Posterior::BoundedThreshold { z, .. } => {
                Hypothesis::Threshold { z: *z }
            }
            Posterior::BoundedInterval { a, b, .. } => Hypothesis::Interval { a: *a, b: *b },
            Posterior::NoiselessHalfspace { w } => Hypothesis::Halfspace { w: w.clone() },
        }
    }

    /// P(Y = +1 | X = x).
    pub fn eta(&self, x: &[f64]) -> f64 {
        match &self.posterior {
            Posterior::PolynomialThreshold { z, alpha } => {
                let t = x[0] - z;
                (0.5 + 0.5 * t.signum() * t.abs().powf(1.0 / alpha)).clamp(0.0, 1.0)
            }
            Posterior::BoundedThreshold { z, c } => {
                if x[0] >= *z {
                    0.5 + c
                } else {
                    0.5 - c
                }
            }
            Posterior::BoundedInterval { a, b, c } => {
                if *a <= x[0] && x[0] <= *b {
                    0.5 + c
                } else {
                    0.5 - c
                }
            }
            Posterior::NoiselessHalfspace { w } => {
                if w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn sample_label<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Label {
        let u: f64 = rng.random();
        Label::from_bool(u < self.eta(x))
    }

    /// Antiderivative of 1 - 2 eta on [0, 1].
    fn anti(&self, x: f64) -> f64 {
        match &self.posterior {
            Posterior::PolynomialThreshold { z, alpha } => {
                let p = 1.0 / alpha + 1.0;
                -(x - z).abs().powf(p) / p
            }
            Posterior::BoundedThreshold { z, c } => -2.0 * c * (x - z).abs(),
            Posterior::BoundedInterval { a, b, c } => 2.0 * c * (x - 2.0 * (x.clamp(*a, *b) - a)),
            Posterior::NoiselessHalfspace { .. } => unreachable!("no 1-D antiderivative"),
        }
    }

    /// Integral of (1 - 2 eta) dP over [lo, hi].
    fn gain(&self, pc: &Pieces, lo: f64, hi: f64) -> f64 {
        pc.densities()
            .map(|(plo, phi, d)| {
                let (l, h) = (lo.max(plo), hi.min(phi));
                if l < h {
                    d * (self.anti(h) - self.anti(l))
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// er(h) = P(h(X) != Y), exact.
    pub fn true_error(&self, h: &Hypothesis) -> Result<f64> {
        if let Posterior::NoiselessHalfspace { w } = &self.posterior {
            let Hypothesis::Halfspace { w: v } = h else {
                return Err(Error::Unsupported("non-halfspace on a halfspace problem".into()));
            };
            if v.len() != w.len() {
                return Err(Error::DimensionMismatch {
                    expected: w.len(),
                    got: v.len(),
                });
            }
            let c: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            return Ok(c.clamp(-1.0, 1.0).acos() / std::f64::consts::PI);
        }
        let pc = self.marginal.require_pieces()?;
        let (lo, hi) = h
            .positive_set()
            .ok_or_else(|| Error::Unsupported("halfspace on a 1-D problem".into()))?;
        Ok((self.mean_eta + self.gain(&pc, lo, hi)).clamp(0.0, 1.0))
    }

    pub fn excess_error(&self, h: &Hypothesis, nu: f64) -> Result<f64> {
        Ok(self.true_error(h)? - nu)
    }

    /// Points where er(h_z) or er(h_[a,b]) can have a kink or stationary point.
    fn knots(&self) -> Vec<f64> {
        let mut k = vec![0.0, 1.0];
        match &self.posterior {
            Posterior::PolynomialThreshold { z, .. } | Posterior::BoundedThreshold { z, .. } => k.push(*z),
            Posterior::BoundedInterval { a, b, .. } => k.extend([*a, *b]),
            Posterior::NoiselessHalfspace { .. } => {}
        }
        if let Some(pc) = self.marginal.pieces() {
            k.extend(pc.breaks.iter().copied());
        }
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// nu = inf over the class of er(h).
    pub fn noise_rate(&self, class: &HypothesisClass) -> Result<f64> {
        if class.contains(&self.bayes()) {
            return Ok(self.nu_star);
        }
        match class {
            HypothesisClass::Thresholds => {
                // er(h_z) is smooth between knots and monotone there, because
                // 1 - 2 eta only changes sign at a knot
                let best = self
                    .knots()
                    .into_iter()
                    .map(|z| self.true_error(&Hypothesis::Threshold { z }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(best.into_iter().fold(f64::INFINITY, f64::min))
            }
            HypothesisClass::Intervals => {
                let knots = self.knots();
                let mut best = f64::INFINITY;
                for (i, a) in knots.iter().enumerate() {
                    for b in &knots[i + 1..] {
                        // the endpoints 0 and 1 are limits of admissible intervals
                        let pc = self.marginal.require_pieces()?;
                        best = best.min(self.mean_eta + self.gain(&pc, *a, *b));
                    }
                }
                Ok(best.min(self.mean_eta).clamp(0.0, 1.0))
            }
            HypothesisClass::Halfspaces { .. } => Ok(0.0),
            HypothesisClass::Grid(g) => g
                .members()
                .iter()
                .map(|h| self.true_error(h))
                .try_fold(f64::INFINITY, |m, e| e.map(|e| m.min(e))),
            HypothesisClass::Union(parts) => parts
                .iter()
                .map(|c| self.noise_rate(c))
                .try_fold(f64::INFINITY, |m, e| e.map(|e| m.min(e))),
        }
    }

    /// diam of { h in V : er(h) - inf_V er <= eps }.
    pub fn eps_minimal_diameter(&self, eps: f64, v: &VersionSpace) -> Result<f64> {
        match v {
            VersionSpace::Thresholds { pieces } => {
                if pieces.is_empty() {
                    return Err(Error::EmptyVersionSpace);
                }
                let pc = self.marginal.require_pieces()?;
                let (lo, hi) = self.threshold_eps_range(eps, pieces)?;
                Ok(pc.mass(lo, hi))
            }
            VersionSpace::Grid { .. } => {
                let members = v.alive_members().unwrap_or_default();
                if members.is_empty() {
                    return Err(Error::EmptyVersionSpace);
                }
                let errs = members.iter().map(|h| self.true_error(h)).collect::<Result<Vec<_>>>()?;
                let best = errs.iter().copied().fold(f64::INFINITY, f64::min);
                let kept: Vec<&Hypothesis> = members
                    .iter()
                    .zip(&errs)
                    .filter(|(_, e)| **e - best <= eps)
                    .map(|(h, _)| h)
                    .collect();
                let mut d: f64 = 0.0;
                for (i, h1) in kept.iter().enumerate() {
                    for h2 in &kept[i + 1..] {
                        d = d.max(h1.disagreement(h2, &self.marginal)?);
                    }
                }
                Ok(d)
            }
            _ => Err(Error::Unsupported("eps-minimal diameter of this version space".into())),
        }
    }

    /// Smallest and largest z in `pieces` with er(h_z) <= inf + eps.
    pub(crate) fn threshold_eps_range(&self, eps: f64, pieces: &[(f64, f64)]) -> Result<(f64, f64)> {
        let er = |z: f64| self.true_error(&Hypothesis::Threshold { z });
        let knots = self.knots();
        // monotone segments covering the pieces
        let mut segs: Vec<(f64, f64)> = Vec::new();
        for &(lo, hi) in pieces {
            let mut cur = lo;
            for &k in knots.iter().filter(|k| lo < **k && **k < hi) {
                segs.push((cur, k));
                cur = k;
            }
            segs.push((cur, hi));
        }
        let mut inf = f64::INFINITY;
        for &(a, b) in &segs {
            inf = inf.min(er(a)?).min(er(b)?);
        }
        let target = inf + eps;
        let crossing = |a: f64, b: f64, from_left: bool| -> Result<f64> {
            // er is monotone on [a, b]; find the boundary of { er <= target }
            let (mut l, mut r) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (l + r);
                if m <= l || m >= r {
                    break;
                }
                let inside = er(m)? <= target;
                if inside == from_left {
                    r = m;
                } else {
                    l = m;
                }
            }
            Ok(if from_left { r } else { l })
        };
        let mut lo = None;
        for &(a, b) in &segs {
            if er(a)? <= target {
                lo = Some(a);
                break;
            }
            if er(b)? <= target {
                lo = Some(crossing(a, b, true)?);
                break;
            }
        }
        let mut hi = None;
        for &(a, b) in segs.iter().rev() {
            if er(b)? <= target {
                hi = Some(b);
                break;
            }
            if er(a)? <= target {
                hi = Some(crossing(a, b, false)?);
                break;
            }
        }
        match (lo, hi) {
            (Some(l), Some(h)) => Ok((l, h)),
            _ => Err(Error::EmptyVersionSpace),
        }
    }

    /// Largest ratio diam(2^-k) / 2^(-k / kappa) over k = 1..10, measured on
    /// a dense threshold grid and padded by two grid spacings.
    fn certify_mu(&self, kappa: f64) -> Result<f64> {
        let pc = self.marginal.require_pieces()?;
        let n = 20_001;
        let zs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let errs = zs
            .iter()
            .map(|z| self.true_error(&Hypothesis::Threshold { z: *z }))
            .collect::<Result<Vec<_>>>()?;
        let best = errs.iter().copied().fold(f64::INFINITY, f64::min);
        let pad = 2.0 / (n - 1) as f64;
        let mut mu: f64 = 0.0;
        for k in 1..=10 {
            let eps = 0.5f64.powi(k);
            let inside: Vec<f64> = zs
                .iter()
                .zip(&errs)
                .filter(|(_, e)| **e - best <= eps)
                .map(|(z, _)| *z)
                .collect();
            let lo = inside.first().copied().unwrap_or(0.0);
            let hi = inside.last().copied().unwrap_or(0.0);
            let diam = pc.mass((lo - pad).max(0.0), (hi + pad).min(1.0));
            mu = mu.max(diam / eps.powf(1.0 / kappa));
        }
        Ok(mu)
    }
}

/// A serialisable problem description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    PolynomialThreshold {
        alpha: f64,
        z_star: f64,
        #[serde(default)]
        marginal: Marginal,
    },
    BoundedThreshold {
        c: f64,
        z_star: f64,
        #[serde(default)]
        marginal: Marginal,
    },
    NoiselessThreshold {
        z_star: f64,
        #[serde(default)]
        marginal: Marginal,
    },
    BoundedInterval {
        a: f64,
        b: f64,
        c: f64,
        #[serde(default)]
        marginal: Marginal,
    },
    NoiselessHalfspace { w: Vec<f64> },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<NoiseProblem> {
        match self {
            ProblemSpec::PolynomialThreshold { alpha, z_star, marginal } => NoiseProblem::threshold(
                ThresholdFlavor::Polynomial { alpha: *alpha },
                *z_star,
                marginal.clone(),
            ),
            ProblemSpec::BoundedThreshold { c, z_star, marginal } => {
                NoiseProblem::threshold(ThresholdFlavor::Bounded { c: *c }, *z_star, marginal.clone())
            }
            ProblemSpec::NoiselessThreshold { z_star, marginal } => {
                NoiseProblem::threshold(ThresholdFlavor::Noiseless, *z_star, marginal.clone())
            }
            ProblemSpec::BoundedInterval { a, b, c, marginal } => {
                NoiseProblem::bounded_interval(*a, *b, *c, marginal.clone())
            }
            ProblemSpec::NoiselessHalfspace { w } => NoiseProblem::noiseless_halfspace(w.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_threshold_bayes_risk() {
        let p = NoiseProblem::threshold(ThresholdFlavor::Bounded { c: 0.25 }, 0.5, Marginal::Uniform).unwrap();
        assert!((p.nu_star() - 0.25).abs() < 1e-12);
        assert_eq!(p.tsybakov().unwrap().kappa, 1.0);
    }

    #[test]
    fn polynomial_kappa() {
        let p = NoiseProblem::threshold(ThresholdFlavor::Polynomial { alpha: 1.0 }, 0.5, Marginal::Uniform)
            .unwrap();
        let t = p.tsybakov().unwrap();
        assert_eq!(t.kappa, 2.0);
        // diam(eps) = 2 sqrt(2 eps) on the interior scales
        assert!(t.mu >= 2.0 * 2f64.sqrt() - 1e-9 && t.mu < 2.0 * 2f64.sqrt() + 0.01);
    }

    #[test]
    fn noiseless_errors_are_distances() {
        let p = NoiseProblem::threshold(ThresholdFlavor::Noiseless, 0.5, Marginal::Uniform).unwrap();
        assert_eq!(p.nu_star(), 0.0);
        let e = p.true_error(&Hypothesis::Threshold { z: 0.62 }).unwrap();
        assert!((e - 0.12).abs() < 1e-12);
    }

    #[test]
    fn thresholds_on_an_interval_problem() {
        let p = NoiseProblem::bounded_interval(0.3, 0.7, 0.25, Marginal::Uniform).unwrap();
        assert!((p.nu_star() - 0.25).abs() < 1e-12);
        // best threshold is h_0.3: wrong on (0.7, 1], costing 0.5 * 0.3 extra
        let nu1 = p.noise_rate(&HypothesisClass::Thresholds).unwrap();
        assert!((nu1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn spec_round_trip() {
        let s = ProblemSpec::BoundedThreshold {
            c: 0.25,
            z_star: 0.5,
            marginal: Marginal::Uniform,
        };
        let text = toml::to_string(&s).unwrap();
        let back: ProblemSpec = toml::from_str(&text).unwrap();
        assert_eq!(s, back);
    }
}
