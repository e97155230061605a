use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::runner::{quantile, LearningCurve};
use crate::error::{Error, Result};
use crate::noise::TsybakovTag;

/// Medians at or below this are reported but not fitted.
pub const ERROR_FLOOR: f64 = 1e-7;

const BOOTSTRAP_RESAMPLES: usize = 200;
const BOOTSTRAP_SEED: u64 = 0xb0_07;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateModel {
    /// ln err = intercept + slope ln n.
    PowerLaw,
    /// ln err = intercept + slope n.
    Exponential,
}

impl RateModel {
    fn x(&self, n: usize) -> f64 {
        match self {
            RateModel::PowerLaw => (n as f64).ln(),
            RateModel::Exponential => n as f64,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RateModel::PowerLaw => "power-law",
            RateModel::Exponential => "exponential",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub model: RateModel,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Smallest and largest budget used.
    pub range: (usize, usize),
    pub points: usize,
    /// 2.5% and 97.5% percentiles of the bootstrap slopes.
    pub bootstrap: (f64, f64),
}

/// Ordinary least squares of y on x: (slope, intercept, R^2).
pub fn fit_points(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::TooFewPoints(xs.len().min(ys.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParameter("all fit abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        if ss_res == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok((slope, intercept, r2))
}

fn usable(model: RateModel, n: usize, median: f64) -> bool {
    median > ERROR_FLOOR && (model == RateModel::Exponential || n > 0)
}

/// Least squares on the log median excess error, with a bootstrap interval
/// for the slope from resampling trials within each budget.
pub fn fit_rate(curve: &LearningCurve, model: RateModel) -> Result<RateFit> {
    let pts: Vec<(usize, f64)> = curve
        .summaries
        .iter()
        .filter(|s| usable(model, s.n, s.median))
        .map(|s| (s.n, s.median))
        .collect();
    if pts.len() < 3 {
        return Err(Error::TooFewPoints(pts.len()));
    }
    let xs: Vec<f64> = pts.iter().map(|p| model.x(p.0)).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r2) = fit_points(&xs, &ys)?;

    let per_budget: Vec<(usize, Vec<f64>)> = curve.summaries.iter().map(|s| (s.n, curve.errors_at(s.n))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut buf = Vec::new();
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let mut bx = Vec::new();
        let mut by = Vec::new();
        for (n, errs) in &per_budget {
            buf.clear();
            buf.extend((0..errs.len()).map(|_| errs[rng.random_range(0..errs.len())]));
            let med = quantile(&buf, 0.5);
            if usable(model, *n, med) {
                bx.push(model.x(*n));
                by.push(med.ln());
            }
        }
        if let Ok((s, _, _)) = fit_points(&bx, &by) {
            slopes.push(s);
        }
    }
    let bootstrap = if slopes.is_empty() {
        (slope, slope)
    } else {
        (quantile(&slopes, 0.025), quantile(&slopes, 0.975))
    };
    Ok(RateFit {
        model,
        slope,
        intercept,
        r2,
        range: (pts[0].0, pts[pts.len() - 1].0),
        points: pts.len(),
        bootstrap,
    })
}

/// The decay form the theory predicts for an algorithm on a problem with the
/// given noise condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub model: RateModel,
    /// Predicted slope, when the theory pins it down.
    pub slope: Option<f64>,
}

/// Passive ERM: n^(-kappa/(2kappa-1)). Disagreement-based active learners:
/// n^(-kappa/(2kappa-2)) for kappa > 1 and exponential decay at kappa = 1.
/// CAL is only analysed without noise.
pub fn predicted_rate(algorithm: &str, tsybakov: Option<TsybakovTag>, noiseless: bool) -> Option<Prediction> {
    let kappa = tsybakov.map(|t| t.kappa);
    match algorithm {
        "passive" => kappa.map(|k| Prediction {
            model: RateModel::PowerLaw,
            slope: Some(-k / (2.0 * k - 1.0)),
        }),
        "cal" if noiseless => Some(Prediction {
            model: RateModel::Exponential,
            slope: None,
        }),
        "a2" | "dhm_vc" | "dhm_local" | "model_select" => match kappa {
            _ if noiseless => Some(Prediction {
                model: RateModel::Exponential,
                slope: None,
            }),
            Some(k) if k > 1.0 => Some(Prediction {
                model: RateModel::PowerLaw,
                slope: Some(-k / (2.0 * k - 2.0)),
            }),
            Some(_) => Some(Prediction {
                model: RateModel::Exponential,
                slope: None,
            }),
            None => None,
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let (s, i, r2) = fit_points(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((s - 2.0).abs() < 1e-12 && (i - 1.0).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_above_floor() {
        let c = LearningCurve::from_medians("x", &[(1, 0.1), (2, 0.01), (3, 1e-9)]);
        assert_eq!(fit_rate(&c, RateModel::PowerLaw), Err(Error::TooFewPoints(2)));
    }

    #[test]
    fn passive_kappa_two() {
        let t = TsybakovTag { kappa: 2.0, mu: 1.0 };
        let p = predicted_rate("passive", Some(t), false).unwrap();
        assert!((p.slope.unwrap() + 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(predicted_rate("dhm_local", Some(t), false).unwrap().slope, Some(-1.0));
    }
}
