use dbal_core::disagreement::{
    close_marginals_lambda, default_r_grid, dyadic_grid, lemma_checks, theta_analytic, theta_estimate, LemmaConfig,
    ThetaMode, ThetaValue,
};
use dbal_core::{Error, Hypothesis, HypothesisClass, Marginal};
use proptest::prelude::*;

fn exact(class: &HypothesisClass, h: &Hypothesis, grid: Option<&[f64]>) -> f64 {
    theta_estimate(class, h, &Marginal::Uniform, 0.0, grid, ThetaMode::Exact).unwrap().value
}

#[test]
fn analytic_values() {
    let t = |z| theta_analytic(&HypothesisClass::Thresholds, &Hypothesis::threshold(z).unwrap(), &Marginal::Uniform);
    assert_eq!(t(0.5).unwrap(), ThetaValue::Exact { value: 2.0 });
    assert_eq!(t(0.0).unwrap(), ThetaValue::Exact { value: 1.0 });
    let i = |a, b| {
        theta_analytic(&HypothesisClass::Intervals, &Hypothesis::interval(a, b).unwrap(), &Marginal::Uniform).unwrap()
    };
    assert_eq!(i(0.1, 0.6), ThetaValue::Exact { value: 4.0 });
    assert_eq!(i(0.45, 0.55), ThetaValue::Exact { value: 1.0 / (0.55 - 0.45) });
    let s = theta_analytic(
        &HypothesisClass::Halfspaces { dim: 4 },
        &Hypothesis::halfspace(vec![1.0, 0.0, 0.0, 0.0]).unwrap(),
        &Marginal::sphere(4).unwrap(),
    )
    .unwrap();
    assert!(s.contains(std::f64::consts::PI * 2.0 / 4.0 + 1e-9));
    assert!(!s.contains(7.0));
    let skewed = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.3, 0.7]).unwrap();
    let err = theta_analytic(&HypothesisClass::Thresholds, &Hypothesis::threshold(0.5).unwrap(), &skewed);
    assert!(matches!(err, Err(Error::Unsupported(_))));
}

#[test]
fn exact_estimates_hit_closed_forms() {
    assert!((exact(&HypothesisClass::Thresholds, &Hypothesis::threshold(0.5).unwrap(), None) - 2.0).abs() < 1e-9);
    assert!((exact(&HypothesisClass::Intervals, &Hypothesis::interval(0.4, 0.6).unwrap(), None) - 5.0).abs() < 1e-9);
}

#[test]
fn monte_carlo_needs_enough_samples() {
    let h = Hypothesis::threshold(0.5).unwrap();
    let mode = ThetaMode::MonteCarlo { samples: 9_999, seed: 1 };
    let r = theta_estimate(&HypothesisClass::Thresholds, &h, &Marginal::Uniform, 0.0, None, mode);
    assert!(matches!(r, Err(Error::InvalidParameter(_))));
}

#[test]
fn grid_is_restricted_to_r0() {
    assert_eq!(default_r_grid(0.0).len(), 20);
    assert!(default_r_grid(0.1).iter().all(|r| *r > 0.1));
    let h = Hypothesis::threshold(0.5).unwrap();
    let r = theta_estimate(&HypothesisClass::Thresholds, &h, &Marginal::Uniform, 1.0, None, ThetaMode::Exact);
    assert!(r.is_err());
}

#[test]
fn lambda_of_close_marginals() {
    let u = Marginal::Uniform;
    assert_eq!(close_marginals_lambda(&u, &u).unwrap(), Some(1.0));
    let skewed = Marginal::piecewise(vec![0.0, 0.5, 1.0], vec![0.25, 0.75]).unwrap();
    assert!((close_marginals_lambda(&u, &skewed).unwrap().unwrap() - 0.5).abs() < 1e-12);
    let half = Marginal::uniform_on(0.0, 0.5).unwrap();
    assert_eq!(close_marginals_lambda(&u, &half).unwrap(), None);
}

#[test]
fn lemma_fixtures_hold() {
    let checks = lemma_checks(&LemmaConfig::default()).unwrap();
    assert!(checks.len() >= 8);
    for c in &checks {
        assert!(c.pass, "{}: {} > {} + {}", c.name, c.lhs, c.rhs, c.slack);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interval_estimate_matches_closed_form(a in 0.01f64..0.9, w in 0.02f64..0.5) {
        let b = (a + w).min(0.99);
        let want = (1.0 / (b - a)).max(4.0);
        let got = exact(&HypothesisClass::Intervals, &Hypothesis::interval(a, b).unwrap(), None);
        prop_assert!((got - want).abs() <= 1e-9 * want, "{} vs {}", got, want);
    }

    #[test]
    fn threshold_is_two_below_the_edges(z in 0.01f64..0.99, k in 1i32..20) {
        let edge = z.min(1.0 - z);
        let grid: Vec<f64> = dyadic_grid(k + 8).into_iter().filter(|r| *r < edge).collect();
        prop_assume!(!grid.is_empty());
        let got = exact(&HypothesisClass::Thresholds, &Hypothesis::threshold(z).unwrap(), Some(&grid));
        prop_assert!((got - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refining_the_grid_never_lowers_the_estimate(z in 0.0f64..=1.0, k in 1i32..15, extra in 1i32..6) {
        let h = Hypothesis::threshold(z).unwrap();
        let coarse = exact(&HypothesisClass::Thresholds, &h, Some(&dyadic_grid(k)));
        let fine = exact(&HypothesisClass::Thresholds, &h, Some(&dyadic_grid(k + extra)));
        prop_assert!(fine >= coarse);
    }

    #[test]
    fn estimate_bounded_by_inverse_r0(z in 0.0f64..=1.0, r0 in 0.001f64..0.4, seed in any::<u64>()) {
        let h = Hypothesis::threshold(z).unwrap();
        let mode = ThetaMode::MonteCarlo { samples: 10_000, seed };
        let t = theta_estimate(&HypothesisClass::Thresholds, &h, &Marginal::Uniform, r0, None, mode).unwrap();
        prop_assert!(t.value <= 1.0 / r0 + 3.0 * t.stderr);
        prop_assert!(t.r_grid.iter().all(|r| *r > r0));
    }
}
