use dbal_core::algorithms::spec::AlgorithmSpec;
use dbal_core::harness::{
    emit_report, fit_points, fit_rate, run_experiment, write_csv, ExperimentConfig, LearningCurve, OutputConfig,
    RateModel,
};
use dbal_core::hypothesis::ClassSpec;
use dbal_core::noise::ProblemSpec;
use dbal_core::{Error, Marginal, VersionSpace};
use proptest::prelude::*;

fn config(algorithms: Vec<AlgorithmSpec>, budgets: Vec<usize>, trials: usize) -> ExperimentConfig {
    ExperimentConfig {
        name: "test".into(),
        problem: ProblemSpec::NoiselessThreshold {
            z_star: 0.3,
            marginal: Marginal::Uniform,
        },
        class: ClassSpec::Thresholds,
        algorithms,
        budgets,
        trials,
        base_seed: 11,
        output: OutputConfig::default(),
    }
}

fn cal() -> AlgorithmSpec {
    AlgorithmSpec::Cal {
        unlabeled_cap: 1_000_000,
        skip_ahead: false,
    }
}

#[test]
fn power_law_fit_of_exact_curve() {
    let pts: Vec<(usize, f64)> = [16, 32, 64, 128, 256].iter().map(|&n| (n, 1.0 / n as f64)).collect();
    let f = fit_rate(&LearningCurve::from_medians("x", &pts), RateModel::PowerLaw).unwrap();
    assert!((f.slope + 1.0).abs() < 1e-6);
    assert!((f.r2 - 1.0).abs() < 1e-9);
    assert_eq!(f.range, (16, 256));
    assert_eq!(f.points, 5);
}

#[test]
fn exponential_fit_of_exact_curve() {
    let pts: Vec<(usize, f64)> = (1..=8).map(|k| (10 * k, 2f64.powf(-((10 * k) as f64) / 10.0))).collect();
    let f = fit_rate(&LearningCurve::from_medians("x", &pts), RateModel::Exponential).unwrap();
    assert!((f.slope + std::f64::consts::LN_2 / 10.0).abs() < 1e-9);
    assert!((f.r2 - 1.0).abs() < 1e-9);
}

#[test]
fn too_few_points() {
    assert_eq!(fit_points(&[1.0, 2.0], &[1.0, 2.0]), Err(Error::TooFewPoints(2)));
    let c = LearningCurve::from_medians("x", &[(10, 0.1), (20, 0.0), (40, 0.0), (80, 0.05)]);
    assert_eq!(fit_rate(&c, RateModel::PowerLaw), Err(Error::TooFewPoints(2)));
}

#[test]
fn csv_is_reproducible() {
    let cfg = config(vec![cal(), AlgorithmSpec::Passive], vec![5, 10, 20], 4);
    let write = || {
        let mut buf = Vec::new();
        write_csv(&mut buf, &run_experiment(&cfg).unwrap()).unwrap();
        buf
    };
    let a = write();
    assert_eq!(a, write());
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("algorithm,n,trial,excess_error,labels_used,unlabeled_used,seed\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3 * 4);
}

#[test]
fn empty_curves_give_header_only() {
    let mut buf = Vec::new();
    write_csv(&mut buf, &[]).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
}

#[test]
fn zero_budget_returns_a_representative() {
    let cfg = config(vec![cal()], vec![0], 1);
    let curves = run_experiment(&cfg).unwrap();
    let rec = &curves[0].records[0];
    assert_eq!(rec.labels_used, 0);
    let problem = cfg.problem.build().unwrap();
    let class = cfg.class.build().unwrap();
    let h = VersionSpace::full(&class).representative().unwrap();
    let want = problem.true_error(&h).unwrap() - problem.noise_rate(&class).unwrap();
    assert!((rec.excess_error - want).abs() < 1e-12);
}

#[test]
fn cal_medians_decrease_with_budget() {
    let cfg = config(vec![cal()], vec![10, 20, 30, 40], 50);
    let c = &run_experiment(&cfg).unwrap()[0];
    let meds: Vec<f64> = c.summaries.iter().map(|s| s.median).collect();
    assert!(meds.windows(2).all(|w| w[1] <= w[0]), "{meds:?}");
    assert!(c.records.iter().all(|r| r.labels_used <= r.n));
}

#[test]
fn toml_round_trip() {
    let cfg = config(vec![cal(), AlgorithmSpec::Passive], vec![8, 16, 32], 3);
    let text = cfg.to_toml().unwrap();
    assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), cfg);
}

#[test]
fn invalid_configs_are_rejected() {
    for bad in [
        config(vec![cal()], vec![16, 8], 3),
        config(vec![cal()], vec![], 3),
        config(vec![cal()], vec![8], 0),
        config(vec![], vec![8], 1),
    ] {
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
    }
    assert!(ExperimentConfig::from_toml("name = 1").is_err());
}

#[test]
fn report_has_one_rates_row_per_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(vec![cal(), AlgorithmSpec::Passive], vec![8, 16, 32, 64], 5);
    cfg.problem = ProblemSpec::BoundedThreshold {
        c: 0.2,
        z_star: 0.5,
        marginal: Marginal::Uniform,
    };
    cfg.output.dir = dir.path().to_path_buf();
    let curves = run_experiment(&cfg).unwrap();
    let fits: Vec<_> = curves
        .iter()
        .filter_map(|c| fit_rate(c, RateModel::PowerLaw).ok().map(|f| (c.algorithm.clone(), f)))
        .collect();
    let paths = emit_report(&curves, &fits, &cfg, &[]).unwrap();
    let summary = std::fs::read_to_string(&paths.summary).unwrap();
    let rates = summary.split("## Rates").nth(1).unwrap();
    for c in &curves {
        let rows = rates.lines().filter(|l| l.starts_with(&format!("| {} |", c.algorithm))).count();
        assert_eq!(rows, 1, "{}", c.algorithm);
    }
    assert!(paths.csv.exists());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fit_recovers_any_power_law(slope in -3.0f64..-0.1, scale in 0.01f64..1.0) {
        let pts: Vec<(usize, f64)> = [4, 8, 16, 32, 64].iter().map(|&n| (n, scale * (n as f64).powf(slope))).collect();
        let f = fit_rate(&LearningCurve::from_medians("x", &pts), RateModel::PowerLaw).unwrap();
        prop_assert!((f.slope - slope).abs() < 1e-9);
        prop_assert!((f.intercept - scale.ln()).abs() < 1e-9);
    }
}
