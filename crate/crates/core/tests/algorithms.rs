use dbal_core::algorithms::{replay, AlgorithmSpec, MassMode, RunResult, RunSpec, StreamSpec, ThresholdKind};
use dbal_core::bounds::LocalBoundConfig;
use dbal_core::harness::acceptance::hand_fixtures;
use dbal_core::hypothesis::ClassSpec;
use dbal_core::noise::ProblemSpec;
use dbal_core::{Error, Label, LabeledStream, Marginal};
use proptest::prelude::*;

fn noiseless(z_star: f64) -> ProblemSpec {
    ProblemSpec::NoiselessThreshold {
        z_star,
        marginal: Marginal::Uniform,
    }
}

fn run(alg: &AlgorithmSpec, problem: &ProblemSpec, seed: u64, n: usize) -> (RunResult, LabeledStream) {
    let mut s = LabeledStream::new(problem.build().unwrap(), seed, n);
    let r = alg.run(&ClassSpec::Thresholds, &mut s, n, false).unwrap();
    (r, s)
}

fn dhm(threshold: ThresholdKind) -> AlgorithmSpec {
    AlgorithmSpec::Dhm {
        delta: 0.05,
        threshold,
        unlabeled_cap: 100_000,
        bound: LocalBoundConfig::default(),
        rademacher_seed: 0,
    }
}

#[test]
fn hand_fixtures_match_and_replay() {
    for (spec, want) in hand_fixtures().unwrap() {
        assert_eq!(spec.execute().unwrap(), want);
        let text = spec.trace_lines().unwrap().join("\n");
        assert_eq!(replay(&text).unwrap(), want.len());
    }
}

#[test]
fn tampered_trace_is_rejected() {
    let (spec, _) = hand_fixtures().unwrap().remove(0);
    let mut lines = spec.trace_lines().unwrap();
    lines[1] = lines[1].replace("\"index\":1", "\"index\":2");
    let err = replay(&lines.join("\n")).unwrap_err();
    assert!(matches!(err, Error::ReplayMismatch { line: 2, .. }), "{err}");
    lines.pop();
    assert!(matches!(replay(&lines.join("\n")), Err(Error::ReplayMismatch { .. })));
    assert!(replay("").is_err());
}

#[test]
fn trace_of_a_generated_stream_replays() {
    let spec = RunSpec::Algorithm {
        class: ClassSpec::Thresholds,
        stream: StreamSpec::Problem {
            problem: ProblemSpec::BoundedThreshold {
                c: 0.2,
                z_star: 0.4,
                marginal: Marginal::Uniform,
            },
            seed: 5,
        },
        budget: 40,
        algorithm: dhm(ThresholdKind::Vc),
    };
    let text = spec.trace_lines().unwrap().join("\n");
    assert!(replay(&text).unwrap() > 0);
}

#[test]
fn zero_budget_requests_nothing() {
    for alg in [
        dhm(ThresholdKind::Vc),
        dhm(ThresholdKind::Local),
        AlgorithmSpec::Passive,
        AlgorithmSpec::Cal {
            unlabeled_cap: 1000,
            skip_ahead: true,
        },
    ] {
        let (r, _) = run(&alg, &noiseless(0.5), 1, 0);
        assert_eq!(r.labels_used, 0, "{}", alg.name());
        assert!(r.classifier.is_some(), "{}", alg.name());
    }
}

#[test]
fn a2_on_a_grid_stays_within_budget() {
    let alg = AlgorithmSpec::A2 {
        delta: 0.05,
        mass_mode: MassMode::default(),
        unlabeled_cap: 100_000,
    };
    let problem = noiseless(0.37);
    let mut s = LabeledStream::new(problem.build().unwrap(), 3, 64);
    let r = alg.run(&ClassSpec::ThresholdGrid { size: 65 }, &mut s, 64, false).unwrap();
    assert!(r.labels_used <= 64);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // Noiseless CAL never leaves the version space, with or without
    // skipping ahead.
    #[test]
    fn cal_is_consistent_either_way(z in 0.05f64..0.95, seed in any::<u64>(), n in 1usize..40) {
        let problem = noiseless(z);
        for skip_ahead in [false, true] {
            let alg = AlgorithmSpec::Cal { unlabeled_cap: 1_000_000, skip_ahead };
            let (r, s) = run(&alg, &problem, seed, n);
            prop_assert!(r.labels_used <= n);
            let h = r.classifier.unwrap();
            prop_assert_eq!(r.queried.len(), r.labels_used);
            for q in &r.queried {
                let x = s.seen_1d(q.index);
                prop_assert_eq!(q.label, Label::from_bool(x >= z));
                prop_assert_eq!(h.predict_1d(x), q.label);
            }
        }
    }

    #[test]
    fn dhm_noiseless_inferences_are_correct(z in 0.05f64..0.95, seed in any::<u64>()) {
        let problem = noiseless(z);
        let (r, s) = run(&dhm(ThresholdKind::Vc), &problem, seed, 200);
        prop_assert!(r.labels_used <= 200);
        for p in &r.inferred {
            let x = s.seen_1d(p.index);
            prop_assert_eq!(p.label, Label::from_bool(x >= z));
        }
    }
}
