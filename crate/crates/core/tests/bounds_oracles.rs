use dbal_core::bounds::{
    confidence_s, dhm_beta, dhm_threshold_vc, hat_bound, hat_diameter, hat_phi, lower_bound, rademacher_process,
    upper_bound, vc_deviation, LocalBoundConfig, RademacherDraw,
};
use dbal_core::{Hypothesis, HypothesisClass, Label, LabeledPoint};
use proptest::prelude::*;

#[test]
fn vc_deviation_values() {
    assert!(vc_deviation(0, 0.1, 1).is_infinite());
    let direct = 0.01 + ((80f64).ln() + (200.0 * std::f64::consts::E).ln()).sqrt() / 10.0;
    let g = vc_deviation(100, 0.05, 1);
    assert!((g - direct).abs() < 1e-12);
    assert!((g - 0.33681).abs() < 1e-5);
    assert!(vc_deviation(400, 0.05, 1) < g);
}

#[test]
fn ub_lb_examples() {
    assert_eq!(upper_bound(0.0, 0, 0.05, 1), 1.0);
    assert_eq!(lower_bound(0.0, 0, 0.05, 1), 0.0);
    assert!((upper_bound(0.3, 100, 0.05, 1) - 0.63681).abs() < 1e-5);
    assert_eq!(lower_bound(0.3, 100, 0.05, 1), 0.0);
}

#[test]
fn dhm_beta_example() {
    // S(thresholds, 20) = 21
    let b = dhm_beta(10, 0.1, (21f64).ln());
    assert!((b - 2.463457).abs() < 1e-6);
    assert_eq!(dhm_threshold_vc(0.0, 0.0, b), b * b);
    assert!((dhm_threshold_vc(0.25, 0.0, b) - (b * b + 0.5 * b)).abs() < 1e-12);
    let mut prev = f64::INFINITY;
    let mut m = 8;
    while m <= 1 << 20 {
        let v = dhm_beta(m, 0.1, ((2 * m + 1) as f64).ln());
        assert!(v < prev);
        prev = v;
        m *= 2;
    }
}

#[test]
fn confidence_s_values() {
    assert!((confidence_s(100, 0.05) - 17.309447).abs() < 1e-6);
    assert!((confidence_s(1, 0.5) - 4.149440).abs() < 1e-6);
    assert!(confidence_s(0, 0.5).is_infinite());
}

#[test]
fn rademacher_hand_value() {
    let h1 = Hypothesis::threshold(0.25).unwrap();
    let h2 = Hypothesis::threshold(0.75).unwrap();
    let xs = [0.1, 0.5, 0.9];
    let sample: Vec<(usize, &[f64])> = xs.iter().enumerate().map(|(i, x)| (i + 1, std::slice::from_ref(x))).collect();
    let draw = RademacherDraw::from_signs(vec![1, -1, 1]).unwrap();
    let f = |x: &[f64]| h1.predict_1d(x[0]).sign() - h2.predict_1d(x[0]).sign();
    assert_eq!(rademacher_process(f, &sample, &draw).unwrap(), -2.0 / 3.0);
    let zero = |_: &[f64]| 0.0;
    assert_eq!(rademacher_process(zero, &sample, &draw).unwrap(), 0.0);
}

fn pts(xs: &[f64], ys: &[i8]) -> Vec<LabeledPoint> {
    xs.iter()
        .zip(ys)
        .enumerate()
        .map(|(i, (x, y))| LabeledPoint::new(i + 1, *x, Label::from_bool(*y > 0)))
        .collect()
}

#[test]
fn hand_diameter_of_four_points() {
    let s = pts(&[0.2, 0.4, 0.6, 0.8], &[-1, -1, 1, 1]);
    let d = hat_diameter(0.25, &[], &s, &HypothesisClass::Thresholds).unwrap();
    assert_eq!(d, 0.5);
    assert_eq!(hat_diameter(0.0, &[], &s, &HypothesisClass::Thresholds).unwrap(), 0.0);
}

#[test]
fn bound_conventions() {
    let cfg = LocalBoundConfig::empirical();
    let draw = RademacherDraw::new(1);
    let b = hat_bound(&[], 0.05, &[], &HypothesisClass::Thresholds, &cfg, &draw).unwrap();
    assert!(b.value.is_infinite());
    let one = pts(&[0.3], &[1]);
    let b = hat_bound(&one, 0.05, &[], &HypothesisClass::Thresholds, &cfg, &draw).unwrap();
    assert_eq!(b.value, 1.0);
    assert!(b.vacuous);
}

/// Positive sets a 1-D class can induce on sorted points, as index ranges.
fn labelings(n: usize, intervals: bool) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    if intervals {
        out.push(vec![false; n]);
        for i in 0..n {
            for j in i + 1..=n {
                out.push((0..n).map(|k| i <= k && k < j).collect());
            }
        }
    } else {
        for i in 0..=n {
            out.push((0..n).map(|k| k >= i).collect());
        }
    }
    out
}

/// D-hat and phi-hat by enumerating every labeling and every pair.
fn brute(eps: f64, l: &[LabeledPoint], s: &[LabeledPoint], intervals: bool, draw: &RademacherDraw) -> Option<(f64, f64)> {
    let mut all: Vec<(f64, Label, Option<usize>)> = s.iter().map(|p| (p.x, p.label, Some(p.index))).collect();
    all.extend(l.iter().map(|p| (p.x, p.label, None)));
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let cands: Vec<Vec<bool>> = labelings(all.len(), intervals)
        .into_iter()
        .filter(|lab| all.iter().zip(lab).all(|(p, pos)| p.2.is_some() || p.1.is_pos() == *pos))
        .collect();
    let err = |lab: &Vec<bool>| all.iter().zip(lab).filter(|(p, pos)| p.2.is_some() && p.1.is_pos() != **pos).count();
    let best = cands.iter().map(err).min()?;
    let n = s.len() as f64;
    let near: Vec<&Vec<bool>> = cands.iter().filter(|c| (err(c) as f64) <= best as f64 + eps * n + 1e-9).collect();
    let mut d: f64 = 0.0;
    let mut phi: f64 = 0.0;
    for a in &near {
        for b in &near {
            let mut dis = 0;
            let mut r = 0.0;
            for ((p, x), y) in all.iter().zip(a.iter()).zip(b.iter()) {
                if let Some(i) = p.2 {
                    dis += (x != y) as usize;
                    let f = (*x as i32 - *y as i32) as f64 * 2.0;
                    r += draw.sign(i) as f64 * f;
                }
            }
            d = d.max(dis as f64 / n);
            phi = phi.max(r / n / 2.0);
        }
    }
    Some((d, phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn diameter_and_phi_match_enumeration(
        xs in prop::collection::btree_set(1u32..999, 1..12),
        labels in prop::collection::vec(any::<bool>(), 12),
        n_l in 0usize..3,
        eps_k in 0u32..6,
        intervals in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let xs: Vec<f64> = xs.into_iter().map(|v| v as f64 / 1000.0).collect();
        let n_l = n_l.min(xs.len() - 1);
        // L labels come from a fixed interval so C[L] is never empty
        let truth = |x: f64| (0.3..0.7).contains(&x);
        let l: Vec<LabeledPoint> = xs[..n_l].iter().enumerate()
            .map(|(i, x)| LabeledPoint::new(1000 + i, *x, Label::from_bool(truth(*x) || !intervals && *x >= 0.3)))
            .collect();
        let s: Vec<LabeledPoint> = xs[n_l..].iter().zip(&labels).enumerate()
            .map(|(i, (x, y))| LabeledPoint::new(i + 1, *x, Label::from_bool(*y)))
            .collect();
        let class = if intervals { HypothesisClass::Intervals } else { HypothesisClass::Thresholds };
        let draw = RademacherDraw::new(seed);
        let eps = eps_k as f64 / 8.0;
        let (d, phi) = brute(eps, &l, &s, intervals, &draw).unwrap();
        let got_d = hat_diameter(eps, &l, &s, &class).unwrap();
        let got_phi = hat_phi(eps, &l, &s, &class, &draw).unwrap();
        prop_assert!((got_d - d).abs() < 1e-12, "D-hat {} vs {}", got_d, d);
        prop_assert!((got_phi - phi).abs() < 1e-12, "phi-hat {} vs {}", got_phi, phi);
    }

    #[test]
    fn confidence_s_halving_delta_adds_ln2(m in 1usize..100_000, d in 0.001f64..0.9) {
        let diff = confidence_s(m, d / 2.0) - confidence_s(m, d);
        prop_assert!((diff - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn ub_lb_sandwich(er in 0.0f64..=1.0, m in 0usize..5000, d in 0.001f64..0.5) {
        let (u, l) = (upper_bound(er, m, d, 1), lower_bound(er, m, d, 1));
        prop_assert!(l <= er && er <= u);
        prop_assert!((0.0..=1.0).contains(&l) && (0.0..=1.0).contains(&u));
        if m > 0 {
            prop_assert!(u - l <= 2.0 * vc_deviation(m, d, 1) + 1e-12);
        }
    }

    #[test]
    fn hat_bound_monotone_in_delta(
        xs in prop::collection::vec(0.0f64..1.0, 1..60),
        flip in prop::collection::vec(any::<bool>(), 60),
        seed in any::<u64>(),
    ) {
        let s: Vec<LabeledPoint> = xs.iter().zip(&flip).enumerate()
            .map(|(i, (x, f))| LabeledPoint::new(i + 1, *x, Label::from_bool((*x >= 0.5) ^ (*f && i % 5 == 0))))
            .collect();
        // small constants so the search actually moves
        let cfg = LocalBoundConfig { k: 0.05, c: 1.5, floor_exp: -12 };
        let draw = RademacherDraw::new(seed);
        let loose = hat_bound(&s, 0.2, &[], &HypothesisClass::Thresholds, &cfg, &draw).unwrap().value;
        let tight = hat_bound(&s, 0.01, &[], &HypothesisClass::Thresholds, &cfg, &draw).unwrap().value;
        prop_assert!(tight >= loose);
    }
}
