mod common;

use std::f64::consts::SQRT_2;

use proptest::prelude::*;
use rotsurf::integrator::{launch_separatrix, IntegratorConfig};
use rotsurf::shooting::{
    classify_lambda, corner_miss, find_lambda0, portrait, ClassifyConfig, LambdaClass,
};

fn tight() -> ClassifyConfig {
    ClassifyConfig::from(IntegratorConfig::default().scaled_tolerances(0.1))
}

#[test]
fn threshold_matches_the_oracle_and_the_launch() {
    let cfg = ClassifyConfig::default();
    let est = find_lambda0(&cfg, 1e-10).unwrap();
    assert!(est.bracket.1 - est.bracket.0 <= 1e-10);
    assert!(est.value > SQRT_2);
    assert!((est.value - common::LAMBDA0_REFERENCE).abs() < 1e-8);
    // The oracle's own error is about 1e-12 at this step.
    let oracle = common::lambda0_oracle(2e-3, 1e-11);
    assert!(
        (est.value - oracle).abs() < 1e-8,
        "{} vs {oracle}",
        est.value
    );
    let launched = launch_separatrix(&cfg.integrator).unwrap().last().z;
    assert!((launched - est.value).abs() < 1e-8);
}

#[test]
fn threshold_is_stable_under_tightening() {
    let a = find_lambda0(&ClassifyConfig::default(), 1e-10)
        .unwrap()
        .value;
    let b = find_lambda0(&tight(), 1e-10).unwrap().value;
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

#[test]
fn classification_sweep() {
    let lambda0 = common::LAMBDA0_REFERENCE;
    let lambdas = [10.0, lambda0 + 0.5, 0.5 * (SQRT_2 + lambda0), SQRT_2, 1.2];
    let report = portrait(&lambdas, &ClassifyConfig::default()).unwrap();
    let names: Vec<&str> = report
        .entries
        .iter()
        .map(|e| e.class.as_ref().unwrap().name())
        .collect();
    assert_eq!(
        names,
        [
            "IncompleteLow",
            "Sphere",
            "IncompleteHigh",
            "Periodic",
            "Periodic"
        ]
    );
    for entry in &report.entries {
        let class = entry.class.as_ref().unwrap();
        if let Some((limit, half_span)) = class.boundary_limit() {
            if let LambdaClass::Sphere { .. } = class {
                assert!(limit.z.abs() < 1e-6);
            } else {
                assert!(limit.z > 0.0 && limit.z < 1.0);
            }
            assert!(half_span.is_finite() && half_span > 0.0);
        }
        assert!(entry.polyline.len() > 2);
    }
}

#[test]
fn crossing_height_grows_with_lambda() {
    let cfg = ClassifyConfig::default();
    let heights: Vec<f64> = [3.3, 3.5, 4.0, 5.0, 8.0]
        .iter()
        .map(|&l| match classify_lambda(l, &cfg).unwrap() {
            LambdaClass::Periodic {
                crossing_height, ..
            } => crossing_height,
            other => panic!("{l}: {other:?}"),
        })
        .collect();
    assert!(heights[0] > 1.0);
    assert!(heights.windows(2).all(|w| w[1] > w[0]), "{heights:?}");
}

#[test]
fn corner_miss_changes_sign_once() {
    let cfg = ClassifyConfig::default();
    let grid: Vec<f64> = (0..=40).map(|k| 1.5 + 0.1 * k as f64).collect();
    let signs: Vec<bool> = grid
        .iter()
        .map(|&l| corner_miss(l, &cfg).unwrap() > 0.0)
        .collect();
    let flips = signs.windows(2).filter(|w| w[0] != w[1]).count();
    assert_eq!(flips, 1);
    assert!(!signs[0] && signs[signs.len() - 1]);
}

#[test]
fn classes_survive_tightening() {
    let (loose, strict) = (ClassifyConfig::default(), tight());
    for l in [1.1, 1.3, 1.5, 2.0, 3.0, 3.2, 3.25, 4.0, 7.0] {
        assert_eq!(
            classify_lambda(l, &loose).unwrap().name(),
            classify_lambda(l, &strict).unwrap().name(),
            "λ = {l}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Different λ below the threshold end at different boundary points.
    #[test]
    fn boundary_limits_are_injective(a in 1.02f64..3.2, b in 1.02f64..3.2) {
        prop_assume!((a - b).abs() > 1e-3);
        prop_assume!((a - SQRT_2).abs() > 1e-6 && (b - SQRT_2).abs() > 1e-6);
        let cfg = ClassifyConfig::default();
        let (pa, _) = classify_lambda(a, &cfg).unwrap().boundary_limit().unwrap();
        let (pb, _) = classify_lambda(b, &cfg).unwrap().boundary_limit().unwrap();
        prop_assert!((pa.theta - pb.theta).hypot(pa.z - pb.z) > 1e-6);
    }
}
