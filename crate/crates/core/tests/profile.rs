use std::f64::consts::{PI, SQRT_2};
use std::fs::File;
use std::io::{BufReader, BufWriter};

use rotsurf::integrator::{integrate, Direction, IntegratorConfig};
use rotsurf::phase_field::PhasePoint;
use rotsurf::profile::{
    build_profile, cylinder_profile, extend_separatrix, find_period, find_self_intersection,
    lambda_profile, lambda_trajectory, read_profile_csv, separatrix_profile, sphere_profile,
    verify_profile, write_profile_csv, Continuity, ExtensionSpec, JunctionKind, ProfileKind,
};
use rotsurf::shooting::{find_lambda0, ClassifyConfig};

fn lambda0() -> f64 {
    find_lambda0(&ClassifyConfig::default(), 1e-12)
        .unwrap()
        .value
}

#[test]
fn closed_form_profiles_verify() {
    let sphere = verify_profile(&sphere_profile(4001).unwrap(), 1e-3).unwrap();
    assert!(sphere.max_curvature_residual <= 1e-8, "{sphere:?}");
    assert!(sphere.passes(1e-8));
    let cyl = verify_profile(&cylinder_profile(4.0, 101).unwrap(), 1e-3).unwrap();
    assert!(cyl.max_curvature_residual <= 1e-8);
    assert!(cyl.passes(1e-8));
}

#[test]
fn integrated_sphere_is_the_round_profile() {
    let cfg = IntegratorConfig::default();
    let half = integrate(PhasePoint::new(PI, SQRT_2), Direction::Backward, &cfg).unwrap();
    let p = build_profile(&half).unwrap();
    for s in p.samples().iter().filter(|s| s.t > -PI / SQRT_2 + 1e-3) {
        let alpha_x = -SQRT_2 * (s.t / SQRT_2).sin() - SQRT_2;
        assert!((s.x - (alpha_x + SQRT_2)).abs() < 1e-8, "t = {}", s.t);
        assert!((s.z - SQRT_2 * (s.t / SQRT_2).cos()).abs() < 1e-8);
    }
}

#[test]
fn profiles_are_mirror_symmetric() {
    let cfg = ClassifyConfig::default();
    for lambda in [1.2, 2.5, 4.0] {
        let (p, _) = lambda_profile(lambda, None, 1e-2, &cfg).unwrap();
        let n = p.len();
        for i in 0..n / 2 {
            let (a, b) = (p.samples()[i], p.samples()[n - 1 - i]);
            assert!((a.t + b.t).abs() < 1e-12);
            assert!((a.x + b.x).abs() < 1e-8, "λ = {lambda}, t = {}", b.t);
            assert!((a.z - b.z).abs() < 1e-8);
            assert!((a.theta + b.theta - 2.0 * PI).abs() < 1e-8);
        }
    }
}

#[test]
fn periodic_curve_repeats() {
    let lambda = lambda0() + 1.0;
    let info = find_period(lambda, &ClassifyConfig::default()).unwrap();
    assert!(info.t0 > info.t1 && info.t1 > 0.0);
    assert_eq!(info.period, 2.0 * info.t0);
    assert!(info.z_residual <= 1e-8, "{info:?}");
    assert!(info.theta_residual <= 1e-8, "{info:?}");
    assert!(info.x_shift_residual <= 1e-8, "{info:?}");
    assert!(info.x_shift > 0.0);
}

#[test]
fn periodic_profile_over_two_periods_verifies() {
    let cfg = ClassifyConfig::default();
    let lambda = lambda0() + 1.0;
    let info = find_period(lambda, &cfg).unwrap();
    let (p, _) = lambda_profile(lambda, Some(2.0 * info.t0), 1e-3, &cfg).unwrap();
    let (lo, hi) = p.span();
    assert!((hi - lo - 4.0 * info.t0).abs() < 1e-9);
    let report = verify_profile(&p, 1e-3).unwrap();
    assert!(report.max_curvature_residual <= 1e-4, "{report:?}");
    assert!(report.passes(1e-4));
}

#[test]
fn self_intersection_witness() {
    let cfg = ClassifyConfig::default();
    let lambda = lambda0() + 1.0;
    let info = find_period(lambda, &cfg).unwrap();
    let (p, _) = lambda_profile(lambda, Some(info.t0), 1e-3, &cfg).unwrap();
    assert!(p.position_at(-info.t0).unwrap().0 < 0.0);
    assert!(p.position_at(-info.t1).unwrap().0 > 0.0);
    let hit = find_self_intersection(&p, info.t0, info.t1).unwrap();
    assert!(hit.t2 > info.t1 && hit.t2 < info.t0);
    assert!(hit.x_residual <= 1e-8, "{hit:?}");
    assert!(hit.z_residual <= 1e-8, "{hit:?}");
    // Same root from the trajectory itself rather than the sampled profile.
    let (_, traj) = lambda_trajectory(lambda, None, &cfg).unwrap();
    assert!(traj.dense_eval(-hit.t2).unwrap().x.abs() < 1e-8);
}

#[test]
fn glued_copies_are_smooth() {
    let (p, report) = extend_separatrix(
        &ExtensionSpec::new(2, vec![0.0]),
        &ClassifyConfig::default(),
    )
    .unwrap();
    assert_eq!(p.kind(), ProfileKind::Extension);
    assert_eq!(report.junctions.len(), 1);
    let j = &report.junctions[0];
    assert_eq!(j.kind, JunctionKind::CopyCopy);
    assert_eq!(j.order, Continuity::C4Plus, "{j:?}");
    assert!(j.position_gap < 1e-12);
    assert!(verify_profile(&p, 1e-3).unwrap().passes(1e-4));
}

#[test]
fn line_pieces_break_the_third_derivative() {
    let (p, report) = extend_separatrix(
        &ExtensionSpec::new(2, vec![1.0]),
        &ClassifyConfig::default(),
    )
    .unwrap();
    let kinds: Vec<JunctionKind> = report.junctions.iter().map(|j| j.kind).collect();
    assert_eq!(
        kinds,
        [JunctionKind::CopySegment, JunctionKind::SegmentCopy]
    );
    for j in &report.junctions {
        assert_eq!(j.order, Continuity::C3, "{j:?}");
        assert!((j.theta3_jump.abs() - 1.0 / 3.0).abs() < 0.1 / 3.0, "{j:?}");
    }
    // The separatrix leaves the line with θ''' of -1/3 and joins it with 1/3.
    assert!(report.junctions[0].theta3_jump < 0.0 && report.junctions[1].theta3_jump > 0.0);
    assert_eq!(report.min_order(), Some(Continuity::C3));
    let (lo, hi) = p.span();
    let single = separatrix_profile(1e-2, &ClassifyConfig::default()).unwrap();
    let (slo, shi) = single.span();
    assert!((hi - lo - (2.0 * (shi - slo) + 1.0)).abs() < 1e-9);
}

#[test]
fn single_copy_is_the_separatrix() {
    let cfg = ClassifyConfig::default();
    let (p, report) = extend_separatrix(&ExtensionSpec::new(1, vec![]), &cfg).unwrap();
    assert_eq!(p.kind(), ProfileKind::Separatrix);
    assert!(report.junctions.is_empty());
    assert_eq!(report.min_order(), None);
    let (lo, hi) = p.span();
    let last = p.samples()[p.len() - 1];
    assert!((last.theta - 2.0 * PI).abs() < 1e-12 && (last.z - 1.0).abs() < 1e-12);
    assert!((lo + hi).abs() < 1e-12);
    assert!(verify_profile(&p, 1e-3).unwrap().passes(1e-4));
}

#[test]
fn csv_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("profile.csv");
    let (p, _) = lambda_profile(2.5, None, 1e-2, &ClassifyConfig::default()).unwrap();
    write_profile_csv(&p, BufWriter::new(File::create(&path).unwrap())).unwrap();
    let back = read_profile_csv(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(back.samples(), p.samples());
    assert_eq!(back.kind(), ProfileKind::Generic);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,x,z,theta\n"));
}
