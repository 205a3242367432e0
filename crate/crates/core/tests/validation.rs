//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero when
//! any criterion fails.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rotsurf::integrator::{
    integrate, launch_separatrix, symmetric_extension, Direction, IntegratorConfig, Termination,
    Trajectory,
};
use rotsurf::phase_field::{
    asymptotics_from_offset, constraint_residual, theta_second, PhasePoint, R4_CORNER_LIMIT,
    THETA3_CORNER_LIMIT,
};
use rotsurf::profile::{
    cylinder_profile, extend_separatrix, find_period, find_self_intersection, lambda_profile,
    sphere_profile, verify_profile, Continuity, ExtensionSpec,
};
use rotsurf::shooting::{find_lambda0, portrait, ClassifyConfig, LambdaClass};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn lambda0() -> f64 {
    find_lambda0(&ClassifyConfig::default(), 1e-12)
        .unwrap()
        .value
}

fn sphere_oracle() -> Outcome {
    let start = Instant::now();
    let cfg = IntegratorConfig::default();
    let p = PhasePoint::new(PI, SQRT_2);
    let mut worst: f64 = 0.0;
    for dir in [Direction::Backward, Direction::Forward] {
        let traj = integrate(p, dir, &cfg).unwrap();
        let (lo, hi) = traj.span();
        let (a, b) = match dir {
            Direction::Backward => (lo + 1e-3, hi),
            Direction::Forward => (lo, hi - 1e-3),
        };
        for k in 0..=10_000 {
            let t = a + (b - a) * k as f64 / 10_000.0;
            let s = traj.dense_eval(t).unwrap();
            let (theta, z) = common::sphere_phase(t);
            worst = worst.max((s.theta - theta).abs()).max((s.z - z).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-8 && secs < 1.0,
        format!("max error {worst:.2e}, {secs:.3} s"),
    )
}

fn lambda0_agreement() -> Outcome {
    let cfg = ClassifyConfig::default();
    let bisection = find_lambda0(&cfg, 1e-12).unwrap().value;
    let launch = launch_separatrix(&cfg.integrator).unwrap().last().z;
    let tight = ClassifyConfig::from(cfg.integrator.clone().scaled_tolerances(0.1));
    let tightened = find_lambda0(&tight, 1e-12).unwrap().value;
    let oracle = common::LAMBDA0_REFERENCE;
    let dual = (bisection - launch).abs();
    let stability = (bisection - tightened).abs();
    let ok = dual <= 1e-6
        && stability <= 1e-6
        && bisection > SQRT_2
        && (bisection - oracle).abs() <= 1e-6;
    (
        ok,
        format!(
            "bisection {bisection:.13}, launch {launch:.13}, |diff| {dual:.1e}, tightened shift {stability:.1e}, RK4 oracle {oracle}"
        ),
    )
}

fn curvature_reconstruction() -> Outcome {
    let sphere = verify_profile(&sphere_profile(4001).unwrap(), 1e-3).unwrap();
    let cylinder = verify_profile(&cylinder_profile(4.0, 101).unwrap(), 1e-3).unwrap();
    let cfg = ClassifyConfig::default();
    let lambda = lambda0() + 1.0;
    let t0 = find_period(lambda, &cfg).unwrap().t0;
    let (p, _) = lambda_profile(lambda, Some(2.0 * t0), 1e-3, &cfg).unwrap();
    let periodic = verify_profile(&p, 1e-3).unwrap();
    let ok = sphere.passes(1e-8) && cylinder.passes(1e-8) && periodic.passes(1e-4);
    (
        ok,
        format!(
            "sphere {:.1e}, cylinder {:.1e}, periodic (two periods, h = 1e-3) {:.1e}",
            sphere.max_curvature_residual,
            cylinder.max_curvature_residual,
            periodic.max_curvature_residual
        ),
    )
}

/// `r4` and a central difference of the closed-form `θ''` at `θ = target`.
fn corner_diagnostics(traj: &Trajectory, target: f64) -> (f64, f64) {
    let t = traj.time_at_theta(target).unwrap();
    let s = traj.dense_eval(t).unwrap();
    let r4 = asymptotics_from_offset(s.theta, s.z_offset).unwrap().r4;
    let d = 1e-3 * t.abs().clamp(1e-6, 1.0) * target.sqrt();
    let second = |u: f64| {
        let q = traj.dense_eval(u).unwrap();
        theta_second(PhasePoint::new(q.theta, q.z)).unwrap()
    };
    let theta3 = (second(t + d) - second(t - d)) / (2.0 * d);
    (r4, theta3)
}

fn separatrix_asymptotics() -> Outcome {
    let traj = launch_separatrix(&IntegratorConfig::default()).unwrap();
    let (r4, theta3) = corner_diagnostics(&traj, 1e-2);
    let e4 = (r4 / R4_CORNER_LIMIT - 1.0).abs();
    let e3 = (theta3 / THETA3_CORNER_LIMIT - 1.0).abs();
    let mut detail = format!(
        "at theta = 1e-2: r4/limit {:.4} (off {:.1}%), theta''' {theta3:.4} (off {:.1}%)",
        r4 / R4_CORNER_LIMIT,
        100.0 * e4,
        100.0 * e3
    );
    for target in [1e-3, 1e-4, 1e-5] {
        let (r4, theta3) = corner_diagnostics(&traj, target);
        detail.push_str(&format!(
            "; at {target:.0e}: r4/limit {:.4}, theta''' {theta3:.4}",
            r4 / R4_CORNER_LIMIT
        ));
    }
    (e4 <= 0.01 && e3 <= 0.01, detail)
}

fn periodicity() -> Outcome {
    let info = find_period(lambda0() + 1.0, &ClassifyConfig::default()).unwrap();
    let ok =
        info.z_residual <= 1e-8 && info.theta_residual <= 1e-8 && info.x_shift_residual <= 1e-8;
    (
        ok,
        format!(
            "t0 {:.6}, z {:.1e}, theta {:.1e}, x-shift spread {:.1e}",
            info.t0, info.z_residual, info.theta_residual, info.x_shift_residual
        ),
    )
}

fn self_intersection() -> Outcome {
    let cfg = ClassifyConfig::default();
    let lambda = lambda0() + 1.0;
    let info = find_period(lambda, &cfg).unwrap();
    let (p, _) = lambda_profile(lambda, Some(info.t0), 1e-3, &cfg).unwrap();
    let x_t0 = p.position_at(-info.t0).unwrap().0;
    let x_t1 = p.position_at(-info.t1).unwrap().0;
    let hit = find_self_intersection(&p, info.t0, info.t1).unwrap();
    let ok = x_t0 < 0.0 && x_t1 > 0.0 && hit.x_residual <= 1e-8 && hit.z_residual <= 1e-8;
    (
        ok,
        format!(
            "x(-t0) {x_t0:.4} < 0 < x(-t1) {x_t1:.4}, t2 {:.6}, |x| {:.1e}, |dz| {:.1e}",
            hit.t2, hit.x_residual, hit.z_residual
        ),
    )
}

fn classification() -> Outcome {
    let l0 = lambda0();
    let lambdas = [1.2, SQRT_2, 0.5 * (SQRT_2 + l0), l0 + 0.5, 10.0];
    let expected = [
        "IncompleteLow",
        "Sphere",
        "IncompleteHigh",
        "Periodic",
        "Periodic",
    ];
    let report = portrait(&lambdas, &ClassifyConfig::default()).unwrap();
    let mut ok = true;
    let mut names = Vec::new();
    for (entry, want) in report.entries.iter().zip(expected) {
        let class = entry.class.as_ref().unwrap();
        ok &= class.name() == want;
        names.push(class.name());
        if let LambdaClass::IncompleteLow { limit, half_span }
        | LambdaClass::IncompleteHigh { limit, half_span } = *class
        {
            ok &= limit.z > 0.0 && limit.z < 1.0 && half_span.is_finite();
        }
    }
    (ok, names.join(", "))
}

fn lemma_suite() -> Outcome {
    const SAMPLES: usize = 100_000;
    const RUNS: usize = 200;
    let mut rng = StdRng::seed_from_u64(0x10b5);
    let cfg = IntegratorConfig::default().with_theta_targets(vec![0.0]);

    let mut constraint: f64 = 0.0;
    let mut slope_bound = 0usize;
    let mut monotone = 0usize;
    let mut symmetry: f64 = 0.0;
    let mut barrier = 0usize;

    // Symmetric curves through (π, λ), checked against an independent
    // forward run.
    let per_run = SAMPLES / (2 * RUNS);
    for _ in 0..RUNS {
        let lambda = rng.random_range(1.02..10.0);
        let half = integrate(PhasePoint::new(PI, lambda), Direction::Backward, &cfg).unwrap();
        let full = symmetric_extension(&half, 1).unwrap();
        let (lo, _) = half.span();
        let fwd_cfg = IntegratorConfig::default().with_max_time(-lo);
        let fwd = integrate(PhasePoint::new(PI, lambda), Direction::Forward, &fwd_cfg).unwrap();
        let reach = fwd.last().t;
        for _ in 0..per_run {
            let s = rng.random_range(0.0..reach);
            let a = full.dense_eval(-s).unwrap();
            let b = fwd.dense_eval(s).unwrap();
            symmetry = symmetry
                .max((a.z - b.z).abs())
                .max((a.theta + b.theta - 2.0 * PI).abs());
            let u = rng.random_range(lo..-lo);
            let c = full.dense_eval(u).unwrap();
            let d = full.dense_eval((u + 1e-3).min(-lo)).unwrap();
            for q in [&a, &c] {
                constraint = constraint.max(constraint_residual(q.theta, q.z, q.dtheta).abs());
                if q.z < 1.0 && q.dtheta > q.theta.sin().abs() + 1e-15 {
                    slope_bound += 1;
                }
            }
            if d.t > c.t && d.theta <= c.theta {
                monotone += 1;
            }
        }
    }

    // Forward runs started at or below z = 1.
    let reach_cfg = IntegratorConfig::default().with_theta_targets(vec![PI]);
    for _ in 0..RUNS {
        let theta0 = rng.random_range(1e-3..PI - 1e-3);
        let floor = theta0.cos().abs();
        let z0 = floor + rng.random_range(1e-9..=1.0) * (1.0 - floor);
        let traj = integrate(PhasePoint::new(theta0, z0), Direction::Forward, &reach_cfg).unwrap();
        let reached =
            matches!(traj.termination(), Termination::ThetaCrossing { target, .. } if target == PI);
        let rose = traj.samples().iter().any(|s| s.z > 1.0);
        if !(reached && rose) {
            barrier += 1;
        }
        let (lo, hi) = traj.span();
        for _ in 0..per_run {
            let q = traj.dense_eval(rng.random_range(lo..hi)).unwrap();
            constraint = constraint.max(constraint_residual(q.theta, q.z, q.dtheta).abs());
            if q.z < 1.0 && q.dtheta > q.theta.sin().abs() + 1e-15 {
                slope_bound += 1;
            }
        }
        monotone += traj
            .samples()
            .windows(2)
            .filter(|w| w[1].theta <= w[0].theta)
            .count();
    }

    let ok =
        constraint <= 1e-8 && slope_bound == 0 && monotone == 0 && symmetry <= 1e-8 && barrier == 0;
    (
        ok,
        format!(
            "{SAMPLES} samples: constraint {constraint:.1e}, slope-bound violations {slope_bound}, monotonicity violations {monotone}, symmetry {symmetry:.1e}, barrier/reach failures {barrier}/{RUNS}"
        ),
    )
}

fn extension_regularity() -> Outcome {
    let cfg = ClassifyConfig::default();
    let (_, with_line) = extend_separatrix(&ExtensionSpec::new(2, vec![1.0]), &cfg).unwrap();
    let (_, glued) = extend_separatrix(&ExtensionSpec::new(2, vec![0.0]), &cfg).unwrap();
    let jumps: Vec<f64> = with_line.junctions.iter().map(|j| j.theta3_jump).collect();
    let line_ok = with_line.junctions.iter().all(|j| {
        j.order == Continuity::C3 && (j.theta3_jump.abs() / THETA3_CORNER_LIMIT - 1.0).abs() <= 0.1
    });
    let glued_order = glued.min_order().unwrap();
    let ok = line_ok && glued_order == Continuity::C4Plus;
    (
        ok,
        format!(
            "segment [1]: {} with theta''' jumps {:?}; segment [0]: {} (theta''' jump {:.1e})",
            with_line.min_order().unwrap().name(),
            jumps.iter().map(|j| format!("{j:.4}")).collect::<Vec<_>>(),
            glued_order.name(),
            glued.junctions[0].theta3_jump.abs()
        ),
    )
}

fn determinism() -> Outcome {
    let differ = common::cli_rerun_differences();
    let files: usize = common::CLI_RUNS.iter().map(|(_, f)| f.len()).sum();
    (
        differ.is_empty(),
        format!(
            "{} of {files} files differ between reruns {differ:?}",
            differ.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sphere oracle", sphere_oracle),
        ("lambda0 agreement", lambda0_agreement),
        ("|A| = 1 reconstruction", curvature_reconstruction),
        ("separatrix asymptotics", separatrix_asymptotics),
        ("periodicity", periodicity),
        ("self-intersection witness", self_intersection),
        ("classification sweep", classification),
        ("lemma property suite", lemma_suite),
        ("extension regularity", extension_regularity),
        ("CLI determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = match catch_unwind(AssertUnwindSafe(check)) {
            Ok(outcome) => outcome,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
