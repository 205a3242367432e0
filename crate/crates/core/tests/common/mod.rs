//! Reference computations that share no code with the library.

#![allow(dead_code)]

use std::f64::consts::PI;

/// λ₀ from the fixed-step RK4 oracle with `h = 1e-3`, bisected to `1e-11`.
pub const LAMBDA0_REFERENCE: f64 = 3.213624398649;

/// `θ'` on `(θ, w = z - 1)`, `None` outside the domain.
fn slope(theta: f64, w: f64) -> Option<f64> {
    let z = 1.0 + w;
    let c = theta.cos().abs();
    let half = (0.5 * (theta - PI * (theta / PI).round())).sin();
    let gap = w + 2.0 * half * half;
    if gap <= 0.0 {
        return None;
    }
    Some((gap * (z + c)).sqrt() / z)
}

fn deriv(y: [f64; 2]) -> Option<[f64; 2]> {
    Some([slope(y[0], y[1])?, y[0].sin()])
}

fn add(y: [f64; 2], h: f64, k: [f64; 2]) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

/// Classical RK4 step; `None` if any stage leaves the domain.
pub fn rk4_step(y: [f64; 2], h: f64) -> Option<[f64; 2]> {
    let k1 = deriv(y)?;
    let k2 = deriv(add(y, 0.5 * h, k1))?;
    let k3 = deriv(add(y, 0.5 * h, k2))?;
    let k4 = deriv(add(y, h, k3))?;
    Some([
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ])
}

/// Does the backward trajectory from `(π, λ)` reach `θ = 0` above `z = 1`?
pub fn crosses_above(lambda: f64, h: f64) -> bool {
    let mut y = [PI, lambda - 1.0];
    loop {
        match rk4_step(y, -h) {
            Some(next) => {
                if next[1] <= 0.0 {
                    return false;
                }
                if next[0] <= 0.0 {
                    return true;
                }
                y = next;
            }
            // Near the corner a full step can overshoot the boundary; finish
            // with smaller steps.
            None => {
                let mut hh = 0.5 * h;
                loop {
                    if hh < 1e-15 {
                        return false;
                    }
                    if let Some(next) = rk4_step(y, -hh) {
                        if next[1] <= 0.0 {
                            return false;
                        }
                        if next[0] <= 0.0 {
                            return true;
                        }
                        y = next;
                        break;
                    }
                    hh *= 0.5;
                }
            }
        }
    }
}

pub fn lambda0_oracle(h: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (2f64.sqrt(), 4.0);
    assert!(!crosses_above(lo, h) && crosses_above(hi, h));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if crosses_above(mid, h) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sphere profile curve ψ in the phase plane.
pub fn sphere_phase(t: f64) -> (f64, f64) {
    let r = 2f64.sqrt();
    (PI + t / r, r * (t / r).cos())
}

/// One invocation of every subcommand, with the files each one writes.
pub const CLI_RUNS: &[(&[&str], &[&str])] = &[
    (
        &[
            "portrait",
            "--lambdas",
            "1.2,1.5,3.0,4.0",
            "--out",
            "portrait.json",
        ],
        &["portrait.json", "portrait_0.csv", "portrait_3.csv"],
    ),
    (
        &["find-lambda0", "--tol", "1e-10", "--out", "lambda0.json"],
        &["lambda0.json"],
    ),
    (
        &["curve", "--lambda", "4.2", "--out", "curve.csv"],
        &["curve.csv", "curve.json"],
    ),
    (
        &[
            "mesh",
            "--lambda",
            "2.5",
            "--n-angular",
            "24",
            "--out",
            "mesh.obj",
        ],
        &["mesh.obj"],
    ),
    (
        &[
            "mesh",
            "--builtin",
            "sphere",
            "--format",
            "csv",
            "--out",
            "sphere.csv",
        ],
        &["sphere.csv"],
    ),
    (
        &[
            "extend",
            "--copies",
            "2",
            "--segments",
            "1",
            "--out",
            "extension.csv",
        ],
        &["extension.csv", "extension.json"],
    ),
    (
        &["verify", "--in", "curve.csv", "--out", "verify.json"],
        &["verify.json"],
    ),
];

/// Run the binary in `dir`, returning the exit code and stdout.
pub fn run_cli(dir: &std::path::Path, args: &[&str]) -> (i32, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_rotsurf"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

/// Run every command of [`CLI_RUNS`] twice in fresh directories and list
/// the files whose bytes differ.
pub fn cli_rerun_differences() -> Vec<String> {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut differ = Vec::new();
    for (args, files) in CLI_RUNS {
        for dir in [a.path(), b.path()] {
            let (code, _) = run_cli(dir, args);
            assert_eq!(code, 0, "{args:?}");
        }
        for f in *files {
            let x = std::fs::read(a.path().join(f)).unwrap();
            let y = std::fs::read(b.path().join(f)).unwrap();
            if x != y {
                differ.push(f.to_string());
            }
        }
    }
    differ
}
