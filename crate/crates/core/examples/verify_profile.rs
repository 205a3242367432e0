//! Rebuild |A| from sampled profiles alone. The λ = 2.5 curve ends on the
//! boundary where θ' vanishes like a square root, and the residual there is
//! larger than on the closed or periodic curves.

use rotsurf::profile::{cylinder_profile, lambda_profile, sphere_profile, verify_profile};
use rotsurf::shooting::ClassifyConfig;

fn main() {
    let cfg = ClassifyConfig::default();
    let profiles = [
        ("sphere", sphere_profile(4001).unwrap()),
        ("cylinder", cylinder_profile(4.0, 101).unwrap()),
        (
            "lambda = 2.5",
            lambda_profile(2.5, None, 1e-3, &cfg).unwrap().0,
        ),
        (
            "lambda = 6",
            lambda_profile(6.0, Some(8.0), 1e-3, &cfg).unwrap().0,
        ),
    ];
    for (name, profile) in &profiles {
        let r = verify_profile(profile, 1e-3).unwrap();
        println!(
            "{name:<13} residual {:.2e} at t = {:+.4}, unit speed {:.1e}, pass {}",
            r.max_curvature_residual,
            r.worst_t,
            r.max_unit_speed_violation,
            r.passes(1e-4)
        );
    }
}
