//! Period, drift and self-intersection of the curve through (π, λ₀ + 1).

use rotsurf::profile::{find_period, find_self_intersection, lambda_profile};
use rotsurf::shooting::{find_lambda0, ClassifyConfig};

fn main() {
    let cfg = ClassifyConfig::default();
    let lambda = find_lambda0(&cfg, 1e-12).unwrap().value + 1.0;
    let info = find_period(lambda, &cfg).unwrap();
    println!("lambda = {lambda:.10}");
    println!(
        "t0 = {:.8}, t1 = {:.8}, period = {:.8}, x shift per period = {:.8}",
        info.t0, info.t1, info.period, info.x_shift
    );
    println!(
        "residuals: z {:.1e}, theta {:.1e}, x shift {:.1e}",
        info.z_residual, info.theta_residual, info.x_shift_residual
    );
    let (profile, _) = lambda_profile(lambda, Some(info.t0), 1e-3, &cfg).unwrap();
    let hit = find_self_intersection(&profile, info.t0, info.t1).unwrap();
    println!(
        "self-intersection at t2 = {:.8}, point ({:.3e}, {:.8})",
        hit.t2, hit.point.0, hit.point.1
    );
}
