//! Evaluate the field, the curvatures and the corner diagnostics at a few
//! points of the phase plane.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rotsurf::phase_field::{asymptotics, curvatures, field_eval, in_domain, PhasePoint};

fn main() {
    let points = [
        PhasePoint::new(PI, SQRT_2),
        PhasePoint::new(FRAC_PI_2, 0.5),
        PhasePoint::new(0.3, 1.2),
        PhasePoint::new(0.0, 1.0),
    ];
    for p in points {
        print!("theta = {:.4}, z = {:.4}: ", p.theta, p.z);
        if !in_domain(p) {
            println!("outside the domain");
            continue;
        }
        let v = field_eval(p).unwrap();
        let k = curvatures(p).unwrap();
        println!(
            "theta' = {:.6}, z' = {:.6}, k1^2 + k2^2 = {:.15}",
            v.dtheta,
            v.dz,
            k.k1 * k.k1 + k.k2 * k.k2
        );
    }
    let r = asymptotics(PhasePoint::new(0.3, 1.2)).unwrap();
    println!("corner ratios at (0.3, 1.2): {r:?}");
}
