//! Integrate from (π, √2) in both directions and compare with the closed
//! form of the round sphere.

use std::f64::consts::{PI, SQRT_2};

use rotsurf::integrator::{integrate, Direction, IntegratorConfig};
use rotsurf::phase_field::PhasePoint;

fn main() {
    let cfg = IntegratorConfig::default();
    for dir in [Direction::Backward, Direction::Forward] {
        let traj = integrate(PhasePoint::new(PI, SQRT_2), dir, &cfg).unwrap();
        let (lo, hi) = traj.span();
        let worst = traj
            .samples()
            .iter()
            .map(|s| (s.z - SQRT_2 * (s.t / SQRT_2).cos()).abs())
            .fold(0.0, f64::max);
        println!(
            "{dir:?}: span [{lo:.6}, {hi:.6}], {} steps, ended by {:?}, max |z - closed form| {worst:.2e}",
            traj.samples().len() - 1,
            traj.termination()
        );
    }
    println!("expected half span pi/sqrt(2) = {:.6}", PI / SQRT_2);
}
