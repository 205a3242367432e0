//! The threshold height λ₀ by bisection and by launching the separatrix
//! out of the corner.

use rotsurf::integrator::launch_separatrix;
use rotsurf::shooting::{find_lambda0, ClassifyConfig};

fn main() {
    let cfg = ClassifyConfig::default();
    let est = find_lambda0(&cfg, 1e-12).unwrap();
    let launch = launch_separatrix(&cfg.integrator).unwrap();
    println!(
        "bisection: {:.13} after {} iterations, bracket {:?}",
        est.value, est.iterations, est.bracket
    );
    println!(
        "launch:    {:.13} reached at arc length {:.6}",
        launch.last().z,
        launch.last().t
    );
}
