//! Glue copies of the separatrix, with and without a piece of the
//! cylinder between them, and report how smooth each junction is.

use rotsurf::profile::{extend_separatrix, ExtensionSpec};
use rotsurf::shooting::ClassifyConfig;

fn main() {
    let cfg = ClassifyConfig::default();
    for segments in [vec![0.0], vec![1.0], vec![0.5, 0.0]] {
        let spec = ExtensionSpec::new(segments.len() + 1, segments.clone());
        let (profile, report) = extend_separatrix(&spec, &cfg).unwrap();
        let (lo, hi) = profile.span();
        println!("segments {segments:?}: span [{lo:.4}, {hi:.4}]");
        for j in &report.junctions {
            println!(
                "  t = {:8.4} {:?}: {} (theta''' jump {:+.4})",
                j.t,
                j.kind,
                j.order.name(),
                j.theta3_jump
            );
        }
    }
}
