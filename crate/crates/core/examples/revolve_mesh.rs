//! Revolve a profile into a triangle mesh and write it as OBJ.
//!
//! `cargo run --example revolve_mesh -- 4.0 surface.obj`

use std::fs::File;
use std::io::BufWriter;

use rotsurf::profile::lambda_profile;
use rotsurf::shooting::ClassifyConfig;
use rotsurf::surface::{export_obj, revolve};

fn main() {
    let mut args = std::env::args().skip(1);
    let lambda: f64 = args.next().map_or(4.0, |a| a.parse().expect("lambda"));
    let out = args.next().unwrap_or_else(|| "surface.obj".into());
    let (profile, class) = lambda_profile(lambda, None, 2e-2, &ClassifyConfig::default()).unwrap();
    let mesh = revolve(&profile, 64).unwrap();
    export_obj(&mesh, BufWriter::new(File::create(&out).unwrap())).unwrap();
    println!(
        "{} curve, {} vertices, {} faces written to {out}",
        class.name(),
        mesh.vertices.len(),
        mesh.faces.len()
    );
}
