//! Surfaces of revolution about the x-axis as triangle meshes.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::profile::{ProfileCurve, ProfileKind};

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("profile sample {index} has z = {z}; revolving needs z > 0")]
    DegenerateProfile { index: usize, z: f64 },
    #[error("need at least 3 angular samples, got {0}")]
    TooFewAngles(usize),
    #[error("write failed: {0}")]
    Sink(#[source] std::io::Error),
    #[error("read failed: {0}")]
    Source(#[source] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Vertex indices, counter-clockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
    pub n_angular: usize,
    pub n_profile: usize,
    pub source: Option<ProfileKind>,
}

impl Mesh {
    /// Index of the vertex on profile sample `i` at angle `2πj / n_angular`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_angular + j % self.n_angular
    }
}

/// Vertex `(x, z sin φ, z cos φ)` for every sample and `φ = 2πj/n_angular`,
/// with each band between consecutive samples split into two triangles.
pub fn revolve(profile: &ProfileCurve, n_angular: usize) -> Result<Mesh, SurfaceError> {
    if n_angular < 3 {
        return Err(SurfaceError::TooFewAngles(n_angular));
    }
    if let Some((index, s)) = profile
        .samples()
        .iter()
        .enumerate()
        .find(|(_, s)| !(s.z > 0.0))
    {
        return Err(SurfaceError::DegenerateProfile { index, z: s.z });
    }
    let angles: Vec<(f64, f64)> = (0..n_angular)
        .map(|j| (2.0 * PI * j as f64 / n_angular as f64).sin_cos())
        .collect();
    let vertices = profile
        .samples()
        .iter()
        .flat_map(|s| {
            angles
                .iter()
                .map(move |&(sn, cs)| [s.x, s.z * sn, s.z * cs])
        })
        .collect();
    let n_profile = profile.len();
    let mut faces = Vec::with_capacity(2 * n_angular * n_profile.saturating_sub(1));
    let at = |i: usize, j: usize| i * n_angular + j % n_angular;
    for i in 0..n_profile.saturating_sub(1) {
        for j in 0..n_angular {
            faces.push([at(i, j), at(i + 1, j + 1), at(i + 1, j)]);
            faces.push([at(i, j), at(i, j + 1), at(i + 1, j + 1)]);
        }
    }
    Ok(Mesh {
        vertices,
        faces,
        n_angular,
        n_profile,
        source: Some(profile.kind()),
    })
}

/// `v x y z` lines then `f a b c` lines with 1-based indices.
pub fn export_obj<W: Write>(mesh: &Mesh, mut sink: W) -> Result<(), SurfaceError> {
    let mut write = || -> std::io::Result<()> {
        for v in &mesh.vertices {
            writeln!(sink, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
        }
        for f in &mesh.faces {
            writeln!(sink, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        sink.flush()
    };
    write().map_err(SurfaceError::Sink)
}

/// Reads the subset of the format written by [`export_obj`].
pub fn read_obj<R: BufRead>(source: R) -> Result<Mesh, SurfaceError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.map_err(SurfaceError::Source)?;
        let mut parts = line.split_whitespace();
        let parse_err = |reason: String| SurfaceError::Parse {
            line: i + 1,
            reason,
        };
        match parts.next() {
            Some("v") => {
                let v = parts
                    .map(str::parse::<f64>)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| parse_err(e.to_string()))?;
                let [x, y, z] = v[..] else {
                    return Err(parse_err("vertex needs 3 coordinates".into()));
                };
                vertices.push([x, y, z]);
            }
            Some("f") => {
                let f = parts
                    .map(str::parse::<usize>)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| parse_err(e.to_string()))?;
                let [a, b, c] = f[..] else {
                    return Err(parse_err("face needs 3 indices".into()));
                };
                if [a, b, c].iter().any(|&k| k == 0 || k > vertices.len()) {
                    return Err(parse_err("face index out of range".into()));
                }
                faces.push([a - 1, b - 1, c - 1]);
            }
            None => {}
            Some(other) => return Err(parse_err(format!("unknown record `{other}`"))),
        }
    }
    Ok(Mesh {
        vertices,
        faces,
        n_angular: 0,
        n_profile: 0,
        source: None,
    })
}

/// `i,j,x,y,z` with `i` the profile index and `j` the angular index.
pub fn export_csv<W: Write>(mesh: &Mesh, mut sink: W) -> Result<(), SurfaceError> {
    let mut write = || -> std::io::Result<()> {
        writeln!(sink, "i,j,x,y,z")?;
        for (k, v) in mesh.vertices.iter().enumerate() {
            let (i, j) = (k / mesh.n_angular, k % mesh.n_angular);
            writeln!(sink, "{i},{j},{:.16e},{:.16e},{:.16e}", v[0], v[1], v[2])?;
        }
        sink.flush()
    };
    write().map_err(SurfaceError::Sink)
}
