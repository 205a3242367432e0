//! Reconstruction of `|A|² = κ1² + κ2²` from the positions of a profile.

use std::f64::consts::PI;

use super::{ProfileCurve, ProfileError};

const STENCIL: usize = 8;
/// Chord-angle decrease tolerated as interpolation noise.
const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub h: f64,
    /// Number of resampled points.
    pub samples: usize,
    /// `max |κ1² + κ2² - 1|` over interior resampled points.
    pub max_curvature_residual: f64,
    /// Where the curvature residual peaks.
    pub worst_t: f64,
    /// `max |(|Δα| / h)² - 1|` over chords; `O(h²)` for a unit-speed curve.
    pub max_unit_speed_violation: f64,
    /// Chords whose angle drops below the previous one.
    pub monotonicity_violations: usize,
}

impl VerificationReport {
    /// Curvature residual within `tol`, chords within `h²` of unit speed,
    /// and `θ` never decreasing.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_curvature_residual <= tol
            && self.max_unit_speed_violation <= self.h * self.h + tol
            && self.monotonicity_violations == 0
    }
}

fn lagrange(ts: &[f64], vs: &[f64], t: f64) -> f64 {
    let mut acc = 0.0;
    for (i, (&ti, &vi)) in ts.iter().zip(vs).enumerate() {
        let mut w = 1.0;
        for (j, &tj) in ts.iter().enumerate() {
            if i != j {
                w *= (t - tj) / (ti - tj);
            }
        }
        acc += w * vi;
    }
    acc
}

/// Resample `profile` every `h`, rebuild `θ` from chord directions and
/// check the curvature identity with `κ1 = dθ/dt` and `κ2 = -cos θ / z`.
pub fn verify_profile(profile: &ProfileCurve, h: f64) -> Result<VerificationReport, ProfileError> {
    if !(h > 0.0) {
        return Err(ProfileError::InvalidArgument(
            "resample step must be positive",
        ));
    }
    let samples = profile.samples();
    if samples.len() < 2 {
        return Err(ProfileError::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let (lo, hi) = profile.span();
    let n = ((hi - lo) / h).floor() as usize + 1;
    if n < 4 {
        return Err(ProfileError::TooFewSamples { needed: 4, got: n });
    }

    let ts: Vec<f64> = samples.iter().map(|s| s.t).collect();
    let xs: Vec<f64> = samples.iter().map(|s| s.x).collect();
    let zs: Vec<f64> = samples.iter().map(|s| s.z).collect();
    let width = STENCIL.min(samples.len());
    let points: Vec<(f64, f64, f64)> = (0..n)
        .map(|k| {
            let t = lo + k as f64 * h;
            let near = ts.partition_point(|&s| s < t);
            let start = near.saturating_sub(width / 2).min(samples.len() - width);
            let r = start..start + width;
            (
                t,
                lagrange(&ts[r.clone()], &xs[r.clone()], t),
                lagrange(&ts[r.clone()], &zs[r], t),
            )
        })
        .collect();

    let mut angles: Vec<f64> = Vec::with_capacity(n - 1);
    let mut max_unit_speed_violation: f64 = 0.0;
    for w in points.windows(2) {
        let (dx, dz) = (w[1].1 - w[0].1, w[1].2 - w[0].2);
        max_unit_speed_violation =
            max_unit_speed_violation.max(((dx * dx + dz * dz) / (h * h) - 1.0).abs());
        let mut phi = dz.atan2(dx);
        if let Some(&prev) = angles.last() {
            phi += 2.0 * PI * ((prev - phi) / (2.0 * PI)).round();
        }
        angles.push(phi);
    }

    let monotonicity_violations = angles
        .windows(2)
        .filter(|w| w[1] < w[0] - MONOTONE_SLACK)
        .count();

    let mut max_curvature_residual: f64 = 0.0;
    let mut worst_t = points[1].0;
    for i in 1..angles.len() {
        let (t, _, z) = points[i];
        let k1 = (angles[i] - angles[i - 1]) / h;
        let theta = 0.5 * (angles[i] + angles[i - 1]);
        let k2 = -theta.cos() / z;
        let r = (k1 * k1 + k2 * k2 - 1.0).abs();
        if r > max_curvature_residual {
            max_curvature_residual = r;
            worst_t = t;
        }
    }

    Ok(VerificationReport {
        h,
        samples: n,
        max_curvature_residual,
        worst_t,
        max_unit_speed_violation,
        monotonicity_violations,
    })
}
