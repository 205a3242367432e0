//! The planar vector field whose trajectories are the tangent-angle / height
//! pairs of profile curves with `|A| = 1`.
//!
//! A profile curve `t -> (x(t), z(t))` parametrized by arc length has unit
//! tangent `(cos θ, sin θ)`. Its surface of revolution about the x-axis has
//! principal curvatures `θ'` and `-cos θ / z`, so `|A| = 1` reads
//! `θ'^2 + cos^2 θ / z^2 = 1`. With `θ' >= 0` this becomes the autonomous
//! system `(θ', z') = X(θ, z)` on `Ω = { z > |cos θ| }`, where
//!
//! ```text
//! X(θ, z) = ( sqrt(1 - cos^2 θ / z^2), sin θ ).
//! ```
//!
//! Everything here is a pure function of its inputs.

use std::f64::consts::PI;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FieldError {
    #[error("point (theta = {theta}, z = {z}) is outside the open domain z > |cos theta|")]
    Domain { theta: f64, z: f64 },
    #[error("theta' vanishes at (theta = {theta}, z = {z}); the closed form is singular there")]
    SlopeZero { theta: f64, z: f64 },
    #[error(
        "theta = {theta} is outside (0, pi); the asymptotic ratios are defined on that chart only"
    )]
    AngleRange { theta: f64 },
}

/// A point `(θ, z)` of the phase plane.
///
/// `θ` is kept unwrapped. Points on or outside the boundary of `Ω` are
/// representable so that limit points of trajectories can be stored; every
/// field operation checks [`PhasePoint::in_domain`] first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub theta: f64,
    pub z: f64,
}

impl PhasePoint {
    pub const fn new(theta: f64, z: f64) -> Self {
        Self { theta, z }
    }

    /// `z - |cos θ|`, evaluated without cancellation near the boundary.
    pub fn gap(&self) -> f64 {
        // z - 1 is exact for z in [1/2, 2] (Sterbenz).
        gap_from_offset(self.theta, self.z - 1.0)
    }

    pub fn in_domain(&self) -> bool {
        self.z > 0.0 && self.gap() > 0.0
    }
}

/// Free-function form of [`PhasePoint::in_domain`].
pub fn in_domain(p: PhasePoint) -> bool {
    p.in_domain()
}

/// Value of `X` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVelocity {
    pub dtheta: f64,
    pub dz: f64,
}

/// Principal curvatures of the revolution surface: meridian `k1 = θ'` and
/// parallel `k2 = -cos θ / z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair {
    pub k1: f64,
    pub k2: f64,
}

impl CurvaturePair {
    /// `|A|^2 = k1^2 + k2^2`.
    pub fn norm_sq(&self) -> f64 {
        self.k1 * self.k1 + self.k2 * self.k2
    }
}

/// Ratios that control the behaviour of a trajectory as it runs into the
/// degenerate corner `(0, 1)`, together with `θ''` from its closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticReport {
    /// `sin^2 θ / θ'^2`
    pub r1: f64,
    /// `(z - cos θ) / sin θ`
    pub r2: f64,
    /// `sin^{3/2} θ / (z - cos θ)`
    pub r3: f64,
    /// `sin^2 θ / (z - cos θ)^{3/2}`, tends to `4√2/3` along the separatrix.
    pub r4: f64,
    pub theta2: f64,
}

/// Limit of [`AsymptoticReport::r4`] at the corner along the separatrix.
pub const R4_CORNER_LIMIT: f64 = 4.0 * std::f64::consts::SQRT_2 / 3.0;

/// Limit of `θ'''` at the corner along the separatrix.
pub const THETA3_CORNER_LIMIT: f64 = 1.0 / 3.0;

/// Reduce `θ` to `r` in `[-π/2, π/2]` with `|cos θ| = cos r`.
fn fold_angle(theta: f64) -> f64 {
    theta - PI * (theta / PI).round()
}

/// `1 - |cos θ|` as `2 sin^2(r/2)`; exact to rounding even when tiny.
pub(crate) fn one_minus_abs_cos(theta: f64) -> f64 {
    let h = (0.5 * fold_angle(theta)).sin();
    2.0 * h * h
}

/// `z - |cos θ|` given the height offset `w = z - 1`.
pub(crate) fn gap_from_offset(theta: f64, w: f64) -> f64 {
    w + one_minus_abs_cos(theta)
}

/// First component of `X` from `(θ, w = z - 1)`. `None` outside `Ω`.
///
/// Uses `1 - cos^2 θ / z^2 = (z - |cos θ|)(z + |cos θ|) / z^2`, with the
/// first factor formed from the offset so it keeps full relative precision
/// all the way down to the boundary.
pub(crate) fn slope_from_offset(theta: f64, w: f64) -> Option<f64> {
    let z = 1.0 + w;
    let gap = gap_from_offset(theta, w);
    if !(z > 0.0 && gap > 0.0) {
        return None;
    }
    let abs_cos = fold_angle(theta).cos();
    Some((gap * (z + abs_cos)).sqrt() / z)
}

/// `θ'^2 + cos^2 θ / z^2 - 1`; zero on solutions of the constraint.
pub fn constraint_residual(theta: f64, z: f64, dtheta: f64) -> f64 {
    let c = theta.cos() / z;
    dtheta * dtheta + c * c - 1.0
}

pub fn field_eval(p: PhasePoint) -> Result<PhaseVelocity, FieldError> {
    let dtheta = slope_from_offset(p.theta, p.z - 1.0).ok_or(FieldError::Domain {
        theta: p.theta,
        z: p.z,
    })?;
    Ok(PhaseVelocity {
        dtheta,
        dz: p.theta.sin(),
    })
}

pub fn curvatures(p: PhasePoint) -> Result<CurvaturePair, FieldError> {
    let v = field_eval(p)?;
    Ok(CurvaturePair {
        k1: v.dtheta,
        k2: -p.theta.cos() / p.z,
    })
}

/// `θ''` along the trajectory through `p`, from differentiating the system
/// once: `sin θ/(z θ') + sin θ cos θ / z^2 - θ' sin θ / z`.
pub fn theta_second(p: PhasePoint) -> Result<f64, FieldError> {
    let v = field_eval(p)?;
    if v.dtheta <= 0.0 {
        return Err(FieldError::SlopeZero {
            theta: p.theta,
            z: p.z,
        });
    }
    let (s, c) = p.theta.sin_cos();
    let z = p.z;
    Ok(s / (z * v.dtheta) + s * c / (z * z) - v.dtheta * s / z)
}

/// Corner diagnostics at an interior point with `θ` in `(0, π)` and `θ' > 0`.
pub fn asymptotics(p: PhasePoint) -> Result<AsymptoticReport, FieldError> {
    asymptotics_from_offset(p.theta, p.z - 1.0)
}

/// Same as [`asymptotics`], with the height given as `w = z - 1` so that
/// `z - cos θ` stays accurate when both are close to 1.
pub fn asymptotics_from_offset(theta: f64, w: f64) -> Result<AsymptoticReport, FieldError> {
    let z = 1.0 + w;
    if !(theta > 0.0 && theta < PI) {
        return Err(FieldError::AngleRange { theta });
    }
    let dtheta = slope_from_offset(theta, w).ok_or(FieldError::Domain { theta, z })?;
    if dtheta <= 0.0 {
        return Err(FieldError::SlopeZero { theta, z });
    }
    let s = theta.sin();
    // For θ in (0, π/2] this is the gap; past π/2 it is z + |cos θ|.
    let h = (0.5 * theta).sin();
    let z_minus_cos = w + 2.0 * h * h;
    let theta2 = s / (z * dtheta) + s * theta.cos() / (z * z) - dtheta * s / z;
    Ok(AsymptoticReport {
        r1: s * s / (dtheta * dtheta),
        r2: z_minus_cos / s,
        r3: s.powf(1.5) / z_minus_cos,
        r4: s * s / z_minus_cos.powf(1.5),
        theta2,
    })
}
