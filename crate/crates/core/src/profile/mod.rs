//! Profile curves `t -> (x(t), z(t))` in arc length, with tangent angle `θ`.

mod extension;
mod io;
mod verify;

use std::f64::consts::{PI, SQRT_2};

use thiserror::Error;

use crate::integrator::{
    continue_from, launch_separatrix, symmetric_extension, Direction, IntegratorError, Trajectory,
};
use crate::shooting::{classify_with_trajectory, ClassifyConfig, LambdaClass, ShootingError};

pub use extension::{
    extend_separatrix, Continuity, ExtensionSpec, Junction, JunctionKind, RegularityReport,
};
pub use io::{read_profile_csv, write_profile_csv, PROFILE_CSV_HEADER};
pub use verify::{verify_profile, VerificationReport};

/// Arc length from the axis point of the sphere to either pole.
pub const SPHERE_HALF_SPAN: f64 = PI / SQRT_2;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("t = {t} is outside the profile span [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("lambda = {lambda} is not periodic (classified {class})")]
    NotPeriodic { lambda: f64, class: &'static str },
    #[error("x(-t) does not change sign on the bracket: x(-t0) = {at_t0}, x(-t1) = {at_t1}")]
    NoSignChange { at_t0: f64, at_t1: f64 },
    #[error("invalid extension spec: {0}")]
    SpecInvalid(String),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Shooting(#[from] ShootingError),
    #[error(transparent)]
    Integration(#[from] IntegratorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Generic,
    Sphere,
    Cylinder,
    Separatrix,
    Extension,
}

impl ProfileKind {
    pub fn name(self) -> &'static str {
        match self {
            ProfileKind::Generic => "Generic",
            ProfileKind::Sphere => "Sphere",
            ProfileKind::Cylinder => "Cylinder",
            ProfileKind::Separatrix => "Separatrix",
            ProfileKind::Extension => "Extension",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub t: f64,
    pub x: f64,
    pub z: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileCurve {
    kind: ProfileKind,
    samples: Vec<ProfileSample>,
}

impl ProfileCurve {
    /// Checks that `t` is strictly increasing and every value is finite with
    /// `z > 0`.
    pub fn new(kind: ProfileKind, samples: Vec<ProfileSample>) -> Result<Self, ProfileError> {
        if samples.is_empty() {
            return Err(ProfileError::Invalid("no samples".into()));
        }
        for (i, s) in samples.iter().enumerate() {
            if ![s.t, s.x, s.z, s.theta].iter().all(|v| v.is_finite()) {
                return Err(ProfileError::Invalid(format!("sample {i} is not finite")));
            }
            if s.z <= 0.0 {
                return Err(ProfileError::Invalid(format!(
                    "sample {i} has z = {} <= 0",
                    s.z
                )));
            }
            if i > 0 && s.t <= samples[i - 1].t {
                return Err(ProfileError::Invalid(format!(
                    "t is not increasing at sample {i}"
                )));
            }
        }
        Ok(Self { kind, samples })
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn span(&self) -> (f64, f64) {
        (self.samples[0].t, self.samples[self.samples.len() - 1].t)
    }

    /// `(x, z)` at `t` by cubic Hermite interpolation with the unit tangents
    /// `(cos θ, sin θ)` as slopes.
    pub fn position_at(&self, t: f64) -> Result<(f64, f64), ProfileError> {
        let (lo, hi) = self.span();
        if !(t >= lo && t <= hi) {
            return Err(ProfileError::OutOfRange { t, lo, hi });
        }
        let k = self.samples.partition_point(|s| s.t < t);
        if k < self.samples.len() && self.samples[k].t == t {
            let s = self.samples[k];
            return Ok((s.x, s.z));
        }
        let (a, b) = (self.samples[k - 1], self.samples[k]);
        let d = b.t - a.t;
        let u = (t - a.t) / d;
        let h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        let h10 = u * (1.0 - u) * (1.0 - u);
        let h01 = u * u * (3.0 - 2.0 * u);
        let h11 = u * u * (u - 1.0);
        let x = h00 * a.x + h10 * d * a.theta.cos() + h01 * b.x + h11 * d * b.theta.cos();
        let z = h00 * a.z + h10 * d * a.theta.sin() + h01 * b.z + h11 * d * b.theta.sin();
        Ok((x, z))
    }
}

fn profile_sample(s: &crate::integrator::TrajectorySample) -> ProfileSample {
    ProfileSample {
        t: s.t,
        x: s.x,
        z: s.z,
        theta: s.theta,
    }
}

/// The trajectory's own nodes as a profile.
pub fn build_profile(traj: &Trajectory) -> Result<ProfileCurve, ProfileError> {
    ProfileCurve::new(
        ProfileKind::Generic,
        traj.samples().iter().map(profile_sample).collect(),
    )
}

/// Uniform samples of `traj` on `[t_lo, t_hi]` with spacing at most `dt`.
pub fn sample_trajectory(
    traj: &Trajectory,
    t_lo: f64,
    t_hi: f64,
    dt: f64,
    kind: ProfileKind,
) -> Result<ProfileCurve, ProfileError> {
    if !(dt > 0.0) || !(t_hi > t_lo) {
        return Err(ProfileError::InvalidArgument("need dt > 0 and t_hi > t_lo"));
    }
    let n = ((t_hi - t_lo) / dt).ceil().max(1.0) as usize;
    let samples = (0..=n)
        .map(|i| {
            let t = if i == n {
                t_hi
            } else {
                t_lo + (t_hi - t_lo) * (i as f64 / n as f64)
            };
            traj.dense_eval(t).map(|s| profile_sample(&s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ProfileCurve::new(kind, samples)
}

/// `α(t) = (-√2 sin(t/√2) - √2, √2 cos(t/√2))` at `n` points strictly
/// inside `(-π/√2, π/√2)`.
pub fn sphere_profile(n: usize) -> Result<ProfileCurve, ProfileError> {
    if n < 2 {
        return Err(ProfileError::InvalidArgument("sphere profile needs n >= 2"));
    }
    let step = 2.0 * SPHERE_HALF_SPAN / (n + 1) as f64;
    let samples = (0..n)
        .map(|i| {
            let t = -SPHERE_HALF_SPAN + (i + 1) as f64 * step;
            let (s, c) = (t / SQRT_2).sin_cos();
            ProfileSample {
                t,
                x: -SQRT_2 * s - SQRT_2,
                z: SQRT_2 * c,
                theta: PI + t / SQRT_2,
            }
        })
        .collect();
    ProfileCurve::new(ProfileKind::Sphere, samples)
}

/// The unit-height line `z = 1` for `x` in `[0, length]`.
pub fn cylinder_profile(length: f64, n: usize) -> Result<ProfileCurve, ProfileError> {
    if !(length > 0.0) || n < 2 {
        return Err(ProfileError::InvalidArgument(
            "cylinder profile needs length > 0 and n >= 2",
        ));
    }
    let samples = (0..n)
        .map(|i| {
            let t = length * i as f64 / (n - 1) as f64;
            ProfileSample {
                t,
                x: t,
                z: 1.0,
                theta: 0.0,
            }
        })
        .collect();
    ProfileCurve::new(ProfileKind::Cylinder, samples)
}

/// Full trajectory through `(π, λ)`, symmetric about `t = 0`, repeated by
/// period when it is periodic and `half_span` asks for more than one period.
pub fn lambda_trajectory(
    lambda: f64,
    half_span: Option<f64>,
    cfg: &ClassifyConfig,
) -> Result<(LambdaClass, Trajectory), ProfileError> {
    let (class, half) = classify_with_trajectory(lambda, cfg)?;
    let full = symmetric_extension(&half, 1)?;
    let LambdaClass::Periodic { t0, .. } = class else {
        return Ok((class, full));
    };
    let want = half_span.unwrap_or(t0);
    let copies = ((want - t0) / (2.0 * t0)).ceil().max(0.0) as i64;
    if copies == 0 {
        return Ok((class, full));
    }
    let x_shift = full.last().x - full.first().x;
    let mut joined = full.shifted(
        -2.0 * t0 * copies as f64,
        -2.0 * PI * copies as f64,
        -x_shift * copies as f64,
    );
    for k in (1 - copies)..=copies {
        let kf = k as f64;
        joined = joined.join(&full.shifted(2.0 * t0 * kf, 2.0 * PI * kf, x_shift * kf))?;
    }
    Ok((class, joined))
}

/// Profile of the curve through `(π, λ)` on `[-span, span]` sampled every
/// `dt`. The span defaults to one period, or to the whole curve when it is
/// not periodic, and is clamped to the computed span.
pub fn lambda_profile(
    lambda: f64,
    span: Option<f64>,
    dt: f64,
    cfg: &ClassifyConfig,
) -> Result<(ProfileCurve, LambdaClass), ProfileError> {
    if let Some(s) = span {
        if !(s > 0.0) {
            return Err(ProfileError::InvalidArgument("span must be positive"));
        }
    }
    let (class, traj) = lambda_trajectory(lambda, span, cfg)?;
    let (lo, hi) = traj.span();
    let reach = hi.min(-lo);
    let half = span.map_or(reach, |s| s.min(reach));
    let profile = sample_trajectory(&traj, -half, half, dt, ProfileKind::Generic)?;
    Ok((profile, class))
}

/// The separatrix through `(π, λ₀)` with `θ = π` and `x = 0` at `t = 0`,
/// running from the corner at `-b` to the corner at `b`.
pub fn separatrix_trajectory(cfg: &ClassifyConfig) -> Result<Trajectory, ProfileError> {
    let launch = launch_separatrix(&cfg.integrator)?;
    let top = *launch.last();
    let half = launch.shifted(-top.t, 0.0, -top.x);
    Ok(symmetric_extension(&half, 1)?)
}

pub fn separatrix_profile(dt: f64, cfg: &ClassifyConfig) -> Result<ProfileCurve, ProfileError> {
    let traj = separatrix_trajectory(cfg)?;
    let (lo, hi) = traj.span();
    sample_trajectory(&traj, lo, hi, dt, ProfileKind::Separatrix)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodInfo {
    /// `θ(-t0) = 0`.
    pub t0: f64,
    /// `θ(-t1) = π/2`.
    pub t1: f64,
    pub period: f64,
    /// `x(2 t0) - x(0)`.
    pub x_shift: f64,
    /// Largest `|z(t + 2t0) - z(t)|` over `t` in `[-t0, t0]`.
    pub z_residual: f64,
    /// Largest `|θ(t + 2t0) - θ(t) - 2π|` over the same window.
    pub theta_residual: f64,
    /// Spread of `x(t + 2t0) - x(t)` over the same window.
    pub x_shift_residual: f64,
}

const PERIOD_CHECK_POINTS: usize = 400;

/// Period of the curve through `(π, λ)` for `λ > λ₀`, checked against an
/// independent forward integration over `[0, 3 t0]`.
pub fn find_period(lambda: f64, cfg: &ClassifyConfig) -> Result<PeriodInfo, ProfileError> {
    let (class, half) = classify_with_trajectory(lambda, cfg)?;
    let LambdaClass::Periodic { t0, .. } = class else {
        return Err(ProfileError::NotPeriodic {
            lambda,
            class: class.name(),
        });
    };
    let t1 = -half
        .time_at_theta(PI / 2.0)
        .ok_or(ProfileError::InvalidArgument("no theta = pi/2 crossing"))?;

    let fwd_cfg = cfg
        .integrator
        .clone()
        .with_theta_targets(vec![])
        .with_height_targets(vec![])
        .with_max_time(3.0 * t0);
    let fwd = continue_from(&half, Direction::Forward, &fwd_cfg)?;
    let traj = half.join(&fwd)?;

    let mut z_residual: f64 = 0.0;
    let mut theta_residual: f64 = 0.0;
    let (mut shift_min, mut shift_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=PERIOD_CHECK_POINTS {
        let t = -t0 + 2.0 * t0 * (i as f64 / PERIOD_CHECK_POINTS as f64);
        let a = traj.dense_eval(t)?;
        let b = traj.dense_eval(t + 2.0 * t0)?;
        z_residual = z_residual.max((b.z - a.z).abs());
        theta_residual = theta_residual.max((b.theta - a.theta - 2.0 * PI).abs());
        let shift = b.x - a.x;
        shift_min = shift_min.min(shift);
        shift_max = shift_max.max(shift);
    }
    let x_shift = traj.dense_eval(2.0 * t0)?.x;
    Ok(PeriodInfo {
        t0,
        t1,
        period: 2.0 * t0,
        x_shift,
        z_residual,
        theta_residual,
        x_shift_residual: shift_max - shift_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntersectionInfo {
    pub t2: f64,
    /// `(x(t2), z(t2))`.
    pub point: (f64, f64),
    /// `max(|x(t2)|, |x(-t2)|)`.
    pub x_residual: f64,
    /// `|z(t2) - z(-t2)|`.
    pub z_residual: f64,
}

/// Root of `x(-t)` on `(t1, t0)` for a profile symmetric about `t = 0`.
pub fn find_self_intersection(
    profile: &ProfileCurve,
    t0: f64,
    t1: f64,
) -> Result<IntersectionInfo, ProfileError> {
    if !(t1 > 0.0 && t0 > t1) {
        return Err(ProfileError::InvalidArgument("need 0 < t1 < t0"));
    }
    let x_neg = |t: f64| profile.position_at(-t).map(|p| p.0);
    let at_t0 = x_neg(t0)?;
    let at_t1 = x_neg(t1)?;
    if !(at_t0 < 0.0 && at_t1 > 0.0) {
        return Err(ProfileError::NoSignChange { at_t0, at_t1 });
    }
    let (mut a, mut b) = (t1, t0);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if x_neg(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let t2 = 0.5 * (a + b);
    let (xp, zp) = profile.position_at(t2)?;
    let (xm, zm) = profile.position_at(-t2)?;
    Ok(IntersectionInfo {
        t2,
        point: (xp, zp),
        x_residual: xp.abs().max(xm.abs()),
        z_residual: (zp - zm).abs(),
    })
}
