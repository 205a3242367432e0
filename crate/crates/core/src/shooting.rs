//! Classification of the one-parameter family through `(π, λ)`, the search
//! for the threshold λ₀ and phase-portrait sweeps.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use thiserror::Error;

use crate::integrator::{
    continue_from, integrate, reflect, symmetric_extension, Direction, IntegratorConfig,
    IntegratorError, Termination, Trajectory,
};
use crate::phase_field::PhasePoint;

/// Contact threshold used while deciding on which side of the corner a
/// trajectory passes. The offset state resolves gaps far below this.
const CORNER_EPS: f64 = 1e-30;

/// Largest λ tried when bracketing λ₀.
pub const BRACKET_LIMIT: f64 = 65536.0;

const POLYLINE_POINTS: usize = 257;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShootingError {
    #[error("lambda must be a finite number greater than 1, got {lambda}")]
    InvalidLambda { lambda: f64 },
    #[error("tolerance must be positive, got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("no lambda up to {limit} crosses theta = 0 above the corner")]
    BracketFailure { limit: f64 },
    #[error("lambda = {lambda}: integration ended without a decision ({termination:?})")]
    Unresolved {
        lambda: f64,
        termination: Termination,
    },
    #[error(transparent)]
    Integration(#[from] IntegratorError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    pub integrator: IntegratorConfig,
    /// Half-width of the window around √2 treated as the sphere.
    pub tol_sphere: f64,
    /// Passes within this distance of the corner count as the separatrix.
    pub separatrix_band: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            integrator: IntegratorConfig::default(),
            tol_sphere: 1e-9,
            separatrix_band: 1e-9,
        }
    }
}

impl From<IntegratorConfig> for ClassifyConfig {
    fn from(integrator: IntegratorConfig) -> Self {
        Self {
            integrator,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaClass {
    /// The round sphere; limit `(π/2, 0)` reached after arc length `√2π/2`.
    Sphere { limit: PhasePoint, half_span: f64 },
    /// Crosses `θ = 0` at height `crossing_height > 1` at `t = -t0`.
    Periodic { crossing_height: f64, t0: f64 },
    /// Runs into the corner `(0, 1)`. `miss` is `z - 1` at `θ = 0` when
    /// positive and `-θ` at `z = 1` when negative; `bracket` is the λ₀
    /// bracket when one is known.
    Separatrix {
        miss: f64,
        bracket: Option<(f64, f64)>,
    },
    /// `1 < λ < √2`: hits the boundary at `limit` after arc length `half_span`.
    IncompleteLow { limit: PhasePoint, half_span: f64 },
    /// `√2 < λ < λ₀`.
    IncompleteHigh { limit: PhasePoint, half_span: f64 },
}

impl LambdaClass {
    pub fn name(&self) -> &'static str {
        match self {
            LambdaClass::Sphere { .. } => "Sphere",
            LambdaClass::Periodic { .. } => "Periodic",
            LambdaClass::Separatrix { .. } => "Separatrix",
            LambdaClass::IncompleteLow { .. } => "IncompleteLow",
            LambdaClass::IncompleteHigh { .. } => "IncompleteHigh",
        }
    }

    /// Boundary point and half span for the classes with a finite span.
    pub fn boundary_limit(&self) -> Option<(PhasePoint, f64)> {
        match *self {
            LambdaClass::Sphere { limit, half_span }
            | LambdaClass::IncompleteLow { limit, half_span }
            | LambdaClass::IncompleteHigh { limit, half_span } => Some((limit, half_span)),
            _ => None,
        }
    }
}

fn check_lambda(lambda: f64) -> Result<(), ShootingError> {
    if lambda.is_finite() && lambda > 1.0 {
        Ok(())
    } else {
        Err(ShootingError::InvalidLambda { lambda })
    }
}

/// Backward run from `(π, λ)` stopped at `θ = 0` or `z = 1`, whichever
/// comes first, with the signed distance by which it misses the corner.
fn corner_run(lambda: f64, cfg: &ClassifyConfig) -> Result<(Trajectory, f64), ShootingError> {
    check_lambda(lambda)?;
    let mut run_cfg = cfg
        .integrator
        .clone()
        .with_theta_targets(vec![0.0])
        .with_height_targets(vec![1.0]);
    run_cfg.boundary_eps = run_cfg.boundary_eps.min(CORNER_EPS);
    let traj = integrate(PhasePoint::new(PI, lambda), Direction::Backward, &run_cfg)?;
    let first = traj.first();
    let miss = match traj.termination() {
        Termination::ThetaCrossing { .. } => first.z_offset,
        Termination::HeightCrossing { .. } => -first.theta,
        Termination::BoundaryContact { .. } => 0.0,
        termination => {
            return Err(ShootingError::Unresolved {
                lambda,
                termination,
            })
        }
    };
    Ok((traj, miss))
}

/// Signed miss distance of the backward trajectory from `(π, λ)` at the
/// corner: positive above λ₀, negative below.
pub fn corner_miss(lambda: f64, cfg: &ClassifyConfig) -> Result<f64, ShootingError> {
    corner_run(lambda, cfg).map(|(_, miss)| miss)
}

pub fn classify_lambda(lambda: f64, cfg: &ClassifyConfig) -> Result<LambdaClass, ShootingError> {
    classify_with_trajectory(lambda, cfg).map(|(class, _)| class)
}

/// Classification together with the backward half-trajectory ending at
/// `(π, λ)` at `t = 0`.
pub fn classify_with_trajectory(
    lambda: f64,
    cfg: &ClassifyConfig,
) -> Result<(LambdaClass, Trajectory), ShootingError> {
    check_lambda(lambda)?;
    if (lambda - SQRT_2).abs() <= cfg.tol_sphere {
        let traj = integrate(
            PhasePoint::new(PI, lambda),
            Direction::Backward,
            &cfg.integrator,
        )?;
        let class = LambdaClass::Sphere {
            limit: PhasePoint::new(PI / 2.0, 0.0),
            half_span: PI / SQRT_2,
        };
        return Ok((class, traj));
    }

    let (head, miss) = corner_run(lambda, cfg)?;
    if miss.abs() <= cfg.separatrix_band {
        return Ok((
            LambdaClass::Separatrix {
                miss,
                bracket: None,
            },
            head,
        ));
    }
    if miss > 0.0 {
        let first = head.first();
        let class = LambdaClass::Periodic {
            crossing_height: first.z,
            t0: -first.t,
        };
        return Ok((class, head));
    }

    // Below the corner: carry on down to the boundary.
    let rest_cfg = cfg
        .integrator
        .clone()
        .with_theta_targets(vec![])
        .with_height_targets(vec![]);
    let tail = continue_from(&head, Direction::Backward, &rest_cfg)?;
    let traj = tail.join(&head)?;
    match traj.termination() {
        Termination::BoundaryContact { limit, t_limit } if limit.z > 0.0 && limit.z < 1.0 => {
            let half_span = -t_limit;
            let class = if lambda < SQRT_2 {
                LambdaClass::IncompleteLow { limit, half_span }
            } else {
                LambdaClass::IncompleteHigh { limit, half_span }
            };
            Ok((class, traj))
        }
        termination => Err(ShootingError::Unresolved {
            lambda,
            termination,
        }),
    }
}

/// The full trajectory through `(π, λ)`: the backward half joined with its
/// mirror image about `θ = π`.
pub fn symmetric_trajectory(
    lambda: f64,
    cfg: &ClassifyConfig,
) -> Result<(LambdaClass, Trajectory), ShootingError> {
    let (class, half) = classify_with_trajectory(lambda, cfg)?;
    Ok((class, symmetric_extension(&half, 1)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda0Estimate {
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// λ₀ by bisection on "the backward trajectory from `(π, λ)` crosses
/// `θ = 0` above the corner".
pub fn find_lambda0(cfg: &ClassifyConfig, tol: f64) -> Result<Lambda0Estimate, ShootingError> {
    if !(tol > 0.0) {
        return Err(ShootingError::InvalidTolerance { tol });
    }
    let above = |lambda: f64| corner_miss(lambda, cfg).map(|m| m > 0.0);

    let mut lo = SQRT_2;
    let mut hi = 2.0 * SQRT_2;
    while !above(hi)? {
        lo = hi;
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(ShootingError::BracketFailure {
                limit: BRACKET_LIMIT,
            });
        }
    }

    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    Ok(Lambda0Estimate {
        value: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortraitEntry {
    pub lambda: f64,
    pub class: Result<LambdaClass, ShootingError>,
    /// `(θ, z)` along the trajectory, `θ` in `[0, 2π]`.
    pub polyline: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortraitReport {
    /// Sorted by λ.
    pub entries: Vec<PortraitEntry>,
    pub lambda0: Lambda0Estimate,
}

/// Tolerance of the λ₀ estimate attached to portraits.
pub const PORTRAIT_LAMBDA0_TOL: f64 = 1e-10;

fn polyline(traj: &Trajectory) -> Vec<(f64, f64)> {
    let (lo, hi) = traj.span();
    let step = (hi - lo) / (POLYLINE_POINTS - 1) as f64;
    if !(step > 0.0) {
        return vec![(traj.first().theta, traj.first().z)];
    }
    traj.uniform_samples(step)
        .iter()
        .map(|s| (s.theta, s.z))
        .collect()
}

fn portrait_entry(lambda: f64, cfg: &ClassifyConfig, lambda0: &Lambda0Estimate) -> PortraitEntry {
    let result = classify_with_trajectory(lambda, cfg).and_then(|(class, half)| {
        let mirror = reflect(&half, 1)?;
        Ok((class, half.join(&mirror)?))
    });
    match result {
        Ok((class, traj)) => {
            let class = match class {
                LambdaClass::Separatrix { miss, .. } => LambdaClass::Separatrix {
                    miss,
                    bracket: Some(lambda0.bracket),
                },
                other => other,
            };
            PortraitEntry {
                lambda,
                class: Ok(class),
                polyline: polyline(&traj),
            }
        }
        Err(e) => PortraitEntry {
            lambda,
            class: Err(e),
            polyline: Vec::new(),
        },
    }
}

/// Classify every λ in parallel. Failures are recorded per entry.
pub fn portrait(lambdas: &[f64], cfg: &ClassifyConfig) -> Result<PortraitReport, ShootingError> {
    let lambda0 = find_lambda0(cfg, PORTRAIT_LAMBDA0_TOL)?;
    let mut entries: Vec<PortraitEntry> = lambdas
        .par_iter()
        .map(|&lambda| portrait_entry(lambda, cfg, &lambda0))
        .collect();
    entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(PortraitReport { entries, lambda0 })
}
