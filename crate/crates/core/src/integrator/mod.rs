//! Adaptive integration of `X` with dense output and event location.
//!
//! The state carried internally is `(θ, z - 1, x)`: near the corner `(0, 1)`
//! the height differs from 1 by far less than an ulp of `z`, and all of the
//! interesting behaviour of the phase portrait happens there.

mod dopri;
mod series;
mod trajectory;

use std::f64::consts::PI;

use thiserror::Error;

use crate::phase_field::{gap_from_offset, PhasePoint};

use dopri::{rhs, try_step, State};
use trajectory::Segment;
pub use trajectory::{Termination, Trajectory, TrajectorySample};

/// Default arc length from the corner at which the separatrix is seeded.
pub const DEFAULT_SEED_PARAM: f64 = 1e-3;

/// Largest accepted relative mismatch between the seed series and the field.
const SEED_TOLERANCE: f64 = 1e-8;

const EVENT_BISECTIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegratorError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("start point (theta = {theta}, z = {z}) is not inside the domain")]
    Domain { theta: f64, z: f64 },
    #[error("step size underflow at t = {t} (h = {h:e}, boundary gap = {gap:e})")]
    StepUnderflow { t: f64, h: f64, gap: f64 },
    #[error("t = {t} is outside the trajectory span [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("series seed violates the constraint: relative residual {residual:e}")]
    SeedInvalid { residual: f64 },
    #[error("trajectory does not meet theta = {n}*pi at a height above 1 at one of its ends")]
    NotOnAxis { n: i64 },
    #[error("trajectories do not meet: one ends at t = {end}, the other starts at t = {start}")]
    Disjoint { end: f64, start: f64 },
    #[error("integration stopped ({termination:?}) before reaching theta = {target}")]
    TargetMissed {
        target: f64,
        termination: Termination,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    /// Contact threshold on `z - |cos θ|`.
    pub boundary_eps: f64,
    /// Cap on elapsed arc length.
    pub max_time: f64,
    /// Angles whose first crossing ends the integration.
    pub theta_targets: Vec<f64>,
    /// Heights whose first crossing ends the integration.
    pub height_targets: Vec<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_step: 0.1,
            min_step: 1e-13,
            boundary_eps: 1e-10,
            max_time: 1e3,
            theta_targets: Vec::new(),
            height_targets: Vec::new(),
        }
    }
}

impl IntegratorConfig {
    pub fn with_theta_targets(mut self, targets: impl Into<Vec<f64>>) -> Self {
        self.theta_targets = targets.into();
        self
    }

    pub fn with_height_targets(mut self, targets: impl Into<Vec<f64>>) -> Self {
        self.height_targets = targets.into();
        self
    }

    pub fn with_max_time(mut self, max_time: f64) -> Self {
        self.max_time = max_time;
        self
    }

    /// Same configuration with both tolerances scaled by `factor`.
    pub fn scaled_tolerances(mut self, factor: f64) -> Self {
        self.rel_tol *= factor;
        self.abs_tol *= factor;
        self
    }

    pub fn validate(&self) -> Result<(), IntegratorError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(IntegratorError::InvalidConfig(
                "tolerances must be positive",
            ));
        }
        if !(self.min_step > 0.0 && self.min_step < self.max_step) {
            return Err(IntegratorError::InvalidConfig(
                "need 0 < min_step < max_step",
            ));
        }
        if !(self.boundary_eps > 0.0) {
            return Err(IntegratorError::InvalidConfig(
                "boundary_eps must be positive",
            ));
        }
        if !(self.max_time > 0.0) {
            return Err(IntegratorError::InvalidConfig("max_time must be positive"));
        }
        Ok(())
    }
}

/// Integrate from `start` at `t = 0` with `x = 0`.
pub fn integrate(
    start: PhasePoint,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    if !start.in_domain() {
        return Err(IntegratorError::Domain {
            theta: start.theta,
            z: start.z,
        });
    }
    run(0.0, [start.theta, start.z - 1.0, 0.0], direction, cfg)
}

/// Resume integration from the last sample of `traj` (at its upper end when
/// going forward, lower end when going backward).
pub fn continue_from(
    traj: &Trajectory,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    let s = match direction {
        Direction::Forward => traj.last(),
        Direction::Backward => traj.first(),
    };
    run(s.t, s.state(), direction, cfg)
}

pub fn dense_eval(traj: &Trajectory, t: f64) -> Result<TrajectorySample, IntegratorError> {
    traj.dense_eval(t)
}

fn error_norm(err: &State, y0: &State, y1: &State, cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..3 {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sc;
        acc += r * r;
    }
    (acc / 3.0).sqrt()
}

struct Event {
    t: f64,
    component: usize,
    level: f64,
    target: f64,
}

impl Event {
    fn termination(&self) -> Termination {
        if self.component == 0 {
            Termination::ThetaCrossing {
                target: self.target,
                t: self.t,
            }
        } else {
            Termination::HeightCrossing {
                target: self.target,
                t: self.t,
            }
        }
    }
}

/// Earliest sign change of `θ - target` or `z - target` over an accepted
/// step, located on the dense output.
fn locate_event(
    seg: &Segment,
    t0: f64,
    y0: &State,
    t1: f64,
    y1: &State,
    cfg: &IntegratorConfig,
) -> Option<Event> {
    let mut best: Option<Event> = None;
    let candidates = cfg
        .theta_targets
        .iter()
        .map(|&v| (0usize, v, v))
        .chain(cfg.height_targets.iter().map(|&v| (1usize, v - 1.0, v)));
    for (component, level, target) in candidates {
        let f0 = y0[component] - level;
        let f1 = y1[component] - level;
        if f0 == 0.0 || f0 * f1 > 0.0 {
            continue;
        }
        let (mut a, mut b) = (t0, t1);
        for _ in 0..EVENT_BISECTIONS {
            let m = 0.5 * (a + b);
            if m == a || m == b {
                break;
            }
            let fm = seg.state_at(m)[component] - level;
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if (fm > 0.0) == (f0 > 0.0) {
                a = m;
            } else {
                b = m;
            }
        }
        let t = if f1 == 0.0 && a == t0 { t1 } else { b };
        if best
            .as_ref()
            .is_none_or(|e| (t - t0).abs() < (e.t - t0).abs())
        {
            best = Some(Event {
                t,
                component,
                level,
                target,
            });
        }
    }
    best
}

/// Sharpen an event time with full steps from `(t0, y0)` and a Newton
/// correction; the dense output is only fourth order. Returns the final
/// step, or `None` to keep the dense estimate.
fn refine_event(event: &mut Event, t0: f64, y0: &State, k1: &State) -> Option<dopri::Step> {
    let mut last = None;
    for _ in 0..4 {
        let step = try_step(y0, k1, event.t - t0)?;
        let f = step.y1[event.component] - event.level;
        let rate = step.k7[event.component];
        let dt = if rate != 0.0 { -f / rate } else { 0.0 };
        let settled = dt.abs() <= 4.0 * f64::EPSILON * (1.0 + event.t.abs());
        last = Some(step);
        if settled || !dt.is_finite() || dt.abs() > (event.t - t0).abs() {
            break;
        }
        event.t += dt;
    }
    last.filter(|s| (s.y1[event.component] - event.level).abs() < 1e-9)
}

/// Boundary point reached just after the last samples, from quadratic
/// extrapolation of `(θ, z - 1)` and of the gap in `t`.
fn extrapolate_contact(samples: &[TrajectorySample]) -> (PhasePoint, f64) {
    let n = samples.len();
    let last = samples[n - 1];
    if n < 3 {
        return (last.point(), last.t);
    }
    let pts = &samples[n - 3..];
    let ts = [pts[0].t, pts[1].t, pts[2].t];
    let gap: Vec<f64> = pts
        .iter()
        .map(|s| gap_from_offset(s.theta, s.z_offset))
        .collect();
    let quad = |v: [f64; 3], t: f64| -> f64 {
        let l0 = (t - ts[1]) * (t - ts[2]) / ((ts[0] - ts[1]) * (ts[0] - ts[2]));
        let l1 = (t - ts[0]) * (t - ts[2]) / ((ts[1] - ts[0]) * (ts[1] - ts[2]));
        let l2 = (t - ts[0]) * (t - ts[1]) / ((ts[2] - ts[0]) * (ts[2] - ts[1]));
        v[0] * l0 + v[1] * l1 + v[2] * l2
    };
    let dquad = |v: [f64; 3], t: f64| -> f64 {
        let d0 = ((t - ts[1]) + (t - ts[2])) / ((ts[0] - ts[1]) * (ts[0] - ts[2]));
        let d1 = ((t - ts[0]) + (t - ts[2])) / ((ts[1] - ts[0]) * (ts[1] - ts[2]));
        let d2 = ((t - ts[0]) + (t - ts[1])) / ((ts[2] - ts[0]) * (ts[2] - ts[1]));
        v[0] * d0 + v[1] * d1 + v[2] * d2
    };
    let g = [gap[0], gap[1], gap[2]];
    let mut t = last.t;
    for _ in 0..20 {
        let d = dquad(g, t);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = t - quad(g, t) / d;
        if (next - t).abs() <= 1e-16 * (1.0 + t.abs()) {
            t = next;
            break;
        }
        t = next;
    }
    let reach = (ts[2] - ts[1]).abs() * 10.0;
    if !t.is_finite() || (t - last.t).abs() > reach {
        return (last.point(), last.t);
    }
    let theta = quad([pts[0].theta, pts[1].theta, pts[2].theta], t);
    let w = quad([pts[0].z_offset, pts[1].z_offset, pts[2].z_offset], t);
    (PhasePoint::new(theta, 1.0 + w), t)
}

fn run(
    t0: f64,
    y0: State,
    direction: Direction,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    cfg.validate()?;
    let sign = direction.sign();
    let mut k1 = rhs(&y0).ok_or(IntegratorError::Domain {
        theta: y0[0],
        z: 1.0 + y0[1],
    })?;
    let near_boundary = cfg.boundary_eps.sqrt();
    let mut t = t0;
    let mut y = y0;
    let mut samples = vec![TrajectorySample::from_state(t0, y0)];
    let mut segments: Vec<Segment> = Vec::new();
    let mut h = cfg.max_step.min(1e-2);

    let end = loop {
        let elapsed = (t - t0).abs();
        if elapsed >= cfg.max_time {
            break Termination::TimeCap { t };
        }
        let habs = h.min(cfg.max_step).min(cfg.max_time - elapsed);
        if habs < cfg.min_step && habs < cfg.max_time - elapsed {
            let gap = gap_from_offset(y[0], y[1]);
            if gap < near_boundary {
                let (limit, t_limit) = extrapolate_contact(&samples);
                break Termination::BoundaryContact { limit, t_limit };
            }
            return Err(IntegratorError::StepUnderflow { t, h: habs, gap });
        }
        let Some(step) = try_step(&y, &k1, sign * habs) else {
            h = 0.5 * habs;
            continue;
        };
        let err = error_norm(&step.err, &y, &step.y1, cfg);
        if !(err <= 1.0) {
            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).max(0.2)
            } else {
                0.2
            };
            h = habs * factor;
            continue;
        }

        let t1 = t + sign * habs;
        let mut seg = Segment::step(t, sign * habs, step.dense);
        if let Some(mut event) = locate_event(&seg, t, &y, t1, &step.y1, cfg) {
            let dense_t = event.t;
            match refine_event(&mut event, t, &y, &k1) {
                Some(exact) => {
                    segments.push(Segment::step(t, event.t - t, exact.dense));
                    samples.push(TrajectorySample::from_state(event.t, exact.y1));
                }
                None => {
                    event.t = dense_t;
                    seg.clip(t.min(dense_t), t.max(dense_t));
                    samples.push(TrajectorySample::from_state(dense_t, seg.state_at(dense_t)));
                    segments.push(seg);
                }
            }
            break event.termination();
        }
        segments.push(seg);
        samples.push(TrajectorySample::from_state(t1, step.y1));
        let gap_before = gap_from_offset(y[0], y[1]);
        t = t1;
        y = step.y1;
        k1 = step.k7;
        // Near the corner the separatrix itself runs inside the contact
        // threshold, moving away from the boundary.
        let gap = gap_from_offset(y[0], y[1]);
        if gap < cfg.boundary_eps && gap < gap_before {
            let (limit, t_limit) = extrapolate_contact(&samples);
            break Termination::BoundaryContact { limit, t_limit };
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = habs * factor;
    };

    let start = Termination::Start { t: t0 };
    Ok(match direction {
        Direction::Forward => Trajectory::from_parts(samples, segments, start, end),
        Direction::Backward => {
            samples.reverse();
            segments.reverse();
            Trajectory::from_parts(samples, segments, end, start)
        }
    })
}

/// The separatrix from the corner `(0, 1)` up to `θ = π`, with the default
/// seed. Time is arc length from the corner; the final height estimates λ₀.
pub fn launch_separatrix(cfg: &IntegratorConfig) -> Result<Trajectory, IntegratorError> {
    launch_separatrix_from(DEFAULT_SEED_PARAM, cfg)
}

pub fn launch_separatrix_from(
    seed_param: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, IntegratorError> {
    if !(seed_param > 0.0 && seed_param <= 0.1) {
        return Err(IntegratorError::InvalidConfig(
            "seed parameter must lie in (0, 0.1]",
        ));
    }
    let seed = series::state(seed_param);
    let field = rhs(&seed).ok_or(IntegratorError::SeedInvalid {
        residual: f64::INFINITY,
    })?;
    let residual = (series::theta_slope(seed_param) / field[0] - 1.0).abs();
    if !(residual <= SEED_TOLERANCE) {
        return Err(IntegratorError::SeedInvalid { residual });
    }
    let launch_cfg = cfg
        .clone()
        .with_theta_targets(vec![PI])
        .with_height_targets(vec![]);
    let tail = run(seed_param, seed, Direction::Forward, &launch_cfg)?;
    let upper = tail.upper_end();
    if !matches!(upper, Termination::ThetaCrossing { .. }) {
        return Err(IntegratorError::TargetMissed {
            target: PI,
            termination: upper,
        });
    }
    let head = Trajectory::from_parts(
        vec![
            TrajectorySample::from_state(0.0, series::state(0.0)),
            TrajectorySample::from_state(seed_param, seed),
        ],
        vec![Segment::series(seed_param)],
        Termination::SeriesOrigin { t: 0.0 },
        Termination::Start { t: seed_param },
    );
    head.join(&tail)
}

/// Mirror copy of `traj` through the point where it meets `θ = nπ`:
/// `(t, θ, z, x) -> (2t_c - t, 2nπ - θ, z, 2x(t_c) - x)`.
pub fn reflect(traj: &Trajectory, n: i64) -> Result<Trajectory, IntegratorError> {
    let (t_c, x_c) = axis_crossing(traj, n)?;
    Ok(traj.mirrored(t_c, n, x_c))
}

/// `traj` joined with its mirror copy. The crossing with `θ = nπ` has to be
/// one of the ends of `traj`.
pub fn symmetric_extension(traj: &Trajectory, n: i64) -> Result<Trajectory, IntegratorError> {
    let (t_c, x_c) = axis_crossing(traj, n)?;
    let mirror = traj.mirrored(t_c, n, x_c);
    if t_c == traj.last().t {
        traj.join(&mirror)
    } else if t_c == traj.first().t {
        mirror.join(traj)
    } else {
        Err(IntegratorError::NotOnAxis { n })
    }
}

fn axis_crossing(traj: &Trajectory, n: i64) -> Result<(f64, f64), IntegratorError> {
    let axis = PI * n as f64;
    let t_c = traj
        .time_at_theta(axis)
        .ok_or(IntegratorError::NotOnAxis { n })?;
    let s = traj.dense_eval(t_c)?;
    if s.z_offset <= 0.0 {
        return Err(IntegratorError::NotOnAxis { n });
    }
    Ok((t_c, s.x))
}
