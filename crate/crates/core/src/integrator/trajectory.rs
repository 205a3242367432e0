use std::f64::consts::PI;

use crate::phase_field::{slope_from_offset, PhasePoint};

use super::{series, IntegratorError};

/// One stored point of a trajectory, with the profile abscissa `x` carried
/// alongside `(θ, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    /// Unwrapped tangent angle.
    pub theta: f64,
    pub z: f64,
    /// `z - 1` at full precision; `z` alone cannot resolve heights within
    /// `1e-16` of the corner.
    pub z_offset: f64,
    pub x: f64,
    pub dtheta: f64,
    pub dz: f64,
}

impl TrajectorySample {
    pub(crate) fn from_state(t: f64, y: [f64; 3]) -> Self {
        let [theta, w, x] = y;
        Self {
            t,
            theta,
            z: 1.0 + w,
            z_offset: w,
            x,
            dtheta: slope_from_offset(theta, w).unwrap_or(0.0),
            dz: theta.sin(),
        }
    }

    pub fn point(&self) -> PhasePoint {
        PhasePoint::new(self.theta, self.z)
    }

    pub(crate) fn state(&self) -> [f64; 3] {
        [self.theta, self.z_offset, self.x]
    }
}

/// How one end of a trajectory came about.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    /// The point integration started from.
    Start { t: f64 },
    /// A requested angle was crossed at time `t`.
    ThetaCrossing { target: f64, t: f64 },
    /// A requested height was crossed at time `t`.
    HeightCrossing { target: f64, t: f64 },
    /// `z - |cos θ|` fell below the contact threshold; `limit` is the
    /// extrapolated boundary point reached at `t_limit`.
    BoundaryContact { limit: PhasePoint, t_limit: f64 },
    /// The configured time budget ran out.
    TimeCap { t: f64 },
    /// The end is the degenerate corner, covered by the power series.
    SeriesOrigin { t: f64 },
}

impl Termination {
    fn mirrored(self, t_c: f64, n: i64) -> Self {
        let axis = 2.0 * PI * n as f64;
        match self {
            Termination::Start { t } => Termination::Start { t: 2.0 * t_c - t },
            Termination::ThetaCrossing { target, t } => Termination::ThetaCrossing {
                target: axis - target,
                t: 2.0 * t_c - t,
            },
            Termination::HeightCrossing { target, t } => Termination::HeightCrossing {
                target,
                t: 2.0 * t_c - t,
            },
            Termination::BoundaryContact { limit, t_limit } => Termination::BoundaryContact {
                limit: PhasePoint::new(axis - limit.theta, limit.z),
                t_limit: 2.0 * t_c - t_limit,
            },
            Termination::TimeCap { t } => Termination::TimeCap { t: 2.0 * t_c - t },
            Termination::SeriesOrigin { t } => Termination::SeriesOrigin { t: 2.0 * t_c - t },
        }
    }

    fn shifted(self, dt: f64, dtheta: f64) -> Self {
        match self {
            Termination::Start { t } => Termination::Start { t: t + dt },
            Termination::ThetaCrossing { target, t } => Termination::ThetaCrossing {
                target: target + dtheta,
                t: t + dt,
            },
            Termination::HeightCrossing { target, t } => {
                Termination::HeightCrossing { target, t: t + dt }
            }
            Termination::BoundaryContact { limit, t_limit } => Termination::BoundaryContact {
                limit: PhasePoint::new(limit.theta + dtheta, limit.z),
                t_limit: t_limit + dt,
            },
            Termination::TimeCap { t } => Termination::TimeCap { t: t + dt },
            Termination::SeriesOrigin { t } => Termination::SeriesOrigin { t: t + dt },
        }
    }
}

/// Affine relabelling `t = ts*u + t0`, `θ = as*θl + a0`, `x = xs*xl + x0`
/// between a segment's local solution and the trajectory's frame. Heights
/// are never remapped.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Frame {
    t_sign: f64,
    t_shift: f64,
    theta_sign: f64,
    theta_shift: f64,
    x_sign: f64,
    x_shift: f64,
}

impl Frame {
    const IDENTITY: Frame = Frame {
        t_sign: 1.0,
        t_shift: 0.0,
        theta_sign: 1.0,
        theta_shift: 0.0,
        x_sign: 1.0,
        x_shift: 0.0,
    };

    /// Apply `t -> ts*t + t0` etc. after this frame.
    fn then(self, outer: Frame) -> Frame {
        Frame {
            t_sign: outer.t_sign * self.t_sign,
            t_shift: outer.t_sign * self.t_shift + outer.t_shift,
            theta_sign: outer.theta_sign * self.theta_sign,
            theta_shift: outer.theta_sign * self.theta_shift + outer.theta_shift,
            x_sign: outer.x_sign * self.x_sign,
            x_shift: outer.x_sign * self.x_shift + outer.x_shift,
        }
    }

    fn local_time(&self, t: f64) -> f64 {
        self.t_sign * (t - self.t_shift)
    }

    fn map_state(&self, y: [f64; 3]) -> [f64; 3] {
        [
            self.theta_sign * y[0] + self.theta_shift,
            y[1],
            self.x_sign * y[2] + self.x_shift,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum LocalCurve {
    /// Continuous extension of one Runge–Kutta step from `u0` with signed
    /// step `h`, in the usual `y0, y1-y0, ...` five-vector form.
    Step {
        u0: f64,
        h: f64,
        coef: [[f64; 3]; 5],
    },
    /// The corner series in its own arc length `u = s >= 0`.
    Series,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Segment {
    t_lo: f64,
    t_hi: f64,
    frame: Frame,
    local: LocalCurve,
}

impl Segment {
    pub(crate) fn step(t0: f64, h: f64, coef: [[f64; 3]; 5]) -> Self {
        let t1 = t0 + h;
        Segment {
            t_lo: t0.min(t1),
            t_hi: t0.max(t1),
            frame: Frame::IDENTITY,
            local: LocalCurve::Step { u0: t0, h, coef },
        }
    }

    pub(crate) fn series(s_end: f64) -> Self {
        Segment {
            t_lo: 0.0,
            t_hi: s_end,
            frame: Frame::IDENTITY,
            local: LocalCurve::Series,
        }
    }

    pub(crate) fn clip(&mut self, t_lo: f64, t_hi: f64) {
        self.t_lo = self.t_lo.max(t_lo);
        self.t_hi = self.t_hi.min(t_hi);
    }

    pub(crate) fn state_at(&self, t: f64) -> [f64; 3] {
        let u = self.frame.local_time(t);
        let y = match &self.local {
            LocalCurve::Step { u0, h, coef } => {
                let s = (u - u0) / h;
                let s1 = 1.0 - s;
                let mut y = [0.0; 3];
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = coef[0][i]
                        + s * (coef[1][i] + s1 * (coef[2][i] + s * (coef[3][i] + s1 * coef[4][i])));
                }
                y
            }
            LocalCurve::Series => series::state(u.max(0.0)),
        };
        self.frame.map_state(y)
    }

    fn transformed(&self, outer: Frame) -> Segment {
        let a = outer.t_sign * self.t_lo + outer.t_shift;
        let b = outer.t_sign * self.t_hi + outer.t_shift;
        Segment {
            t_lo: a.min(b),
            t_hi: a.max(b),
            frame: self.frame.then(outer),
            local: self.local.clone(),
        }
    }
}

/// A dense integral curve of `X`, stored in increasing `t` with `θ`
/// increasing along it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    samples: Vec<TrajectorySample>,
    segments: Vec<Segment>,
    lower: Termination,
    upper: Termination,
}

impl Trajectory {
    /// `samples` and `segments` must already be sorted by `t`.
    pub(crate) fn from_parts(
        samples: Vec<TrajectorySample>,
        segments: Vec<Segment>,
        lower: Termination,
        upper: Termination,
    ) -> Self {
        Self {
            samples,
            segments,
            lower,
            upper,
        }
    }

    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn first(&self) -> &TrajectorySample {
        &self.samples[0]
    }

    pub fn last(&self) -> &TrajectorySample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn span(&self) -> (f64, f64) {
        (self.first().t, self.last().t)
    }

    /// End at the smallest `t`.
    pub fn lower_end(&self) -> Termination {
        self.lower
    }

    /// End at the largest `t`.
    pub fn upper_end(&self) -> Termination {
        self.upper
    }

    /// The end that integration ran into. For a trajectory assembled from
    /// two integrated halves, the lower one.
    pub fn termination(&self) -> Termination {
        match self.lower {
            Termination::Start { .. } => self.upper,
            other => other,
        }
    }

    /// Interpolated state at `t`. Node times return the stored sample.
    pub fn dense_eval(&self, t: f64) -> Result<TrajectorySample, IntegratorError> {
        let (lo, hi) = self.span();
        if !(t >= lo && t <= hi) {
            return Err(IntegratorError::OutOfRange { t, lo, hi });
        }
        if let Ok(i) = self.samples.binary_search_by(|s| s.t.total_cmp(&t)) {
            return Ok(self.samples[i]);
        }
        Ok(TrajectorySample::from_state(t, self.state_at(t)))
    }

    /// `(θ, z - 1, x)` at `t`, clamped into the span.
    pub(crate) fn state_at(&self, t: f64) -> [f64; 3] {
        let idx = self
            .segments
            .partition_point(|seg| seg.t_hi < t)
            .min(self.segments.len() - 1);
        self.segments[idx].state_at(t)
    }

    /// First time at which `θ = target`, located by bisection on the dense
    /// output. `θ` is monotone so the root is unique.
    pub fn time_at_theta(&self, target: f64) -> Option<f64> {
        let (first, last) = (self.first(), self.last());
        // Event ends land on their target only to rounding.
        let snap = 1e-12 * (1.0 + target.abs());
        if (target - first.theta).abs() <= snap {
            return Some(first.t);
        }
        if (target - last.theta).abs() <= snap {
            return Some(last.t);
        }
        if !(target > first.theta && target < last.theta) {
            return None;
        }
        let k = self.samples.partition_point(|s| s.theta < target);
        let (mut a, mut b) = (self.samples[k - 1].t, self.samples[k].t);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if self.state_at(m)[0] < target {
                a = m;
            } else {
                b = m;
            }
        }
        Some(0.5 * (a + b))
    }

    /// Shift by one period of the lifted picture: `t += dt`, `θ += dtheta`,
    /// `x += dx`.
    pub fn shifted(&self, dt: f64, dtheta: f64, dx: f64) -> Trajectory {
        let frame = Frame {
            t_shift: dt,
            theta_shift: dtheta,
            x_shift: dx,
            ..Frame::IDENTITY
        };
        Trajectory {
            samples: self
                .samples
                .iter()
                .map(|s| TrajectorySample {
                    t: s.t + dt,
                    theta: s.theta + dtheta,
                    x: s.x + dx,
                    ..*s
                })
                .collect(),
            segments: self
                .segments
                .iter()
                .map(|seg| seg.transformed(frame))
                .collect(),
            lower: self.lower.shifted(dt, dtheta),
            upper: self.upper.shifted(dt, dtheta),
        }
    }

    /// Mirror image through the point `(t_c, nπ, x_c)`:
    /// `(t, θ, z, x) -> (2t_c - t, 2nπ - θ, z, 2x_c - x)`.
    pub(crate) fn mirrored(&self, t_c: f64, n: i64, x_c: f64) -> Trajectory {
        let axis = 2.0 * PI * n as f64;
        let frame = Frame {
            t_sign: -1.0,
            t_shift: 2.0 * t_c,
            theta_sign: -1.0,
            theta_shift: axis,
            x_sign: -1.0,
            x_shift: 2.0 * x_c,
        };
        Trajectory {
            samples: self
                .samples
                .iter()
                .rev()
                .map(|s| TrajectorySample {
                    t: 2.0 * t_c - s.t,
                    theta: axis - s.theta,
                    x: 2.0 * x_c - s.x,
                    dz: -s.dz,
                    ..*s
                })
                .collect(),
            segments: self
                .segments
                .iter()
                .rev()
                .map(|seg| seg.transformed(frame))
                .collect(),
            lower: self.upper.mirrored(t_c, n),
            upper: self.lower.mirrored(t_c, n),
        }
    }

    /// Concatenate with a trajectory that starts where this one ends.
    pub fn join(&self, next: &Trajectory) -> Result<Trajectory, IntegratorError> {
        let a = self.last();
        let b = next.first();
        let scale = 1.0 + a.t.abs();
        if (a.t - b.t).abs() > 1e-12 * scale
            || (a.theta - b.theta).abs() > 1e-9
            || (a.z - b.z).abs() > 1e-9
        {
            return Err(IntegratorError::Disjoint {
                end: a.t,
                start: b.t,
            });
        }
        let mut samples = self.samples.clone();
        samples.extend_from_slice(&next.samples[1..]);
        let mut segments = self.segments.clone();
        segments.extend(next.segments.iter().cloned());
        Ok(Trajectory {
            samples,
            segments,
            lower: self.lower,
            upper: next.upper,
        })
    }

    /// Re-sample at (at most) `step` spacing, keeping both ends.
    pub fn uniform_samples(&self, step: f64) -> Vec<TrajectorySample> {
        let (lo, hi) = self.span();
        let n = (((hi - lo) / step).ceil() as usize).max(1);
        (0..=n)
            .map(|i| {
                if i == n {
                    *self.last()
                } else {
                    let t = lo + (hi - lo) * (i as f64 / n as f64);
                    self.dense_eval(t).unwrap_or(*self.first())
                }
            })
            .collect()
    }
}
