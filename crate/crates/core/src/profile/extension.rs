//! Copies of the separatrix glued end to end, optionally with pieces of the
//! line `z = 1` between them.

use std::f64::consts::PI;

use crate::integrator::Trajectory;
use crate::shooting::ClassifyConfig;

use super::{separatrix_trajectory, ProfileCurve, ProfileError, ProfileKind, ProfileSample};

/// One-sided first..third derivative weights on 8 equispaced points
/// `0, 1, ..., 7` (in units of the step), exact for degree 7.
const ONE_SIDED: [[f64; 8]; 4] = [
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [
        -363.0 / 140.0,
        7.0,
        -21.0 / 2.0,
        35.0 / 3.0,
        -35.0 / 4.0,
        21.0 / 5.0,
        -7.0 / 6.0,
        1.0 / 7.0,
    ],
    [
        469.0 / 90.0,
        -223.0 / 10.0,
        879.0 / 20.0,
        -949.0 / 18.0,
        41.0,
        -201.0 / 10.0,
        1019.0 / 180.0,
        -7.0 / 10.0,
    ],
    [
        -967.0 / 120.0,
        638.0 / 15.0,
        -3929.0 / 40.0,
        389.0 / 3.0,
        -2545.0 / 24.0,
        268.0 / 5.0,
        -1849.0 / 120.0,
        29.0 / 15.0,
    ],
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionSpec {
    pub copies: usize,
    /// Lengths of the `z = 1` pieces between consecutive copies.
    pub segment_lengths: Vec<f64>,
    /// Spacing of the emitted profile samples.
    pub sample_step: f64,
    /// Finite-difference step for the junction report.
    pub fd_step: f64,
}

impl ExtensionSpec {
    pub fn new(copies: usize, segment_lengths: Vec<f64>) -> Self {
        Self {
            copies,
            segment_lengths,
            sample_step: 1e-2,
            fd_step: 1e-3,
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.copies == 0 {
            return Err(ProfileError::SpecInvalid(
                "copies must be at least 1".into(),
            ));
        }
        if self.segment_lengths.len() + 1 != self.copies {
            return Err(ProfileError::SpecInvalid(format!(
                "{} copies need {} segment lengths, got {}",
                self.copies,
                self.copies - 1,
                self.segment_lengths.len()
            )));
        }
        if let Some(l) = self
            .segment_lengths
            .iter()
            .find(|l| !(l.is_finite() && **l >= 0.0))
        {
            return Err(ProfileError::SpecInvalid(format!(
                "segment length {l} is not a non-negative number"
            )));
        }
        if !(self.sample_step > 0.0 && self.fd_step > 0.0) {
            return Err(ProfileError::SpecInvalid("steps must be positive".into()));
        }
        Ok(())
    }
}

/// Highest order to which the profile is verified smooth at a junction:
/// `Ck` when `θ` and its derivatives below order `k - 1` agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Continuity {
    C0,
    C1,
    C2,
    C3,
    C4Plus,
}

impl Continuity {
    pub fn name(self) -> &'static str {
        match self {
            Continuity::C0 => "C0",
            Continuity::C1 => "C1",
            Continuity::C2 => "C2",
            Continuity::C3 => "C3",
            Continuity::C4Plus => "C4+",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JunctionKind {
    CopyCopy,
    CopySegment,
    SegmentCopy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Junction {
    pub t: f64,
    pub kind: JunctionKind,
    /// `|left - right|` for `θ, θ', θ'', θ'''`.
    pub jumps: [f64; 4],
    pub thresholds: [f64; 4],
    pub order: Continuity,
    /// Signed `θ'''(t+) - θ'''(t-)`.
    pub theta3_jump: f64,
    /// Distance between the two one-sided positions.
    pub position_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub fd_step: f64,
    pub junctions: Vec<Junction>,
}

impl RegularityReport {
    /// Lowest order over all junctions, `None` without junctions.
    pub fn min_order(&self) -> Option<Continuity> {
        self.junctions.iter().map(|j| j.order).min()
    }
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    /// Separatrix copy `j` over `[start, start + 2b]`.
    Copy { start: f64, index: usize, x0: f64 },
    /// Line `z = 1` at angle `θ`.
    Line {
        start: f64,
        length: f64,
        theta: f64,
        x0: f64,
    },
}

struct Layout<'a> {
    sep: &'a Trajectory,
    half: f64,
    pieces: Vec<Piece>,
}

impl Layout<'_> {
    fn build<'a>(sep: &'a Trajectory, spec: &ExtensionSpec) -> Layout<'a> {
        let (lo, hi) = sep.span();
        let half = 0.5 * (hi - lo);
        let width = sep.last().x - sep.first().x;
        let mut pieces = Vec::new();
        let (mut t, mut x) = (-half, sep.first().x);
        for index in 0..spec.copies {
            pieces.push(Piece::Copy {
                start: t,
                index,
                x0: x,
            });
            t += 2.0 * half;
            x += width;
            if let Some(&length) = spec.segment_lengths.get(index) {
                if length > 0.0 {
                    pieces.push(Piece::Line {
                        start: t,
                        length,
                        theta: 2.0 * PI * (index + 1) as f64,
                        x0: x,
                    });
                    t += length;
                    x += length;
                }
            }
        }
        Layout { sep, half, pieces }
    }

    fn piece_span(&self, piece: &Piece) -> (f64, f64) {
        match *piece {
            Piece::Copy { start, .. } => (start, start + 2.0 * self.half),
            Piece::Line { start, length, .. } => (start, start + length),
        }
    }

    fn span(&self) -> (f64, f64) {
        let first = self.piece_span(&self.pieces[0]).0;
        let last = self.piece_span(&self.pieces[self.pieces.len() - 1]).1;
        (first, last)
    }

    /// `(x, z, θ)` of `piece` at `t`, clamped into the piece.
    fn eval(&self, piece: &Piece, t: f64) -> Result<(f64, f64, f64), ProfileError> {
        let (a, b) = self.piece_span(piece);
        let t = t.clamp(a, b);
        match *piece {
            Piece::Copy { start, index, x0 } => {
                let local = (t - start - self.half).clamp(-self.half, self.half);
                let s = self.sep.dense_eval(local)?;
                let x = x0 + (s.x - self.sep.first().x);
                Ok((x, s.z, s.theta + 2.0 * PI * index as f64))
            }
            Piece::Line {
                start, theta, x0, ..
            } => Ok((x0 + (t - start), 1.0, theta)),
        }
    }

    fn piece_at(&self, t: f64) -> &Piece {
        let k = self
            .pieces
            .partition_point(|p| self.piece_span(p).1 < t)
            .min(self.pieces.len() - 1);
        &self.pieces[k]
    }
}

fn one_sided(values: &[f64; 8], h: f64, sign: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (k, weights) in ONE_SIDED.iter().enumerate() {
        let sum: f64 = weights.iter().zip(values).map(|(w, v)| w * v).sum();
        out[k] = sum * (sign / h).powi(k as i32);
    }
    out
}

fn junction(
    layout: &Layout<'_>,
    left: &Piece,
    right: &Piece,
    h: f64,
) -> Result<Junction, ProfileError> {
    let t = layout.piece_span(left).1;
    let mut lv = [0.0; 8];
    let mut rv = [0.0; 8];
    for m in 0..8 {
        lv[m] = layout.eval(left, t - m as f64 * h)?.2;
        rv[m] = layout.eval(right, t + m as f64 * h)?.2;
    }
    let dl = one_sided(&lv, h, -1.0);
    let dr = one_sided(&rv, h, 1.0);
    let mut jumps = [0.0; 4];
    let mut thresholds = [0.0; 4];
    for k in 0..4 {
        jumps[k] = (dr[k] - dl[k]).abs();
        thresholds[k] = 1e-3f64.max(50.0 * h.powi(4 - k as i32));
    }
    let smooth = jumps
        .iter()
        .zip(&thresholds)
        .take_while(|(j, th)| j < th)
        .count();
    let order = [
        Continuity::C0,
        Continuity::C1,
        Continuity::C2,
        Continuity::C3,
        Continuity::C4Plus,
    ][smooth];
    let kind = match (left, right) {
        (Piece::Copy { .. }, Piece::Copy { .. }) => JunctionKind::CopyCopy,
        (Piece::Copy { .. }, Piece::Line { .. }) => JunctionKind::CopySegment,
        _ => JunctionKind::SegmentCopy,
    };
    let (xl, zl, _) = layout.eval(left, t)?;
    let (xr, zr, _) = layout.eval(right, t)?;
    Ok(Junction {
        t,
        kind,
        jumps,
        thresholds,
        order,
        theta3_jump: dr[3] - dl[3],
        position_gap: (xr - xl).hypot(zr - zl),
    })
}

/// Glue `spec.copies` separatrix copies with the requested line pieces and
/// measure the smoothness of every junction.
pub fn extend_separatrix(
    spec: &ExtensionSpec,
    cfg: &ClassifyConfig,
) -> Result<(ProfileCurve, RegularityReport), ProfileError> {
    spec.validate()?;
    let sep = separatrix_trajectory(cfg)?;
    let layout = Layout::build(&sep, spec);

    let junctions = layout
        .pieces
        .windows(2)
        .map(|w| junction(&layout, &w[0], &w[1], spec.fd_step))
        .collect::<Result<Vec<_>, _>>()?;

    let (lo, hi) = layout.span();
    let n = ((hi - lo) / spec.sample_step).ceil().max(1.0) as usize;
    let samples = (0..=n)
        .map(|i| {
            let t = if i == n {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / n as f64)
            };
            let (x, z, theta) = layout.eval(layout.piece_at(t), t)?;
            Ok(ProfileSample { t, x, z, theta })
        })
        .collect::<Result<Vec<_>, ProfileError>>()?;
    let kind = if spec.copies == 1 {
        ProfileKind::Separatrix
    } else {
        ProfileKind::Extension
    };
    Ok((
        ProfileCurve::new(kind, samples)?,
        RegularityReport {
            fd_step: spec.fd_step,
            junctions,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_differentiate_polynomials() {
        // f(u) = (1 + u)^3 - u^7 / 5040 on u = 0..7 with h = 1.
        let f = |u: f64| (1.0 + u).powi(3) + 2.0 * u.powi(7) / 5040.0;
        let vals: [f64; 8] = std::array::from_fn(|m| f(m as f64));
        let d = one_sided(&vals, 1.0, 1.0);
        assert!((d[0] - 1.0).abs() < 1e-12);
        assert!((d[1] - 3.0).abs() < 1e-9);
        assert!((d[2] - 6.0).abs() < 1e-9);
        assert!((d[3] - 6.0).abs() < 1e-9);
        let back: [f64; 8] = std::array::from_fn(|m| (1.0 - 0.5 * m as f64).powi(3));
        let d = one_sided(&back, 0.5, -1.0);
        assert!((d[1] - 3.0).abs() < 1e-9 && (d[3] - 6.0).abs() < 1e-9);
    }

    #[test]
    fn spec_validation() {
        assert!(ExtensionSpec::new(0, vec![]).validate().is_err());
        assert!(ExtensionSpec::new(2, vec![]).validate().is_err());
        assert!(ExtensionSpec::new(2, vec![-1.0]).validate().is_err());
        assert!(ExtensionSpec::new(2, vec![0.5]).validate().is_ok());
        assert!(ExtensionSpec::new(1, vec![]).validate().is_ok());
    }
}
