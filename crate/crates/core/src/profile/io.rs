use std::io::{BufRead, Write};

use super::{ProfileCurve, ProfileError, ProfileKind, ProfileSample};

pub const PROFILE_CSV_HEADER: &str = "t,x,z,theta";

/// One row per sample, 17 significant digits, LF line ends.
pub fn write_profile_csv<W: Write>(profile: &ProfileCurve, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{PROFILE_CSV_HEADER}")?;
    for s in profile.samples() {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e}",
            s.t, s.x, s.z, s.theta
        )?;
    }
    out.flush()
}

/// Reads a profile written by [`write_profile_csv`]; the kind is not stored
/// and comes back as `Generic`.
pub fn read_profile_csv<R: BufRead>(input: R) -> Result<ProfileCurve, ProfileError> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != PROFILE_CSV_HEADER {
        return Err(ProfileError::Parse {
            line: 1,
            reason: format!("expected header `{PROFILE_CSV_HEADER}`"),
        });
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ProfileError::Parse {
                line: i + 2,
                reason: e.to_string(),
            })?;
        let [t, x, z, theta] = values[..] else {
            return Err(ProfileError::Parse {
                line: i + 2,
                reason: format!("expected 4 fields, got {}", values.len()),
            });
        };
        samples.push(ProfileSample { t, x, z, theta });
    }
    ProfileCurve::new(ProfileKind::Generic, samples)
}
