//! Dormand–Prince 5(4) step with its free fourth-order continuous extension.

use crate::phase_field::slope_from_offset;

#[cfg(test)]
const C2: f64 = 1.0 / 5.0;
#[cfg(test)]
const C3: f64 = 3.0 / 10.0;
#[cfg(test)]
const C4: f64 = 4.0 / 5.0;
#[cfg(test)]
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Dense output (Hairer & Wanner's DOPRI5).
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

pub(crate) type State = [f64; 3];

/// Right-hand side on `(θ, z - 1, x)`. `None` outside the domain.
pub(crate) fn rhs(y: &State) -> Option<State> {
    let dtheta = slope_from_offset(y[0], y[1])?;
    let (s, c) = y[0].sin_cos();
    Some([dtheta, s, c])
}

fn axpy(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (a, k) in terms {
            acc += a * k[i];
        }
        *o += h * acc;
    }
    out
}

pub(crate) struct Step {
    pub y1: State,
    /// Derivative at `y1`; reused as the first stage of the next step.
    pub k7: State,
    pub err: State,
    pub dense: [[f64; 3]; 5],
}

/// One trial step of signed size `h` from `y0` with `k1 = f(y0)`. Returns
/// `None` when a stage leaves the domain.
pub(crate) fn try_step(y0: &State, k1: &State, h: f64) -> Option<Step> {
    let k2 = rhs(&axpy(y0, h, &[(A21, k1)]))?;
    let k3 = rhs(&axpy(y0, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = rhs(&axpy(y0, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = rhs(&axpy(
        y0,
        h,
        &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)],
    ))?;
    let k6 = rhs(&axpy(
        y0,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let y1 = axpy(
        y0,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = rhs(&y1)?;

    let mut err = [0.0; 3];
    let mut dense = [[0.0; 3]; 5];
    for i in 0..3 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        let dy = y1[i] - y0[i];
        let bspl = h * k1[i] - dy;
        dense[0][i] = y0[i];
        dense[1][i] = dy;
        dense[2][i] = bspl;
        dense[3][i] = dy - h * k7[i] - bspl;
        dense[4][i] =
            h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    Some(Step { y1, k7, err, dense })
}
