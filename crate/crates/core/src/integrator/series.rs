//! Power series of the separatrix at the degenerate corner `(θ, z) = (0, 1)`.
//!
//! With `s` the arc length measured from the corner, the solution of the
//! system leaving the corner with `θ' -> 0`, `θ'' -> 0`, `θ''' -> 1/3` is
//!
//! ```text
//! θ(s) = s^3/18 + s^5/432 - 17 s^7/77760 - 257 s^9/6718464 - 1549 s^11/14108774400 + ...
//! z(s) = 1 + s^4/72 + s^6/2592 - 17 s^8/622080 - 449 s^10/67184640 - 51949 s^12/169305292800 + ...
//! x(s) = s - s^7/4536 - s^9/69984 + 53 s^11/61585920 + ...
//! ```
//!
//! Only odd powers appear in `θ` and even powers in `z - 1`, which is what
//! makes two copies of the separatrix glue smoothly at the corner.

const THETA: [(i32, f64); 5] = [
    (3, 1.0 / 18.0),
    (5, 1.0 / 432.0),
    (7, -17.0 / 77760.0),
    (9, -257.0 / 6718464.0),
    (11, -1549.0 / 14108774400.0),
];

const OFFSET: [(i32, f64); 5] = [
    (4, 1.0 / 72.0),
    (6, 1.0 / 2592.0),
    (8, -17.0 / 622080.0),
    (10, -449.0 / 67184640.0),
    (12, -51949.0 / 169305292800.0),
];

const ABSCISSA: [(i32, f64); 4] = [
    (1, 1.0),
    (7, -1.0 / 4536.0),
    (9, -1.0 / 69984.0),
    (11, 53.0 / 61585920.0),
];

fn eval(terms: &[(i32, f64)], s: f64) -> f64 {
    // Smallest terms first.
    terms.iter().rev().map(|&(k, c)| c * s.powi(k)).sum()
}

fn eval_derivative(terms: &[(i32, f64)], s: f64) -> f64 {
    terms
        .iter()
        .rev()
        .map(|&(k, c)| c * f64::from(k) * s.powi(k - 1))
        .sum()
}

/// `(θ, z - 1, x)` at arc length `s >= 0` from the corner.
pub(crate) fn state(s: f64) -> [f64; 3] {
    [eval(&THETA, s), eval(&OFFSET, s), eval(&ABSCISSA, s)]
}

/// `dθ/ds` of the series, used to check the seed against the field.
pub(crate) fn theta_slope(s: f64) -> f64 {
    eval_derivative(&THETA, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase_field::slope_from_offset;

    #[test]
    fn leading_terms() {
        let s = 1e-3;
        let [th, w, x] = state(s);
        assert!((th / (s.powi(3) / 18.0) - 1.0).abs() < 1e-6);
        assert!((w / (s.powi(4) / 72.0) - 1.0).abs() < 1e-6);
        assert!((x - s).abs() < 1e-20);
    }

    #[test]
    fn series_satisfies_the_system() {
        // θ'_series must equal the field's θ' to high relative order, and
        // d(z-1)/ds must equal sin θ.
        for s in [1e-3, 1e-2, 0.05, 0.1] {
            let [th, w, _] = state(s);
            let field = slope_from_offset(th, w).unwrap();
            let rel = (theta_slope(s) / field - 1.0).abs();
            assert!(rel < 1e-12 + 1e-3 * s.powi(10), "s = {s}: rel = {rel}");
            let dw = eval_derivative(&OFFSET, s);
            assert!((dw / th.sin() - 1.0).abs() < 1e-12 + 1e-3 * s.powi(10));
        }
    }

    #[test]
    fn truncated_two_term_seed_has_sixth_order_residual() {
        // θ = s^3/18, z = 1 + s^4/72 leaves θ'^2 - (1 - cos^2θ/z^2) = -s^6/324 + O(s^8).
        for s in [1e-2f64, 2e-2, 4e-2] {
            let th = s.powi(3) / 18.0;
            let w = s.powi(4) / 72.0;
            let f = slope_from_offset(th, w).unwrap();
            let d = s * s / 6.0;
            let res = d * d - f * f;
            assert!((res / (-s.powi(6) / 324.0) - 1.0).abs() < 0.01, "s = {s}");
        }
    }
}
