//! Safeguarded Newton iteration for monotone functions on a bracket.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Stop once `|f(y) - target| < residual_tol`.
    pub residual_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            residual_tol: 1e-12,
            max_iter: 400,
        }
    }
}

/// Solves `f(y) = target` for `y` in `[lo, hi]`.
///
/// `f` must be monotone on the bracket. `df` supplies the derivative for
/// Newton steps; any step that leaves the current bracket, or a derivative
/// that is zero or non-finite, falls back to bisection. `guess`, if given,
/// seeds the first Newton step.
pub fn solve_monotone<F, G>(
    f: F,
    df: G,
    target: f64,
    lo: f64,
    hi: f64,
    guess: Option<f64>,
    opts: RootOptions,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(lo < hi) {
        return Err(Error::contract(format!("empty bracket [{lo}, {hi}]")));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a) - target;
    let fb = f(b) - target;
    if fa.abs() < opts.residual_tol {
        return Ok(a);
    }
    if fb.abs() < opts.residual_tol {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoRoot(format!(
            "target {target} is outside the image of [{lo}, {hi}]"
        )));
    }
    let mut y = match guess {
        Some(g) if g > a && g < b => g,
        _ => 0.5 * (a + b),
    };
    let mut best = (f64::INFINITY, y);
    for _ in 0..opts.max_iter {
        let fy = f(y) - target;
        if fy.abs() < best.0 {
            best = (fy.abs(), y);
        }
        if fy.abs() < opts.residual_tol {
            return Ok(y);
        }
        if fy.signum() == fa.signum() {
            a = y;
            fa = fy;
        } else {
            b = y;
        }
        let slope = df(y);
        let newton = y - fy / slope;
        y = if slope.is_finite() && slope != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if b - a <= f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
    }
    // bracket collapsed to adjacent floats: accept the best point if the
    // residual is at the rounding floor of f
    let (res, y_best) = best;
    let floor = 8.0 * f64::EPSILON * target.abs().max(1.0);
    if res < floor.max(opts.residual_tol) {
        Ok(y_best)
    } else {
        Err(Error::NoRoot(format!(
            "no convergence: best residual {res:e} at {y_best}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_through_flat_point() {
        // derivative vanishes at the root; Newton alone would stall
        let y = solve_monotone(
            |y| y * y * y,
            |y| 3.0 * y * y,
            0.0,
            -1.0,
            1.0,
            Some(0.0),
            RootOptions::default(),
        )
        .unwrap();
        assert_eq!(y, 0.0);
        let y = solve_monotone(
            |y| y * y * y,
            |y| 3.0 * y * y,
            1e-9,
            -1.0,
            2.0,
            None,
            RootOptions::default(),
        )
        .unwrap();
        assert!((y * y * y - 1e-9).abs() < 1e-12);
    }

    #[test]
    fn target_outside_image() {
        let err = solve_monotone(|y| y, |_| 1.0, 5.0, 0.0, 1.0, None, RootOptions::default());
        assert!(matches!(err, Err(Error::NoRoot(_))));
    }

    #[test]
    fn decreasing_function() {
        let y = solve_monotone(
            |y| (-y).exp(),
            |y| -(-y).exp(),
            0.5,
            0.0,
            3.0,
            None,
            RootOptions::default(),
        )
        .unwrap();
        assert!((y - 2.0f64.ln()).abs() < 1e-11);
    }
}
