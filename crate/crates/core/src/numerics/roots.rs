use crate::error::{Error, Result};

// enough for pure bisection to exhaust every binade of [0, 1]
const MAX_ITERATIONS: usize = 2400;

/// Solves `g(x) = target` for nondecreasing `g` on `[lo, hi]`.
///
/// Illinois false position with a forced bisection whenever a step fails to
/// halve the bracket, so the bracket at least halves every two iterations.
/// Stops when `|g(x) − target| ≤ tol`, when the bracket is narrower than
/// `tol`, or when it can no longer be split in floating point.
pub fn invert_monotone<G>(g: G, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(lo <= hi) || !target.is_finite() {
        return Err(Error::Input(format!(
            "invalid inversion request: target {target} on [{lo}, {hi}]"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a) - target, g(b) - target);
    if fa > tol || fb < -tol {
        return Err(Error::Bracket {
            target,
            lo,
            hi,
            g_lo: fa + target,
            g_hi: fb + target,
        });
    }
    if fa.abs() <= tol {
        return Ok(a);
    }
    if fb.abs() <= tol {
        return Ok(b);
    }

    // side of the last retained endpoint, for the Illinois halving
    let mut last_side = 0i8;
    let mut force_bisect = false;
    for _ in 0..MAX_ITERATIONS {
        let width = b - a;
        if width <= tol {
            break;
        }
        let mut x = if force_bisect || fb == fa {
            0.5 * (a + b)
        } else {
            a - fa * (b - a) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        if x <= a || x >= b {
            // bracket is two adjacent floats
            break;
        }
        let fx = g(x) - target;
        if fx.abs() <= tol {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
            fa = fx;
            if last_side == -1 {
                fb *= 0.5;
            }
            last_side = -1;
        } else {
            b = x;
            fb = fx;
            if last_side == 1 {
                fa *= 0.5;
            }
            last_side = 1;
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    Ok(0.5 * (a + b))
}
