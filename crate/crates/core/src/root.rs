//! Safeguarded Newton iteration for scalar monotone equations.

use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_ITERATIONS: usize = 200;

/// Finds the root of a strictly decreasing function on `[lo, hi]`.
///
/// `f` returns the value and the derivative. Newton steps that leave the
/// current bracket, or that come from a non-negative slope, are replaced by
/// bisection. Convergence is declared when `|f| <= tol` or when the bracket
/// can no longer be resolved in the scalar type.
pub fn solve_decreasing<T, F>(mut f: F, mut lo: T, mut hi: T, guess: T, tol: f64) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T)>,
{
    let (f_lo, _) = f(lo)?;
    let (f_hi, _) = f(hi)?;
    if f_lo < T::zero() || f_hi > T::zero() {
        return Err(Error::NoSolution(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }
    let tol_f = T::lit(tol);
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        half(lo + hi)
    };
    for _ in 0..MAX_ITERATIONS {
        let (fx, dfx) = f(x)?;
        if !fx.is_finite() {
            return Err(Error::NoConvergence(format!("non-finite residual at {x}")));
        }
        if fx.abs() <= tol_f {
            return Ok(x);
        }
        if fx > T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= T::resolvable(0.0, x) {
            return Ok(x);
        }
        let newton = x - fx / dfx;
        x = if dfx < T::zero() && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            half(lo + hi)
        };
    }
    Err(Error::NoConvergence(format!(
        "iteration limit reached with bracket [{lo}, {hi}]"
    )))
}

#[inline]
fn half<T: Real>(x: T) -> T {
    x * T::lit(0.5)
}
