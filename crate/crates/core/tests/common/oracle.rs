//! Independent reference computations for the gamma-law gas.
//!
//! Nothing here calls into the crate's curve code: rarefaction integrals use
//! the closed-form antiderivative and middle states come from a dense grid
//! scan followed by plain bisection.


/// Closed-form rarefaction integral of `sqrt(-tau'(p))` for `p = K tau^-gamma`.
pub fn rarefaction_integral(k: f64, gamma: f64, p0: f64, p1: f64) -> f64 {
    let scale = (k.powf(1.0 / gamma) / gamma).sqrt();
    if (gamma - 1.0).abs() < 1e-15 {
        return scale * (p1 / p0).ln();
    }
    let e = 1.0 - (gamma + 1.0) / (2.0 * gamma);
    scale * (p1.powf(e) - p0.powf(e)) / e
}

pub fn tau_of(k: f64, gamma: f64, p: f64) -> f64 {
    (k / p).powf(1.0 / gamma)
}

pub fn pressure(k: f64, gamma: f64, tau: f64) -> f64 {
    k * tau.powf(-gamma)
}

/// Velocity on the forward 1-curve from `(p0, v0)` at pressure `p`.
pub fn one_curve_v(k: f64, gamma: f64, p0: f64, v0: f64, p: f64) -> f64 {
    if p <= p0 {
        v0 + rarefaction_integral(k, gamma, p, p0)
    } else {
        v0 - ((tau_of(k, gamma, p0) - tau_of(k, gamma, p)) * (p - p0)).sqrt()
    }
}

/// Velocity of the left state at pressure `p` that a 2-wave connects to `(pe, ve)`.
pub fn two_curve_back_v(k: f64, gamma: f64, pe: f64, ve: f64, p: f64) -> f64 {
    if p <= pe {
        ve - rarefaction_integral(k, gamma, p, pe)
    } else {
        ve + ((tau_of(k, gamma, pe) - tau_of(k, gamma, p)) * (p - pe)).sqrt()
    }
}

/// Root of a decreasing function: grid scan locates the sign change, bisection refines.
pub fn grid_bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let ratio = (hi / lo).powf(1.0 / n as f64);
    let mut a = lo;
    let mut fa = f(a);
    assert!(fa >= 0.0, "oracle bracket misses root at the low end");
    let mut b = a;
    for _ in 0..n {
        b = a * ratio;
        let fb = f(b);
        if fb <= 0.0 {
            break;
        }
        a = b;
        fa = fb;
    }
    let _ = fa;
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if f(c) > 0.0 {
            a = c;
        } else {
            b = c;
        }
        if b - a < 1e-15 * b {
            break;
        }
    }
    0.5 * (a + b)
}

/// Middle pressure and velocity of the gas Riemann problem.
pub fn gas_middle(k: f64, gamma: f64, tl: f64, vl: f64, tr: f64, vr: f64) -> (f64, f64) {
    let pl = pressure(k, gamma, tl);
    let pr = pressure(k, gamma, tr);
    let f = |p: f64| one_curve_v(k, gamma, pl, vl, p) - two_curve_back_v(k, gamma, pr, vr, p);
    let pm = grid_bisect(f, 0.01, 100.0, 4000);
    (pm, one_curve_v(k, gamma, pl, vl, pm))
}

/// Junction at z = 0: gas 1-curve meets the liquid 2-line.
pub fn interface_left(k: f64, gamma: f64, tg: f64, vg: f64, pl: f64, vl: f64, eta: f64) -> (f64, f64) {
    let pg = pressure(k, gamma, tg);
    let f = |p: f64| one_curve_v(k, gamma, pg, vg, p) - (vl + (p - pl) / eta);
    let ps = grid_bisect(f, 0.01, 100.0, 4000);
    (ps, vl + (ps - pl) / eta)
}

/// Junction at z = m: liquid 1-line meets the backward gas 2-curve.
pub fn interface_right(k: f64, gamma: f64, pl: f64, vl: f64, tg: f64, vg: f64, eta: f64) -> (f64, f64) {
    let pg = pressure(k, gamma, tg);
    let f = |p: f64| (vl + (pl - p) / eta) - two_curve_back_v(k, gamma, pg, vg, p);
    let ps = grid_bisect(f, 0.01, 100.0, 4000);
    (ps, vl + (pl - ps) / eta)
}
