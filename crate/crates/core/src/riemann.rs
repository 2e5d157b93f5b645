//! Exact Riemann solvers parametrised by the pressure jump of each wave.
//!
//! A wave of family 1 with size `sigma` connects a state of pressure `p` to a
//! state of pressure `p - sigma`; a family 2 wave connects `p` to `p + sigma`.
//! `sigma < 0` is a shock and `sigma > 0` a rarefaction, so `|sigma|` is always
//! the pressure jump across the wave.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pressure::{GasLaw, LiquidLaw, PressureLaw, State};
use crate::root;
use crate::scalar::Real;

/// Tolerance on the velocity mismatch for every middle-pressure iteration.
pub const MIDDLE_STATE_TOL: f64 = 1e-11;
const BRACKET_WIDENINGS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    One,
    Two,
}

impl Family {
    pub fn index(self) -> usize {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Family::One),
            2 => Ok(Family::Two),
            _ => Err(Error::Config(format!("wave family must be 1 or 2, got {i}"))),
        }
    }

    /// Sign of the characteristic speed.
    pub fn direction<T: Real>(self) -> T {
        match self {
            Family::One => -T::one(),
            Family::Two => T::one(),
        }
    }

    pub fn other(self) -> Self {
        match self {
            Family::One => Family::Two,
            Family::Two => Family::One,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveSize<T> {
    pub family: Family,
    pub sigma: T,
}

impl<T: Real> WaveSize<T> {
    pub fn is_shock(&self) -> bool {
        self.sigma < T::zero()
    }

    /// Pressure reached from `p` across the wave.
    pub fn target_pressure(&self, p: T) -> T {
        match self.family {
            Family::One => p - self.sigma,
            Family::Two => p + self.sigma,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum WaveSpeed<T> {
    /// Single propagation speed: shocks and liquid waves.
    Jump(T),
    /// Characteristic interval of a centred rarefaction.
    Fan { slowest: T, fastest: T },
}

impl<T: Real> WaveSpeed<T> {
    /// Speed of the trailing characteristic of a fan; the shock speed otherwise.
    pub fn fastest(&self) -> T {
        match *self {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { fastest, .. } => fastest,
        }
    }

    pub fn slowest(&self) -> T {
        match *self {
            WaveSpeed::Jump(s) => s,
            WaveSpeed::Fan { slowest, .. } => slowest,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Wave<T> {
    pub size: WaveSize<T>,
    pub speed: WaveSpeed<T>,
    pub left: State<T>,
    pub right: State<T>,
}

/// Solution of a two-wave Riemann problem.
///
/// For junction problems the middle state is stored once per side: both share
/// pressure and velocity but carry their own specific volume.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiemannSolution<T> {
    pub left_wave: Option<Wave<T>>,
    pub middle_left: State<T>,
    pub middle_right: State<T>,
    pub right_wave: Option<Wave<T>>,
}

impl<T: Real> RiemannSolution<T> {
    pub fn sigma1(&self) -> T {
        self.left_wave.map_or(T::zero(), |w| w.size.sigma)
    }

    pub fn sigma2(&self) -> T {
        self.right_wave.map_or(T::zero(), |w| w.size.sigma)
    }
}

/// Velocity change along a wave curve, as a function of the reached pressure.
///
/// With `increasing == false` this is the branch used by forward 1-curves: a
/// rarefaction integral for `pt < p0`, minus the Hugoniot term for `pt > p0`.
/// With `increasing == true` the roles of the two sides are swapped, which is
/// the forward 2-curve. Returns the value and its derivative in `pt`.
fn velocity_shift<T: Real, L: PressureLaw<T> + ?Sized>(
    law: &L,
    p0: T,
    pt: T,
    increasing: bool,
) -> Result<(T, T)> {
    if pt == p0 {
        return Ok((T::zero(), -signed(increasing, law.rarefaction_density(p0)?)));
    }
    let rarefaction = if increasing { pt > p0 } else { pt < p0 };
    if rarefaction {
        let (lo, hi) = if pt < p0 { (pt, p0) } else { (p0, pt) };
        let value = law.rarefaction_integral(lo, hi)?;
        let slope = law.rarefaction_density(pt)?;
        Ok((value, if increasing { slope } else { -slope }))
    } else {
        let tau0 = law.tau(p0)?;
        let taut = law.tau(pt)?;
        let dtau = T::one() / law.dp_dtau(taut)?;
        let dp = pt - p0;
        let product = (tau0 - taut) * dp;
        let s = product.max(T::zero()).sqrt();
        // d(product)/d(pt)
        let dproduct = -dtau * dp + (tau0 - taut);
        let ds = if s > T::resolvable(1e-150, T::zero()) {
            dproduct / (T::lit(2.0) * s)
        } else {
            law.rarefaction_density(pt)? * dp.signum()
        };
        Ok((-s, -ds))
    }
}

#[inline]
fn signed<T: Real>(increasing: bool, x: T) -> T {
    if increasing {
        -x
    } else {
        x
    }
}

/// Velocity reached from `(p0, v0)` along the `family` curve at pressure `pt`,
/// with its derivative in `pt`.
pub fn forward_velocity<T: Real, L: PressureLaw<T> + ?Sized>(
    law: &L,
    p0: T,
    v0: T,
    family: Family,
    pt: T,
) -> Result<(T, T)> {
    let (dv, slope) = velocity_shift(law, p0, pt, family == Family::Two)?;
    Ok((v0 + dv, slope))
}

/// Velocity of the state at pressure `ps` from which the `family` curve reaches
/// `(pe, ve)`, with its derivative in `ps`.
pub fn backward_velocity<T: Real, L: PressureLaw<T> + ?Sized>(
    law: &L,
    pe: T,
    ve: T,
    family: Family,
    ps: T,
) -> Result<(T, T)> {
    let (dv, slope) = velocity_shift(law, pe, ps, family == Family::One)?;
    Ok((ve - dv, -slope))
}

/// State reached from `u` by a wave of the given family and size.
pub fn lax_curve<T: Real, L: PressureLaw<T> + ?Sized>(
    law: &L,
    u: State<T>,
    family: Family,
    sigma: T,
) -> Result<State<T>> {
    if sigma == T::zero() {
        return Ok(u);
    }
    let p0 = u.p;
    let pt = WaveSize { family, sigma }.target_pressure(p0);
    if !(pt > T::zero()) {
        return Err(Error::CurveDomain(format!(
            "family {} wave of size {sigma} from p = {p0} reaches p = {pt}",
            family.index()
        )));
    }
    let (v, _) = forward_velocity(law, p0, u.v, family, pt)?;
    law.state_at_pressure(pt, v)
}

/// Gas Lax curve in the pressure parametrisation.
pub fn lax_curve_gas<T: Real>(u: State<T>, family: Family, sigma: T, law: &GasLaw<T>) -> Result<State<T>> {
    lax_curve(law, u, family, sigma)
}

/// Liquid Lax curve: `(p - sigma, v + sigma/eta)` for family 1,
/// `(p + sigma, v + sigma/eta)` for family 2.
pub fn lax_curve_liquid<T: Real>(u: State<T>, family: Family, sigma: T, law: &LiquidLaw<T>) -> State<T> {
    if sigma == T::zero() {
        return u;
    }
    let pt = WaveSize { family, sigma }.target_pressure(u.p);
    law.state_at(pt, u.v + sigma / law.eta)
}

/// Characteristic speed `lambda_i` of a state.
pub fn characteristic_speed<T: Real, L: PressureLaw<T> + ?Sized>(
    law: &L,
    family: Family,
    u: State<T>,
) -> Result<T> {
    Ok(family.direction::<T>() * law.sound_speed(u.tau)?)
}

/// Wave record connecting `left` to `right` through a single gas wave.
pub fn gas_wave<T: Real>(
    law: &GasLaw<T>,
    family: Family,
    sigma: T,
    left: State<T>,
    right: State<T>,
) -> Result<Wave<T>> {
    let speed = if sigma < T::zero() {
        WaveSpeed::Jump(shock_speed(law, family, left, right)?)
    } else {
        WaveSpeed::Fan {
            slowest: characteristic_speed(law, family, left)?,
            fastest: characteristic_speed(law, family, right)?,
        }
    };
    Ok(Wave {
        size: WaveSize { family, sigma },
        speed,
        left,
        right,
    })
}

/// Rankine–Hugoniot speed in Lagrangian coordinates, `∓ sqrt(-[p]/[tau])`.
pub fn shock_speed<T: Real>(law: &GasLaw<T>, family: Family, left: State<T>, right: State<T>) -> Result<T> {
    let dtau = right.tau - left.tau;
    let magnitude = if dtau == T::zero() {
        law.sound_speed(left.tau)?
    } else {
        let dp = right.p - left.p;
        (-dp / dtau).max(T::zero()).sqrt()
    };
    Ok(family.direction::<T>() * magnitude)
}

fn liquid_wave<T: Real>(law: &LiquidLaw<T>, family: Family, sigma: T, left: State<T>, right: State<T>) -> Wave<T> {
    Wave {
        size: WaveSize { family, sigma },
        speed: WaveSpeed::Jump(family.direction::<T>() * law.eta),
        left,
        right,
    }
}

fn nonzero<T: Real>(w: Wave<T>) -> Option<Wave<T>> {
    (w.size.sigma != T::zero()).then_some(w)
}

/// Brackets the root of a decreasing function of pressure and solves it.
fn solve_middle_pressure<T, F>(mut f: F, p_a: T, p_b: T, guess: T) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<(T, T)>,
{
    let ten = T::lit(10.0);
    let mut lo = p_a.min(p_b) / ten;
    let mut hi = p_a.max(p_b) * ten;
    let mut widen = 0;
    loop {
        let ok_lo = f(lo)?.0 >= T::zero();
        let ok_hi = f(hi)?.0 <= T::zero();
        if ok_lo && ok_hi {
            break;
        }
        if widen == BRACKET_WIDENINGS {
            return Err(Error::NoSolution(format!(
                "middle pressure not bracketed in [{lo}, {hi}] (vacuum or strong data)"
            )));
        }
        if !ok_lo {
            lo = lo / ten;
        }
        if !ok_hi {
            hi = hi * ten;
        }
        widen += 1;
    }
    root::solve_decreasing(f, lo, hi, guess, MIDDLE_STATE_TOL)
}

fn acoustic_guess<T: Real>(p_l: T, z_l: T, v_l: T, p_r: T, z_r: T, v_r: T) -> T {
    (z_r * p_l + z_l * p_r + z_l * z_r * (v_l - v_r)) / (z_l + z_r)
}

/// Gas–gas Riemann problem.
pub fn solve_riemann_gas<T: Real>(u_l: State<T>, u_r: State<T>, law: &GasLaw<T>) -> Result<RiemannSolution<T>> {
    if u_l == u_r {
        return Ok(RiemannSolution {
            left_wave: None,
            middle_left: u_l,
            middle_right: u_l,
            right_wave: None,
        });
    }
    let (p_l, p_r) = (u_l.p, u_r.p);
    let residual = |p: T| -> Result<(T, T)> {
        let (v1, d1) = forward_velocity(law, p_l, u_l.v, Family::One, p)?;
        let (v2, d2) = backward_velocity(law, p_r, u_r.v, Family::Two, p)?;
        Ok((v1 - v2, d1 - d2))
    };
    let guess = acoustic_guess(
        p_l,
        law.sound_speed(u_l.tau)?,
        u_l.v,
        p_r,
        law.sound_speed(u_r.tau)?,
        u_r.v,
    );
    let p_m = solve_middle_pressure(residual, p_l, p_r, guess).map_err(|e| with_states(e, u_l, u_r))?;
    let (v_m, _) = forward_velocity(law, p_l, u_l.v, Family::One, p_m)?;
    let middle = law.state_at_pressure(p_m, v_m)?;
    let w1 = gas_wave(law, Family::One, p_l - p_m, u_l, middle)?;
    let w2 = gas_wave(law, Family::Two, p_r - p_m, middle, u_r)?;
    Ok(RiemannSolution {
        left_wave: nonzero(w1),
        middle_left: middle,
        middle_right: middle,
        right_wave: nonzero(w2),
    })
}

/// Liquid–liquid Riemann problem in closed form.
pub fn solve_riemann_liquid<T: Real>(u_l: State<T>, u_r: State<T>, law: &LiquidLaw<T>) -> RiemannSolution<T> {
    let (p_l, p_r) = (u_l.p, u_r.p);
    let half = T::lit(0.5);
    let dv = law.eta * (u_r.v - u_l.v);
    let sigma1 = (dv - (p_r - p_l)) * half;
    let sigma2 = (dv + (p_r - p_l)) * half;
    let middle = lax_curve_liquid(u_l, Family::One, sigma1, law);
    RiemannSolution {
        left_wave: nonzero(liquid_wave(law, Family::One, sigma1, u_l, middle)),
        middle_left: middle,
        middle_right: middle,
        right_wave: nonzero(liquid_wave(law, Family::Two, sigma2, middle, u_r)),
    }
}

/// Junction at `z = 0`: gas on the left, liquid on the right.
///
/// The outgoing waves are a gas 1-wave and a liquid 2-wave; the middle states
/// share pressure and velocity.
pub fn solve_interface_left<T: Real>(
    u_gas: State<T>,
    u_liq: State<T>,
    gas: &GasLaw<T>,
    liq: &LiquidLaw<T>,
) -> Result<RiemannSolution<T>> {
    let (p_g, p_liq) = (u_gas.p, u_liq.p);
    let inv_eta = T::one() / liq.eta;
    let residual = |p: T| -> Result<(T, T)> {
        let (v1, d1) = forward_velocity(gas, p_g, u_gas.v, Family::One, p)?;
        Ok((v1 - (u_liq.v + (p - p_liq) * inv_eta), d1 - inv_eta))
    };
    let guess = acoustic_guess(p_g, gas.sound_speed(u_gas.tau)?, u_gas.v, p_liq, liq.eta, u_liq.v);
    let p_star = if p_g == p_liq && u_gas.v == u_liq.v {
        p_g
    } else {
        solve_middle_pressure(residual, p_g, p_liq, guess).map_err(|e| with_states(e, u_gas, u_liq))?
    };
    let v_star = u_liq.v + (p_star - p_liq) * inv_eta;
    let mid_gas = gas.state_at_pressure(p_star, v_star)?;
    let mid_liq = liq.state_at(p_star, v_star);
    let w1 = gas_wave(gas, Family::One, p_g - p_star, u_gas, mid_gas)?;
    let w2 = liquid_wave(liq, Family::Two, p_liq - p_star, mid_liq, u_liq);
    Ok(RiemannSolution {
        left_wave: nonzero(w1),
        middle_left: mid_gas,
        middle_right: mid_liq,
        right_wave: nonzero(w2),
    })
}

/// Junction at `z = m`: liquid on the left, gas on the right.
pub fn solve_interface_right<T: Real>(
    u_liq: State<T>,
    u_gas: State<T>,
    gas: &GasLaw<T>,
    liq: &LiquidLaw<T>,
) -> Result<RiemannSolution<T>> {
    let (p_g, p_liq) = (u_gas.p, u_liq.p);
    let inv_eta = T::one() / liq.eta;
    let residual = |p: T| -> Result<(T, T)> {
        let (v2, d2) = backward_velocity(gas, p_g, u_gas.v, Family::Two, p)?;
        Ok((u_liq.v + (p_liq - p) * inv_eta - v2, -inv_eta - d2))
    };
    let guess = acoustic_guess(p_liq, liq.eta, u_liq.v, p_g, gas.sound_speed(u_gas.tau)?, u_gas.v);
    let p_star = if p_g == p_liq && u_gas.v == u_liq.v {
        p_g
    } else {
        solve_middle_pressure(residual, p_liq, p_g, guess).map_err(|e| with_states(e, u_liq, u_gas))?
    };
    let v_star = u_liq.v + (p_liq - p_star) * inv_eta;
    let mid_liq = liq.state_at(p_star, v_star);
    let mid_gas = gas.state_at_pressure(p_star, v_star)?;
    let w1 = liquid_wave(liq, Family::One, p_liq - p_star, u_liq, mid_liq);
    let w2 = gas_wave(gas, Family::Two, p_g - p_star, mid_gas, u_gas)?;
    Ok(RiemannSolution {
        left_wave: nonzero(w1),
        middle_left: mid_liq,
        middle_right: mid_gas,
        right_wave: nonzero(w2),
    })
}

/// Gas to the left of a wall moving with velocity `v_wall`.
///
/// Returns the reflected 1-wave (if any) and the gas state at the wall. This
/// is the junction problem in the limit of an infinitely stiff liquid.
pub fn solve_piston_left<T: Real>(u_gas: State<T>, v_wall: T, gas: &GasLaw<T>) -> Result<(Option<Wave<T>>, State<T>)> {
    if u_gas.v == v_wall {
        return Ok((None, u_gas));
    }
    let p_g = u_gas.p;
    let residual = |p: T| -> Result<(T, T)> {
        let (v1, d1) = forward_velocity(gas, p_g, u_gas.v, Family::One, p)?;
        Ok((v1 - v_wall, d1))
    };
    let z = gas.sound_speed(u_gas.tau)?;
    let guess = p_g + z * (u_gas.v - v_wall);
    let p_star = solve_middle_pressure(residual, p_g, guess.max(p_g / T::lit(2.0)), guess)
        .map_err(|e| with_states(e, u_gas, u_gas))?;
    let mid = gas.state_at_pressure(p_star, v_wall)?;
    let w = gas_wave(gas, Family::One, p_g - p_star, u_gas, mid)?;
    Ok((nonzero(w), mid))
}

/// Gas to the right of a wall moving with velocity `v_wall`.
pub fn solve_piston_right<T: Real>(v_wall: T, u_gas: State<T>, gas: &GasLaw<T>) -> Result<(Option<Wave<T>>, State<T>)> {
    if u_gas.v == v_wall {
        return Ok((None, u_gas));
    }
    let p_g = u_gas.p;
    let residual = |p: T| -> Result<(T, T)> {
        let (v2, d2) = backward_velocity(gas, p_g, u_gas.v, Family::Two, p)?;
        Ok((v_wall - v2, -d2))
    };
    let z = gas.sound_speed(u_gas.tau)?;
    let guess = p_g + z * (v_wall - u_gas.v);
    let p_star = solve_middle_pressure(residual, p_g, guess.max(p_g / T::lit(2.0)), guess)
        .map_err(|e| with_states(e, u_gas, u_gas))?;
    let mid = gas.state_at_pressure(p_star, v_wall)?;
    let w = gas_wave(gas, Family::Two, p_g - p_star, mid, u_gas)?;
    Ok((nonzero(w), mid))
}

fn with_states<T: Real>(e: Error, a: State<T>, b: State<T>) -> Error {
    match e {
        Error::NoSolution(msg) | Error::NoConvergence(msg) => Error::NoSolution(format!(
            "{msg}; left state (tau = {}, v = {}), right state (tau = {}, v = {})",
            a.tau, a.v, b.tau, b.v
        )),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gas1() -> GasLaw<f64> {
        GasLaw::new(1.0, 1.0).unwrap()
    }

    fn liquid(eta: f64) -> LiquidLaw<f64> {
        LiquidLaw::new(1.0, 1.0, eta).unwrap()
    }

    fn liq_state(law: &LiquidLaw<f64>, p: f64, v: f64) -> State<f64> {
        law.state_at(p, v)
    }

    fn gs(tau: f64, v: f64) -> State<f64> {
        gas1().state(tau, v).unwrap()
    }

    #[test]
    fn zero_size_wave_is_identity() {
        let u = gs(1.3, 0.2);
        assert_eq!(lax_curve_gas(u, Family::One, 0.0, &gas1()).unwrap(), u);
        let w = liq_state(&liquid(10.0), 1.3, 0.2);
        assert_eq!(lax_curve_liquid(w, Family::Two, 0.0, &liquid(10.0)), w);
    }

    #[test]
    fn gas_shock_example() {
        let w = lax_curve_gas(gs(1.0, 0.0), Family::Two, -0.5, &gas1()).unwrap();
        assert!((w.tau - 2.0).abs() < 1e-14);
        assert!((w.v + 0.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gas_rarefaction_example() {
        let w = lax_curve_gas(gs(1.0, 0.0), Family::Two, 0.5, &gas1()).unwrap();
        assert!((w.v - 1.5f64.ln()).abs() < 1e-10);
        assert!((w.tau - 1.0 / 1.5).abs() < 1e-14);
    }

    #[test]
    fn gas_curve_domain_error() {
        let e = lax_curve_gas(gs(1.0, 0.0), Family::Two, -1.5, &gas1());
        assert!(matches!(e, Err(Error::CurveDomain(_))));
    }

    #[test]
    fn liquid_curve_examples() {
        let law = liquid(10.0);
        let a = lax_curve_liquid(liq_state(&law, 2.0, 0.0), Family::One, 1.0, &law);
        assert!((a.p - 1.0).abs() < 1e-12 && (a.v - 0.1).abs() < 1e-15);
        let b = lax_curve_liquid(liq_state(&law, 1.0, 0.1), Family::Two, 1.0, &law);
        assert!((b.p - 2.0).abs() < 1e-12 && (b.v - 0.2).abs() < 1e-15);
    }

    #[test]
    fn identity_riemann_problem() {
        let u = gs(0.8, 0.1);
        let s = solve_riemann_gas(u, u, &gas1()).unwrap();
        assert!(s.left_wave.is_none() && s.right_wave.is_none());
        assert_eq!(s.middle_left, u);
    }

    #[test]
    fn symmetric_collision_gives_two_equal_shocks() {
        let s = solve_riemann_gas(gs(1.0, 0.0), gs(1.0, -0.2), &gas1()).unwrap();
        let (s1, s2) = (s.sigma1(), s.sigma2());
        assert!(s1 < 0.0 && (s1 - s2).abs() < 1e-10);
        assert!((s.middle_left.v + 0.1).abs() < 1e-10);
    }

    #[test]
    fn liquid_closed_form_examples() {
        let law = liquid(10.0);
        let s = solve_riemann_liquid(liq_state(&law, 2.0, 0.0), liq_state(&law, 2.0, 0.2), &law);
        assert!((s.sigma1() - 1.0).abs() < 1e-12 && (s.sigma2() - 1.0).abs() < 1e-12);
        assert!((s.middle_left.p - 1.0).abs() < 1e-12);
        assert!((s.middle_left.v - 0.1).abs() < 1e-14);

        let s = solve_riemann_liquid(liq_state(&law, 2.0, 0.0), liq_state(&law, 1.0, 0.0), &law);
        assert!((s.sigma1() - 0.5).abs() < 1e-12 && (s.sigma2() + 0.5).abs() < 1e-12);
        assert!((s.middle_left.p - 1.5).abs() < 1e-12);
        assert!((s.middle_left.v - 0.05).abs() < 1e-14);

        let u = liq_state(&law, 1.3, 0.4);
        let s = solve_riemann_liquid(u, u, &law);
        assert!(s.left_wave.is_none() && s.right_wave.is_none());
    }

    #[test]
    fn liquid_waves_travel_at_eta() {
        let law = liquid(25.0);
        let s = solve_riemann_liquid(liq_state(&law, 1.2, 0.0), liq_state(&law, 0.9, 0.3), &law);
        assert_eq!(s.left_wave.unwrap().speed, WaveSpeed::Jump(-25.0));
        assert_eq!(s.right_wave.unwrap().speed, WaveSpeed::Jump(25.0));
    }

    #[test]
    fn matched_interfaces_emit_nothing() {
        let gas = gas1();
        let liq = liquid(10.0);
        let ug = gs(1.0, 0.05);
        let ul = liq_state(&liq, 1.0, 0.05);
        let s = solve_interface_left(ug, ul, &gas, &liq).unwrap();
        assert!(s.left_wave.is_none() && s.right_wave.is_none());
        let s = solve_interface_right(ul, ug, &gas, &liq).unwrap();
        assert!(s.left_wave.is_none() && s.right_wave.is_none());
    }

    #[test]
    fn interface_middle_states_share_pressure_and_velocity() {
        let gas = gas1();
        let liq = liquid(10.0);
        let s = solve_interface_left(gs(1.0, 0.0), liq_state(&liq, 1.0, 0.05), &gas, &liq).unwrap();
        let (g, l) = (s.middle_left, s.middle_right);
        assert!((g.p - l.p).abs() < 1e-12);
        assert_eq!(g.v, l.v);
        assert!((g.tau - l.tau).abs() > 0.0 || g.tau == 1.0);
    }

    #[test]
    fn single_precision_solvers() {
        let gas = GasLaw::<f32>::new(1.0, 1.4).unwrap();
        let s = solve_riemann_gas(gas.state(1.0f32, 0.0).unwrap(), gas.state(1.0, -0.2).unwrap(), &gas).unwrap();
        assert!((s.middle_left.v + 0.1).abs() < 1e-5);
        let liq = LiquidLaw::<f32>::new(1.0, 1.0, 10.0).unwrap();
        let s = solve_riemann_liquid(liq.state_at(2.0f32, 0.0), liq.state_at(2.0, 0.2), &liq);
        assert!((s.sigma1() - 1.0).abs() < 1e-3);
    }
}
