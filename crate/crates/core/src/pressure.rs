//! Pressure laws for the gas and the liquid phase.
//!
//! Both laws are strictly decreasing in the specific volume and therefore
//! invertible; every routine downstream may work in the `(tau, v)` chart or
//! in the `(p, v)` chart interchangeably.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::scalar::Real;

/// Absolute tolerance for rarefaction integrals.
pub const RAREFACTION_QUADRATURE_TOL: f64 = 1e-10;

/// Fluid state `(tau, v)` together with the pressure the active law assigns
/// to it.
///
/// The pressure is carried explicitly: for a stiff liquid `tau` differs from
/// `tau_bar` by `O(1/eta^2)`, so recomputing `p` from `tau` would lose `eta^2`
/// in precision. Build states through [`PressureLaw::state`] or
/// [`PressureLaw::state_at_pressure`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct State<T> {
    pub tau: T,
    pub v: T,
    pub p: T,
}

/// An invertible, strictly decreasing pressure law `p(tau)`.
pub trait PressureLaw<T: Real> {
    fn pressure(&self, tau: T) -> Result<T>;

    /// Inverse law `tau(p)`.
    fn tau(&self, p: T) -> Result<T>;

    /// `p'(tau)`, always negative.
    fn dp_dtau(&self, tau: T) -> Result<T>;

    /// Lagrangian sound speed `sqrt(-p'(tau))`; the characteristic speeds are `-c` and `+c`.
    fn sound_speed(&self, tau: T) -> Result<T> {
        Ok((-self.dp_dtau(tau)?).sqrt())
    }

    /// `sqrt(-tau'(p))`, the integrand of the rarefaction curves.
    fn rarefaction_density(&self, p: T) -> Result<T> {
        let tau = self.tau(p)?;
        Ok(T::one() / self.sound_speed(tau)?)
    }

    /// Signed integral of `sqrt(-tau'(pi))` from `p0` to `p1`.
    fn rarefaction_integral(&self, p0: T, p1: T) -> Result<T>;

    fn state(&self, tau: T, v: T) -> Result<State<T>> {
        Ok(State { tau, v, p: self.pressure(tau)? })
    }

    fn state_at_pressure(&self, p: T, v: T) -> Result<State<T>> {
        Ok(State { tau: self.tau(p)?, v, p })
    }

    /// Sound speed expressed at a given pressure.
    fn sound_speed_at_pressure(&self, p: T) -> Result<T> {
        self.sound_speed(self.tau(p)?)
    }
}

/// Gamma law `p(tau) = K tau^(-gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GasLaw<T> {
    pub k: T,
    pub gamma: T,
}

impl<T: Real> Default for GasLaw<T> {
    fn default() -> Self {
        Self {
            k: T::one(),
            gamma: T::lit(1.4),
        }
    }
}

impl<T: Real> GasLaw<T> {
    pub fn new(k: T, gamma: T) -> Result<Self> {
        if !(k > T::zero()) || !(gamma >= T::one()) || !k.is_finite() || !gamma.is_finite() {
            return Err(Error::Config(format!(
                "gas law needs K > 0 and gamma >= 1, got K = {k}, gamma = {gamma}"
            )));
        }
        Ok(Self { k, gamma })
    }

    fn check_tau(tau: T) -> Result<()> {
        if tau > T::zero() && tau.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain(format!("gas specific volume must be positive, got {tau}")))
        }
    }
}

impl<T: Real> PressureLaw<T> for GasLaw<T> {
    fn pressure(&self, tau: T) -> Result<T> {
        Self::check_tau(tau)?;
        Ok(self.k * tau.powf(-self.gamma))
    }

    fn tau(&self, p: T) -> Result<T> {
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::CurveDomain(format!("gas pressure must be positive, got {p}")));
        }
        Ok((self.k / p).powf(T::one() / self.gamma))
    }

    fn dp_dtau(&self, tau: T) -> Result<T> {
        Self::check_tau(tau)?;
        Ok(-self.gamma * self.k * tau.powf(-self.gamma - T::one()))
    }

    fn sound_speed(&self, tau: T) -> Result<T> {
        Self::check_tau(tau)?;
        let exponent = -(self.gamma + T::one()) * T::lit(0.5);
        Ok((self.gamma * self.k).sqrt() * tau.powf(exponent))
    }

    fn rarefaction_density(&self, p: T) -> Result<T> {
        let tau = self.tau(p)?;
        Ok((tau / (self.gamma * p)).sqrt())
    }

    fn rarefaction_integral(&self, p0: T, p1: T) -> Result<T> {
        for p in [p0, p1] {
            if !(p > T::zero()) {
                return Err(Error::CurveDomain(format!(
                    "rarefaction integral reaches non-positive pressure {p}"
                )));
            }
        }
        let inv_gamma = T::one() / self.gamma;
        let scale = (self.k.powf(inv_gamma) * inv_gamma).sqrt();
        let exponent = -(self.gamma + T::one()) / (T::lit(2.0) * self.gamma);
        let density = move |pi: T| scale * pi.powf(exponent);
        Ok(quadrature::integrate(&density, p0, p1, RAREFACTION_QUADRATURE_TOL))
    }
}

/// Linearised liquid law `p(tau) = p_bar - eta^2 (tau - tau_bar)`.
///
/// `eta` is the Lagrangian sound speed; both characteristic speeds are `±eta`
/// regardless of the state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiquidLaw<T> {
    pub p_bar: T,
    pub tau_bar: T,
    pub eta: T,
}

impl<T: Real> LiquidLaw<T> {
    pub fn new(p_bar: T, tau_bar: T, eta: T) -> Result<Self> {
        if !(tau_bar > T::zero()) || !(eta > T::zero()) || !p_bar.is_finite() {
            return Err(Error::Config(format!(
                "liquid law needs tau_bar > 0 and eta > 0, got tau_bar = {tau_bar}, eta = {eta}"
            )));
        }
        Ok(Self { p_bar, tau_bar, eta })
    }

    pub fn with_eta(self, eta: T) -> Self {
        Self { eta, ..self }
    }

    /// Liquid pressure; exact affine map.
    pub fn pressure_of(&self, tau: T) -> T {
        self.p_bar - self.eta * self.eta * (tau - self.tau_bar)
    }

    /// Inverse affine map. A non-positive result is outside the range where the
    /// linear law is meaningful and is logged, not rejected.
    /// Liquid state at pressure `p`; infallible.
    pub fn state_at(&self, p: T, v: T) -> State<T> {
        State { tau: self.tau_of(p), v, p }
    }

    pub fn tau_of(&self, p: T) -> T {
        let tau = self.tau_bar - (p - self.p_bar) / (self.eta * self.eta);
        if !(tau > T::zero()) {
            log::warn!("liquid specific volume {tau} at pressure {p}: outside the stiff regime");
        }
        tau
    }
}

impl<T: Real> PressureLaw<T> for LiquidLaw<T> {
    fn pressure(&self, tau: T) -> Result<T> {
        Ok(self.pressure_of(tau))
    }

    fn tau(&self, p: T) -> Result<T> {
        Ok(self.tau_of(p))
    }

    fn dp_dtau(&self, _tau: T) -> Result<T> {
        Ok(-self.eta * self.eta)
    }

    fn sound_speed(&self, _tau: T) -> Result<T> {
        Ok(self.eta)
    }

    fn rarefaction_density(&self, _p: T) -> Result<T> {
        Ok(T::one() / self.eta)
    }

    fn rarefaction_integral(&self, p0: T, p1: T) -> Result<T> {
        Ok((p1 - p0) / self.eta)
    }
}

/// `p(tau) = K tau^(-gamma)`.
pub fn gas_pressure<T: Real>(law: &GasLaw<T>, tau: T) -> Result<T> {
    law.pressure(tau)
}

/// `sqrt(-p'(tau))`.
pub fn gas_sound_speed<T: Real>(law: &GasLaw<T>, tau: T) -> Result<T> {
    law.sound_speed(tau)
}

pub fn liquid_pressure<T: Real>(law: &LiquidLaw<T>, tau: T) -> T {
    law.pressure_of(tau)
}

pub fn liquid_tau<T: Real>(law: &LiquidLaw<T>, p: T) -> T {
    law.tau_of(p)
}
