//! Ready-made initial data and the JSON scenario format.

use serde::{Deserialize, Serialize};

use crate::analysis::SweepConfig;
use crate::engine::{Datum, Level, Piecewise, RunConfig};
use crate::error::{Error, Result};
use crate::functionals::{calibrate_c, Calibration, GlimmWeights};
use crate::limit::LimitConfig;
use crate::pressure::{GasLaw, LiquidLaw, PressureLaw};
use crate::riemann::{backward_velocity, lax_curve_liquid, Family};
use crate::scalar::Real;

/// Everything at rest at pressure `p`, plus a single 2-wave of size `sigma`
/// at `z0 < 0` in the left gas heading for the slab.
pub fn shock_impact<T: Real>(gas: &GasLaw<T>, p: T, sigma: T, z0: T) -> Result<Datum<T>> {
    let ps = p - sigma;
    let (vs, _) = backward_velocity(gas, p, T::zero(), Family::Two, ps)?;
    gas.state_at_pressure(ps, vs)?;
    let mut d = Datum::uniform(p);
    d.gas_left = Piecewise::from_pressures(&[(T::neg_infinity(), ps, vs), (z0, p, T::zero())]);
    Ok(d)
}

/// Liquid at rest at `p_bar` except for one 2-wave of size `sigma` at
/// `z0 ∈ ]0, m[`; the gases match the states next to them.
pub fn bouncing<T: Real>(liq: &LiquidLaw<T>, sigma: T, z0: T) -> Datum<T> {
    let u0 = liq.state_at(liq.p_bar, T::zero());
    let u1 = lax_curve_liquid(u0, Family::Two, sigma, liq);
    Datum {
        gas_left: Piecewise::pressure(u0.p, u0.v),
        liquid: Piecewise::from_pressures(&[(T::zero(), u0.p, u0.v), (z0, u1.p, u1.v)]),
        gas_right: Piecewise::pressure(u1.p, u1.v),
    }
}

/// Version tag every scenario file must carry.
pub const SCHEMA: &str = "wavefront-scenario/1";

/// A constant piece of initial data starting at `from` (ignored for the
/// first piece of a phase). Exactly one of `tau` and `p` must be given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Piece {
    #[serde(default)]
    pub from: Option<f64>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub p: Option<f64>,
    pub v: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub gas_left: Vec<Piece>,
    pub liquid: Vec<Piece>,
    pub gas_right: Vec<Piece>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasSpec {
    pub k: f64,
    pub gamma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiquidSpec {
    pub p_bar: f64,
    pub tau_bar: f64,
    /// Stiffness of single runs.
    pub eta: f64,
    /// Ladder of the sweep.
    #[serde(default = "default_etas")]
    pub etas: Vec<f64>,
}

fn default_etas() -> Vec<f64> {
    vec![10.0, 30.0, 100.0, 300.0, 1000.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitSpec {
    #[serde(default)]
    pub v_bar: f64,
    /// Defaults to `T / 2000`.
    #[serde(default)]
    pub dt_ode: Option<f64>,
}

/// Sampling box of the interaction-constant calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationSpec {
    pub p_range: [f64; 2],
    pub v_range: [f64; 2],
    pub max_size: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    2000
}

impl Default for CalibrationSpec {
    fn default() -> Self {
        Self { p_range: [0.9, 1.1], v_range: [-0.1, 0.1], max_size: 0.01, samples: default_samples() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_h")]
    pub lipschitz_h: f64,
}

fn default_grid() -> usize {
    100
}

fn default_h() -> f64 {
    1e-4
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self { grid: default_grid(), lipschitz_h: default_h() }
    }
}

/// Contents of a scenario JSON file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    pub gas: GasSpec,
    pub liquid: LiquidSpec,
    pub m: f64,
    pub t_final: f64,
    pub epsilon: f64,
    pub initial: InitialData,
    #[serde(default)]
    pub output_times: Vec<f64>,
    #[serde(default)]
    pub measurement_lines: Vec<f64>,
    #[serde(default = "default_depth")]
    pub window_depth: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub max_events: Option<usize>,
    /// Fixes `C` instead of calibrating it.
    #[serde(default)]
    pub glimm_constant: Option<f64>,
    #[serde(default)]
    pub calibration: CalibrationSpec,
    #[serde(default = "default_limit")]
    pub limit: LimitSpec,
    #[serde(default)]
    pub sweep: SweepSpec,
}

fn default_depth() -> u32 {
    2
}

fn default_limit() -> LimitSpec {
    LimitSpec { v_bar: 0.0, dt_ode: None }
}

fn pieces(ps: &[Piece], phase: &str) -> Result<Piecewise<f64>> {
    if ps.is_empty() {
        return Err(Error::Config(format!("{phase}: at least one piece is required")));
    }
    let mut jumps = Vec::new();
    let mut levels = Vec::new();
    for (k, piece) in ps.iter().enumerate() {
        if k > 0 {
            jumps.push(piece.from.ok_or_else(|| Error::Config(format!("{phase}: piece {k} needs `from`")))?);
        }
        let level = match (piece.tau, piece.p) {
            (Some(t), None) => Level::Tau(t),
            (None, Some(p)) => Level::Pressure(p),
            _ => return Err(Error::Config(format!("{phase}: piece {k} needs exactly one of `tau` and `p`"))),
        };
        levels.push((level, piece.v));
    }
    Ok(Piecewise { jumps, levels })
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text)?;
        if s.schema != SCHEMA {
            return Err(Error::Config(format!("unsupported schema `{}`, expected `{SCHEMA}`", s.schema)));
        }
        s.datum()?.validate(s.m)?;
        s.run_config(s.liquid.eta)?.validate()?;
        Ok(s)
    }

    pub fn datum(&self) -> Result<Datum<f64>> {
        Ok(Datum {
            gas_left: pieces(&self.initial.gas_left, "gas_left")?,
            liquid: pieces(&self.initial.liquid, "liquid")?,
            gas_right: pieces(&self.initial.gas_right, "gas_right")?,
        })
    }

    pub fn run_config(&self, eta: f64) -> Result<RunConfig<f64>> {
        let gas = GasLaw::new(self.gas.k, self.gas.gamma)?;
        let liquid = LiquidLaw::new(self.liquid.p_bar, self.liquid.tau_bar, eta)?;
        let mut cfg = RunConfig::new(gas, liquid, self.m, self.t_final, self.epsilon);
        cfg.output_times = self.output_times.clone();
        cfg.measurement_lines = self.measurement_lines.clone();
        if let Some(n) = self.max_events {
            cfg.max_interactions = n;
        }
        Ok(cfg)
    }

    pub fn limit_config(&self) -> Result<LimitConfig<f64>> {
        let mut cfg = LimitConfig::new(self.run_config(self.liquid.eta)?, self.limit.v_bar);
        if let Some(dt) = self.limit.dt_ode {
            cfg.dt_ode = dt;
        }
        Ok(cfg)
    }

    /// Configured weights, or weights from a calibration seeded by `seed`.
    pub fn weights(&self) -> Result<GlimmWeights<f64>> {
        if let Some(c) = self.glimm_constant {
            return GlimmWeights::from_c(c);
        }
        let gas = GasLaw::new(self.gas.k, self.gas.gamma)?;
        let liquid = LiquidLaw::new(self.liquid.p_bar, self.liquid.tau_bar, self.liquid.eta)?;
        let mut etas = self.liquid.etas.clone();
        etas.push(self.liquid.eta);
        let c = &self.calibration;
        let cal = Calibration {
            p_range: (c.p_range[0], c.p_range[1]),
            v_range: (c.v_range[0], c.v_range[1]),
            max_size: c.max_size,
            liquids: etas.iter().map(|&e| liquid.with_eta(e)).collect(),
            samples: c.samples,
            safety: 1.5,
            seed: self.seed,
        };
        GlimmWeights::from_c(calibrate_c(&gas, &cal)?)
    }

    pub fn sweep_config(&self) -> Result<SweepConfig<f64>> {
        let lim = self.limit_config()?;
        Ok(SweepConfig {
            run: self.run_config(self.liquid.eta)?,
            etas: self.liquid.etas.clone(),
            v_bar: lim.v_bar,
            dt_ode: lim.dt_ode,
            window_depth: self.window_depth,
            grid: self.sweep.grid,
            lipschitz_h: self.sweep.lipschitz_h,
            weights: self.weights()?,
        })
    }
}
