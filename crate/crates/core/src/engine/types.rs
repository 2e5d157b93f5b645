use serde::{Deserialize, Serialize};

use super::Front;
use crate::error::{Error, Result};
use crate::limit::DropletState;
use crate::pressure::{GasLaw, LiquidLaw, PressureLaw, State};
use crate::riemann::Family;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    GasLeft,
    Liquid,
    GasRight,
}

impl Phase {
    pub fn is_gas(self) -> bool {
        self != Phase::Liquid
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrontKind {
    Shock,
    /// One jump of an approximated rarefaction fan (or a liquid expansion).
    Rarefaction,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    LiquidInterior,
    InterfaceLeft,
    InterfaceRight,
    GasSameFamily,
    GasDifferentFamily,
    Transmission,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::LiquidInterior => "liquid-interior",
            CaseTag::InterfaceLeft => "interface-left",
            CaseTag::InterfaceRight => "interface-right",
            CaseTag::GasSameFamily => "gas-interior-same-family",
            CaseTag::GasDifferentFamily => "gas-interior-different-family",
            CaseTag::Transmission => "transmission",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveRecord<T> {
    pub id: usize,
    pub family: Option<Family>,
    pub phase: Phase,
    pub sigma: T,
}

impl<T: Real> WaveRecord<T> {
    pub(crate) fn of(f: &Front<T>) -> Self {
        Self { id: f.id, family: f.family, phase: f.phase, sigma: f.sigma }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InteractionEvent<T> {
    pub time: T,
    pub position: T,
    pub case: CaseTag,
    pub incoming: Vec<WaveRecord<T>>,
    pub outgoing: Vec<WaveRecord<T>>,
}

impl<T: Real> InteractionEvent<T> {
    pub fn is_interaction(&self) -> bool {
        self.case != CaseTag::Transmission
    }
}

/// Tracking parameters and output requests.
#[derive(Clone, Debug)]
pub struct RunConfig<T> {
    /// Largest pressure jump of a fan jump at initialisation.
    pub epsilon: T,
    pub t_final: T,
    /// Liquid mass, i.e. the slab width in the Lagrangian coordinate.
    pub m: T,
    pub gas: GasLaw<T>,
    pub liquid: LiquidLaw<T>,
    pub output_times: Vec<T>,
    /// Lines `z = x` in the gas whose traces are recorded.
    pub measurement_lines: Vec<T>,
    pub max_interactions: usize,
}

impl<T: Real> RunConfig<T> {
    pub const DEFAULT_MAX_INTERACTIONS: usize = 1_000_000;

    pub fn new(gas: GasLaw<T>, liquid: LiquidLaw<T>, m: T, t_final: T, epsilon: T) -> Self {
        Self {
            epsilon,
            t_final,
            m,
            gas,
            liquid,
            output_times: Vec::new(),
            measurement_lines: Vec::new(),
            max_interactions: Self::DEFAULT_MAX_INTERACTIONS,
        }
    }

    pub fn with_eta(mut self, eta: T) -> Self {
        self.liquid = self.liquid.with_eta(eta);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |x: T, name: &str| {
            if x > T::zero() && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {x}")))
            }
        };
        pos(self.epsilon, "epsilon")?;
        pos(self.t_final, "final time")?;
        pos(self.m, "liquid mass m")?;
        pos(self.liquid.eta, "eta")?;
        for &x in &self.measurement_lines {
            if x >= T::zero() && x <= self.m {
                return Err(Error::Config(format!("measurement line {x} lies in the liquid [0, m]")));
            }
        }
        for &t in &self.output_times {
            if !(t >= T::zero() && t <= self.t_final) {
                return Err(Error::Config(format!("output time {t} outside [0, T]")));
            }
        }
        Ok(())
    }
}

/// Specific volume or pressure of an initial state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Level<T> {
    Tau(T),
    Pressure(T),
}

/// Piecewise-constant data on one phase: `levels[k]` holds between
/// `jumps[k-1]` and `jumps[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Piecewise<T> {
    pub jumps: Vec<T>,
    pub levels: Vec<(Level<T>, T)>,
}

impl<T: Real> Piecewise<T> {
    pub fn constant(level: Level<T>, v: T) -> Self {
        Self { jumps: Vec::new(), levels: vec![(level, v)] }
    }

    pub fn pressure(p: T, v: T) -> Self {
        Self::constant(Level::Pressure(p), v)
    }

    /// Pieces given by `(start, p, v)`; the first start is ignored.
    pub fn from_pressures(pieces: &[(T, T, T)]) -> Self {
        Self {
            jumps: pieces.iter().skip(1).map(|x| x.0).collect(),
            levels: pieces.iter().map(|&(_, p, v)| (Level::Pressure(p), v)).collect(),
        }
    }

    fn check(&self, lo: T, hi: T, phase: &str) -> Result<()> {
        if self.levels.len() != self.jumps.len() + 1 {
            return Err(Error::Config(format!(
                "{phase}: {} jumps need {} states, got {}",
                self.jumps.len(),
                self.jumps.len() + 1,
                self.levels.len()
            )));
        }
        let mut last = lo;
        for &z in &self.jumps {
            if !(z > last && z < hi) {
                return Err(Error::Config(format!(
                    "{phase}: jump at {z} is out of order, overlapping or outside ]{lo}, {hi}["
                )));
            }
            last = z;
        }
        Ok(())
    }

    pub(crate) fn states_with(&self, gas: &GasLaw<T>) -> Result<Vec<State<T>>> {
        self.levels
            .iter()
            .map(|&(l, v)| match l {
                Level::Tau(tau) => gas.state(tau, v),
                Level::Pressure(p) => gas.state_at_pressure(p, v),
            })
            .collect()
    }

    pub(crate) fn states_with_liquid(&self, liq: &LiquidLaw<T>) -> Vec<State<T>> {
        self.levels
            .iter()
            .map(|&(l, v)| match l {
                Level::Tau(tau) => State { tau, v, p: liq.pressure_of(tau) },
                Level::Pressure(p) => liq.state_at(p, v),
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.levels.windows(2).all(|w| w[0] == w[1])
    }
}

/// Initial datum for the three phases.
#[derive(Clone, Debug, PartialEq)]
pub struct Datum<T> {
    pub gas_left: Piecewise<T>,
    pub liquid: Piecewise<T>,
    pub gas_right: Piecewise<T>,
}

impl<T: Real> Datum<T> {
    /// Everything at rest at pressure `p`.
    pub fn uniform(p: T) -> Self {
        Self {
            gas_left: Piecewise::pressure(p, T::zero()),
            liquid: Piecewise::pressure(p, T::zero()),
            gas_right: Piecewise::pressure(p, T::zero()),
        }
    }

    pub fn validate(&self, m: T) -> Result<()> {
        self.gas_left.check(T::neg_infinity(), T::zero(), "left gas")?;
        self.liquid.check(T::zero(), m, "liquid")?;
        self.gas_right.check(m, T::infinity(), "right gas")
    }
}

/// A front as seen at a fixed time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontView<T> {
    pub id: usize,
    pub family: Option<Family>,
    pub kind: FrontKind,
    pub phase: Phase,
    pub sigma: T,
    pub speed: T,
    pub position: T,
    pub left: State<T>,
    pub right: State<T>,
}

/// Piecewise-constant solution at one time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot<T> {
    pub time: T,
    pub m: T,
    /// Position-sorted, phase boundaries included.
    pub fronts: Vec<FrontView<T>>,
    pub far_left: State<T>,
    pub far_right: State<T>,
}

impl<T: Real> Snapshot<T> {
    /// State at `z`; at a front the right limit is returned.
    pub fn sample(&self, z: T) -> State<T> {
        let k = self.fronts.partition_point(|f| f.position <= z);
        match self.fronts.get(k) {
            Some(f) => f.left,
            None => self.far_right,
        }
    }

    /// Phase of the point `z`, with the same right-limit convention.
    pub fn phase_at(&self, z: T) -> Phase {
        if z < T::zero() {
            Phase::GasLeft
        } else if z < self.m {
            Phase::Liquid
        } else {
            Phase::GasRight
        }
    }

    pub fn waves(&self) -> impl Iterator<Item = &FrontView<T>> + '_ {
        self.fronts.iter().filter(|f| f.kind != FrontKind::Boundary)
    }

    /// Constant pieces `(a, b, state)` covering `[lo, hi]`.
    pub fn pieces(&self, lo: T, hi: T) -> Vec<(T, T, State<T>)> {
        let mut out = Vec::new();
        let mut a = lo;
        let mut k = self.fronts.partition_point(|f| f.position <= lo);
        while a < hi {
            let (b, u) = match self.fronts.get(k) {
                Some(f) => (f.position.min(hi), f.left),
                None => (hi, self.far_right),
            };
            if b > a {
                out.push((a, b, u));
            }
            a = a.max(b);
            k += 1;
        }
        out
    }
}

/// Piecewise-constant-in-time record of the states on both sides of a phase
/// boundary. Entry `k` holds on `[times[k], times[k+1])`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace<T> {
    pub times: Vec<T>,
    pub left: Vec<State<T>>,
    pub right: Vec<State<T>>,
}

impl<T: Real> BoundaryTrace<T> {
    pub(crate) fn push(&mut self, t: T, l: State<T>, r: State<T>) {
        self.times.push(t);
        self.left.push(l);
        self.right.push(r);
    }

    fn index_at(&self, t: T) -> usize {
        self.times.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// States on both sides at `t` (right-continuous).
    pub fn at(&self, t: T) -> (State<T>, State<T>) {
        let k = self.index_at(t);
        (self.left[k], self.right[k])
    }

    /// Exact `∫_0^t f(left, right) ds`.
    pub fn integrate<F: Fn(&State<T>, &State<T>) -> T>(&self, t: T, f: F) -> T {
        let mut sum = T::zero();
        for k in 0..self.times.len() {
            let a = self.times[k];
            if a >= t {
                break;
            }
            let b = self.times.get(k + 1).copied().unwrap_or(t).min(t);
            sum = sum + f(&self.left[k], &self.right[k]) * (b - a);
        }
        sum
    }

    /// Switch times and states of one side, for trace comparisons.
    pub fn side(&self, right: bool) -> (Vec<T>, Vec<State<T>>) {
        let states = if right { self.right.clone() } else { self.left.clone() };
        (self.times.clone(), states)
    }
}

/// States seen on a line `z = x` in the gas, switching at front crossings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineTrace<T> {
    pub x: T,
    pub times: Vec<T>,
    pub states: Vec<State<T>>,
    /// Pressure jump of each crossing front.
    pub jumps: Vec<T>,
    /// Id of each crossing front.
    pub crossed: Vec<usize>,
}

/// Everything a run produces.
#[derive(Clone, Debug)]
pub struct RunOutput<T> {
    pub initial: Snapshot<T>,
    pub final_snapshot: Snapshot<T>,
    pub snapshots: Vec<Snapshot<T>>,
    pub events: Vec<InteractionEvent<T>>,
    /// Traces at `z = 0` and `z = m`.
    pub boundaries: [BoundaryTrace<T>; 2],
    pub lines: Vec<LineTrace<T>>,
    pub interactions: usize,
    pub max_fronts: usize,
    pub fronts_created: usize,
    /// Droplet history of the limit model.
    pub droplet: Option<Vec<DropletState<T>>>,
}
