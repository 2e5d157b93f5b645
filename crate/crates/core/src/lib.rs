//! Exact wave-front tracking for a gas surrounding a stiff liquid slab.
//!
//! The compressible model evolves the p-system in Lagrangian coordinates on
//! the whole line, with the liquid occupying the fixed mass interval `[0, m]`
//! under a linear pressure law of stiffness `eta`. The incompressible limit
//! replaces the slab with a rigid droplet driven by the pressure difference
//! across it. `functionals` tracks the interaction potential of a run and
//! `analysis` compares the two models as the stiffness grows.
//!
//! All numerics are generic over [`Real`]; the `*64` aliases fix `f64`.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod error;
pub mod functionals;
pub mod limit;
pub mod pressure;
pub mod quadrature;
pub mod riemann;
pub mod root;
pub mod scalar;
pub mod scenario;

pub use engine::{Datum, Engine, RunConfig, RunOutput, Snapshot};
pub use error::{Error, Result};
pub use limit::{run_limit, LimitConfig};
pub use pressure::{GasLaw, LiquidLaw, PressureLaw, State};
pub use riemann::{Family, RiemannSolution, Wave, WaveSize, WaveSpeed};
pub use scalar::Real;

pub type State64 = State<f64>;
pub type GasLaw64 = GasLaw<f64>;
pub type LiquidLaw64 = LiquidLaw<f64>;
pub type Snapshot64 = Snapshot<f64>;
pub type RunConfig64 = RunConfig<f64>;
