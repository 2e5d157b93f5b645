//! Incompressible limit: gas on both half-lines pushing a rigid droplet.
//!
//! The droplet velocity obeys `m v_l' = p_g(0-) - p_g(m+)`. It is kept
//! piecewise constant, updated on a fixed time grid and whenever a gas wave
//! reaches a wall; each update re-solves the two piston problems so that the
//! gas velocity at the walls equals `v_l`.

use serde::{Deserialize, Serialize};

use crate::engine::{BoundaryTrace, Datum, Engine, Observer, RunConfig, RunOutput};
use crate::error::{Error, Result};
use crate::pressure::State;
use crate::scalar::Real;

/// Droplet velocity and the impulse that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DropletState<T> {
    /// Time of the update.
    pub time: T,
    pub v_l: T,
    /// `∫ (p_g(0-) - p_g(m+)) ds` up to `time`.
    pub impulse: T,
}

impl<T: Real> DropletState<T> {
    pub fn at_rest(v_l: T) -> Self {
        Self { time: T::zero(), v_l, impulse: T::zero() }
    }

    /// Integrates a constant pressure difference up to `t` and updates `v_l`.
    pub fn advance(&self, t: T, p_left: T, p_right: T, m: T, v_bar: T) -> Self {
        let impulse = self.impulse + (p_left - p_right) * (t - self.time);
        Self { time: t, v_l: v_bar + impulse / m, impulse }
    }
}

/// Engine-side state of the rigid interior.
#[derive(Clone, Debug)]
pub(crate) struct Rigid<T> {
    pub dt_ode: T,
    m: T,
    v_bar: T,
    tau_bar: T,
    p_bar: T,
    current: DropletState<T>,
    accrued_to: T,
    pub history: Vec<DropletState<T>>,
}

impl<T: Real> Rigid<T> {
    fn new(cfg: &LimitConfig<T>) -> Self {
        let start = DropletState::at_rest(cfg.v_bar);
        Self {
            dt_ode: cfg.dt_ode,
            m: cfg.run.m,
            v_bar: cfg.v_bar,
            tau_bar: cfg.run.liquid.tau_bar,
            p_bar: cfg.run.liquid.p_bar,
            current: start,
            accrued_to: T::zero(),
            history: vec![start],
        }
    }

    pub fn accrue(&mut self, t: T, p0: T, pm: T) {
        self.current.impulse = self.current.impulse + (p0 - pm) * (t - self.accrued_to);
        self.accrued_to = t;
    }

    pub fn update(&mut self, t: T) {
        self.current.time = t;
        self.current.v_l = self.v_bar + self.current.impulse / self.m;
        self.history.push(self.current);
    }

    /// Constant state inside the droplet. The pressure there is not defined
    /// by the limit model; the reference pressure is reported.
    pub fn droplet_state(&self) -> State<T> {
        State { tau: self.tau_bar, v: self.current.v_l, p: self.p_bar }
    }
}

#[derive(Clone, Debug)]
pub struct LimitConfig<T> {
    /// The liquid law supplies `tau_bar` and `p_bar`; its `eta` is unused.
    pub run: RunConfig<T>,
    /// Initial droplet velocity.
    pub v_bar: T,
    pub dt_ode: T,
}

impl<T: Real> LimitConfig<T> {
    /// Default update step `T / 2000`.
    pub fn new(run: RunConfig<T>, v_bar: T) -> Self {
        let dt_ode = run.t_final / T::lit(2000.0);
        Self { run, v_bar, dt_ode }
    }
}

/// Runs the coupled gas/droplet model. The liquid part of `datum` is ignored.
pub fn run_limit<T: Real>(cfg: &LimitConfig<T>, datum: &Datum<T>) -> Result<RunOutput<T>> {
    run_limit_observed(cfg, datum, &mut ())
}

pub fn run_limit_observed<T: Real>(
    cfg: &LimitConfig<T>,
    datum: &Datum<T>,
    obs: &mut dyn Observer<T>,
) -> Result<RunOutput<T>> {
    if !(cfg.dt_ode > T::zero()) {
        return Err(Error::Config(format!("ODE step must be positive, got {}", cfg.dt_ode)));
    }
    Engine::with_rigid(cfg.run.clone(), datum, Rigid::new(cfg))?.run_observed(obs)
}

/// `∫_0^t (p(0-) - p(m+)) ds` from the boundary traces.
pub fn boundary_impulse<T: Real>(traces: &[BoundaryTrace<T>; 2], t: T) -> T {
    traces[0].integrate(t, |l, _| l.p) - traces[1].integrate(t, |_, r| r.p)
}

/// `∫ f ds` from the first switch time of a right-continuous step function,
/// evaluated at sorted query times in one pass.
fn cumulative<T: Real>(times: &[T], values: impl Fn(usize) -> T, queries: &[T]) -> Vec<T> {
    let Some(&start) = times.first() else { return vec![T::zero(); queries.len()] };
    let (mut k, mut acc, mut at) = (0, T::zero(), start);
    let mut out = Vec::with_capacity(queries.len());
    for &q in queries {
        while at < q {
            if k + 1 < times.len() && times[k + 1] <= q {
                acc = acc + values(k) * (times[k + 1] - at);
                at = times[k + 1];
                k += 1;
            } else {
                acc = acc + values(k) * (q - at);
                at = q;
            }
        }
        out.push(acc);
    }
    out
}

/// Boundary impulse at each of the sorted `times`.
pub fn boundary_impulses<T: Real>(traces: &[BoundaryTrace<T>; 2], times: &[T]) -> Vec<T> {
    let left = cumulative(&traces[0].times, |k| traces[0].left[k].p, times);
    let right = cumulative(&traces[1].times, |k| traces[1].right[k].p, times);
    left.into_iter().zip(right).map(|(a, b)| a - b).collect()
}

/// Largest `|m (v_l - v_bar) - impulse|` over the droplet update instants,
/// with the impulse integrated independently from the boundary traces.
pub fn newton_law_residual<T: Real>(out: &RunOutput<T>, m: T) -> T {
    let Some(history) = &out.droplet else { return T::zero() };
    let v_bar = history[0].v_l;
    let times: Vec<T> = history.iter().map(|h| h.time).collect();
    let imp = boundary_impulses(&out.boundaries, &times);
    history.iter().zip(imp).map(|(h, i)| (m * (h.v_l - v_bar) - i).abs()).fold(T::zero(), T::max)
}

/// Supremum over all times of the same mismatch, which for a piecewise
/// constant `v_l` is reached just before each update and at the final time.
pub fn newton_law_defect<T: Real>(out: &RunOutput<T>, m: T, t_final: T) -> T {
    let Some(history) = &out.droplet else { return T::zero() };
    let v_bar = history[0].v_l;
    let mut times: Vec<T> = history.iter().skip(1).map(|h| h.time).collect();
    times.push(t_final);
    let imp = boundary_impulses(&out.boundaries, &times);
    history.iter().zip(imp).map(|(h, i)| (m * (h.v_l - v_bar) - i).abs()).fold(T::zero(), T::max)
}

/// Droplet velocity at `t` (right-continuous).
pub fn droplet_velocity_at<T: Real>(history: &[DropletState<T>], t: T) -> T {
    let k = history.partition_point(|h| h.time <= t);
    history[k.saturating_sub(1)].v_l
}
