//! Metrics comparing compressible runs with the incompressible limit, and
//! the η sweep that collects them.
//!
//! Every integral here is of a piecewise-constant (or piecewise-linear)
//! function and is evaluated exactly from its breakpoints.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{BoundaryTrace, Datum, Engine, FrontKind, LineTrace, Observer, Phase, RunConfig, RunOutput, Snapshot};
use crate::error::{Error, Result};
use crate::functionals::{upsilon, GlimmWeights};
use crate::limit::{run_limit, LimitConfig};
use crate::pressure::{PressureLaw, State};
use crate::scalar::Real;

/// A pair of L¹ norms, for `τ` and `v`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct L1Pair<T> {
    pub tau: T,
    pub v: T,
}

impl<T: Real> L1Pair<T> {
    pub fn total(&self) -> T {
        self.tau + self.v
    }

    fn add(&mut self, a: &State<T>, b: &State<T>, len: T) {
        self.tau = self.tau + (a.tau - b.tau).abs() * len;
        self.v = self.v + (a.v - b.v).abs() * len;
    }
}

/// `∫_lo^hi |u₁ - u₂| dz` for two snapshots taken at the same time.
pub fn l1_distance<T: Real>(s1: &Snapshot<T>, s2: &Snapshot<T>, lo: T, hi: T) -> Result<L1Pair<T>> {
    if s1.time != s2.time {
        return Err(Error::Domain(format!("snapshots at different times {} and {}", s1.time, s2.time)));
    }
    Ok(merged_l1(&s1.pieces(lo, hi), &s2.pieces(lo, hi)))
}

/// L¹ distance of two piecewise-constant functions given as pieces covering
/// the same interval.
fn merged_l1<T: Real>(a: &[(T, T, State<T>)], b: &[(T, T, State<T>)]) -> L1Pair<T> {
    let mut out = L1Pair::default();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if hi > lo {
            out.add(&a[i].2, &b[j].2, hi - lo);
        }
        if a[i].1 <= b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Right-continuous piecewise-constant function of time; entry `k` holds on
/// `[times[k], times[k+1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trace<T> {
    pub times: Vec<T>,
    pub states: Vec<State<T>>,
}

/// The four one-sided boundary traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    ZeroMinus,
    ZeroPlus,
    MMinus,
    MPlus,
}

impl<T: Real> Trace<T> {
    pub fn boundary(traces: &[BoundaryTrace<T>; 2], side: Side) -> Self {
        let (k, right) = match side {
            Side::ZeroMinus => (0, false),
            Side::ZeroPlus => (0, true),
            Side::MMinus => (1, false),
            Side::MPlus => (1, true),
        };
        let (times, states) = traces[k].side(right);
        Self { times, states }
    }

    pub fn line(line: &LineTrace<T>) -> Self {
        Self { times: line.times.clone(), states: line.states.clone() }
    }

    pub fn at(&self, t: T) -> State<T> {
        let k = self.times.partition_point(|&s| s <= t).saturating_sub(1);
        self.states[k]
    }

    /// The trace on `[0, t]`.
    pub fn restrict(&self, t: T) -> Self {
        let n = self.times.partition_point(|&s| s <= t).max(1);
        Self { times: self.times[..n].to_vec(), states: self.states[..n].to_vec() }
    }

    /// Number of state changes.
    pub fn switches(&self) -> usize {
        self.states.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Pieces `(a, b, state)` covering `[0, t]`.
    fn pieces(&self, t: T) -> Vec<(T, T, State<T>)> {
        let mut out = Vec::with_capacity(self.times.len());
        for k in 0..self.times.len() {
            let a = self.times[k];
            if a >= t {
                break;
            }
            let b = self.times.get(k + 1).copied().unwrap_or(t).min(t);
            if b > a {
                out.push((a, b, self.states[k]));
            }
        }
        out
    }

    /// `∫_0^t f(u(s)) ds`.
    pub fn integrate<F: Fn(&State<T>) -> T>(&self, t: T, f: F) -> T {
        self.pieces(t).iter().fold(T::zero(), |acc, (a, b, u)| acc + f(u) * (*b - *a))
    }
}

/// `∫_0^t |u₁(s) - u₂(s)| ds` for two traces.
pub fn trace_distance<T: Real>(a: &Trace<T>, b: &Trace<T>, t: T) -> L1Pair<T> {
    merged_l1(&a.pieces(t), &b.pieces(t))
}

/// Space-time window `[t0, t1] × [x0, x1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window<T> {
    pub t0: T,
    pub t1: T,
    pub x0: T,
    pub x1: T,
}

/// Dyadic rectangles over `[0, T] × [0, m]`: `1×1, 2×2, …, 2^depth × 2^depth`.
pub fn dyadic_windows<T: Real>(t_final: T, m: T, depth: u32) -> Vec<Window<T>> {
    let mut out = Vec::new();
    for level in 0..=depth {
        let n = 1usize << level;
        let nn = T::lit(n as f64);
        for i in 0..n {
            for j in 0..n {
                let (fi, fj) = (T::lit(i as f64), T::lit(j as f64));
                out.push(Window {
                    t0: t_final * fi / nn,
                    t1: t_final * (fi + T::one()) / nn,
                    x0: m * fj / nn,
                    x1: m * (fj + T::one()) / nn,
                });
            }
        }
    }
    out
}

/// `∫_s0^s1 clamp(z0 + c (t - t_ref), lo, hi) dt`, exactly.
fn clamped_linear_integral<T: Real>(z0: T, c: T, t_ref: T, s0: T, s1: T, lo: T, hi: T) -> T {
    let z = |t: T| (z0 + c * (t - t_ref)).max(lo).min(hi);
    let mut cuts = vec![s0, s1];
    if c != T::zero() {
        for target in [lo, hi] {
            let t = t_ref + (target - z0) / c;
            if t > s0 && t < s1 {
                cuts.push(t);
            }
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let half = T::lit(0.5);
    cuts.windows(2).fold(T::zero(), |acc, w| acc + half * (z(w[0]) + z(w[1])) * (w[1] - w[0]))
}

/// Observer integrating the liquid pressure over a family of windows.
pub struct PressureWindows<T> {
    pub windows: Vec<Window<T>>,
    pub integrals: Vec<T>,
}

impl<T: Real> PressureWindows<T> {
    pub fn new(windows: Vec<Window<T>>) -> Self {
        let integrals = vec![T::zero(); windows.len()];
        Self { windows, integrals }
    }
}

impl<T: Real> Observer<T> for PressureWindows<T> {
    fn interval(&mut self, e: &Engine<T>, t0: T, t1: T) {
        if !(t1 > t0) {
            return;
        }
        // p(x) = p(0+) + Σ over liquid fronts left of x of their jumps
        let mut base = None;
        let mut jumps = Vec::new();
        for f in e.fronts() {
            match (f.kind, f.phase) {
                (FrontKind::Boundary, _) if base.is_none() => base = Some(f.right.p),
                (FrontKind::Boundary, _) => break,
                (_, Phase::Liquid) => jumps.push((f.origin, f.speed, f.born, f.right.p - f.left.p)),
                _ => {}
            }
        }
        let Some(p0) = base else { return };
        for (w, acc) in self.windows.iter().zip(self.integrals.iter_mut()) {
            let (s0, s1) = (t0.max(w.t0), t1.min(w.t1));
            if !(s1 > s0) {
                continue;
            }
            let width = w.x1 - w.x0;
            let mut sum = p0 * width * (s1 - s0);
            for &(z0, c, born, dp) in &jumps {
                // ∫_{x0}^{x1} H(x - z) dx = x1 - clamp(z, x0, x1)
                let clamped = clamped_linear_integral(z0, c, born, s0, s1, w.x0, w.x1);
                sum = sum + dp * (w.x1 * (s1 - s0) - clamped);
            }
            *acc = *acc + sum;
        }
    }
}

/// `∫∫_W ((1 - x/m) p_g(t, 0-) + (x/m) p_g(t, m+))` from boundary traces.
pub fn interpolated_pressure_integral<T: Real>(traces: &[BoundaryTrace<T>; 2], m: T, w: &Window<T>) -> T {
    let two = T::lit(2.0);
    let width = w.x1 - w.x0;
    let moment = (w.x1 * w.x1 - w.x0 * w.x0) / (two * m);
    let left = Trace::boundary(traces, Side::ZeroMinus);
    let right = Trace::boundary(traces, Side::MPlus);
    let over = |tr: &Trace<T>| tr.integrate(w.t1, |u| u.p) - tr.integrate(w.t0, |u| u.p);
    over(&left) * (width - moment) + over(&right) * moment
}

/// `|∫∫_W p^η - ∫∫_W p_interp|` for each window.
pub fn weakstar_residuals<T: Real>(windows: &PressureWindows<T>, limit: &[BoundaryTrace<T>; 2], m: T) -> Vec<T> {
    windows
        .windows
        .iter()
        .zip(&windows.integrals)
        .map(|(w, &i)| (i - interpolated_pressure_integral(limit, m, w)).abs())
        .collect()
}

/// Empirical Lipschitz-in-time constants from snapshot pairs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport<T> {
    /// `sup ‖v(t₁) - v(t₂)‖_{L¹(ℝ)} / |t₁ - t₂|`.
    pub v_ratio: T,
    /// Same for `τ` restricted to the gas.
    pub tau_gas_ratio: T,
    /// Same for `τ` restricted to `[0, m]`.
    pub tau_liquid_ratio: T,
    /// Largest gas characteristic speed seen.
    pub lambda: T,
}

/// Ratios over the given snapshot pairs (e.g. consecutive snapshots).
pub fn lipschitz_report<T: Real, L: PressureLaw<T>>(
    pairs: &[(&Snapshot<T>, &Snapshot<T>)],
    gas: &L,
) -> Result<LipschitzReport<T>> {
    let mut r = LipschitzReport::<T>::default();
    for (a, b) in pairs {
        let dt = (b.time - a.time).abs();
        if !(dt > T::zero()) {
            return Err(Error::Domain("Lipschitz pair with equal times".into()));
        }
        let (lo, hi) = support(a, b);
        let whole = merged_l1(&a.pieces(lo, hi), &b.pieces(lo, hi));
        let liquid = merged_l1(&a.pieces(T::zero(), a.m), &b.pieces(T::zero(), a.m));
        r.v_ratio = r.v_ratio.max(whole.v / dt);
        r.tau_liquid_ratio = r.tau_liquid_ratio.max(liquid.tau / dt);
        r.tau_gas_ratio = r.tau_gas_ratio.max((whole.tau - liquid.tau).max(T::zero()) / dt);
        for s in [a, b] {
            for f in s.fronts.iter().filter(|f| f.phase.is_gas()) {
                for u in [f.left, f.right] {
                    r.lambda = r.lambda.max(gas.sound_speed(u.tau)?);
                }
            }
            r.lambda = r.lambda.max(gas.sound_speed(s.far_left.tau)?).max(gas.sound_speed(s.far_right.tau)?);
        }
    }
    Ok(r)
}

/// An interval holding every front of both snapshots, plus the slab.
fn support<T: Real>(a: &Snapshot<T>, b: &Snapshot<T>) -> (T, T) {
    let mut lo = T::zero();
    let mut hi = a.m;
    for f in a.fronts.iter().chain(&b.fronts) {
        lo = lo.min(f.position);
        hi = hi.max(f.position);
    }
    (lo - T::one(), hi + T::one())
}

/// Eulerian positions of the two interfaces on a time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EulerianBoundaries<T> {
    pub times: Vec<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
}

impl<T: Real> EulerianBoundaries<T> {
    /// `a(t) = a_o + ∫ v_g(s, 0-) ds`, `b(t) = b_o + ∫ v_g(s, m+) ds`.
    pub fn from_traces(traces: &[BoundaryTrace<T>; 2], a0: T, b0: T, times: &[T]) -> Self {
        let left = Trace::boundary(traces, Side::ZeroMinus);
        let right = Trace::boundary(traces, Side::MPlus);
        Self {
            times: times.to_vec(),
            a: times.iter().map(|&t| a0 + left.integrate(t, |u| u.v)).collect(),
            b: times.iter().map(|&t| b0 + right.integrate(t, |u| u.v)).collect(),
        }
    }

    /// Both interfaces move with the droplet velocity.
    pub fn rigid(history: &[crate::limit::DropletState<T>], a0: T, b0: T, times: &[T]) -> Self {
        let tr = Trace {
            times: history.iter().map(|h| h.time).collect(),
            states: history.iter().map(|h| State { tau: T::zero(), v: h.v_l, p: T::zero() }).collect(),
        };
        Self {
            times: times.to_vec(),
            a: times.iter().map(|&t| a0 + tr.integrate(t, |u| u.v)).collect(),
            b: times.iter().map(|&t| b0 + tr.integrate(t, |u| u.v)).collect(),
        }
    }

    /// `max_k max(|a - a'|, |b - b'|)` on a common grid.
    pub fn max_distance(&self, other: &Self) -> T {
        let mut d = T::zero();
        for k in 0..self.times.len().min(other.times.len()) {
            d = d.max((self.a[k] - other.a[k]).abs()).max((self.b[k] - other.b[k]).abs());
        }
        d
    }
}

/// Eulerian width of the slab, `∫_0^m τ dz`.
pub fn eulerian_width<T: Real>(s: &Snapshot<T>) -> T {
    s.pieces(T::zero(), s.m).iter().fold(T::zero(), |acc, (a, b, u)| acc + u.tau * (*b - *a))
}

/// Imbalance of the conservation laws `τ_t = v_z`, `v_t = -p_z` between two
/// snapshots, over an interval holding every front of both.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConservationDefect<T> {
    pub mass: T,
    pub momentum: T,
}

pub fn conservation_defect<T: Real>(initial: &Snapshot<T>, last: &Snapshot<T>) -> ConservationDefect<T> {
    let (lo, hi) = support(initial, last);
    let t = last.time - initial.time;
    let integral = |s: &Snapshot<T>, f: &dyn Fn(&State<T>) -> T| {
        s.pieces(lo, hi).iter().fold(T::zero(), |acc, (a, b, u)| acc + f(u) * (*b - *a))
    };
    // Outside the support the states never change.
    let (ul, ur) = (initial.far_left, initial.far_right);
    let mass = integral(last, &|u| u.tau) - integral(initial, &|u| u.tau) - (ur.v - ul.v) * t;
    let momentum = integral(last, &|u| u.v) - integral(initial, &|u| u.v) + (ur.p - ul.p) * t;
    ConservationDefect { mass: mass.abs(), momentum: momentum.abs() }
}

/// `∫_0^m v dz`, the liquid momentum.
pub fn liquid_momentum<T: Real>(s: &Snapshot<T>) -> T {
    s.pieces(T::zero(), s.m).iter().fold(T::zero(), |acc, (a, b, u)| acc + u.v * (*b - *a))
}

/// Steps of a sequence that increase, and the worst ratio `x[k+1]/x[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub increases: usize,
    pub worst_ratio: f64,
    /// Last over first.
    pub overall: f64,
}

pub fn trend<T: Real>(xs: &[T]) -> Trend {
    let mut increases = 0;
    let mut worst = 0.0f64;
    for w in xs.windows(2) {
        let (a, b) = (w[0].to_f64_lossy(), w[1].to_f64_lossy());
        let r = if a > 0.0 { b / a } else if b > 0.0 { f64::INFINITY } else { 0.0 };
        worst = worst.max(r);
        if b > a {
            increases += 1;
        }
    }
    let overall = match (xs.first(), xs.last()) {
        (Some(a), Some(b)) if a.to_f64_lossy() > 0.0 => b.to_f64_lossy() / a.to_f64_lossy(),
        _ => 0.0,
    };
    Trend { increases, worst_ratio: worst, overall }
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / n, b + y / n));
    let (sxy, sxx) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    sxy / sxx
}

/// Settings of an η sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig<T> {
    pub run: RunConfig<T>,
    pub etas: Vec<T>,
    pub v_bar: T,
    pub dt_ode: T,
    pub window_depth: u32,
    /// Grid for the Eulerian boundaries and Lipschitz pairs.
    pub grid: usize,
    /// Spacing of each Lipschitz pair.
    pub lipschitz_h: T,
    pub weights: GlimmWeights<T>,
}

/// Metrics of one η run against the limit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EtaMetrics<T> {
    pub eta: T,
    pub liquid_l1: L1Pair<T>,
    pub trace_zero_minus: L1Pair<T>,
    pub trace_m_plus: L1Pair<T>,
    /// `max_t |∫v^η(t) - ∫v^η(0) - impulse(t)|` over the slab.
    pub newton_residual: T,
    pub weakstar: Vec<T>,
    pub weakstar_max: T,
    pub eulerian_distance: T,
    pub euler: EulerianBoundaries<T>,
    pub lipschitz: LipschitzReport<T>,
    pub upsilon0: T,
    pub interactions: usize,
    pub max_fronts: usize,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimitMetrics<T> {
    pub v_l_final: T,
    pub newton_residual: T,
    pub newton_defect: T,
    /// `max_t |b(t) - a(t) - (b_o - a_o)|`.
    pub rigidity: T,
    pub euler: EulerianBoundaries<T>,
    pub interactions: usize,
    pub runtime_s: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult<T> {
    pub etas: Vec<T>,
    pub runs: Vec<std::result::Result<EtaMetrics<T>, String>>,
    pub limit: LimitMetrics<T>,
    pub windows: Vec<Window<T>>,
    pub grid: Vec<T>,
}

impl<T: Real> SweepResult<T> {
    /// Successful runs only.
    pub fn ok_runs(&self) -> Vec<&EtaMetrics<T>> {
        self.runs.iter().filter_map(|r| r.as_ref().ok()).collect()
    }

    pub fn series<F: Fn(&EtaMetrics<T>) -> T>(&self, f: F) -> Vec<T> {
        self.ok_runs().into_iter().map(f).collect()
    }
}

fn grid<T: Real>(t_final: T, n: usize) -> Vec<T> {
    (0..=n).map(|k| t_final * T::lit(k as f64) / T::lit(n as f64)).collect()
}

/// Runs the limit model once and the compressible model for each η, in
/// parallel, and compares them.
pub fn sweep<T: Real>(cfg: &SweepConfig<T>, datum: &Datum<T>) -> Result<SweepResult<T>> {
    if !datum.liquid.is_constant() {
        return Err(Error::Config("the sweep needs a constant liquid datum".into()));
    }
    if cfg.etas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("eta ladder must be strictly increasing".into()));
    }
    let t_final = cfg.run.t_final;
    let m = cfg.run.m;
    let times = grid(t_final, cfg.grid);
    let windows = dyadic_windows(t_final, m, cfg.window_depth);

    let clock = Instant::now();
    let lim_cfg = LimitConfig { run: cfg.run.clone(), v_bar: cfg.v_bar, dt_ode: cfg.dt_ode };
    let lim = run_limit(&lim_cfg, datum)?;
    let history = lim.droplet.clone().unwrap_or_default();
    let b0_limit = cfg.run.liquid.tau_bar * m;
    let lim_euler = EulerianBoundaries::rigid(&history, T::zero(), b0_limit, &times);
    let rigidity = lim_euler
        .a
        .iter()
        .zip(&lim_euler.b)
        .fold(T::zero(), |acc, (a, b)| acc.max((*b - *a - b0_limit).abs()));
    let limit = LimitMetrics {
        v_l_final: history.last().map_or(cfg.v_bar, |h| h.v_l),
        newton_residual: crate::limit::newton_law_residual(&lim, m),
        newton_defect: crate::limit::newton_law_defect(&lim, m, t_final),
        rigidity,
        euler: lim_euler.clone(),
        interactions: lim.interactions,
        runtime_s: clock.elapsed().as_secs_f64(),
    };

    let runs = cfg
        .etas
        .par_iter()
        .map(|&eta| eta_run(cfg, datum, eta, &lim, &lim_euler, &windows, &times).map_err(|e| e.to_string()))
        .collect();
    Ok(SweepResult { etas: cfg.etas.clone(), runs, limit, windows, grid: times })
}

fn eta_run<T: Real>(
    cfg: &SweepConfig<T>,
    datum: &Datum<T>,
    eta: T,
    lim: &RunOutput<T>,
    lim_euler: &EulerianBoundaries<T>,
    windows: &[Window<T>],
    times: &[T],
) -> Result<EtaMetrics<T>> {
    let clock = Instant::now();
    let t_final = cfg.run.t_final;
    let m = cfg.run.m;
    let mut run = cfg.run.clone().with_eta(eta);
    // Lipschitz pairs (t, t + h) at the grid midpoints, plus the grid itself.
    let mut outs: Vec<T> = times.to_vec();
    let half = T::lit(0.5);
    for w in times.windows(2) {
        let t = half * (w[0] + w[1]);
        outs.push(t);
        outs.push((t + cfg.lipschitz_h).min(t_final));
    }
    outs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    outs.dedup();
    run.output_times = outs;
    let engine = Engine::new(run, datum)?;
    let upsilon0 = upsilon(&engine.snapshot(), &cfg.weights).upsilon;
    let mut obs = PressureWindows::new(windows.to_vec());
    let out = engine.run_observed(&mut obs)?;

    let lim_final = &lim.final_snapshot;
    let liquid_l1 = l1_distance(&out.final_snapshot, lim_final, T::zero(), m)?;
    let trace = |side| trace_distance(&Trace::boundary(&out.boundaries, side), &Trace::boundary(&lim.boundaries, side), t_final);

    let weakstar = weakstar_residuals(&obs, &lim.boundaries, m);
    let weakstar_max = weakstar.iter().fold(T::zero(), |a, &b| a.max(b));

    let p0 = liquid_momentum(&out.initial);
    let newton_residual = out.snapshots.iter().fold(T::zero(), |acc, s| {
        let imp = crate::limit::boundary_impulse(&out.boundaries, s.time);
        acc.max((liquid_momentum(s) - p0 - imp).abs())
    });

    let b0 = eulerian_width(&out.initial);
    let euler = EulerianBoundaries::from_traces(&out.boundaries, T::zero(), b0, times);

    let snaps = &out.snapshots;
    let mut pairs = Vec::new();
    for w in times.windows(2) {
        let t = half * (w[0] + w[1]);
        let find = |s: T| snaps.iter().find(|x| x.time == s);
        if let (Some(a), Some(b)) = (find(t), find((t + cfg.lipschitz_h).min(t_final))) {
            if b.time > a.time {
                pairs.push((a, b));
            }
        }
    }
    let lipschitz = lipschitz_report(&pairs, &cfg.run.gas)?;

    Ok(EtaMetrics {
        eta,
        liquid_l1,
        trace_zero_minus: trace(Side::ZeroMinus),
        trace_m_plus: trace(Side::MPlus),
        newton_residual,
        weakstar,
        weakstar_max,
        eulerian_distance: euler.max_distance(lim_euler),
        euler,
        lipschitz,
        upsilon0,
        interactions: out.interactions,
        max_fronts: out.max_fronts,
        runtime_s: clock.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::FrontView;
    use crate::riemann::Family;

    fn st(tau: f64, v: f64) -> State<f64> {
        State { tau, v, p: 1.0 / tau }
    }

    fn snap(jumps: &[(f64, State<f64>)], far_left: State<f64>) -> Snapshot<f64> {
        let mut left = far_left;
        let fronts = jumps
            .iter()
            .map(|&(z, right)| {
                let f = FrontView {
                    id: 0,
                    family: Some(Family::One),
                    kind: FrontKind::Shock,
                    phase: if z < 0.0 { Phase::GasLeft } else { Phase::GasRight },
                    sigma: right.p - left.p,
                    speed: 0.0,
                    position: z,
                    left,
                    right,
                };
                left = right;
                f
            })
            .collect();
        Snapshot { time: 0.0, m: 1.0, fronts, far_left, far_right: left }
    }

    #[test]
    fn identical_snapshots_are_at_distance_zero() {
        let s = snap(&[(-1.0, st(1.1, 0.2))], st(1.0, 0.0));
        assert_eq!(l1_distance(&s, &s, -5.0, 5.0).unwrap().total(), 0.0);
    }

    #[test]
    fn constant_offset_over_a_window() {
        let a = snap(&[], st(1.0, 0.0));
        let b = snap(&[], st(1.0, 0.25));
        let d = l1_distance(&a, &b, -1.0, 2.0).unwrap();
        assert_eq!((d.tau, d.v), (0.0, 0.75));
    }

    #[test]
    fn merged_breakpoints_match_dense_sampling() {
        let a = snap(&[(-2.0, st(1.2, 0.1)), (1.5, st(0.9, -0.2))], st(1.0, 0.0));
        let b = snap(&[(-1.0, st(1.1, 0.3))], st(1.0, 0.0));
        let exact = l1_distance(&a, &b, -3.0, 3.0).unwrap().total();
        let n = 600_000;
        let h = 6.0 / n as f64;
        let mut dense = 0.0;
        for k in 0..n {
            let z = -3.0 + (k as f64 + 0.5) * h;
            let (u, w) = (a.sample(z), b.sample(z));
            dense += ((u.tau - w.tau).abs() + (u.v - w.v).abs()) * h;
        }
        assert!((exact - dense).abs() < 1e-6, "{exact} vs {dense}");
        // hand-merged: [-2,-1] |0.2|+|0.1|, [-1,1.5] 0.1+0.2, [1.5,3] 0.2+0.5
        assert!((exact - (0.3 + 2.5 * 0.3 + 1.5 * 0.7)).abs() < 1e-14);
    }

    #[test]
    fn distance_rejects_different_times() {
        let a = snap(&[], st(1.0, 0.0));
        let mut b = a.clone();
        b.time = 1.0;
        assert!(l1_distance(&a, &b, 0.0, 1.0).is_err());
    }

    #[test]
    fn trace_restriction_is_a_prefix() {
        let tr = Trace { times: vec![0.0, 0.5, 0.7, 1.2], states: vec![st(1.0, 0.0), st(1.1, 0.1), st(1.2, 0.0), st(1.0, 0.0)] };
        let r = tr.restrict(0.8);
        assert_eq!(r.times, vec![0.0, 0.5, 0.7]);
        assert_eq!(r.integrate(0.8, |u| u.v), tr.integrate(0.8, |u| u.v));
        assert!((tr.integrate(1.0, |u| u.v) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn clamped_integral_of_a_crossing_front() {
        // z = t crosses [0.25, 0.75] during [0, 1]
        let i: f64 = clamped_linear_integral(0.0, 1.0, 0.0, 0.0, 1.0, 0.25, 0.75);
        let exact = 0.25 * 0.25 + (0.75 * 0.75 - 0.25 * 0.25) / 2.0 + 0.75 * 0.25;
        assert!((i - exact).abs() < 1e-15);
    }

    #[test]
    fn dyadic_family_sizes() {
        let w = dyadic_windows(1.0, 2.0, 2);
        assert_eq!(w.len(), 1 + 4 + 16);
        assert_eq!(w[0], Window { t0: 0.0, t1: 1.0, x0: 0.0, x1: 2.0 });
    }

    #[test]
    fn trend_counts_increases() {
        let t = trend(&[1.0, 0.5, 0.52, 0.1]);
        assert_eq!(t.increases, 1);
        assert!((t.worst_ratio - 1.04).abs() < 1e-12);
        assert!((t.overall - 0.1).abs() < 1e-15);
        assert!((loglog_slope(&[1.0, 10.0, 100.0], &[1.0, 0.1, 0.01]) + 1.0).abs() < 1e-12);
    }
}
