//! Event-driven wave front tracking on the gas | liquid | gas line.
//!
//! Fronts live in an append-only slab threaded by a doubly linked list in
//! spatial order. Only neighbours can collide first, so after every event the
//! collision times of the touched pairs are pushed on a min-heap; stale entries
//! are discarded when popped.

mod interact;
mod types;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::limit::Rigid;
use crate::pressure::{GasLaw, LiquidLaw, State};
use crate::riemann::{self, Family, Wave};
use crate::scalar::{cmp_real, Real};

pub use types::{
    BoundaryTrace, CaseTag, Datum, FrontKind, FrontView, InteractionEvent, Level, LineTrace, Phase, Piecewise, RunConfig,
    RunOutput, Snapshot, WaveRecord,
};

/// Waves whose pressure jump is below this are not tracked.
pub const SIZE_FLOOR: f64 = 1e-12;

/// Adjacent fronts must agree on their shared state to this tolerance.
pub const CONSISTENCY_TOL: f64 = 1e-9;

const NIL: usize = usize::MAX;

/// A travelling discontinuity. Its position is `origin + speed * (t - born)`.
#[derive(Clone, Copy, Debug)]
pub struct Front<T> {
    pub id: usize,
    pub family: Option<Family>,
    pub kind: FrontKind,
    pub phase: Phase,
    pub sigma: T,
    pub speed: T,
    pub origin: T,
    pub born: T,
    pub died: Option<T>,
    pub left: State<T>,
    pub right: State<T>,
}

impl<T: Real> Front<T> {
    #[inline]
    pub fn position(&self, t: T) -> T {
        self.origin + self.speed * (t - self.born)
    }

    pub fn is_wave(&self) -> bool {
        self.kind != FrontKind::Boundary
    }

    fn view(&self, t: T) -> FrontView<T> {
        FrontView {
            id: self.id,
            family: self.family,
            kind: self.kind,
            phase: self.phase,
            sigma: self.sigma,
            speed: self.speed,
            position: self.position(t),
            left: self.left,
            right: self.right,
        }
    }
}

/// What the engine did in one call to [`Engine::step`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// An interaction, indexing [`Engine::events`].
    Interaction(usize),
    /// A front crossed a measurement line, indexing [`Engine::events`].
    Crossing(usize),
    /// An output snapshot was taken, indexing the snapshot list.
    Output(usize),
    /// The droplet velocity was updated (limit model only).
    Tick,
    /// Final time reached.
    Finished,
}

/// Hooks called while a run advances.
pub trait Observer<T: Real> {
    /// The front list is frozen on `[t0, t1]`: fronts only translate.
    fn interval(&mut self, _engine: &Engine<T>, _t0: T, _t1: T) {}

    fn step(&mut self, _engine: &Engine<T>, _step: Step) -> Result<()> {
        Ok(())
    }
}

impl<T: Real> Observer<T> for () {}

#[derive(Clone, Copy, Debug)]
enum Pending {
    Collision(usize, usize),
    Crossing(usize, usize),
    Output(usize),
    Tick(u64),
}

#[derive(Clone, Copy, Debug)]
struct Scheduled<T> {
    time: T,
    z: T,
    seq: u64,
    what: Pending,
}

impl<T: Real> PartialEq for Scheduled<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Scheduled<T> {}

impl<T: Real> PartialOrd for Scheduled<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Scheduled<T> {
    // Earlier first; simultaneous events left to right, then by creation.
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_real(self.time, other.time)
            .then_with(|| cmp_real(self.z, other.z))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

pub(crate) enum Interior<T> {
    Liquid(LiquidLaw<T>),
    Rigid(Rigid<T>),
}

/// Shape of a wave about to be placed in the list.
#[derive(Clone, Copy, Debug)]
struct Proto<T> {
    family: Family,
    kind: FrontKind,
    phase: Phase,
    sigma: T,
    speed: T,
    left: State<T>,
    right: State<T>,
}

pub struct Engine<T: Real> {
    cfg: RunConfig<T>,
    pub(crate) interior: Interior<T>,
    fronts: Vec<Front<T>>,
    prev: Vec<usize>,
    next: Vec<usize>,
    head: usize,
    live: usize,
    max_live: usize,
    b0: usize,
    bm: usize,
    heap: BinaryHeap<Reverse<Scheduled<T>>>,
    seq: u64,
    time: T,
    interactions: usize,
    events: Vec<InteractionEvent<T>>,
    boundaries: [BoundaryTrace<T>; 2],
    lines: Vec<LineTrace<T>>,
    snapshots: Vec<Snapshot<T>>,
    finished: bool,
}

impl<T: Real> Engine<T> {
    /// Engine for the compressible liquid slab.
    pub fn new(cfg: RunConfig<T>, datum: &Datum<T>) -> Result<Self> {
        cfg.validate()?;
        let liquid = cfg.liquid;
        let mut engine = Self::empty(cfg, Interior::Liquid(liquid));
        engine.init_liquid(datum)?;
        engine.prime();
        Ok(engine)
    }

    pub(crate) fn with_rigid(cfg: RunConfig<T>, datum: &Datum<T>, rigid: Rigid<T>) -> Result<Self> {
        cfg.validate()?;
        let mut engine = Self::empty(cfg, Interior::Rigid(rigid));
        engine.init_rigid(datum)?;
        engine.prime();
        let dt = engine.rigid().dt_ode;
        engine.schedule_tick(1, dt);
        Ok(engine)
    }

    fn empty(cfg: RunConfig<T>, interior: Interior<T>) -> Self {
        let lines = cfg
            .measurement_lines
            .iter()
            .map(|&x| LineTrace { x, times: Vec::new(), states: Vec::new(), jumps: Vec::new(), crossed: Vec::new() })
            .collect();
        Self {
            cfg,
            interior,
            fronts: Vec::new(),
            prev: Vec::new(),
            next: Vec::new(),
            head: NIL,
            live: 0,
            max_live: 0,
            b0: NIL,
            bm: NIL,
            heap: BinaryHeap::new(),
            seq: 0,
            time: T::zero(),
            interactions: 0,
            events: Vec::new(),
            boundaries: [BoundaryTrace::default(), BoundaryTrace::default()],
            lines,
            snapshots: Vec::new(),
            finished: false,
        }
    }

    pub fn config(&self) -> &RunConfig<T> {
        &self.cfg
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn interactions(&self) -> usize {
        self.interactions
    }

    pub fn events(&self) -> &[InteractionEvent<T>] {
        &self.events
    }

    pub fn boundary_traces(&self) -> &[BoundaryTrace<T>; 2] {
        &self.boundaries
    }

    pub fn line_traces(&self) -> &[LineTrace<T>] {
        &self.lines
    }

    pub fn gas(&self) -> &GasLaw<T> {
        &self.cfg.gas
    }

    /// The liquid law, or `None` for the rigid droplet.
    pub fn liquid(&self) -> Option<&LiquidLaw<T>> {
        match &self.interior {
            Interior::Liquid(l) => Some(l),
            Interior::Rigid(_) => None,
        }
    }

    pub(crate) fn rigid(&self) -> &Rigid<T> {
        match &self.interior {
            Interior::Rigid(r) => r,
            Interior::Liquid(_) => unreachable!("rigid interior expected"),
        }
    }

    /// Live fronts in spatial order, phase boundaries included.
    pub fn fronts(&self) -> impl Iterator<Item = &Front<T>> + '_ {
        let mut k = self.head;
        std::iter::from_fn(move || {
            if k == NIL {
                return None;
            }
            let f = &self.fronts[k];
            k = self.next[k];
            Some(f)
        })
    }

    pub fn front(&self, id: usize) -> &Front<T> {
        &self.fronts[id]
    }

    /// Number of fronts ever created, including dead ones.
    pub fn fronts_created(&self) -> usize {
        self.fronts.len()
    }

    pub fn live_fronts(&self) -> usize {
        self.live
    }

    /// Piecewise-constant solution at the current time.
    pub fn snapshot(&self) -> Snapshot<T> {
        self.snapshot_at(self.time)
    }

    fn snapshot_at(&self, t: T) -> Snapshot<T> {
        let fronts: Vec<_> = self.fronts().map(|f| f.view(t)).collect();
        let far_left = self.fronts[self.head].left;
        let far_right = fronts.last().map(|f| f.right).unwrap_or(far_left);
        Snapshot { time: t, m: self.cfg.m, fronts, far_left, far_right }
    }

    /// Runs to the final time without observers.
    pub fn run(self) -> Result<RunOutput<T>> {
        self.run_observed(&mut ())
    }

    pub fn run_observed(mut self, obs: &mut dyn Observer<T>) -> Result<RunOutput<T>> {
        let initial = self.snapshot();
        loop {
            let t1 = self.next_time().min(self.cfg.t_final);
            obs.interval(&self, self.time, t1);
            let step = self.step()?;
            obs.step(&self, step)?;
            if step == Step::Finished {
                break;
            }
        }
        Ok(self.into_output(initial))
    }

    fn into_output(self, initial: Snapshot<T>) -> RunOutput<T> {
        let final_snapshot = self.snapshot();
        let droplet = match self.interior {
            Interior::Rigid(r) => Some(r.history),
            Interior::Liquid(_) => None,
        };
        RunOutput {
            initial,
            final_snapshot,
            snapshots: self.snapshots,
            events: self.events,
            boundaries: self.boundaries,
            lines: self.lines,
            interactions: self.interactions,
            max_fronts: self.max_live,
            fronts_created: self.fronts.len(),
            droplet,
        }
    }

    /// Time of the next valid pending event, or `+inf`.
    pub fn next_time(&mut self) -> T {
        while let Some(Reverse(s)) = self.heap.peek().copied() {
            if self.is_valid(&s) {
                return s.time;
            }
            self.heap.pop();
        }
        T::infinity()
    }

    fn is_valid(&self, s: &Scheduled<T>) -> bool {
        match s.what {
            Pending::Collision(a, b) => {
                self.fronts[a].died.is_none() && self.fronts[b].died.is_none() && self.next[a] == b
            }
            Pending::Crossing(f, _) => self.fronts[f].died.is_none(),
            Pending::Output(_) | Pending::Tick(_) => true,
        }
    }

    /// Processes the next event.
    pub fn step(&mut self) -> Result<Step> {
        if self.finished {
            return Ok(Step::Finished);
        }
        loop {
            let Some(Reverse(s)) = self.heap.pop() else {
                return Ok(self.finish());
            };
            if s.time > self.cfg.t_final {
                return Ok(self.finish());
            }
            if !self.is_valid(&s) {
                continue;
            }
            self.time = s.time.max(self.time);
            return match s.what {
                Pending::Collision(a, b) => {
                    self.interactions += 1;
                    if self.interactions > self.cfg.max_interactions {
                        return Err(Error::AccumulationSuspected {
                            cap: self.cfg.max_interactions,
                            time: self.time.to_f64_lossy(),
                        });
                    }
                    self.collide(a, b, s.z)?;
                    Ok(Step::Interaction(self.events.len() - 1))
                }
                Pending::Crossing(f, line) => {
                    self.cross(f, line);
                    Ok(Step::Crossing(self.events.len() - 1))
                }
                Pending::Output(k) => {
                    let _ = k;
                    self.snapshots.push(self.snapshot());
                    Ok(Step::Output(self.snapshots.len() - 1))
                }
                Pending::Tick(k) => {
                    self.tick()?;
                    let dt = self.rigid().dt_ode;
                    self.schedule_tick(k + 1, dt);
                    Ok(Step::Tick)
                }
            };
        }
    }

    fn finish(&mut self) -> Step {
        self.time = self.cfg.t_final;
        if let Interior::Rigid(_) = self.interior {
            let (p0, pm) = self.boundary_pressures();
            let t = self.time;
            if let Interior::Rigid(r) = &mut self.interior {
                r.accrue(t, p0, pm);
            }
        }
        self.finished = true;
        Step::Finished
    }

    // ---- list plumbing ----

    fn alloc(&mut self, f: Front<T>) -> usize {
        let id = self.fronts.len();
        self.fronts.push(Front { id, ..f });
        self.prev.push(NIL);
        self.next.push(NIL);
        id
    }

    fn link_after(&mut self, after: usize, id: usize) {
        let nxt = if after == NIL { self.head } else { self.next[after] };
        self.prev[id] = after;
        self.next[id] = nxt;
        if after == NIL {
            self.head = id;
        } else {
            self.next[after] = id;
        }
        if nxt != NIL {
            self.prev[nxt] = id;
        }
        self.live += 1;
        self.max_live = self.max_live.max(self.live);
    }

    fn unlink(&mut self, id: usize) {
        let (p, n) = (self.prev[id], self.next[id]);
        if p == NIL {
            self.head = n;
        } else {
            self.next[p] = n;
        }
        if n != NIL {
            self.prev[n] = p;
        }
        self.fronts[id].died = Some(self.time);
        self.live -= 1;
    }

    /// Links waves after `after`, born at `(z, t)`. Returns their ids.
    fn place(&mut self, mut after: usize, protos: &[Proto<T>], z: T) -> Vec<usize> {
        let mut ids = Vec::with_capacity(protos.len());
        for p in protos {
            let id = self.alloc(Front {
                id: 0,
                family: Some(p.family),
                kind: p.kind,
                phase: p.phase,
                sigma: p.sigma,
                speed: p.speed,
                origin: z,
                born: self.time,
                died: None,
                left: p.left,
                right: p.right,
            });
            self.link_after(after, id);
            after = id;
            ids.push(id);
        }
        ids
    }

    fn add_boundary(&mut self, after: usize, z: T, left: State<T>, right: State<T>) -> usize {
        let id = self.alloc(Front {
            id: 0,
            family: None,
            kind: FrontKind::Boundary,
            phase: Phase::Liquid,
            sigma: T::zero(),
            speed: T::zero(),
            origin: z,
            born: T::zero(),
            died: None,
            left,
            right,
        });
        self.link_after(after, id);
        id
    }

    fn set_boundary(&mut self, id: usize, left: State<T>, right: State<T>) {
        let f = &mut self.fronts[id];
        f.left = left;
        f.right = right;
        let k = if id == self.b0 { 0 } else { 1 };
        self.boundaries[k].push(self.time, left, right);
    }

    pub(crate) fn boundary_pressures(&self) -> (T, T) {
        (self.fronts[self.b0].left.p, self.fronts[self.bm].right.p)
    }

    // ---- wave construction ----

    /// Fronts for one wave; rarefactions are split into jumps no larger than
    /// `epsilon` when `split` is set.
    fn protos(&self, w: &Wave<T>, phase: Phase, split: bool) -> Result<Vec<Proto<T>>> {
        let sigma = w.size.sigma;
        let family = w.size.family;
        if sigma.abs() < T::lit(SIZE_FLOOR) {
            return Ok(Vec::new());
        }
        let kind = if sigma < T::zero() { FrontKind::Shock } else { FrontKind::Rarefaction };
        if phase == Phase::Liquid || kind == FrontKind::Shock || !split {
            return Ok(vec![Proto {
                family,
                kind,
                phase,
                sigma,
                speed: w.speed.fastest(),
                left: w.left,
                right: w.right,
            }]);
        }
        let gas = &self.cfg.gas;
        let n = (sigma / self.cfg.epsilon).ceil().max(T::one());
        let count = n.to_usize().unwrap_or(1);
        let step = sigma / n;
        let mut out = Vec::with_capacity(count);
        let mut left = w.left;
        for k in 1..=count {
            let right = if k == count {
                w.right
            } else {
                riemann::lax_curve_gas(w.left, family, step * T::lit(k as f64), gas)?
            };
            out.push(Proto {
                family,
                kind,
                phase,
                sigma: right_size(family, left.p, right.p),
                speed: riemann::characteristic_speed(gas, family, right)?,
                left,
                right,
            });
            left = right;
        }
        Ok(out)
    }

    // ---- initialisation ----

    fn init_liquid(&mut self, datum: &Datum<T>) -> Result<()> {
        datum.validate(self.cfg.m)?;
        let gas = self.cfg.gas;
        let liq = self.cfg.liquid;
        let gl = datum.gas_left.states_with(&gas)?;
        let ll = datum.liquid.states_with_liquid(&liq);
        let gr = datum.gas_right.states_with(&gas)?;

        let mut last = self.init_gas_jumps(NIL, &datum.gas_left.jumps, &gl, Phase::GasLeft)?;

        let s0 = riemann::solve_interface_left(*gl.last().unwrap(), ll[0], &gas, &liq)?;
        last = self.init_emit(last, s0.left_wave, Phase::GasLeft, T::zero())?;
        self.b0 = self.add_boundary(last, T::zero(), s0.middle_left, s0.middle_right);
        last = self.init_emit(self.b0, s0.right_wave, Phase::Liquid, T::zero())?;

        for (k, &z) in datum.liquid.jumps.iter().enumerate() {
            let s = riemann::solve_riemann_liquid(ll[k], ll[k + 1], &liq);
            last = self.init_emit(last, s.left_wave, Phase::Liquid, z)?;
            last = self.init_emit(last, s.right_wave, Phase::Liquid, z)?;
        }

        let m = self.cfg.m;
        let sm = riemann::solve_interface_right(*ll.last().unwrap(), gr[0], &gas, &liq)?;
        last = self.init_emit(last, sm.left_wave, Phase::Liquid, m)?;
        self.bm = self.add_boundary(last, m, sm.middle_left, sm.middle_right);
        last = self.init_emit(self.bm, sm.right_wave, Phase::GasRight, m)?;

        self.init_gas_jumps(last, &datum.gas_right.jumps, &gr, Phase::GasRight)?;
        self.record_initial_boundaries();
        Ok(())
    }

    fn init_rigid(&mut self, datum: &Datum<T>) -> Result<()> {
        datum.validate(self.cfg.m)?;
        let gas = self.cfg.gas;
        let gl = datum.gas_left.states_with(&gas)?;
        let gr = datum.gas_right.states_with(&gas)?;
        let droplet = self.rigid().droplet_state();
        let v_l = droplet.v;

        let mut last = self.init_gas_jumps(NIL, &datum.gas_left.jumps, &gl, Phase::GasLeft)?;
        let (w0, mid0) = riemann::solve_piston_left(*gl.last().unwrap(), v_l, &gas)?;
        last = self.init_emit(last, w0, Phase::GasLeft, T::zero())?;
        self.b0 = self.add_boundary(last, T::zero(), mid0, droplet);
        let m = self.cfg.m;
        let (wm, midm) = riemann::solve_piston_right(v_l, gr[0], &gas)?;
        self.bm = self.add_boundary(self.b0, m, droplet, midm);
        last = self.init_emit(self.bm, wm, Phase::GasRight, m)?;
        self.init_gas_jumps(last, &datum.gas_right.jumps, &gr, Phase::GasRight)?;
        self.record_initial_boundaries();
        Ok(())
    }

    fn record_initial_boundaries(&mut self) {
        for (k, id) in [self.b0, self.bm].into_iter().enumerate() {
            let f = self.fronts[id];
            self.boundaries[k].push(T::zero(), f.left, f.right);
        }
    }

    fn init_gas_jumps(&mut self, mut last: usize, jumps: &[T], states: &[State<T>], phase: Phase) -> Result<usize> {
        let gas = self.cfg.gas;
        for (k, &z) in jumps.iter().enumerate() {
            let s = riemann::solve_riemann_gas(states[k], states[k + 1], &gas)?;
            last = self.init_emit(last, s.left_wave, phase, z)?;
            last = self.init_emit(last, s.right_wave, phase, z)?;
        }
        Ok(last)
    }

    fn init_emit(&mut self, after: usize, w: Option<Wave<T>>, phase: Phase, z: T) -> Result<usize> {
        let Some(w) = w else { return Ok(after) };
        let protos = self.protos(&w, phase, true)?;
        Ok(self.place(after, &protos, z).last().copied().unwrap_or(after))
    }

    /// Schedules everything known at `t = 0`.
    fn prime(&mut self) {
        let ids: Vec<usize> = self.fronts().map(|f| f.id).collect();
        for w in ids.windows(2) {
            self.schedule_collision(w[0], w[1]);
        }
        let snap = self.snapshot();
        for k in 0..self.lines.len() {
            let x = self.lines[k].x;
            let u = snap.sample(x);
            self.lines[k].times.push(T::zero());
            self.lines[k].states.push(u);
        }
        for id in ids {
            self.schedule_crossings(id);
        }
        for k in 0..self.cfg.output_times.len() {
            let t = self.cfg.output_times[k];
            self.push(t, T::infinity(), Pending::Output(k));
        }
    }

    // ---- scheduling ----

    fn push(&mut self, time: T, z: T, what: Pending) {
        self.seq += 1;
        self.heap.push(Reverse(Scheduled { time, z, seq: self.seq, what }));
    }

    fn schedule_tick(&mut self, k: u64, dt: T) {
        let t = dt * T::lit(k as f64);
        if t <= self.cfg.t_final {
            self.push(t, T::neg_infinity(), Pending::Tick(k));
        }
    }

    fn schedule_collision(&mut self, a: usize, b: usize) {
        if a == NIL || b == NIL {
            return;
        }
        let (fa, fb) = (&self.fronts[a], &self.fronts[b]);
        if !(fa.speed > fb.speed) {
            return;
        }
        let tr = fa.born.max(fb.born);
        let gap = (fb.position(tr) - fa.position(tr)).max(T::zero());
        let t = (tr + gap / (fa.speed - fb.speed)).max(self.time);
        if t > self.cfg.t_final {
            return;
        }
        let z = if !fa.is_wave() {
            fa.origin
        } else if !fb.is_wave() {
            fb.origin
        } else {
            fa.position(t)
        };
        self.push(t, z, Pending::Collision(a, b));
    }

    fn schedule_crossings(&mut self, id: usize) {
        let f = self.fronts[id];
        if !f.is_wave() || f.phase == Phase::Liquid {
            return;
        }
        for k in 0..self.lines.len() {
            let x = self.lines[k].x;
            let dt = (x - f.origin) / f.speed;
            if dt > T::zero() && f.born + dt <= self.cfg.t_final {
                self.push(f.born + dt, x, Pending::Crossing(id, k));
            }
        }
    }

    /// Reschedules the pairs from `lo` to `hi` inclusive, walking the list.
    fn reschedule(&mut self, lo: usize, hi: usize, created: &[usize]) {
        let mut a = if lo == NIL { self.head } else { lo };
        while a != NIL && a != hi {
            let b = self.next[a];
            self.schedule_collision(a, b);
            a = b;
        }
        for &id in created {
            self.schedule_crossings(id);
        }
    }

    fn check_adjacent(&self, lo: usize, hi: usize) -> Result<()> {
        let mut a = if lo == NIL { self.head } else { lo };
        while a != NIL && a != hi {
            let b = self.next[a];
            if b == NIL {
                break;
            }
            let (u, w) = (self.fronts[a].right, self.fronts[b].left);
            let tol = T::resolvable(CONSISTENCY_TOL, u.p);
            if (u.p - w.p).abs() > tol || (u.v - w.v).abs() > tol {
                return Err(Error::PropertyViolation(format!(
                    "fronts {a} and {b} disagree at t = {}: p {} vs {}, v {} vs {}",
                    self.time, u.p, w.p, u.v, w.v
                )));
            }
            a = b;
        }
        Ok(())
    }

    fn cross(&mut self, id: usize, line: usize) {
        let f = self.fronts[id];
        let x = self.lines[line].x;
        let after = if f.speed > T::zero() { f.left } else { f.right };
        let jump = (f.right.p - f.left.p).abs();
        let lt = &mut self.lines[line];
        lt.times.push(self.time);
        lt.states.push(after);
        lt.jumps.push(jump);
        lt.crossed.push(id);
        let rec = WaveRecord::of(&f);
        self.events.push(InteractionEvent {
            time: self.time,
            position: x,
            case: CaseTag::Transmission,
            incoming: vec![rec],
            outgoing: vec![rec],
        });
    }
}

/// Signed size of the wave of `family` joining pressures `pl` to `pr`.
#[inline]
pub(crate) fn right_size<T: Real>(family: Family, pl: T, pr: T) -> T {
    match family {
        Family::One => pl - pr,
        Family::Two => pr - pl,
    }
}
