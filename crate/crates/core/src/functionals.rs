//! Glimm-type functionals, trace functionals and total-variation measures.
//!
//! `Υ = V_g⁻ + H Q_g⁻ + V_l + V_g⁺ + H Q_g⁺`, where the `V` terms are weighted
//! sums of `|σ|` and the `Q` terms sum `|σ_α σ_β|` over approaching pairs
//! inside one gas phase. A pair is approaching when it has a 2-wave to the
//! left of a 1-wave, or two waves of one family with at least one shock.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    CaseTag, Engine, Front, FrontKind, FrontView, InteractionEvent, LineTrace, Observer, Phase, Snapshot, Step,
};
use crate::error::{Error, Result};
use crate::pressure::{GasLaw, LiquidLaw, PressureLaw, State};
use crate::riemann::{self, Family};
use crate::scalar::Real;

/// Tolerance of the decrease checks.
pub const DECREASE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlimmWeights<T> {
    pub k1_gm: T,
    pub k2_gm: T,
    pub k1_gp: T,
    pub k2_gp: T,
    pub k_l: T,
    pub h: T,
    pub c: T,
}

impl<T: Real> GlimmWeights<T> {
    /// `K₁⁻ = K₂⁺ = 1`, `K_l = 2`, `K₁⁺ = K₂⁻ = 4C`, `H = 4(1+2C)C`.
    pub fn from_c(c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Config(format!("interaction constant must be positive, got {c}")));
        }
        let four = T::lit(4.0);
        Ok(Self {
            k1_gm: T::one(),
            k2_gm: four * c,
            k1_gp: four * c,
            k2_gp: T::one(),
            k_l: T::lit(2.0),
            h: four * (T::one() + T::lit(2.0) * c) * c,
            c,
        })
    }

    /// Smallness threshold `δ = min(1/(2C), 1/(2H))` on the gas variation.
    pub fn delta(&self) -> T {
        let two = T::lit(2.0);
        (T::one() / (two * self.c)).min(T::one() / (two * self.h))
    }

    fn linear(&self, phase: Phase, family: Family) -> T {
        match (phase, family) {
            (Phase::GasLeft, Family::One) => self.k1_gm,
            (Phase::GasLeft, Family::Two) => self.k2_gm,
            (Phase::GasRight, Family::One) => self.k1_gp,
            (Phase::GasRight, Family::Two) => self.k2_gp,
            (Phase::Liquid, _) => self.k_l,
        }
    }
}

/// The parts of `Υ` at one time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSnapshot<T> {
    pub time: T,
    pub v_gm: T,
    pub q_gm: T,
    pub v_l: T,
    pub v_gp: T,
    pub q_gp: T,
    pub upsilon: T,
}

/// What `Υ` needs to know about a wave.
#[derive(Clone, Copy, Debug)]
pub struct WaveRef<T> {
    pub phase: Phase,
    pub family: Family,
    pub shock: bool,
    pub sigma: T,
}

impl<T: Real> WaveRef<T> {
    fn of(phase: Phase, family: Option<Family>, kind: FrontKind, sigma: T) -> Option<Self> {
        Some(Self { phase, family: family?, shock: kind == FrontKind::Shock, sigma })
    }

    pub fn from_view(f: &FrontView<T>) -> Option<Self> {
        Self::of(f.phase, f.family, f.kind, f.sigma)
    }

    pub fn from_front(f: &Front<T>) -> Option<Self> {
        Self::of(f.phase, f.family, f.kind, f.sigma)
    }
}

/// Running sums for the quadratic term of one gas phase.
#[derive(Default)]
struct PairSums<T> {
    all: [T; 2],
    shocks: [T; 2],
    q: T,
}

impl<T: Real> PairSums<T> {
    // Waves arrive left to right; each is paired with everything seen so far.
    fn push(&mut self, w: &WaveRef<T>) {
        let s = w.sigma.abs();
        let k = w.family.index() - 1;
        let same = if w.shock { self.all[k] } else { self.shocks[k] };
        let crossing = if w.family == Family::One { self.all[1] } else { T::zero() };
        self.q = self.q + s * (same + crossing);
        self.all[k] = self.all[k] + s;
        if w.shock {
            self.shocks[k] = self.shocks[k] + s;
        }
    }
}

/// `Υ` of waves given in spatial order.
pub fn upsilon_of<T: Real, I>(time: T, waves: I, w: &GlimmWeights<T>) -> FunctionalSnapshot<T>
where
    I: IntoIterator<Item = WaveRef<T>>,
{
    let mut out = FunctionalSnapshot { time, ..Default::default() };
    let (mut left, mut right) = (PairSums::default(), PairSums::default());
    for wave in waves {
        let weighted = w.linear(wave.phase, wave.family) * wave.sigma.abs();
        match wave.phase {
            Phase::GasLeft => {
                out.v_gm = out.v_gm + weighted;
                left.push(&wave);
            }
            Phase::Liquid => out.v_l = out.v_l + weighted,
            Phase::GasRight => {
                out.v_gp = out.v_gp + weighted;
                right.push(&wave);
            }
        }
    }
    out.q_gm = left.q;
    out.q_gp = right.q;
    out.upsilon = out.v_gm + w.h * out.q_gm + out.v_l + out.v_gp + w.h * out.q_gp;
    out
}

pub fn upsilon<T: Real>(s: &Snapshot<T>, w: &GlimmWeights<T>) -> FunctionalSnapshot<T> {
    upsilon_of(s.time, s.fronts.iter().filter_map(WaveRef::from_view), w)
}

pub fn upsilon_engine<T: Real>(e: &Engine<T>, w: &GlimmWeights<T>) -> FunctionalSnapshot<T> {
    upsilon_of(e.time(), e.fronts().filter_map(WaveRef::from_front), w)
}

/// Outcome of one decrease check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict<T> {
    pub time: T,
    pub case: CaseTag,
    pub delta_upsilon: T,
    /// Largest admissible `ΔΥ` for this case.
    pub bound: T,
    /// `bound - ΔΥ`, or `-|ΔΥ|` for liquid crossings.
    pub margin: T,
    pub ok: bool,
}

/// Checks `ΔΥ` across one interaction against its case bound.
pub fn check_decrease<T: Real>(
    event: &InteractionEvent<T>,
    before: &FunctionalSnapshot<T>,
    after: &FunctionalSnapshot<T>,
    w: &GlimmWeights<T>,
) -> Verdict<T> {
    let d = after.upsilon - before.upsilon;
    let tol = T::lit(DECREASE_TOL);
    let half = T::lit(0.5);
    let incoming = |fam: Family| {
        event.incoming.iter().find(|r| r.family == Some(fam)).map_or(T::zero(), |r| r.sigma.abs())
    };
    let gas_out = || event.outgoing.iter().filter(|r| r.phase.is_gas()).map(|r| r.sigma.abs()).fold(T::zero(), |a, b| a + b);
    let from_liquid = event.incoming.first().is_some_and(|r| r.phase == Phase::Liquid);
    let product = || match event.incoming.as_slice() {
        [a, b] => (a.sigma * b.sigma).abs(),
        _ => T::zero(),
    };
    let bound = match event.case {
        CaseTag::LiquidInterior | CaseTag::Transmission => T::zero(),
        CaseTag::InterfaceLeft if from_liquid => -half * gas_out(),
        CaseTag::InterfaceRight if from_liquid => -half * gas_out(),
        CaseTag::InterfaceLeft => -half * w.c * incoming(Family::Two),
        CaseTag::InterfaceRight => -half * w.c * incoming(Family::One),
        CaseTag::GasSameFamily | CaseTag::GasDifferentFamily => -w.c * product(),
    };
    let (margin, ok) = match event.case {
        CaseTag::LiquidInterior | CaseTag::Transmission => (-d.abs(), d.abs() <= tol),
        _ => (bound - d, bound - d >= -tol),
    };
    Verdict { time: event.time, case: event.case, delta_upsilon: d, bound, margin, ok }
}

/// `Ξ_x` at the engine's current time.
///
/// For `x > m` it adds the trace variation of the gas pressure along `z = x`,
/// `|σ₂|` over `]m, x[`, `|σ₁|` over `]x, ∞[` and `4Υ`; for `x < 0` the mirror
/// image with `|σ₁|` over `]x, 0[` and `|σ₂|` over `]-∞, x[`.
pub fn xi<T: Real>(s: &Snapshot<T>, line: &LineTrace<T>, w: &GlimmWeights<T>) -> Result<T> {
    let x = line.x;
    let side = line_side(x, s.m)?;
    // Entry 0 of `times` is the initial state, crossings start at 1.
    let n = line.times.iter().skip(1).take_while(|&&t| t <= s.time).count();
    let trace_tv = line.jumps[..n].iter().fold(T::zero(), |acc, j| acc + j.abs());
    // A front sitting exactly on the line has crossed it, whatever rounding
    // says about its position.
    let crossed: std::collections::HashSet<usize> = line.crossed[..n].iter().copied().collect();
    let mut positional = T::zero();
    for f in s.waves().filter(|f| f.phase == side && !crossed.contains(&f.id)) {
        let counts = match (side, f.family) {
            (Phase::GasRight, Some(Family::Two)) => f.position < x,
            (Phase::GasRight, Some(Family::One)) => f.position > x,
            (Phase::GasLeft, Some(Family::One)) => f.position > x,
            (Phase::GasLeft, Some(Family::Two)) => f.position < x,
            _ => false,
        };
        if counts {
            positional = positional + f.sigma.abs();
        }
    }
    Ok(trace_tv + positional + T::lit(4.0) * upsilon(s, w).upsilon)
}

fn line_side<T: Real>(x: T, m: T) -> Result<Phase> {
    if x < T::zero() {
        Ok(Phase::GasLeft)
    } else if x > m {
        Ok(Phase::GasRight)
    } else {
        Err(Error::Domain(format!("measurement line {x} is not inside a gas phase")))
    }
}

/// Total variations of the piecewise-constant solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TvMeasures<T> {
    pub p_g: T,
    pub p_l: T,
    pub tau_l: T,
    pub v_l: T,
    /// `TV(τ_g) + TV(v_g)` over both gas phases.
    pub u_g: T,
}

pub fn tv_measures<T: Real>(s: &Snapshot<T>) -> TvMeasures<T> {
    let mut tv = TvMeasures::default();
    for f in s.waves() {
        let (dp, dtau, dv) = jumps(&f.left, &f.right);
        if f.phase == Phase::Liquid {
            tv.p_l = tv.p_l + dp;
            tv.tau_l = tv.tau_l + dtau;
            tv.v_l = tv.v_l + dv;
        } else {
            tv.p_g = tv.p_g + dp;
            tv.u_g = tv.u_g + dtau + dv;
        }
    }
    tv
}

fn jumps<T: Real>(a: &State<T>, b: &State<T>) -> (T, T, T) {
    ((b.p - a.p).abs(), (b.tau - a.tau).abs(), (b.v - a.v).abs())
}

/// Total `|σ|` in each gas phase, to compare with [`GlimmWeights::delta`].
pub fn gas_variation<T: Real>(s: &Snapshot<T>) -> (T, T) {
    s.waves().fold((T::zero(), T::zero()), |(l, r), f| match f.phase {
        Phase::GasLeft => (l + f.sigma.abs(), r),
        Phase::GasRight => (l, r + f.sigma.abs()),
        Phase::Liquid => (l, r),
    })
}

/// Sampling domain for [`calibrate_c`].
#[derive(Clone, Debug)]
pub struct Calibration<T> {
    pub p_range: (T, T),
    pub v_range: (T, T),
    /// Largest `|σ|` of a sampled incoming wave.
    pub max_size: T,
    /// Liquid laws used for the interface estimates.
    pub liquids: Vec<LiquidLaw<T>>,
    pub samples: usize,
    pub safety: T,
    pub seed: u64,
}

impl<T: Real> Calibration<T> {
    pub fn new(liquid: LiquidLaw<T>, etas: &[T]) -> Self {
        Self {
            p_range: (T::lit(0.5), T::lit(2.0)),
            v_range: (T::lit(-0.3), T::lit(0.3)),
            max_size: T::lit(0.05),
            liquids: etas.iter().map(|&e| liquid.with_eta(e)).collect(),
            samples: 2000,
            safety: T::lit(1.5),
            seed: 0,
        }
    }
}

/// Measures the interaction constant: the largest ratio observed in the gas
/// interaction estimates and the gas-to-interface estimates, times a safety
/// factor.
pub fn calibrate_c<T: Real>(gas: &GasLaw<T>, cal: &Calibration<T>) -> Result<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(cal.seed);
    let mut uniform = |lo: T, hi: T| lo + (hi - lo) * T::lit(rng.gen::<f64>());
    let mut worst = T::zero();
    let mut taken = 0;
    let mut attempts = 0;
    while taken < cal.samples && attempts < 20 * cal.samples {
        attempts += 1;
        let u = gas.state_at_pressure(uniform(cal.p_range.0, cal.p_range.1), uniform(cal.v_range.0, cal.v_range.1))?;
        let a = uniform(-cal.max_size, cal.max_size);
        let b = uniform(-cal.max_size, cal.max_size);
        let kind = (uniform(T::zero(), T::lit(4.0)).to_f64_lossy() as usize).min(3);
        let ratio = match kind {
            0 => different_families(gas, u, a, b),
            1 => same_family(gas, u, Family::One, a, b),
            2 => same_family(gas, u, Family::Two, a, b),
            _ => {
                let liq = &cal.liquids[taken % cal.liquids.len().max(1)];
                gas_into_interface(gas, liq, u, a)
            }
        };
        // Samples leaving the admissible region are skipped.
        if let Ok(Some(r)) = ratio {
            worst = worst.max(r);
            taken += 1;
        }
    }
    if taken == 0 {
        return Err(Error::Config("calibration produced no admissible interactions".into()));
    }
    Ok(worst * cal.safety)
}

fn different_families<T: Real>(gas: &GasLaw<T>, ul: State<T>, s2: T, s1: T) -> Result<Option<T>> {
    let um = riemann::lax_curve_gas(ul, Family::Two, s2, gas)?;
    let ur = riemann::lax_curve_gas(um, Family::One, s1, gas)?;
    let (o1, o2) = outgoing(gas, ul, ur)?;
    let denom = (s1 * s2).abs();
    Ok((denom > T::zero()).then(|| ((o1 - s1).abs() + (o2 - s2).abs()) / denom))
}

fn same_family<T: Real>(gas: &GasLaw<T>, ul: State<T>, fam: Family, a: T, b: T) -> Result<Option<T>> {
    if a > T::zero() && b > T::zero() {
        return Ok(None);
    }
    let um = riemann::lax_curve_gas(ul, fam, a, gas)?;
    let ur = riemann::lax_curve_gas(um, fam, b, gas)?;
    let (o1, o2) = outgoing(gas, ul, ur)?;
    let (same, other) = if fam == Family::One { (o1, o2) } else { (o2, o1) };
    let denom = (a * b).abs();
    Ok((denom > T::zero()).then(|| ((same - (a + b)).abs() + other.abs()) / denom))
}

fn gas_into_interface<T: Real>(gas: &GasLaw<T>, liq: &LiquidLaw<T>, u: State<T>, s: T) -> Result<Option<T>> {
    // A 2-wave reaching z = 0 from a gas state matched to the liquid.
    let ug_minus = riemann::lax_curve_gas(u, Family::Two, -s, gas).ok();
    let Some(ug_minus) = ug_minus else { return Ok(None) };
    let ul = liq.state_at(u.p, u.v);
    let sol = riemann::solve_interface_left(ug_minus, ul, gas, liq)?;
    let size = |w: Option<riemann::Wave<T>>| w.map_or(T::zero(), |w| w.size.sigma.abs());
    let denom = s.abs();
    Ok((denom > T::zero()).then(|| size(sol.left_wave).max(size(sol.right_wave)) / denom))
}

fn outgoing<T: Real>(gas: &GasLaw<T>, ul: State<T>, ur: State<T>) -> Result<(T, T)> {
    let sol = riemann::solve_riemann_gas(ul, ur, gas)?;
    let size = |w: Option<riemann::Wave<T>>| w.map_or(T::zero(), |w| w.size.sigma);
    Ok((size(sol.left_wave), size(sol.right_wave)))
}

/// One row of the functional time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRow<T> {
    pub parts: FunctionalSnapshot<T>,
    pub tv: TvMeasures<T>,
    pub xi: Vec<T>,
}

/// Observer that evaluates `Υ`, `Ξ` and the TV measures after every event
/// and checks each interaction against its decrease bound.
pub struct FunctionalMonitor<T: Real> {
    pub weights: GlimmWeights<T>,
    /// Abort the run at the first failed check.
    pub fail_fast: bool,
    pub rows: Vec<FunctionalRow<T>>,
    pub verdicts: Vec<Verdict<T>>,
    /// Failed checks with the index of their event in the run's log.
    pub violations: Vec<(usize, Verdict<T>)>,
    /// Largest increase of any `Ξ_x` between consecutive rows.
    pub xi_increase: T,
    /// Rows whose gas variation exceeded `δ`.
    pub outside_small_regime: usize,
    last: Option<FunctionalSnapshot<T>>,
}

impl<T: Real> FunctionalMonitor<T> {
    pub fn new(weights: GlimmWeights<T>) -> Self {
        Self {
            weights,
            fail_fast: false,
            rows: Vec::new(),
            verdicts: Vec::new(),
            violations: Vec::new(),
            xi_increase: T::zero(),
            outside_small_regime: 0,
            last: None,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict<T>> + '_ {
        self.verdicts.iter().filter(|v| !v.ok)
    }

    pub fn upsilon_initial(&self) -> T {
        self.rows.first().map_or(T::zero(), |r| r.parts.upsilon)
    }

    fn record(&mut self, e: &Engine<T>) -> Result<FunctionalSnapshot<T>> {
        let snap = e.snapshot();
        let parts = upsilon(&snap, &self.weights);
        let xi = e.line_traces().iter().map(|l| xi(&snap, l, &self.weights)).collect::<Result<Vec<_>>>()?;
        if let Some(prev) = self.rows.last() {
            for (a, b) in prev.xi.iter().zip(&xi) {
                self.xi_increase = self.xi_increase.max(*b - *a);
            }
        }
        let (l, r) = gas_variation(&snap);
        if l.max(r) > self.weights.delta() {
            self.outside_small_regime += 1;
        }
        self.rows.push(FunctionalRow { parts, tv: tv_measures(&snap), xi });
        Ok(parts)
    }
}

impl<T: Real> Observer<T> for FunctionalMonitor<T> {
    fn step(&mut self, e: &Engine<T>, step: Step) -> Result<()> {
        let before = match self.last {
            Some(b) => b,
            None => return Err(Error::Config("functional monitor must be primed with the initial engine".into())),
        };
        match step {
            Step::Interaction(k) | Step::Crossing(k) => {
                let after = self.record(e)?;
                let v = check_decrease(&e.events()[k], &before, &after, &self.weights);
                let failed = !v.ok;
                if failed {
                    self.violations.push((k, v.clone()));
                }
                self.verdicts.push(v);
                self.last = Some(after);
                if failed && self.fail_fast {
                    return Err(Error::PropertyViolation(format!(
                        "functional increase at {} event: {:?}",
                        e.events()[k].case.name(),
                        e.events()[k]
                    )));
                }
            }
            Step::Output(_) | Step::Finished => {
                self.last = Some(self.record(e)?);
            }
            Step::Tick => {}
        }
        Ok(())
    }
}

impl<T: Real> FunctionalMonitor<T> {
    /// Records the initial state. Call before running the engine.
    pub fn prime(&mut self, e: &Engine<T>) -> Result<()> {
        self.last = Some(self.record(e)?);
        Ok(())
    }
}

/// Runs the engine under a [`FunctionalMonitor`].
pub fn run_monitored<T: Real>(
    engine: Engine<T>,
    weights: GlimmWeights<T>,
    fail_fast: bool,
) -> Result<(crate::engine::RunOutput<T>, FunctionalMonitor<T>)> {
    let mut mon = FunctionalMonitor::new(weights);
    mon.fail_fast = fail_fast;
    mon.prime(&engine)?;
    let out = engine.run_observed(&mut mon)?;
    Ok((out, mon))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(phase: Phase, family: Family, kind: FrontKind, sigma: f64, z: f64) -> FrontView<f64> {
        let u = State { tau: 1.0, v: 0.0, p: 1.0 };
        FrontView { id: 0, family: Some(family), kind, phase, sigma, speed: 0.0, position: z, left: u, right: u }
    }

    fn snap(fronts: Vec<FrontView<f64>>) -> Snapshot<f64> {
        let u = State { tau: 1.0, v: 0.0, p: 1.0 };
        Snapshot { time: 0.0, m: 1.0, fronts, far_left: u, far_right: u }
    }

    #[test]
    fn weights_follow_their_formulas() {
        let w = GlimmWeights::from_c(1.0).unwrap();
        assert_eq!((w.k1_gm, w.k2_gm, w.k1_gp, w.k2_gp, w.k_l, w.h), (1.0, 4.0, 4.0, 1.0, 2.0, 12.0));
        assert_eq!(w.delta(), 1.0 / 24.0);
        assert!(GlimmWeights::from_c(0.0).is_err());
    }

    #[test]
    fn empty_snapshot_has_zero_functional() {
        let f = upsilon(&snap(vec![]), &GlimmWeights::from_c(1.0).unwrap());
        assert_eq!(f.upsilon, 0.0);
    }

    #[test]
    fn two_left_gas_shocks() {
        let s = snap(vec![
            view(Phase::GasLeft, Family::Two, FrontKind::Shock, -0.2, -3.0),
            view(Phase::GasLeft, Family::One, FrontKind::Shock, -0.1, -1.0),
        ]);
        let f = upsilon(&s, &GlimmWeights::from_c(1.0).unwrap());
        assert!((f.v_gm - 0.9).abs() < 1e-15);
        assert!((f.q_gm - 0.02).abs() < 1e-15);
        assert!((f.upsilon - 1.14).abs() < 1e-14);
    }

    #[test]
    fn single_liquid_wave() {
        let s = snap(vec![view(Phase::Liquid, Family::One, FrontKind::Rarefaction, 0.3, 0.5)]);
        let f = upsilon(&s, &GlimmWeights::from_c(1.0).unwrap());
        assert!((f.v_l - 0.6).abs() < 1e-15 && (f.upsilon - 0.6).abs() < 1e-15);
    }

    #[test]
    fn receding_pairs_do_not_count() {
        let w = GlimmWeights::from_c(1.0).unwrap();
        // 1-wave left of a 2-wave, and two rarefactions of one family.
        let s = snap(vec![
            view(Phase::GasRight, Family::One, FrontKind::Shock, -0.1, 2.0),
            view(Phase::GasRight, Family::Two, FrontKind::Rarefaction, 0.1, 3.0),
            view(Phase::GasRight, Family::Two, FrontKind::Rarefaction, 0.1, 4.0),
        ]);
        assert_eq!(upsilon(&s, &w).q_gp, 0.0);
        // pairs across different phases never count
        let s = snap(vec![
            view(Phase::GasLeft, Family::Two, FrontKind::Shock, -0.1, -1.0),
            view(Phase::GasRight, Family::One, FrontKind::Shock, -0.1, 2.0),
        ]);
        assert_eq!(upsilon(&s, &w).q_gm + upsilon(&s, &w).q_gp, 0.0);
    }

    #[test]
    fn quadratic_term_matches_pairwise_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let w = GlimmWeights::from_c(2.0).unwrap();
        for _ in 0..50 {
            let n = rng.gen_range(0..12);
            let fronts: Vec<_> = (0..n)
                .map(|k| {
                    let fam = if rng.gen_bool(0.5) { Family::One } else { Family::Two };
                    let kind = if rng.gen_bool(0.5) { FrontKind::Shock } else { FrontKind::Rarefaction };
                    let s = rng.gen_range(0.01..0.1);
                    view(Phase::GasLeft, fam, kind, if kind == FrontKind::Shock { -s } else { s }, -10.0 + k as f64)
                })
                .collect();
            let mut q = 0.0;
            for i in 0..fronts.len() {
                for j in i + 1..fronts.len() {
                    let (a, b) = (&fronts[i], &fronts[j]);
                    let approaching = match (a.family, b.family) {
                        (Some(Family::Two), Some(Family::One)) => true,
                        (x, y) if x == y => a.kind == FrontKind::Shock || b.kind == FrontKind::Shock,
                        _ => false,
                    };
                    if approaching {
                        q += (a.sigma * b.sigma).abs();
                    }
                }
            }
            let f = upsilon(&snap(fronts), &w);
            assert!((f.q_gm - q).abs() < 1e-14);
        }
    }

    #[test]
    fn tv_of_one_liquid_wave() {
        let liq = LiquidLaw::new(1.0, 1.0, 10.0).unwrap();
        let a = liq.state_at(1.0, 0.0);
        let b = riemann::lax_curve_liquid(a, Family::Two, 0.3, &liq);
        let mut f = view(Phase::Liquid, Family::Two, FrontKind::Rarefaction, 0.3, 0.5);
        f.left = a;
        f.right = b;
        let tv = tv_measures(&snap(vec![f]));
        assert!((tv.p_l - 0.3).abs() < 1e-15);
        assert!((tv.v_l - 0.03).abs() < 1e-15);
        assert!((tv.tau_l - 0.003).abs() < 1e-15);
    }

    #[test]
    fn xi_counts_waves_on_the_incoming_side() {
        let w = GlimmWeights::from_c(1.0).unwrap();
        let s = snap(vec![view(Phase::GasRight, Family::Two, FrontKind::Shock, -0.1, 1.5)]);
        let line = LineTrace { x: 2.0, times: vec![0.0], states: vec![s.far_right], jumps: vec![], crossed: vec![] };
        let u = upsilon(&s, &w).upsilon;
        assert!((xi(&s, &line, &w).unwrap() - (0.1 + 4.0 * u)).abs() < 1e-15);
        let inside = LineTrace { x: 0.5, ..line };
        assert!(matches!(xi(&s, &inside, &w), Err(Error::Domain(_))));
    }

    #[test]
    fn calibration_is_reproducible_and_sensible() {
        let gas = GasLaw::default();
        let liq = LiquidLaw::new(1.0, 1.0, 10.0).unwrap();
        let mut cal = Calibration::new(liq, &[10.0, 1000.0]);
        cal.samples = 400;
        let a = calibrate_c(&gas, &cal).unwrap();
        let b = calibrate_c(&gas, &cal).unwrap();
        assert_eq!(a, b);
        // reflection off a stiff slab roughly doubles the pressure jump
        assert!(a > 1.5 * 1.9 && a < 10.0, "C = {a}");
    }
}
