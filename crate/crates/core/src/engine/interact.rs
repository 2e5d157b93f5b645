//! Resolution of a single interaction.

use super::{CaseTag, Engine, FrontKind, InteractionEvent, Interior, Phase, Proto, WaveRecord};
use crate::error::Result;
use crate::riemann::{self, RiemannSolution};
use crate::scalar::Real;

impl<T: Real> Engine<T> {
    pub(super) fn collide(&mut self, a: usize, b: usize, z: T) -> Result<()> {
        let (fa, fb) = (self.fronts[a], self.fronts[b]);
        if fa.kind == FrontKind::Boundary {
            return self.hit_boundary(a, b, z);
        }
        if fb.kind == FrontKind::Boundary {
            return self.hit_boundary(b, a, z);
        }
        let (lo, hi) = (self.prev[a], self.next[b]);
        let (sol, case) = if fa.phase == Phase::Liquid {
            let liq = *self.liquid().expect("liquid fronts only exist with a liquid interior");
            (riemann::solve_riemann_liquid(fa.left, fb.right, &liq), CaseTag::LiquidInterior)
        } else {
            let case = if fa.family == fb.family { CaseTag::GasSameFamily } else { CaseTag::GasDifferentFamily };
            (riemann::solve_riemann_gas(fa.left, fb.right, &self.cfg.gas)?, case)
        };
        self.unlink(a);
        self.unlink(b);
        let protos = self.solution_protos(&sol, fa.phase, fa.phase)?;
        let ids = self.place(lo, &protos, z);
        self.finish_event(lo, hi, z, case, &[a, b], ids)
    }

    fn hit_boundary(&mut self, bnd: usize, wave: usize, z: T) -> Result<()> {
        if let Interior::Rigid(_) = self.interior {
            return self.hit_wall(bnd, wave, z);
        }
        let liq = *self.liquid().expect("liquid interior");
        let gas = self.cfg.gas;
        let (fb, fw) = (self.fronts[bnd], self.fronts[wave]);
        let wave_first = self.next[wave] == bnd;
        let lo = self.prev[if wave_first { wave } else { bnd }];
        let hi = self.next[if wave_first { bnd } else { wave }];
        let (case, sol, phases) = if bnd == self.b0 {
            let (ug, ul) = if wave_first { (fw.left, fb.right) } else { (fb.left, fw.right) };
            (
                CaseTag::InterfaceLeft,
                riemann::solve_interface_left(ug, ul, &gas, &liq)?,
                (Phase::GasLeft, Phase::Liquid),
            )
        } else {
            let (ul, ug) = if wave_first { (fw.left, fb.right) } else { (fb.left, fw.right) };
            (
                CaseTag::InterfaceRight,
                riemann::solve_interface_right(ul, ug, &gas, &liq)?,
                (Phase::Liquid, Phase::GasRight),
            )
        };
        self.unlink(wave);
        self.set_boundary(bnd, sol.middle_left, sol.middle_right);
        let left = self.solution_protos_one(sol.left_wave, phases.0)?;
        let right = self.solution_protos_one(sol.right_wave, phases.1)?;
        let mut ids = self.place(self.prev[bnd], &left, z);
        ids.extend(self.place(bnd, &right, z));
        self.finish_event(lo, hi, z, case, &[wave], ids)
    }

    /// A gas wave reaching the rigid droplet: the droplet velocity is updated
    /// first, then both pistons are re-solved.
    fn hit_wall(&mut self, bnd: usize, wave: usize, z: T) -> Result<()> {
        let fw = self.fronts[wave];
        self.advance_droplet();
        self.unlink(wave);
        let case = if bnd == self.b0 {
            self.fronts[bnd].left = fw.left;
            CaseTag::InterfaceLeft
        } else {
            self.fronts[bnd].right = fw.right;
            CaseTag::InterfaceRight
        };
        let (lo, hi, ids) = self.repiston()?;
        self.finish_event(lo, hi, z, case, &[wave], ids)
    }

    /// Scheduled droplet update of the limit model.
    pub(super) fn tick(&mut self) -> Result<()> {
        self.advance_droplet();
        let (lo, hi, ids) = self.repiston()?;
        self.reschedule(lo, hi, &ids);
        self.check_adjacent(lo, hi)
    }

    fn advance_droplet(&mut self) {
        let (p0, pm) = self.boundary_pressures();
        let t = self.time;
        if let Interior::Rigid(r) = &mut self.interior {
            r.accrue(t, p0, pm);
            r.update(t);
        }
    }

    /// Matches the gas velocity at both walls to the droplet velocity.
    /// Returns the touched list range and the new waves.
    fn repiston(&mut self) -> Result<(usize, usize, Vec<usize>)> {
        let gas = self.cfg.gas;
        let droplet = self.rigid().droplet_state();
        let (b0, bm) = (self.b0, self.bm);
        let (w0, mid0) = riemann::solve_piston_left(self.fronts[b0].left, droplet.v, &gas)?;
        let (wm, midm) = riemann::solve_piston_right(droplet.v, self.fronts[bm].right, &gas)?;
        self.set_boundary(b0, mid0, droplet);
        self.set_boundary(bm, droplet, midm);
        let left = self.solution_protos_one(w0, Phase::GasLeft)?;
        let right = self.solution_protos_one(wm, Phase::GasRight)?;
        let z0 = self.fronts[b0].origin;
        let zm = self.fronts[bm].origin;
        let mut ids = self.place(self.prev[b0], &left, z0);
        let first = ids.first().copied().unwrap_or(b0);
        let right_ids = self.place(bm, &right, zm);
        let last = right_ids.last().copied().unwrap_or(bm);
        ids.extend(right_ids);
        Ok((self.prev[first], self.next[last], ids))
    }

    fn solution_protos(&self, sol: &RiemannSolution<T>, left: Phase, right: Phase) -> Result<Vec<Proto<T>>> {
        let mut out = self.solution_protos_one(sol.left_wave, left)?;
        out.extend(self.solution_protos_one(sol.right_wave, right)?);
        Ok(out)
    }

    fn solution_protos_one(&self, w: Option<riemann::Wave<T>>, phase: Phase) -> Result<Vec<Proto<T>>> {
        match w {
            Some(w) => self.protos(&w, phase, false),
            None => Ok(Vec::new()),
        }
    }

    fn finish_event(
        &mut self,
        lo: usize,
        hi: usize,
        z: T,
        case: CaseTag,
        incoming: &[usize],
        outgoing: Vec<usize>,
    ) -> Result<()> {
        self.reschedule(lo, hi, &outgoing);
        self.events.push(InteractionEvent {
            time: self.time,
            position: z,
            case,
            incoming: incoming.iter().map(|&k| WaveRecord::of(&self.fronts[k])).collect(),
            outgoing: outgoing.iter().map(|&k| WaveRecord::of(&self.fronts[k])).collect(),
        });
        self.check_adjacent(lo, hi)
    }
}
