//! Command-line entry points: `simulate`, `limit` and `sweep`.
//!
//! Exit status is 0 on success, 1 on configuration or I/O errors and 2 when
//! a run violates one of the checked properties.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::analysis::{sweep, trend, SweepResult};
use crate::engine::{Engine, InteractionEvent, RunOutput, Snapshot};
use crate::error::Error;
use crate::functionals::{run_monitored, FunctionalMonitor};
use crate::limit::{newton_law_defect, newton_law_residual, run_limit};
use crate::scenario::ScenarioFile;

#[derive(Parser, Debug)]
#[command(name = "wavefront", version, about = "Wave-front tracking for a gas around a stiff liquid slab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compressible run for one stiffness.
    Simulate(Common),
    /// Gas coupled to a rigid droplet.
    Limit(Common),
    /// Stiffness ladder plus the limit model.
    Sweep(Common),
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides the stiffness (the whole ladder for `sweep`).
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    max_events: Option<usize>,
    /// Seed of the interaction-constant calibration.
    #[arg(long)]
    seed: Option<u64>,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I: IntoIterator<Item = OsString>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let (common, kind) = match &cli.command {
        Command::Simulate(c) => (c, Kind::Simulate),
        Command::Limit(c) => (c, Kind::Limit),
        Command::Sweep(c) => (c, Kind::Sweep),
    };
    match execute(common, kind) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("property violation: {msg}");
            EXIT_VIOLATION
        }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Simulate,
    Limit,
    Sweep,
}

enum Failure {
    Config(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PropertyViolation(_) | Error::AccumulationSuspected { .. } => Failure::Violation(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

struct Loaded {
    scenario: ScenarioFile,
    hash: String,
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let path = &c.scenario;
    let bytes = fs::read(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let hash = Sha256::digest(&bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    let text = String::from_utf8_lossy(&bytes);
    let mut scenario = ScenarioFile::parse(&text).map_err(|e| match e {
        Error::Json(j) => {
            let msg = j.to_string();
            let suffix = format!(" at line {} column {}", j.line(), j.column());
            let msg = msg.strip_suffix(&suffix).unwrap_or(&msg);
            Failure::Config(format!("{}:{}:{}: {msg}", path.display(), j.line(), j.column()))
        }
        other => Failure::Config(format!("{}: {other}", path.display())),
    })?;
    if let Some(eta) = c.eta {
        scenario.liquid.eta = eta;
        scenario.liquid.etas = vec![eta];
    }
    if let Some(n) = c.max_events {
        scenario.max_events = Some(n);
    }
    if let Some(seed) = c.seed {
        scenario.seed = seed;
    }
    Ok(Loaded { scenario, hash })
}

fn execute(c: &Common, kind: Kind) -> Result<i32, Failure> {
    let loaded = load(c)?;
    fs::create_dir_all(&c.out)?;
    match kind {
        Kind::Simulate => simulate(&loaded, &c.out),
        Kind::Limit => limit(&loaded, &c.out),
        Kind::Sweep => run_sweep(&loaded, &c.out),
    }
}

/// CSV text with the provenance header.
struct Csv {
    text: String,
}

impl Csv {
    fn new(hash: &str, columns: &str) -> Self {
        Self { text: format!("# scenario_sha256={hash}\n{columns}\n") }
    }

    fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    fn save(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, &self.text)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_json(path: &Path, value: &serde_json::Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

fn snapshot_rows(csv: &mut Csv, s: &Snapshot<f64>) {
    let mut a = f64::NEG_INFINITY;
    let push = |csv: &mut Csv, a: f64, b: f64, u: &crate::State<f64>| {
        let phase = if b <= 0.0 {
            "gas_left"
        } else if a >= s.m {
            "gas_right"
        } else {
            "liquid"
        };
        csv.row(&[num(s.time), num(a), num(b), phase.into(), num(u.tau), num(u.v), num(u.p)]);
    };
    for f in &s.fronts {
        if f.position > a {
            push(csv, a, f.position, &f.left);
        }
        a = a.max(f.position);
    }
    push(csv, a, f64::INFINITY, &s.far_right);
}

fn write_snapshots(dir: &Path, hash: &str, out: &RunOutput<f64>) -> std::io::Result<()> {
    let mut csv = Csv::new(hash, "t,z_start,z_end,phase,tau,v,p");
    snapshot_rows(&mut csv, &out.initial);
    for s in &out.snapshots {
        snapshot_rows(&mut csv, s);
    }
    snapshot_rows(&mut csv, &out.final_snapshot);
    csv.save(&dir.join("snapshots.csv"))
}

fn write_events(dir: &Path, hash: &str, events: &[InteractionEvent<f64>]) -> std::io::Result<()> {
    let mut csv = Csv::new(hash, "t,z,case,incoming_sigma,outgoing_sigma");
    let join = |rs: &[crate::engine::WaveRecord<f64>]| rs.iter().map(|r| num(r.sigma)).collect::<Vec<_>>().join(";");
    for e in events {
        csv.row(&[num(e.time), num(e.position), e.case.name().into(), join(&e.incoming), join(&e.outgoing)]);
    }
    csv.save(&dir.join("events.csv"))
}

fn write_functionals(dir: &Path, hash: &str, mon: &FunctionalMonitor<f64>, lines: &[f64]) -> std::io::Result<()> {
    let mut cols = String::from("t,upsilon,v_gm,q_gm,v_l,v_gp,q_gp,tv_p_g,tv_p_l,tv_tau_l,tv_v_l,tv_u_g");
    for x in lines {
        let _ = write!(cols, ",xi_{x}");
    }
    let mut csv = Csv::new(hash, &cols);
    for r in &mon.rows {
        let p = &r.parts;
        let mut f = vec![num(p.time), num(p.upsilon), num(p.v_gm), num(p.q_gm), num(p.v_l), num(p.v_gp), num(p.q_gp)];
        f.extend([r.tv.p_g, r.tv.p_l, r.tv.tau_l, r.tv.v_l, r.tv.u_g].map(num));
        f.extend(r.xi.iter().map(|&x| num(x)));
        csv.row(&f);
    }
    csv.save(&dir.join("functionals.csv"))
}

fn simulate(l: &Loaded, dir: &Path) -> Result<i32, Failure> {
    let s = &l.scenario;
    let weights = s.weights()?;
    let engine = Engine::new(s.run_config(s.liquid.eta)?, &s.datum()?)?;
    let (out, mon) = match run_monitored(engine, weights, false) {
        Ok(x) => x,
        Err(e @ (Error::PropertyViolation(_) | Error::AccumulationSuspected { .. })) => {
            write_json(&dir.join("violation.json"), &json!({ "scenario_sha256": l.hash, "error": e.to_string() }))?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    write_snapshots(dir, &l.hash, &out)?;
    write_events(dir, &l.hash, &out.events)?;
    write_functionals(dir, &l.hash, &mon, &s.measurement_lines)?;
    let worst = mon.verdicts.iter().map(|v| v.margin).fold(f64::INFINITY, f64::min);
    let summary = json!({
        "scenario": s.name,
        "scenario_sha256": l.hash,
        "eta": s.liquid.eta,
        "t_final": s.t_final,
        "interactions": out.interactions,
        "max_fronts": out.max_fronts,
        "fronts_created": out.fronts_created,
        "weights": weights,
        "delta": weights.delta(),
        "upsilon_initial": mon.upsilon_initial(),
        "upsilon_final": mon.rows.last().map_or(0.0, |r| r.parts.upsilon),
        "checks": mon.verdicts.len(),
        "violations": mon.violations.len(),
        "worst_margin": if worst.is_finite() { worst } else { 0.0 },
        "xi_max_increase": mon.xi_increase,
        "rows_outside_small_regime": mon.outside_small_regime,
    });
    write_json(&dir.join("run.json"), &summary)?;
    if let Some((k, verdict)) = mon.violations.first() {
        write_json(
            &dir.join("violation.json"),
            &json!({ "scenario_sha256": l.hash, "event": out.events[*k], "verdict": verdict }),
        )?;
        return Err(Failure::Violation(format!(
            "{} checks failed, first at t = {} ({})",
            mon.violations.len(),
            verdict.time,
            verdict.case.name()
        )));
    }
    Ok(EXIT_OK)
}

fn limit(l: &Loaded, dir: &Path) -> Result<i32, Failure> {
    let s = &l.scenario;
    let cfg = s.limit_config()?;
    let out = match run_limit(&cfg, &s.datum()?) {
        Ok(o) => o,
        Err(e @ (Error::PropertyViolation(_) | Error::AccumulationSuspected { .. })) => {
            write_json(&dir.join("violation.json"), &json!({ "scenario_sha256": l.hash, "error": e.to_string() }))?;
            return Err(e.into());
        }
        Err(e) => return Err(e.into()),
    };
    write_snapshots(dir, &l.hash, &out)?;
    write_events(dir, &l.hash, &out.events)?;
    let mut csv = Csv::new(&l.hash, "t,v_l,impulse");
    for h in out.droplet.as_deref().unwrap_or_default() {
        csv.row(&[num(h.time), num(h.v_l), num(h.impulse)]);
    }
    csv.save(&dir.join("droplet.csv"))?;
    let summary = json!({
        "scenario": s.name,
        "scenario_sha256": l.hash,
        "t_final": s.t_final,
        "dt_ode": cfg.dt_ode,
        "v_bar": cfg.v_bar,
        "v_l_final": out.droplet.as_ref().and_then(|h| h.last()).map(|h| h.v_l),
        "interactions": out.interactions,
        "max_fronts": out.max_fronts,
        "newton_law_residual": newton_law_residual(&out, s.m),
        "newton_law_defect": newton_law_defect(&out, s.m, s.t_final),
    });
    write_json(&dir.join("run.json"), &summary)?;
    Ok(EXIT_OK)
}

fn metric_rows(csv: &mut Csv, r: &SweepResult<f64>) {
    let t_final = r.grid.last().copied().unwrap_or(0.0);
    for m in r.ok_runs() {
        let eta = num(m.eta);
        let mut scalar = |name: &str, v: f64| csv.row(&[eta.clone(), num(t_final), name.into(), num(v)]);
        scalar("liquid_l1_tau", m.liquid_l1.tau);
        scalar("liquid_l1_v", m.liquid_l1.v);
        scalar("trace_zero_minus", m.trace_zero_minus.total());
        scalar("trace_m_plus", m.trace_m_plus.total());
        scalar("newton_residual", m.newton_residual);
        scalar("weakstar_max", m.weakstar_max);
        scalar("eulerian_distance", m.eulerian_distance);
        scalar("lipschitz_v", m.lipschitz.v_ratio);
        scalar("lipschitz_tau_gas", m.lipschitz.tau_gas_ratio);
        scalar("lipschitz_tau_liquid", m.lipschitz.tau_liquid_ratio);
        scalar("lambda", m.lipschitz.lambda);
        scalar("upsilon0", m.upsilon0);
        scalar("interactions", m.interactions as f64);
        scalar("max_fronts", m.max_fronts as f64);
        for (k, w) in m.weakstar.iter().enumerate() {
            scalar(&format!("weakstar_w{k}"), *w);
        }
        for (k, &t) in m.euler.times.iter().enumerate() {
            csv.row(&[eta.clone(), num(t), "a".into(), num(m.euler.a[k])]);
            csv.row(&[eta.clone(), num(t), "b".into(), num(m.euler.b[k])]);
        }
    }
    let lim = &r.limit;
    let eta = "inf".to_string();
    for (k, &t) in lim.euler.times.iter().enumerate() {
        csv.row(&[eta.clone(), num(t), "a".into(), num(lim.euler.a[k])]);
        csv.row(&[eta.clone(), num(t), "b".into(), num(lim.euler.b[k])]);
    }
    csv.row(&[eta.clone(), num(t_final), "v_l".into(), num(lim.v_l_final)]);
    csv.row(&[eta.clone(), num(t_final), "newton_residual".into(), num(lim.newton_residual)]);
    csv.row(&[eta, num(t_final), "newton_defect".into(), num(lim.newton_defect)]);
}

fn run_sweep(l: &Loaded, dir: &Path) -> Result<i32, Failure> {
    let s = &l.scenario;
    let r = sweep(&s.sweep_config()?, &s.datum()?)?;
    let mut csv = Csv::new(&l.hash, "eta,t,metric,value");
    metric_rows(&mut csv, &r);
    csv.save(&dir.join("metrics.csv"))?;
    let trends = json!({
        "liquid_l1_v": trend(&r.series(|m| m.liquid_l1.v)),
        "trace_zero_minus": trend(&r.series(|m| m.trace_zero_minus.total())),
        "trace_m_plus": trend(&r.series(|m| m.trace_m_plus.total())),
        "weakstar_max": trend(&r.series(|m| m.weakstar_max)),
        "eulerian_distance": trend(&r.series(|m| m.eulerian_distance)),
    });
    let runs: Vec<_> = r
        .runs
        .iter()
        .zip(&r.etas)
        .map(|(run, eta)| match run {
            Ok(m) => json!({ "eta": eta, "ok": true, "metrics": m }),
            Err(e) => json!({ "eta": eta, "ok": false, "error": e }),
        })
        .collect();
    let summary = json!({
        "scenario": s.name,
        "scenario_sha256": l.hash,
        "etas": r.etas,
        "runs": runs,
        "limit": r.limit,
        "windows": r.windows,
        "trends": trends,
    });
    write_json(&dir.join("sweep.json"), &summary)?;
    Ok(EXIT_OK)
}
