//! Command-line surface.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use vecopt_core::asymptotics::{
    bounded_section_probe, k_zero_cloud, mtame_probe, properness_probe, ps_probe, theorem31_crosscheck,
    weak_ps_probe, AsymptoticCloud, ProbeConfig, RadiusSchedule,
};
use vecopt_core::efficiency::{
    geoffrion_check, geoffrion_existence_report, merge_front, recession_probe, scalarize_solve, section_levels,
    GeoffrionStatus, RecessionConfig, ScalarizationConfig,
};
use vecopt_core::minnorm::{gamma_residual, rabier_nu, RabierMode};
use vecopt_core::oracle::GridSpec;
use vecopt_core::verdict::{SampleRecord, Verdict};
use vecopt_core::{Error, Problem, SublevelBound};

use crate::builtin::{builtin, NAMES};
use crate::grid::grid_pareto_par;
use crate::parse::{parse_problem, render_problem};
use crate::report::{nums, num, replay, ProblemEcho, Report, Timing, Witnesses};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "vecopt", version, about = "Numerical evidence for vector optimization problems")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "VECOPT_THREADS")]
    pub threads: Option<usize>,
    /// Emit complete witness tables instead of 50 rows per shell.
    #[arg(long, global = true)]
    pub full: bool,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rabier function and Γ residual at a point.
    Rabier {
        #[command(flatten)]
        problem: ProblemArg,
        /// Point, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Asymptotic probes.
    Probe {
        #[arg(value_enum)]
        kind: ProbeKind,
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Critical-value cloud on a grid.
    Kzero {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true)]
        ybar: String,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
    },
    /// Bounded sections, properness and the three clouds side by side.
    Crosscheck {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        probe: ProbeArgs,
    },
    /// Weighted-sum scalarization.
    Pareto {
        #[command(subcommand)]
        action: ParetoAction,
    },
    /// Geoffrion properness of a point on a grid.
    Geoffrion {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true)]
        xbar: String,
        #[arg(long = "M")]
        m_bound: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Recession directions of the image.
    Recession {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        sched: ScheduleArgs,
    },
    /// Existence evidence for Geoffrion-proper points.
    Existence {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        sched: ScheduleArgs,
    },
    /// Ground-truth generators.
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
    /// Re-verify every witness row of a report.
    Replay { report: PathBuf },
    /// Print the canonical problem file.
    Render {
        #[command(flatten)]
        problem: ProblemArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum ParetoAction {
    Solve {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        ybar: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        starts: usize,
    },
    Front {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        ybar: String,
        /// Weights are the positive multiples of 1/N summing to one.
        #[arg(long)]
        lambda_grid: usize,
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        /// Images closer than this are merged.
        #[arg(long, default_value_t = 1e-6)]
        merge_radius: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleAction {
    ParetoGrid {
        #[command(flatten)]
        problem: ProblemArg,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(Debug, Args)]
pub struct ProblemArg {
    /// Problem file, or a builtin name.
    #[arg(long)]
    pub problem: String,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// `lo,hi` (applied to every axis) or `lo,hi;lo,hi;...`.
    #[arg(long = "box", allow_hyphen_values = true)]
    pub bbox: String,
    #[arg(long, conflicts_with = "steps")]
    pub grid_step: Option<f64>,
    /// Points per axis.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// `R0,rho,K`: K shells with radii R0 rho^k.
    #[arg(long, default_value = "1,2,20")]
    pub radii: String,
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// `y1,...,ym`, entries may be `inf`; a bare `inf` lifts every bound.
    #[arg(long, allow_hyphen_values = true)]
    pub ybar: String,
    #[command(flatten)]
    pub sched: ScheduleArgs,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    #[arg(long)]
    pub tau_abs: Option<f64>,
    #[arg(long)]
    pub gamma_tol: Option<f64>,
    #[arg(long)]
    pub cluster_radius: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    PlusOnly,
}

impl From<Mode> for RabierMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => RabierMode::Full,
            Mode::PlusOnly => RabierMode::PlusOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeKind {
    Proper,
    Section,
    Ps,
    WeakPs,
    Mtame,
}

/// What a command hands back for printing.
pub enum Output {
    Report(Box<Report>),
    Text(String),
    Replay { json: String, ok: bool },
}

// ---------------------------------------------------------------------------
// argument parsing

pub fn load_problem(spec: &str) -> Result<Problem, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return parse_problem(&text).map_err(|e| CliError::Usage(format!("{spec}: {e}")));
    }
    builtin(spec).ok_or_else(|| {
        CliError::Usage(format!(
            "'{spec}' is neither a file nor a builtin problem ({})",
            NAMES.join(", ")
        ))
    })
}

fn number(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" | "+inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("'{t}' is not a number"))),
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(number).collect()
}

fn finite_list(s: &str, what: &str, len: usize) -> Result<Vec<f64>, CliError> {
    let v = parse_list(s)?;
    if v.len() != len {
        return Err(CliError::Usage(format!("{what} needs {len} entries, got {}", v.len())));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!("{what} must be finite")));
    }
    Ok(v)
}

pub fn parse_ybar(s: &str, m: usize) -> Result<SublevelBound, CliError> {
    if s.trim() == "inf" {
        return Ok(SublevelBound::unrestricted(m));
    }
    let v = parse_list(s)?;
    if v.len() != m {
        return Err(CliError::Usage(format!("--ybar needs {m} entries, got {}", v.len())));
    }
    Ok(SublevelBound::new(v)?)
}

pub fn parse_box(s: &str, n: usize) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 1 && parts.len() != n {
        return Err(CliError::Usage(format!("--box needs 1 or {n} intervals, got {}", parts.len())));
    }
    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    for i in 0..n {
        let iv = parse_list(parts[i.min(parts.len() - 1)])?;
        let [lo, hi] = iv[..] else {
            return Err(CliError::Usage("box intervals are 'lo,hi'".into()));
        };
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(CliError::Usage(format!("box interval {lo},{hi} must be finite and ordered")));
        }
        lower.push(lo);
        upper.push(hi);
    }
    Ok((lower, upper))
}

fn parse_schedule(a: &ScheduleArgs) -> Result<RadiusSchedule, CliError> {
    let v = parse_list(&a.radii)?;
    let [r0, rho, k] = v[..] else {
        return Err(CliError::Usage("--radii is 'R0,rho,K'".into()));
    };
    if !(k >= 1.0 && k.fract() == 0.0) {
        return Err(CliError::Usage("K must be a positive integer".into()));
    }
    Ok(RadiusSchedule::geometric(r0, rho, k as usize)?.with_samples(a.samples)?)
}

fn grid_spec(g: &GridArgs, n: usize) -> Result<GridSpec, CliError> {
    let (lower, upper) = parse_box(&g.bbox, n)?;
    Ok(match (g.grid_step, g.steps) {
        (Some(h), _) => GridSpec::with_spacing(lower, upper, h)?,
        (None, Some(s)) => GridSpec::new(lower, upper, vec![s; n])?,
        (None, None) => return Err(CliError::Usage("need --grid-step or --steps".into())),
    })
}

fn probe_config(a: &ProbeArgs) -> ProbeConfig {
    let mut cfg = ProbeConfig::default();
    if let Some(t) = a.tau_abs {
        cfg.tau_abs = t;
    }
    if let Some(t) = a.gamma_tol {
        cfg.gamma_tol = t;
    }
    if let Some(r) = a.cluster_radius {
        cfg.cluster_radius = r;
    }
    cfg
}

/// Strictly positive weights `k / N` summing to one, in lexicographic order.
pub fn lambda_grid(m: usize, n: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if n < m {
        return Err(CliError::Usage(format!("--lambda-grid must be at least m = {m}")));
    }
    let mut out = Vec::new();
    let mut parts = vec![1usize; m];
    fn rec(i: usize, left: usize, parts: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<f64>>) {
        let m = parts.len();
        if i == m - 1 {
            parts[i] = left;
            out.push(parts.iter().map(|k| *k as f64 / n as f64).collect());
            return;
        }
        for k in 1..=left - (m - 1 - i) {
            parts[i] = k;
            rec(i + 1, left - k, parts, n, out);
        }
    }
    rec(0, n, &mut parts, n, &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// commands

struct Run {
    problem: Problem,
    seed: Option<u64>,
    mode: RabierMode,
    minnorm_tol: f64,
    thresholds: Value,
    result: Value,
    witnesses: Witnesses,
}

impl Run {
    fn new(problem: Problem, full: bool) -> Self {
        Run {
            problem,
            seed: None,
            mode: RabierMode::Full,
            minnorm_tol: ProbeConfig::default().minnorm_tol,
            thresholds: json!({}),
            result: Value::Null,
            witnesses: Witnesses::new(full),
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn verdict_value(v: &Verdict) -> Value {
    json!({ "status": to_value(&v.status), "summary": to_value(&v.summary) })
}

fn cloud_value(c: &AsymptoticCloud) -> Value {
    let cands: Vec<Value> = c
        .candidates
        .iter()
        .map(|k| json!({ "y": nums(&k.y), "best_residual": num(k.best_residual), "support": k.witness.len() }))
        .collect();
    json!({
        "status": to_value(&c.status),
        "accepted": c.accepted,
        "candidates": cands,
        "summary": to_value(&c.summary),
    })
}

fn cloud_rows(w: &mut Witnesses, name: &str, c: &AsymptoticCloud) {
    for (i, k) in c.candidates.iter().enumerate() {
        w.extend(&format!("{name}/candidate {i}"), &k.witness);
    }
}

fn probe_thresholds(cfg: &ProbeConfig, sched: &RadiusSchedule, ybar: &SublevelBound) -> Value {
    json!({
        "probe": to_value(cfg),
        "radii": nums(sched.radii()),
        "samples_per_shell": sched.samples_per_shell(),
        "ybar": nums(ybar.values()),
    })
}

fn run_probe(kind: ProbeKind, problem: Problem, a: &ProbeArgs, full: bool) -> Result<Run, CliError> {
    let sched = parse_schedule(&a.sched)?;
    let ybar = parse_ybar(&a.ybar, problem.m())?;
    let cfg = probe_config(a);
    let mode: RabierMode = a.mode.into();
    let seed = a.sched.seed;
    let mut run = Run::new(problem, full);
    run.seed = Some(seed);
    run.mode = mode;
    run.minnorm_tol = cfg.minnorm_tol;
    run.thresholds = probe_thresholds(&cfg, &sched, &ybar);
    let p = &run.problem;
    match kind {
        ProbeKind::Proper | ProbeKind::Section => {
            let v = if kind == ProbeKind::Proper {
                properness_probe(p, &ybar, &sched, seed, &cfg)?
            } else {
                bounded_section_probe(p, &ybar, &sched, seed, &cfg)?
            };
            run.result = json!({ "probe": to_value(&kind_name(kind)), "verdict": verdict_value(&v) });
            run.witnesses.extend("witness", &v.witness);
        }
        ProbeKind::Ps | ProbeKind::WeakPs | ProbeKind::Mtame => {
            let c = match kind {
                ProbeKind::Ps => ps_probe(p, &ybar, &sched, mode, seed, &cfg)?,
                ProbeKind::WeakPs => weak_ps_probe(p, &ybar, &sched, mode, seed, &cfg)?,
                _ => mtame_probe(p, &ybar, &sched, mode, seed, &cfg)?,
            };
            run.result = json!({ "probe": kind_name(kind), "cloud": cloud_value(&c) });
            cloud_rows(&mut run.witnesses, kind_name(kind), &c);
        }
    }
    Ok(run)
}

fn kind_name(k: ProbeKind) -> &'static str {
    match k {
        ProbeKind::Proper => "proper",
        ProbeKind::Section => "section",
        ProbeKind::Ps => "ps",
        ProbeKind::WeakPs => "weak-ps",
        ProbeKind::Mtame => "mtame",
    }
}

fn point_record(p: &Problem, x: Vec<f64>, mode: RabierMode, tol: f64) -> Result<(SampleRecord, Value), CliError> {
    let nu = rabier_nu(p, &x, mode, tol)?;
    let gamma = gamma_residual(p, &x, mode, tol)?;
    let rec = SampleRecord::at(p, x, None).with_nu(nu.value).with_gamma(gamma.value);
    Ok((rec, json!({ "nu": to_value(&nu), "gamma": to_value(&gamma) })))
}

fn run_rabier(problem: Problem, at: &str, mode: Mode, tol: f64, full: bool) -> Result<Run, CliError> {
    let x = finite_list(at, "--at", problem.n())?;
    let mut run = Run::new(problem, full);
    run.mode = mode.into();
    run.minnorm_tol = tol;
    run.thresholds = json!({ "tol": tol });
    let (rec, v) = point_record(&run.problem, x, run.mode, tol)?;
    run.result = json!({
        "nu": num(rec.nu.unwrap()),
        "gamma": num(rec.gamma.unwrap()),
        "detail": v,
    });
    run.witnesses.push("point", &rec);
    Ok(run)
}

fn run_crosscheck(problem: Problem, a: &ProbeArgs, full: bool) -> Result<Run, CliError> {
    let sched = parse_schedule(&a.sched)?;
    let ybar = parse_ybar(&a.ybar, problem.m())?;
    let cfg = probe_config(a);
    let mode: RabierMode = a.mode.into();
    let mut run = Run::new(problem, full);
    run.seed = Some(a.sched.seed);
    run.mode = mode;
    run.minnorm_tol = cfg.minnorm_tol;
    run.thresholds = probe_thresholds(&cfg, &sched, &ybar);
    let r = theorem31_crosscheck(&run.problem, &ybar, &sched, mode, a.sched.seed, &cfg)?;
    let f = r.flags();
    run.result = json!({
        "table": {
            "proper": f[0],
            "ps_empty": f[1],
            "weak_ps_empty": f[2],
            "mtame_empty": f[3],
        },
        "consistent": r.consistent(),
        "section": verdict_value(&r.section),
        "proper": verdict_value(&r.proper),
        "ps": cloud_value(&r.ps),
        "weak_ps": cloud_value(&r.weak_ps),
        "mtame": cloud_value(&r.mtame),
    });
    run.witnesses.extend("proper/witness", &r.proper.witness);
    cloud_rows(&mut run.witnesses, "ps", &r.ps);
    cloud_rows(&mut run.witnesses, "weak-ps", &r.weak_ps);
    cloud_rows(&mut run.witnesses, "mtame", &r.mtame);
    Ok(run)
}

fn error_value(e: &Error) -> Value {
    Value::from(e.to_string())
}

fn run_pareto(action: &ParetoAction, full: bool) -> Result<Run, CliError> {
    match action {
        ParetoAction::Solve {
            problem,
            lambda,
            ybar,
            bbox,
            seed,
            starts,
        } => {
            let p = load_problem(&problem.problem)?;
            let lambda = finite_list(lambda, "--lambda", p.m())?;
            let ybar = parse_ybar(ybar, p.m())?;
            let (lower, upper) = parse_box(bbox, p.n())?;
            let mut cfg = ScalarizationConfig::new(lambda, ybar, lower, upper);
            cfg.seed = *seed;
            cfg.starts = *starts;
            let mut run = Run::new(p, full);
            run.seed = Some(*seed);
            run.thresholds = json!({ "scalarization": scalar_cfg_value(&cfg) });
            let r = scalarize_solve(&run.problem, &cfg)?;
            let (rec, detail) = point_record(&run.problem, r.x.clone(), run.mode, run.minnorm_tol)?;
            run.result = json!({
                "x": nums(&r.x),
                "fx": nums(&r.fx),
                "value": num(r.value),
                "pareto": verdict_value(&r.verdict),
                "nu": num(rec.nu.unwrap()),
                "detail": detail,
            });
            run.witnesses.push("solution", &rec);
            run.witnesses.extend("dominating sample", &r.verdict.witness);
            Ok(run)
        }
        ParetoAction::Front {
            problem,
            ybar,
            lambda_grid: n,
            bbox,
            seed,
            starts,
            merge_radius,
        } => {
            let p = load_problem(&problem.problem)?;
            let ybar = parse_ybar(ybar, p.m())?;
            let (lower, upper) = parse_box(bbox, p.n())?;
            let lambdas = lambda_grid(p.m(), *n)?;
            let mut base = ScalarizationConfig::new(lambdas[0].clone(), ybar, lower, upper);
            base.seed = *seed;
            base.starts = *starts;
            let results: Vec<_> = lambdas
                .par_iter()
                .map(|l| {
                    let mut cfg = base.clone();
                    cfg.lambda = l.clone();
                    (l.clone(), scalarize_solve(&p, &cfg))
                })
                .collect();
            let front = merge_front(results, *merge_radius);
            let mut run = Run::new(p, full);
            run.seed = Some(*seed);
            run.thresholds = json!({ "scalarization": scalar_cfg_value(&base), "merge_radius": merge_radius });
            let pts: Vec<Value> = front
                .points
                .iter()
                .map(|f| json!({ "lambda": nums(&f.lambda), "x": nums(&f.x), "fx": nums(&f.fx) }))
                .collect();
            let fails: Vec<Value> = front
                .failures
                .iter()
                .map(|(l, e)| {
                    json!({
                        "lambda": nums(l),
                        "error": e.as_ref().map_or(Value::from("not verified"), error_value),
                    })
                })
                .collect();
            for f in &front.points {
                let rec = SampleRecord::at(&run.problem, f.x.clone(), None);
                run.witnesses.push("front", &rec);
            }
            run.result = json!({ "points": pts, "failures": fails });
            Ok(run)
        }
    }
}

fn scalar_cfg_value(cfg: &ScalarizationConfig) -> Value {
    json!({
        "lambda": nums(&cfg.lambda),
        "ybar": nums(cfg.ybar.values()),
        "starts": cfg.starts,
        "lower": nums(&cfg.lower),
        "upper": nums(&cfg.upper),
        "max_iter": cfg.max_iter,
        "penalty_rounds": cfg.penalty_rounds,
        "tol": cfg.tol,
        "seed": cfg.seed,
    })
}

fn run_geoffrion(problem: Problem, xbar: &str, m_bound: f64, g: &GridArgs, tol: f64, full: bool) -> Result<Run, CliError> {
    let xbar = finite_list(xbar, "--xbar", problem.n())?;
    let grid = grid_spec(g, problem.n())?;
    let samples: Vec<Vec<f64>> = grid.points().collect();
    let mut run = Run::new(problem, full);
    run.thresholds = json!({
        "M": m_bound,
        "tol": tol,
        "grid": { "lower": nums(grid.lower()), "upper": nums(grid.upper()), "steps": grid.steps() },
    });
    let p = &run.problem;
    run.result = match geoffrion_check(p, &xbar, m_bound, &samples, tol) {
        Ok(r) => match &r.status {
            GeoffrionStatus::ConsistentUpTo(m) => json!({ "status": "ConsistentUpTo", "M": m }),
            GeoffrionStatus::Violation { x, i, min_ratio } => {
                run.witnesses.push("violation", &SampleRecord::at(p, x.clone(), None));
                json!({
                    "status": "Violation",
                    "x": nums(x),
                    "objective": i,
                    "min_ratio": num(*min_ratio),
                    "M": r.m_tested,
                })
            }
        },
        Err(Error::ParetoViolation { witness }) => {
            run.witnesses.push("dominating sample", &SampleRecord::at(p, witness.clone(), None));
            json!({ "status": "NotPareto", "x": nums(&witness) })
        }
        Err(e) => return Err(e.into()),
    };
    Ok(run)
}

fn run_recession(problem: Problem, s: &ScheduleArgs, existence: bool, full: bool) -> Result<Run, CliError> {
    let sched = parse_schedule(s)?;
    let cfg = ProbeConfig::default();
    let rec = RecessionConfig::default();
    let mut run = Run::new(problem, full);
    run.seed = Some(s.seed);
    run.thresholds = json!({
        "probe": to_value(&cfg),
        "recession": to_value(&rec),
        "radii": nums(sched.radii()),
        "samples_per_shell": sched.samples_per_shell(),
    });
    let p = &run.problem;
    run.result = if existence {
        let levels = section_levels(p, &sched, s.seed, &cfg);
        let r = geoffrion_existence_report(p, &sched, &levels, s.seed, &cfg, &rec)?;
        let sections: Vec<Value> = r
            .sections
            .iter()
            .map(|c| json!({ "ybar": nums(&c.ybar), "section": verdict_value(&c.section), "proper": verdict_value(&c.proper) }))
            .collect();
        for (i, c) in r.sections.iter().enumerate() {
            run.witnesses.extend(&format!("section {i}"), &c.section.witness);
            run.witnesses.extend(&format!("proper {i}"), &c.proper.witness);
        }
        json!({
            "status": to_value(&r.status),
            "recession": to_value(&r.recession),
            "sections": sections,
        })
    } else {
        to_value(&recession_probe(p, &sched, s.seed, &cfg, &rec)?)
    };
    Ok(run)
}

fn run_kzero(problem: Problem, ybar: &str, g: &GridArgs, mode: Mode, full: bool) -> Result<Run, CliError> {
    let ybar = parse_ybar(ybar, problem.m())?;
    let grid = grid_spec(g, problem.n())?;
    let cfg = ProbeConfig::default();
    let mut run = Run::new(problem, full);
    run.mode = mode.into();
    run.thresholds = json!({
        "probe": to_value(&cfg),
        "ybar": nums(ybar.values()),
        "grid": { "lower": nums(grid.lower()), "upper": nums(grid.upper()), "steps": grid.steps() },
    });
    let c = k_zero_cloud(&run.problem, &ybar, &grid, run.mode, &cfg)?;
    run.result = json!({ "cloud": cloud_value(&c) });
    cloud_rows(&mut run.witnesses, "kzero", &c);
    Ok(run)
}

fn run_oracle(problem: Problem, g: &GridArgs, full: bool) -> Result<Run, CliError> {
    let grid = grid_spec(g, problem.n())?;
    let mut run = Run::new(problem, full);
    run.thresholds = json!({
        "grid": { "lower": nums(grid.lower()), "upper": nums(grid.upper()), "steps": grid.steps() },
    });
    let front = grid_pareto_par(&run.problem, &grid)?;
    for pt in &front {
        run.witnesses.push("nondominated", &SampleRecord::at(&run.problem, pt.x.clone(), None));
    }
    run.result = json!({ "grid_points": grid.len(), "nondominated": front.len() });
    Ok(run)
}

/// Runs a parsed command line. `argv` is echoed into the report.
pub fn execute(cli: &Cli, argv: &[String]) -> Result<Output, CliError> {
    let start = Instant::now();
    let full = cli.full;
    let run = match &cli.command {
        Command::Rabier { problem, at, mode, tol } => run_rabier(load_problem(&problem.problem)?, at, *mode, *tol, full)?,
        Command::Probe { kind, problem, probe } => run_probe(*kind, load_problem(&problem.problem)?, probe, full)?,
        Command::Kzero { problem, ybar, grid, mode } => run_kzero(load_problem(&problem.problem)?, ybar, grid, *mode, full)?,
        Command::Crosscheck { problem, probe } => run_crosscheck(load_problem(&problem.problem)?, probe, full)?,
        Command::Pareto { action } => run_pareto(action, full)?,
        Command::Geoffrion {
            problem,
            xbar,
            m_bound,
            grid,
            tol,
        } => run_geoffrion(load_problem(&problem.problem)?, xbar, *m_bound, grid, *tol, full)?,
        Command::Recession { problem, sched } => run_recession(load_problem(&problem.problem)?, sched, false, full)?,
        Command::Existence { problem, sched } => run_recession(load_problem(&problem.problem)?, sched, true, full)?,
        Command::Oracle {
            action: OracleAction::ParetoGrid { problem, grid },
        } => run_oracle(load_problem(&problem.problem)?, grid, full)?,
        Command::Replay { report } => {
            let text = std::fs::read_to_string(report)?;
            let r: Report = serde_json::from_str(&text)?;
            let outcome = replay(&r)?;
            return Ok(Output::Replay {
                json: serde_json::to_string_pretty(&outcome)?,
                ok: outcome.ok(),
            });
        }
        Command::Render { problem } => return Ok(Output::Text(render_problem(&load_problem(&problem.problem)?))),
    };
    let (witnesses, omitted_rows) = run.witnesses.into_parts();
    Ok(Output::Report(Box::new(Report {
        command: argv.to_vec(),
        problem: ProblemEcho::new(render_problem(&run.problem)),
        seed: run.seed,
        mode: run.mode,
        minnorm_tol: run.minnorm_tol,
        thresholds: run.thresholds,
        result: run.result,
        witnesses,
        omitted_rows,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })))
}
