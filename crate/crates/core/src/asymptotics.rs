//! Sampling probes for behaviour at infinity on a sublevel set.
//!
//! Points are drawn on radial shells `R_k <= |x| < R_{k+1}`, pulled into
//! `Ω ∩ {f <= ȳ}`, and then pushed down a probe statistic (`ν`, `|x| ν` or
//! the `Γ` residual). Accepted points are clustered by their images. A
//! cluster becomes a candidate limit value only if it is supported by at
//! least `min_shells` of the last `tail_shells` shells, which is the
//! numerical stand-in for `|x^k| -> ∞` with `f(x^k)` converging.
//!
//! Witnesses are sound: every stored point is feasible and meets the
//! acceptance threshold. An empty cloud only says that nothing was found up
//! to the outermost radius.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{dist, norm};
use crate::minnorm::{gamma_residual, rabier_nu, RabierMode};
use crate::oracle::GridSpec;
use crate::search::Region;
use crate::verdict::{SampleRecord, ShellSummary, Status, Verdict};
use crate::{Error, Problem, Result, SublevelBound};

/// Shell radii `R_0 < R_1 < ... < R_K`; shell `k` is `[R_k, R_{k+1})`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RadiusSchedule {
    radii: Vec<f64>,
    samples_per_shell: usize,
}

impl RadiusSchedule {
    pub fn new(radii: Vec<f64>, samples_per_shell: usize) -> Result<Self> {
        if radii.len() < 2 {
            return Err(Error::InvalidProblem("schedule needs at least two radii".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidProblem("radii must be positive and finite".into()));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProblem("radii must be strictly increasing".into()));
        }
        if samples_per_shell == 0 {
            return Err(Error::InvalidProblem("samples_per_shell must be positive".into()));
        }
        Ok(RadiusSchedule {
            radii,
            samples_per_shell,
        })
    }

    /// `R_k = r0 * rho^k` for `k = 0..=k_max`, 256 samples per shell.
    pub fn geometric(r0: f64, rho: f64, k_max: usize) -> Result<Self> {
        if !(rho > 1.0) {
            return Err(Error::InvalidProblem("growth factor must exceed 1".into()));
        }
        let radii = (0..=k_max).map(|k| r0 * libm::pow(rho, k as f64)).collect();
        RadiusSchedule::new(radii, 256)
    }

    pub fn with_samples(mut self, samples_per_shell: usize) -> Result<Self> {
        if samples_per_shell == 0 {
            return Err(Error::InvalidProblem("samples_per_shell must be positive".into()));
        }
        self.samples_per_shell = samples_per_shell;
        Ok(self)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn samples_per_shell(&self) -> usize {
        self.samples_per_shell
    }

    pub fn shell_count(&self) -> usize {
        self.radii.len() - 1
    }

    pub fn shell(&self, k: usize) -> (f64, f64) {
        (self.radii[k], self.radii[k + 1])
    }

    /// Every radius multiplied by `c > 0`.
    pub fn rescaled(&self, c: f64) -> Result<Self> {
        RadiusSchedule::new(self.radii.iter().map(|r| r * c).collect(), self.samples_per_shell)
    }
}

impl Default for RadiusSchedule {
    fn default() -> Self {
        RadiusSchedule::geometric(1.0, 2.0, 20).expect("valid default schedule")
    }
}

/// Thresholds shared by the probes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProbeConfig {
    /// Additive slack for feasibility and the sublevel test.
    pub sublevel_tol: f64,
    /// Acceptance level for `ν` (scaled by `R_k^-ps_exponent`) and `|x| ν`.
    pub tau_abs: f64,
    pub ps_exponent: f64,
    pub gamma_tol: f64,
    pub crit_tol: f64,
    pub cluster_radius: f64,
    pub divergence_threshold: f64,
    /// Defaults to `10 (1 + |ȳ|)` over the finite entries.
    pub bound_cap: Option<f64>,
    pub min_shells: usize,
    pub tail_shells: usize,
    pub descent_steps: usize,
    /// Certificate tolerance passed to the min-norm solver.
    pub minnorm_tol: f64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            sublevel_tol: 1e-9,
            tau_abs: 1e-3,
            ps_exponent: 0.0,
            gamma_tol: crate::minnorm::GAMMA_TOL,
            crit_tol: crate::minnorm::CRIT_TOL,
            cluster_radius: 1e-2,
            divergence_threshold: 1e6,
            bound_cap: None,
            min_shells: 3,
            tail_shells: 5,
            descent_steps: 200,
            minnorm_tol: 1e-12,
        }
    }
}

impl ProbeConfig {
    pub fn bound_cap_for(&self, ybar: &SublevelBound) -> f64 {
        self.bound_cap.unwrap_or(10.0 * (1.0 + ybar.finite_norm()))
    }

    fn tail_start(&self, shells: usize) -> usize {
        shells.saturating_sub(self.tail_shells)
    }
}

/// Sublevel-feasible points drawn on one shell.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub index: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub points: Vec<Vec<f64>>,
}

fn shell_rng(seed: u64, shell: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (shell as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(core::f64::consts::TAU * u2)
}

fn check_ybar(problem: &Problem, ybar: &SublevelBound) -> Result<()> {
    ybar.check_dim(problem.m())
}

/// Draws up to `samples_per_shell` points per shell with `|x|` in the shell,
/// `x ∈ Ω` and `f(x) <= ȳ + tol`. Each draw is a uniform direction and a
/// uniform radius, pulled into `Ω` and repaired by Newton steps on the
/// sublevel excess inside the shell. Draws that cannot be repaired are
/// dropped, so an empty shell means the sublevel set seems to miss it.
pub fn shell_sampler(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<Vec<Shell>> {
    check_ybar(problem, ybar)?;
    Ok((0..schedule.shell_count())
        .map(|k| sample_shell(problem, ybar, schedule, seed, cfg, k))
        .collect())
}

/// One shell of [`shell_sampler`]; shells are independent.
pub fn sample_shell(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    seed: u64,
    cfg: &ProbeConfig,
    k: usize,
) -> Shell {
    let (lo, hi) = schedule.shell(k);
    let n = problem.n();
    let mut rng = shell_rng(seed, k);
    let region = Region {
        problem,
        ybar,
        shell: Some((lo, hi)),
        bbox: None,
        tol: cfg.sublevel_tol,
    };
    let mut points = Vec::new();
    for _ in 0..schedule.samples_per_shell() {
        let mut d: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
        let dn = norm(&d);
        let r = lo + (hi - lo) * rng.gen::<f64>();
        if dn == 0.0 {
            continue;
        }
        for c in d.iter_mut() {
            *c *= r / dn;
        }
        if let Some(x) = region.repair(&d) {
            points.push(x);
        }
    }
    Shell {
        index: k,
        inner_radius: lo,
        outer_radius: hi,
        points,
    }
}

/// How an asymptotic cloud came out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum CloudStatus {
    /// No accepted point on the tail shells.
    Empty,
    /// Points were accepted far out, but their images do not settle: the
    /// statistic tends to zero while `f` diverges.
    DivergentImages,
    Candidates,
}

/// One candidate limit value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Candidate {
    pub y: Vec<f64>,
    pub best_residual: f64,
    pub witness: Vec<SampleRecord>,
}

/// Candidate limit values; the numerical stand-in for the asymptotic sets.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AsymptoticCloud {
    pub status: CloudStatus,
    pub candidates: Vec<Candidate>,
    /// Number of accepted points before clustering.
    pub accepted: usize,
    pub summary: Vec<ShellSummary>,
}

impl AsymptoticCloud {
    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Candidate closest to `y`, with its distance.
    pub fn nearest(&self, y: &[f64]) -> Option<(&Candidate, f64)> {
        self.candidates
            .iter()
            .map(|c| (c, dist(&c.y, y)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ps,
    WeakPs,
    Mtame,
}

/// `K̃_{∞,≦ȳ}` probe: accepts `ν(x) <= τ_abs / R_k^ps_exponent`.
pub fn ps_probe(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<AsymptoticCloud> {
    run_cloud(problem, ybar, schedule, mode, seed, cfg, Kind::Ps)
}

/// `K_{∞,≦ȳ}` probe: accepts `|x| ν(x) <= τ_abs`.
pub fn weak_ps_probe(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<AsymptoticCloud> {
    run_cloud(problem, ybar, schedule, mode, seed, cfg, Kind::WeakPs)
}

/// `T_{∞,≦ȳ}` probe: accepts `Γ residual <= gamma_tol`.
pub fn mtame_probe(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<AsymptoticCloud> {
    run_cloud(problem, ybar, schedule, mode, seed, cfg, Kind::Mtame)
}

fn run_cloud(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
    kind: Kind,
) -> Result<AsymptoticCloud> {
    check_ybar(problem, ybar)?;
    let shells = schedule.shell_count();
    let mut accepted: Vec<SampleRecord> = Vec::new();
    let mut summary = Vec::with_capacity(shells);
    for k in 0..shells {
        let shell = sample_shell(problem, ybar, schedule, seed, cfg, k);
        let (recs, sum) = probe_shell(problem, ybar, &shell, mode, cfg, kind);
        accepted.extend(recs);
        summary.push(sum);
    }
    Ok(build_cloud(accepted, summary, shells, cfg))
}

fn nu_of(problem: &Problem, mode: RabierMode, tol: f64) -> impl Fn(&[f64]) -> Option<f64> + '_ {
    move |x: &[f64]| rabier_nu(problem, x, mode, tol).ok().map(|r| r.value)
}

fn gamma_of(problem: &Problem, mode: RabierMode, tol: f64) -> impl Fn(&[f64]) -> Option<f64> + '_ {
    move |x: &[f64]| gamma_residual(problem, x, mode, tol).ok().map(|r| r.value)
}

fn probe_shell(
    problem: &Problem,
    ybar: &SublevelBound,
    shell: &Shell,
    mode: RabierMode,
    cfg: &ProbeConfig,
    kind: Kind,
) -> (Vec<SampleRecord>, ShellSummary) {
    let region = Region {
        problem,
        ybar,
        shell: Some((shell.inner_radius, shell.outer_radius)),
        bbox: None,
        tol: cfg.sublevel_tol,
    };
    let nu = nu_of(problem, mode, cfg.minnorm_tol);
    let gamma = gamma_of(problem, mode, cfg.minnorm_tol);
    let tau_k = cfg.tau_abs / libm::pow(shell.inner_radius, cfg.ps_exponent);
    let mut out = Vec::new();
    let mut min_stat = f64::INFINITY;
    let mut min_norm_f = f64::INFINITY;
    for x in &shell.points {
        let rec = match kind {
            Kind::Ps | Kind::WeakPs => {
                // one descent serves both probes, so the accepted sets nest
                let target = 1e-3 * cfg.tau_abs / norm(x).max(1.0);
                let (z, s) = region.descend(x.clone(), &nu, target, cfg.descent_steps);
                let stat = if kind == Kind::Ps { s } else { s * norm(&z) };
                let limit = if kind == Kind::Ps { tau_k } else { cfg.tau_abs };
                min_stat = min_stat.min(stat);
                let rec = SampleRecord::at(problem, z, Some(shell.index)).with_nu(s);
                (stat <= limit).then_some(rec)
            }
            Kind::Mtame => {
                let (z, s) = region.descend(x.clone(), &gamma, 1e-3 * cfg.gamma_tol, cfg.descent_steps);
                min_stat = min_stat.min(s);
                let rec = SampleRecord::at(problem, z, Some(shell.index)).with_gamma(s);
                (s <= cfg.gamma_tol).then_some(rec)
            }
        };
        if let Some(r) = rec {
            min_norm_f = min_norm_f.min(norm(&r.fx));
            out.push(r);
        }
    }
    let summary = ShellSummary {
        shell: shell.index,
        inner_radius: shell.inner_radius,
        outer_radius: shell.outer_radius,
        samples: shell.points.len(),
        min_norm_f: min_norm_f.is_finite().then_some(min_norm_f),
        min_stat: min_stat.is_finite().then_some(min_stat),
    };
    (out, summary)
}

fn build_cloud(
    accepted: Vec<SampleRecord>,
    summary: Vec<ShellSummary>,
    shells: usize,
    cfg: &ProbeConfig,
) -> AsymptoticCloud {
    let tail = cfg.tail_start(shells);
    let total = accepted.len();
    let in_tail: Vec<SampleRecord> = accepted
        .into_iter()
        .filter(|r| r.shell.is_some_and(|s| s >= tail))
        .collect();
    if in_tail.is_empty() {
        return AsymptoticCloud {
            status: CloudStatus::Empty,
            candidates: Vec::new(),
            accepted: total,
            summary,
        };
    }
    let images: Vec<Vec<f64>> = in_tail.iter().map(|r| r.fx.clone()).collect();
    let mut candidates = Vec::new();
    for (rep, members) in cluster(&images, cfg.cluster_radius) {
        let mut support: Vec<usize> = members.iter().filter_map(|&i| in_tail[i].shell).collect();
        support.sort_unstable();
        support.dedup();
        if support.len() < cfg.min_shells {
            continue;
        }
        candidates.push(make_candidate(&in_tail, rep, &members));
    }
    let status = if candidates.is_empty() {
        CloudStatus::DivergentImages
    } else {
        CloudStatus::Candidates
    };
    AsymptoticCloud {
        status,
        candidates,
        accepted: total,
        summary,
    }
}

fn make_candidate(recs: &[SampleRecord], rep: usize, members: &[usize]) -> Candidate {
    let best_residual = members
        .iter()
        .map(|&i| recs[i].nu.or(recs[i].gamma).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min);
    Candidate {
        y: recs[rep].fx.clone(),
        best_residual,
        witness: members.iter().map(|&i| recs[i].clone()).collect(),
    }
}

/// Mode-seeking clustering. Each round picks the remaining point with the
/// highest triangular-kernel density `sum (1 - d / r)` over neighbours
/// within `r`, and takes every remaining point within `r` of it as its
/// cluster. Representatives are therefore more than `r` apart. Returns
/// `(representative, members)` in selection order; ties go to the lowest
/// index.
pub fn cluster(points: &[Vec<f64>], radius: f64) -> Vec<(usize, Vec<usize>)> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let cell = |p: &[f64]| -> Vec<i64> { p.iter().map(|v| libm::floor(v / radius) as i64).collect() };
    let mut grid: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    let dim = points[0].len();
    let offsets = neighbour_offsets(dim);
    let neighbours = |i: usize| -> Vec<(usize, f64)> {
        let c = cell(&points[i]);
        let mut out = Vec::new();
        for off in &offsets {
            let key: Vec<i64> = c.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(bucket) = grid.get(&key) {
                for &j in bucket {
                    let d = dist(&points[i], &points[j]);
                    if d <= radius {
                        out.push((j, d));
                    }
                }
            }
        }
        out
    };
    let kernel = |d: f64| 1.0 - d / radius;
    let mut score = vec![0.0; n];
    for (i, s) in score.iter_mut().enumerate() {
        *s = neighbours(i).iter().map(|&(_, d)| kernel(d)).sum();
    }
    let mut alive = vec![true; n];
    let mut out = Vec::new();
    loop {
        let mut best: Option<usize> = None;
        for i in 0..n {
            if alive[i] && best.is_none_or(|b| score[i] > score[b]) {
                best = Some(i);
            }
        }
        let Some(rep) = best else { break };
        let mut members: Vec<usize> = neighbours(rep)
            .into_iter()
            .filter(|&(j, _)| alive[j])
            .map(|(j, _)| j)
            .collect();
        members.sort_unstable();
        for &j in &members {
            alive[j] = false;
        }
        for &j in &members {
            for (q, d) in neighbours(j) {
                if alive[q] {
                    score[q] -= kernel(d);
                }
            }
        }
        out.push((rep, members));
    }
    out
}

fn neighbour_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|o| {
                [-1i64, 0, 1].into_iter().map(move |d| {
                    let mut v = o.clone();
                    v.push(d);
                    v
                })
            })
            .collect();
    }
    out
}

/// Properness at `ȳ`: fails when at least `min_shells` of the tail shells
/// hold a sublevel point with `|f(x)| <= bound_cap`. Each shell's smallest
/// `|f|` sample is first improved by a short descent on `|f|`.
pub fn properness_probe(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<Verdict> {
    check_ybar(problem, ybar)?;
    let cap = cfg.bound_cap_for(ybar);
    let shells = schedule.shell_count();
    let tail = cfg.tail_start(shells);
    let fnorm = |x: &[f64]| Some(norm(&problem.eval_unchecked(x)));
    let mut summary = Vec::with_capacity(shells);
    let mut witness = Vec::new();
    let mut bounded_tail = 0;
    for k in 0..shells {
        let shell = sample_shell(problem, ybar, schedule, seed, cfg, k);
        let region = Region {
            problem,
            ybar,
            shell: Some((shell.inner_radius, shell.outer_radius)),
            bbox: None,
            tol: cfg.sublevel_tol,
        };
        let best = shell
            .points
            .iter()
            .map(|x| (x, norm(&problem.eval_unchecked(x))))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let improved = best.map(|(x, _)| region.descend(x.clone(), &fnorm, 0.0, 20));
        if let Some((x, v)) = &improved {
            if *v <= cap {
                witness.push(SampleRecord::at(problem, x.clone(), Some(k)));
                if k >= tail {
                    bounded_tail += 1;
                }
            }
        }
        summary.push(ShellSummary {
            shell: k,
            inner_radius: shell.inner_radius,
            outer_radius: shell.outer_radius,
            samples: shell.points.len(),
            min_norm_f: improved.map(|(_, v)| v),
            min_stat: None,
        });
    }
    if bounded_tail >= cfg.min_shells.min(shells) && bounded_tail > 0 {
        Ok(Verdict::fails(witness, summary))
    } else {
        Ok(Verdict::holds(summary))
    }
}

/// Bounded-section evidence at a finite `ȳ`: every coordinate of `f` must
/// stay above `-divergence_threshold` on the sampled sublevel points. Each
/// shell's minimizer of every `f_i` is first improved by gradient descent.
/// The witness is the per-shell minimizing sequence of the offending
/// coordinate.
pub fn bounded_section_probe(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<Verdict> {
    check_ybar(problem, ybar)?;
    if !ybar.is_finite() {
        return Err(Error::Precondition("bounded-section probe needs a finite ȳ".into()));
    }
    let m = problem.m();
    let shells = schedule.shell_count();
    let mut per_coord: Vec<Vec<SampleRecord>> = vec![Vec::new(); m];
    let mut running = vec![f64::INFINITY; m];
    let mut summary = Vec::with_capacity(shells);
    for k in 0..shells {
        let shell = sample_shell(problem, ybar, schedule, seed, cfg, k);
        let region = Region {
            problem,
            ybar,
            shell: Some((shell.inner_radius, shell.outer_radius)),
            bbox: None,
            tol: cfg.sublevel_tol,
        };
        let mut shell_min = f64::INFINITY;
        for (i, f) in problem.objectives().iter().enumerate() {
            let Some(start) = shell
                .points
                .iter()
                .min_by(|a, b| f.eval(a).total_cmp(&f.eval(b)))
            else {
                continue;
            };
            let (x, v) = region.minimize(start.clone(), &|z: &[f64]| f.eval_grad(z), 30);
            shell_min = shell_min.min(v);
            if v < running[i] {
                running[i] = v;
                per_coord[i].push(SampleRecord::at(problem, x, Some(k)));
            }
        }
        summary.push(ShellSummary {
            shell: k,
            inner_radius: shell.inner_radius,
            outer_radius: shell.outer_radius,
            samples: shell.points.len(),
            min_norm_f: None,
            min_stat: shell_min.is_finite().then_some(shell_min),
        });
    }
    let diverging = (0..m).find(|&i| running[i] < -cfg.divergence_threshold);
    match diverging {
        Some(i) => Ok(Verdict::fails(core::mem::take(&mut per_coord[i]), summary)),
        None => Ok(Verdict::holds(summary)),
    }
}

/// `K_{0,≦ȳ}` probe: multi-start `ν` descent from the grid points inside
/// the box, accepting `ν <= crit_tol`. No shell support is required.
pub fn k_zero_cloud(
    problem: &Problem,
    ybar: &SublevelBound,
    grid: &GridSpec,
    mode: RabierMode,
    cfg: &ProbeConfig,
) -> Result<AsymptoticCloud> {
    check_ybar(problem, ybar)?;
    if grid.dim() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: grid.dim(),
        });
    }
    let region = Region {
        problem,
        ybar,
        shell: None,
        bbox: Some((grid.lower(), grid.upper())),
        tol: cfg.sublevel_tol,
    };
    let nu = nu_of(problem, mode, cfg.minnorm_tol);
    let mut accepted = Vec::new();
    for seed in grid.points() {
        let Some(x) = region.repair(&seed) else {
            continue;
        };
        let (z, s) = region.descend(x, &nu, 1e-3 * cfg.crit_tol, cfg.descent_steps);
        if s <= cfg.crit_tol {
            accepted.push(SampleRecord::at(problem, z, None).with_nu(s));
        }
    }
    let images: Vec<Vec<f64>> = accepted.iter().map(|r| r.fx.clone()).collect();
    let candidates: Vec<Candidate> = cluster(&images, cfg.cluster_radius)
        .into_iter()
        .map(|(rep, members)| make_candidate(&accepted, rep, &members))
        .collect();
    Ok(AsymptoticCloud {
        status: if candidates.is_empty() {
            CloudStatus::Empty
        } else {
            CloudStatus::Candidates
        },
        candidates,
        accepted: accepted.len(),
        summary: Vec::new(),
    })
}

/// The four conditions of the equivalence theorem at one sublevel.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CrossCheck {
    pub section: Verdict,
    pub proper: Verdict,
    pub ps: AsymptoticCloud,
    pub weak_ps: AsymptoticCloud,
    pub mtame: AsymptoticCloud,
}

impl CrossCheck {
    /// `[proper, K̃ empty, K empty, T empty]`.
    pub fn flags(&self) -> [bool; 4] {
        [
            self.proper.is_holds(),
            self.ps.is_empty(),
            self.weak_ps.is_empty(),
            self.mtame.is_empty(),
        ]
    }

    /// True when all four flags agree.
    pub fn consistent(&self) -> bool {
        let f = self.flags();
        f.iter().all(|b| *b == f[0])
    }
}

/// Runs the properness, PS, weak PS and M-tameness probes under the
/// bounded-section hypothesis. Disagreement is reported, not reconciled.
pub fn theorem31_crosscheck(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<CrossCheck> {
    let section = bounded_section_probe(problem, ybar, schedule, seed, cfg)?;
    if section.status == Status::FailsWithWitness {
        let w = &section.witness[section.witness.len() - 1];
        return Err(Error::Precondition(format!(
            "bounded-section probe failed: f = {:?} at |x| = {:e}",
            w.fx, w.norm_x
        )));
    }
    Ok(CrossCheck {
        proper: properness_probe(problem, ybar, schedule, seed, cfg)?,
        ps: ps_probe(problem, ybar, schedule, mode, seed, cfg)?,
        weak_ps: weak_ps_probe(problem, ybar, schedule, mode, seed, cfg)?,
        mtame: mtame_probe(problem, ybar, schedule, mode, seed, cfg)?,
        section,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_separates_groups() {
        let pts: Vec<Vec<f64>> = [0.0, 0.001, 0.002, 1.0, 1.003, 5.0]
            .iter()
            .map(|v| vec![*v])
            .collect();
        let cl = cluster(&pts, 0.01);
        assert_eq!(cl.len(), 3);
        assert_eq!(cl[0].1, vec![0, 1, 2]);
        assert_eq!(cl[0].0, 1);
    }

    #[test]
    fn cluster_prefers_the_dense_pile() {
        // a pile at 0 and a thin spread toward -0.01
        let mut pts: Vec<Vec<f64>> = (0..50).map(|_| vec![0.0]).collect();
        pts.extend((1..10).map(|i| vec![-0.001 * i as f64]));
        let cl = cluster(&pts, 0.01);
        assert_eq!(pts[cl[0].0], vec![0.0]);
    }

    #[test]
    fn schedule_validation() {
        assert!(RadiusSchedule::new(vec![1.0, 1.0], 4).is_err());
        assert!(RadiusSchedule::new(vec![-1.0, 1.0], 4).is_err());
        let s = RadiusSchedule::default();
        assert_eq!(s.shell_count(), 20);
        assert_eq!(s.shell(19), (524_288.0, 1_048_576.0));
    }
}
