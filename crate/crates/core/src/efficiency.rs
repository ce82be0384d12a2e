//! Pareto and Geoffrion efficiency, weighted-sum scalarization and the
//! recession-cone condition.
//!
//! Geoffrion properness quantifies over all of `Ω`, so [`geoffrion_check`]
//! can only refute it on a finite sample or report consistency up to a
//! trade-off bound `M`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::asymptotics::{
    bounded_section_probe, cluster, k_zero_cloud, mtame_probe, properness_probe, ps_probe,
    sample_shell, weak_ps_probe, AsymptoticCloud, ProbeConfig, RadiusSchedule,
};
use crate::linalg::{axpy, dist, dot, norm, norm_sq};
use crate::minnorm::RabierMode;
use crate::oracle::GridSpec;
use crate::search::Region;
use crate::verdict::{SampleRecord, Verdict};
use crate::{Error, FeasibleSet, Problem, Result, SublevelBound};

/// `y1 <= y2` componentwise with `y1 != y2`.
pub fn dominates(y1: &[f64], y2: &[f64]) -> Result<bool> {
    if y1.len() != y2.len() {
        return Err(Error::DimensionMismatch {
            expected: y2.len(),
            got: y1.len(),
        });
    }
    Ok(y1.iter().zip(y2).all(|(a, b)| a <= b) && y1 != y2)
}

/// True if `y` is no worse than `yref + tol` everywhere and better than
/// `yref - tol` somewhere.
pub fn dominates_by_margin(y: &[f64], yref: &[f64], tol: f64) -> bool {
    y.iter().zip(yref).all(|(a, b)| *a <= b + tol) && y.iter().zip(yref).any(|(a, b)| *a < b - tol)
}

fn check_point(problem: &Problem, x: &[f64], tol: f64) -> Result<()> {
    if x.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: x.len(),
        });
    }
    let violation = problem.feasible().violation(x);
    if violation > tol {
        return Err(Error::Infeasible { violation });
    }
    Ok(())
}

/// Pareto efficiency of `x̄` relative to the feasible points of `samples`.
/// Fails with the first sample whose image dominates `f(x̄)` by more than
/// `tol` in some coordinate.
pub fn pareto_verify(problem: &Problem, xbar: &[f64], samples: &[Vec<f64>], tol: f64) -> Result<Verdict> {
    check_point(problem, xbar, tol)?;
    let fbar = problem.eval_unchecked(xbar);
    for x in samples {
        if x.len() != problem.n() || !problem.feasible().is_feasible(x, tol) {
            continue;
        }
        let fx = problem.eval_unchecked(x);
        if dominates_by_margin(&fx, &fbar, tol) {
            return Ok(Verdict::fails(
                vec![SampleRecord::at(problem, x.clone(), None)],
                Vec::new(),
            ));
        }
    }
    Ok(Verdict::holds(Vec::new()))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum GeoffrionStatus {
    /// No sampled trade-off ratio exceeded the tested bound.
    ConsistentUpTo(f64),
    /// At `x`, objective `i` improves and every worsening objective gives a
    /// ratio above `M`; `min_ratio` is `+inf` when none worsens.
    Violation { x: Vec<f64>, i: usize, min_ratio: f64 },
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeoffrionReport {
    pub status: GeoffrionStatus,
    pub m_tested: f64,
}

/// Smallest trade-off ratio `(f_i(x̄) - f_i(x)) / (f_j(x) - f_j(x̄))` over
/// the objectives `j` that worsen by more than `tol`.
pub fn min_tradeoff(fbar: &[f64], fx: &[f64], i: usize, tol: f64) -> f64 {
    let gain = fbar[i] - fx[i];
    fx.iter()
        .zip(fbar)
        .filter(|(a, b)| **a > **b + tol)
        .map(|(a, b)| gain / (a - b))
        .fold(f64::INFINITY, f64::min)
}

/// Geoffrion check of `x̄` with bound `M` over `samples`, in sample order.
/// `x̄` must first pass [`pareto_verify`] on the same samples.
pub fn geoffrion_check(
    problem: &Problem,
    xbar: &[f64],
    m_bound: f64,
    samples: &[Vec<f64>],
    tol: f64,
) -> Result<GeoffrionReport> {
    if !(m_bound > 0.0) {
        return Err(Error::InvalidProblem("M must be positive".into()));
    }
    let pre = pareto_verify(problem, xbar, samples, tol)?;
    if !pre.is_holds() {
        return Err(Error::ParetoViolation {
            witness: pre.witness[0].x.clone(),
        });
    }
    let fbar = problem.eval_unchecked(xbar);
    for x in samples {
        if x.len() != problem.n() || !problem.feasible().is_feasible(x, tol) {
            continue;
        }
        let fx = problem.eval_unchecked(x);
        for i in 0..problem.m() {
            if fx[i] < fbar[i] - tol {
                let r = min_tradeoff(&fbar, &fx, i, tol);
                if r > m_bound {
                    return Ok(GeoffrionReport {
                        status: GeoffrionStatus::Violation {
                            x: x.clone(),
                            i,
                            min_ratio: r,
                        },
                        m_tested: m_bound,
                    });
                }
            }
        }
    }
    Ok(GeoffrionReport {
        status: GeoffrionStatus::ConsistentUpTo(m_bound),
        m_tested: m_bound,
    })
}

/// Settings for [`scalarize_solve`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalarizationConfig {
    /// Strictly positive weights.
    pub lambda: Vec<f64>,
    pub ybar: SublevelBound,
    pub starts: usize,
    /// Finite search box.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub max_iter: usize,
    pub penalty_rounds: usize,
    /// Feasibility and dominance slack.
    pub tol: f64,
    pub seed: u64,
}

impl ScalarizationConfig {
    pub fn new(lambda: Vec<f64>, ybar: SublevelBound, lower: Vec<f64>, upper: Vec<f64>) -> Self {
        ScalarizationConfig {
            lambda,
            ybar,
            starts: 64,
            lower,
            upper,
            max_iter: 500,
            penalty_rounds: 8,
            tol: 1e-9,
            seed: 0,
        }
    }

    fn validate(&self, problem: &Problem) -> Result<()> {
        let m = problem.m();
        if self.lambda.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: self.lambda.len(),
            });
        }
        if self.lambda.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidProblem("weights must be strictly positive".into()));
        }
        self.ybar.check_dim(m)?;
        let n = problem.n();
        if self.lower.len() != n || self.upper.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.lower.len().min(self.upper.len()),
            });
        }
        if self
            .lower
            .iter()
            .zip(&self.upper)
            .any(|(l, u)| !(l.is_finite() && u.is_finite() && l <= u))
        {
            return Err(Error::InvalidProblem("search box must be finite".into()));
        }
        if self.starts == 0 {
            return Err(Error::InvalidProblem("need at least one start".into()));
        }
        Ok(())
    }

    /// Grid used as the Pareto oracle for a solution in this box.
    pub fn oracle_grid(&self) -> Result<GridSpec> {
        let n = self.lower.len();
        let per_axis = match n {
            1 => 2001,
            2 => 201,
            3 => 41,
            _ => (libm::pow(1e6, 1.0 / n as f64) as usize).max(2),
        };
        GridSpec::new(self.lower.clone(), self.upper.clone(), vec![per_axis; n])
    }
}

/// A scalarization minimizer with its Pareto verdict.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalarResult {
    pub x: Vec<f64>,
    pub fx: Vec<f64>,
    /// `<λ, f(x)>`.
    pub value: f64,
    pub verdict: Verdict,
}

/// Penalized weighted sum and a gradient selection.
fn penalized(problem: &Problem, cfg: &ScalarizationConfig, rho: f64, x: &[f64]) -> (f64, Vec<f64>) {
    let n = x.len();
    let mut v = 0.0;
    let mut g = vec![0.0; n];
    for ((f, l), b) in problem.objectives().iter().zip(&cfg.lambda).zip(cfg.ybar.values()) {
        let (fv, fg) = f.eval_grad(x);
        v += l * fv;
        axpy(&mut g, *l, &fg);
        if b.is_finite() && fv > *b {
            let e = fv - b;
            v += rho * e * e;
            axpy(&mut g, 2.0 * rho * e, &fg);
        }
    }
    if let FeasibleSet::SmoothIneq(gs) = problem.feasible() {
        for c in gs {
            let (cv, cg) = c.eval_grad(x);
            if cv > 0.0 {
                v += rho * cv * cv;
                axpy(&mut g, 2.0 * rho * cv, &cg);
            }
        }
    }
    (v, g)
}

/// Projection onto the box, then onto `Ω` for boxes and polyhedra. Smooth
/// constraints are handled by the penalty instead.
fn project_hard(problem: &Problem, cfg: &ScalarizationConfig, x: &[f64]) -> Option<Vec<f64>> {
    let mut y: Vec<f64> = x
        .iter()
        .zip(cfg.lower.iter().zip(&cfg.upper))
        .map(|(v, (l, u))| v.clamp(*l, *u))
        .collect();
    match problem.feasible() {
        FeasibleSet::Full | FeasibleSet::SmoothIneq(_) => {}
        set => {
            y = set.project(&y)?;
            // the projection may leave the search box; clamp once more
            for (v, (l, u)) in y.iter_mut().zip(cfg.lower.iter().zip(&cfg.upper)) {
                *v = v.clamp(*l, *u);
            }
        }
    }
    y.iter().all(|v| v.is_finite()).then_some(y)
}

fn projected_descent(problem: &Problem, cfg: &ScalarizationConfig, rho: f64, x0: Vec<f64>) -> Vec<f64> {
    let mut x = x0;
    let (mut v, mut g) = penalized(problem, cfg, rho, &x);
    let mut t = 1.0;
    for _ in 0..cfg.max_iter {
        if !v.is_finite() || norm_sq(&g) == 0.0 {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let mut z = x.clone();
            axpy(&mut z, -t, &g);
            let Some(z) = project_hard(problem, cfg, &z) else {
                t *= 0.5;
                continue;
            };
            let (vz, gz) = penalized(problem, cfg, rho, &z);
            let moved: Vec<f64> = z.iter().zip(&x).map(|(a, b)| a - b).collect();
            // Armijo condition on the projected step
            if vz <= v - 1e-4 * norm_sq(&moved) / t {
                let step = norm(&moved);
                x = z;
                v = vz;
                g = gz;
                accepted = step > 1e-15 * (1.0 + norm(&x));
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        t *= 2.0;
    }
    x
}

/// Minimizes `<λ, f(x)>` over `Ω ∩ {f <= ȳ}` inside the search box by
/// multi-start projected gradient descent with Armijo backtracking.
/// Sublevel and smooth constraints enter through a quadratic penalty whose
/// weight doubles each round; the result is then repaired onto the
/// sublevel set. The best repaired point is checked for Pareto efficiency
/// against a grid over the box.
pub fn scalarize_solve(problem: &Problem, cfg: &ScalarizationConfig) -> Result<ScalarResult> {
    cfg.validate(problem)?;
    let n = problem.n();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centre: Vec<f64> = cfg.lower.iter().zip(&cfg.upper).map(|(l, u)| 0.5 * (l + u)).collect();
    let region = Region {
        problem,
        ybar: &cfg.ybar,
        shell: None,
        bbox: Some((&cfg.lower, &cfg.upper)),
        tol: cfg.tol,
    };
    let rho0 = 10.0 * cfg.lambda.iter().fold(0.0f64, |a, b| a.max(*b));
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut any_finite = false;
    let mut any_repaired = false;
    for s in 0..cfg.starts {
        let start: Vec<f64> = if s == 0 {
            centre.clone()
        } else {
            (0..n)
                .map(|i| cfg.lower[i] + (cfg.upper[i] - cfg.lower[i]) * rng.gen::<f64>())
                .collect()
        };
        let Some(mut x) = project_hard(problem, cfg, &start) else {
            continue;
        };
        let mut rho = rho0;
        for _ in 0..cfg.penalty_rounds {
            x = projected_descent(problem, cfg, rho, x);
            rho *= 2.0;
        }
        if x.iter().all(|v| v.is_finite()) {
            any_finite = true;
        }
        let Some(x) = region.repair(&x) else {
            continue;
        };
        any_repaired = true;
        // a last unpenalized polish that keeps the point admissible
        let weighted = |z: &[f64]| {
            let (v, g) = penalized(problem, cfg, 0.0, z);
            (v, g)
        };
        let (x, v) = region.minimize(x, &weighted, 50);
        if !v.is_finite() {
            continue;
        }
        if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
            best = Some((x, v));
        }
    }
    let Some((x, value)) = best else {
        return Err(if any_finite && !any_repaired {
            Error::EmptySublevel
        } else {
            Error::SearchFailure
        });
    };
    let grid = cfg.oracle_grid()?;
    let samples: Vec<Vec<f64>> = grid.points().collect();
    let verdict = pareto_verify(problem, &x, &samples, cfg.tol)?;
    let fx = problem.eval_unchecked(&x);
    Ok(ScalarResult { x, fx, value, verdict })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrontPoint {
    pub lambda: Vec<f64>,
    pub x: Vec<f64>,
    pub fx: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontReport {
    /// Pareto-verified points, deduplicated by image.
    pub points: Vec<FrontPoint>,
    /// Weights whose solve failed or whose point did not verify.
    pub failures: Vec<(Vec<f64>, Option<Error>)>,
}

/// Runs [`scalarize_solve`] for each weight vector and merges the results.
pub fn pareto_front(
    problem: &Problem,
    ybar: &SublevelBound,
    lambdas: &[Vec<f64>],
    base: &ScalarizationConfig,
    cluster_radius: f64,
) -> FrontReport {
    let results: Vec<(Vec<f64>, Result<ScalarResult>)> = lambdas
        .iter()
        .map(|l| {
            let mut cfg = base.clone();
            cfg.lambda = l.clone();
            cfg.ybar = ybar.clone();
            (l.clone(), scalarize_solve(problem, &cfg))
        })
        .collect();
    merge_front(results, cluster_radius)
}

/// Merges per-weight results in input order: verified points are kept
/// unless their image is within `cluster_radius` of an earlier one.
pub fn merge_front(results: Vec<(Vec<f64>, Result<ScalarResult>)>, cluster_radius: f64) -> FrontReport {
    let mut points: Vec<FrontPoint> = Vec::new();
    let mut failures = Vec::new();
    for (lambda, res) in results {
        match res {
            Ok(r) if r.verdict.is_holds() => {
                if points.iter().all(|p| dist(&p.fx, &r.fx) > cluster_radius) {
                    points.push(FrontPoint {
                        lambda,
                        x: r.x,
                        fx: r.fx,
                    });
                }
            }
            Ok(_) => failures.push((lambda, None)),
            Err(e) => failures.push((lambda, Some(e))),
        }
    }
    FrontReport { points, failures }
}

/// Settings for [`recession_probe`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecessionConfig {
    /// Images with `|f(x)|` below this are ignored.
    pub norm_floor: f64,
    pub direction_tol: f64,
    pub cluster_radius: f64,
}

impl Default for RecessionConfig {
    fn default() -> Self {
        RecessionConfig {
            norm_floor: 10.0,
            direction_tol: 1e-3,
            cluster_radius: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecessionReport {
    /// Estimated unit recession directions of `f(Ω)`.
    pub directions: Vec<Vec<f64>>,
    /// Evidence that the recession cone meets the negative orthant only at 0.
    pub eq8_holds: bool,
    /// A unit vector `<= 0` in the recession cone, when one was found.
    pub witness: Option<Vec<f64>>,
}

/// Estimates recession directions of `f(Ω)` from normalized images
/// `f(x) / |f(x)|` of feasible samples on the tail shells. Each direction
/// cluster is represented by its member of largest `|f|`.
pub fn recession_probe(
    problem: &Problem,
    schedule: &RadiusSchedule,
    seed: u64,
    probe: &ProbeConfig,
    cfg: &RecessionConfig,
) -> Result<RecessionReport> {
    let all = SublevelBound::unrestricted(problem.m());
    let shells = schedule.shell_count();
    let tail = shells.saturating_sub(probe.tail_shells);
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    let mut scale: Vec<f64> = Vec::new();
    for k in tail..shells {
        let shell = sample_shell(problem, &all, schedule, seed, probe, k);
        for x in &shell.points {
            let fx = problem.eval_unchecked(x);
            let r = norm(&fx);
            if r >= cfg.norm_floor && r.is_finite() {
                dirs.push(fx.iter().map(|v| v / r).collect());
                scale.push(r);
            }
        }
    }
    let mut directions = Vec::new();
    for (_, members) in cluster(&dirs, cfg.cluster_radius) {
        let far = members
            .iter()
            .copied()
            .max_by(|&a, &b| scale[a].total_cmp(&scale[b]))
            .expect("clusters are nonempty");
        directions.push(dirs[far].clone());
    }
    let mut witness = None;
    for d in &directions {
        if d.iter().all(|v| *v <= cfg.direction_tol) {
            let clipped: Vec<f64> = d.iter().map(|v| v.min(0.0)).collect();
            let c = norm(&clipped);
            if c > 0.0 {
                witness = Some(clipped.iter().map(|v| v / c).collect());
                break;
            }
        }
    }
    Ok(RecessionReport {
        directions,
        eq8_holds: witness.is_none(),
        witness,
    })
}

/// Section and properness evidence at one `ȳ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectionCheck {
    pub ybar: Vec<f64>,
    pub section: Verdict,
    pub proper: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ExistenceStatus {
    /// The recession condition and global properness evidence both hold.
    SufficientEvidence,
    /// A recession witness refutes the necessary condition.
    Refuted,
    /// Neither of the above.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExistenceReport {
    pub status: ExistenceStatus,
    pub recession: RecessionReport,
    pub sections: Vec<SectionCheck>,
}

/// `ȳ` values for the global section test: images of the projected origin
/// and of the first sample on each of the first three shells.
pub fn section_levels(problem: &Problem, schedule: &RadiusSchedule, seed: u64, cfg: &ProbeConfig) -> Vec<Vec<f64>> {
    let all = SublevelBound::unrestricted(problem.m());
    let mut out: Vec<Vec<f64>> = Vec::new();
    if let Some(o) = problem.feasible().project(&vec![0.0; problem.n()]) {
        out.push(problem.eval_unchecked(&o));
    }
    for k in 0..schedule.shell_count().min(3) {
        let shell = sample_shell(problem, &all, schedule, seed, cfg, k);
        if let Some(x) = shell.points.first() {
            out.push(problem.eval_unchecked(x));
        }
    }
    out.retain(|y| y.iter().all(|v| v.is_finite()));
    out
}

/// Combines the recession condition (necessary) with bounded-section and
/// properness evidence at a few sublevels (sufficient together with it).
pub fn geoffrion_existence_report(
    problem: &Problem,
    schedule: &RadiusSchedule,
    levels: &[Vec<f64>],
    seed: u64,
    probe: &ProbeConfig,
    rec: &RecessionConfig,
) -> Result<ExistenceReport> {
    let recession = recession_probe(problem, schedule, seed, probe, rec)?;
    let mut sections = Vec::with_capacity(levels.len());
    for y in levels {
        let ybar = SublevelBound::new(y.clone())?;
        sections.push(SectionCheck {
            ybar: y.clone(),
            section: bounded_section_probe(problem, &ybar, schedule, seed, probe)?,
            proper: properness_probe(problem, &ybar, schedule, seed, probe)?,
        });
    }
    let global = !sections.is_empty() && sections.iter().all(|s| s.section.is_holds() && s.proper.is_holds());
    let status = if !recession.eq8_holds {
        ExistenceStatus::Refuted
    } else if global {
        ExistenceStatus::SufficientEvidence
    } else {
        ExistenceStatus::Inconclusive
    };
    Ok(ExistenceReport {
        status,
        recession,
        sections,
    })
}

/// Cloud-inclusion checks against the critical-value cloud.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InclusionReport {
    pub k_zero: AsymptoticCloud,
    pub ps: AsymptoticCloud,
    pub weak_ps: AsymptoticCloud,
    pub mtame: AsymptoticCloud,
    /// Whether every candidate of the PS, weak PS and M-tame clouds lies
    /// within `cluster_radius` of a critical value.
    pub included: [bool; 3],
}

/// True if every candidate of `inner` is within `radius` of one in `outer`.
pub fn cloud_included(inner: &AsymptoticCloud, outer: &AsymptoticCloud, radius: f64) -> bool {
    inner
        .candidates
        .iter()
        .all(|c| outer.candidates.iter().any(|o| dist(&c.y, &o.y) <= radius))
}

/// Existence of Pareto points at `ȳ` through inclusion of the asymptotic
/// clouds in the critical-value cloud.
pub fn pareto_existence_report(
    problem: &Problem,
    ybar: &SublevelBound,
    schedule: &RadiusSchedule,
    grid: &GridSpec,
    mode: RabierMode,
    seed: u64,
    cfg: &ProbeConfig,
) -> Result<InclusionReport> {
    let k_zero = k_zero_cloud(problem, ybar, grid, mode, cfg)?;
    let ps = ps_probe(problem, ybar, schedule, mode, seed, cfg)?;
    let weak_ps = weak_ps_probe(problem, ybar, schedule, mode, seed, cfg)?;
    let mtame = mtame_probe(problem, ybar, schedule, mode, seed, cfg)?;
    let r = cfg.cluster_radius;
    let included = [
        cloud_included(&ps, &k_zero, r),
        cloud_included(&weak_ps, &k_zero, r),
        cloud_included(&mtame, &k_zero, r),
    ];
    Ok(InclusionReport {
        k_zero,
        ps,
        weak_ps,
        mtame,
        included,
    })
}

/// Weighted sum `<λ, y>`.
pub fn weighted(lambda: &[f64], y: &[f64]) -> f64 {
    dot(lambda, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Expr;

    fn x1() -> Expr {
        Expr::var(0)
    }

    fn remark() -> Problem {
        Problem::new(1, vec![x1(), x1().powi(2)], FeasibleSet::Full).unwrap()
    }

    fn example_41() -> Problem {
        Problem::new(1, vec![-(x1().powi(2)), x1()], FeasibleSet::half_line(0.0)).unwrap()
    }

    fn grid(lo: f64, hi: f64, step: f64) -> Vec<Vec<f64>> {
        GridSpec::with_spacing(vec![lo], vec![hi], step).unwrap().points().collect()
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&[1.0, 2.0], &[1.0, 3.0]).unwrap());
        assert!(!dominates(&[1.0, 2.0], &[1.0, 2.0]).unwrap());
        assert!(!dominates(&[0.0, 5.0], &[1.0, 3.0]).unwrap());
        assert!(dominates(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn pareto_examples() {
        let ex = example_41();
        assert!(pareto_verify(&ex, &[1.0], &grid(0.0, 10.0, 1e-3), 1e-12).unwrap().is_holds());
        let r = remark();
        let samples = grid(-5.0, 5.0, 1e-3);
        assert!(pareto_verify(&r, &[-0.5], &samples, 1e-12).unwrap().is_holds());
        let v = pareto_verify(&r, &[1.0], &samples, 1e-12).unwrap();
        assert!(!v.is_holds());
    }

    #[test]
    fn geoffrion_example_41() {
        let ex = example_41();
        let rep = geoffrion_check(&ex, &[1.0], 10.0, &[vec![20.0]], 1e-12).unwrap();
        match rep.status {
            GeoffrionStatus::Violation { x, i, min_ratio } => {
                assert_eq!((x[0], i), (20.0, 0));
                assert!((min_ratio - 21.0).abs() < 1e-9);
            }
            s => panic!("unexpected {s:?}"),
        }
    }

    #[test]
    fn geoffrion_remark_level() {
        // branch ratios are 1/(1/2 - x) for x < -1/2 and 1/2 - x on
        // (-1/2, 1/2); both stay below their supremum 1
        let r = remark();
        let samples = grid(-5.0, 5.0, 1e-3);
        let ok = geoffrion_check(&r, &[-0.5], 1.0, &samples, 1e-12).unwrap();
        assert_eq!(ok.status, GeoffrionStatus::ConsistentUpTo(1.0));
        let bad = geoffrion_check(&r, &[-0.5], 0.99, &samples, 1e-12).unwrap();
        assert!(matches!(bad.status, GeoffrionStatus::Violation { .. }));
    }

    #[test]
    fn geoffrion_requires_pareto() {
        let err = geoffrion_check(&remark(), &[1.0], 5.0, &grid(-5.0, 5.0, 0.01), 1e-12).unwrap_err();
        assert!(matches!(err, Error::ParetoViolation { .. }));
    }

    #[test]
    fn scalarize_examples() {
        let r = remark();
        let ybar = SublevelBound::new(vec![0.0, 1.0]).unwrap();
        let cfg = ScalarizationConfig::new(vec![1.0, 1.0], ybar.clone(), vec![-5.0], vec![5.0]);
        let s = scalarize_solve(&r, &cfg).unwrap();
        assert!((s.x[0] + 0.5).abs() < 1e-6, "{:?}", s.x);
        assert!(s.verdict.is_holds());
        let cfg = ScalarizationConfig::new(vec![2.0, 1.0], ybar, vec![-5.0], vec![5.0]);
        let s = scalarize_solve(&r, &cfg).unwrap();
        assert!((s.x[0] + 1.0).abs() < 1e-6, "{:?}", s.x);

        let ex = example_41();
        let ybar = SublevelBound::new(vec![-4.0, 2.0]).unwrap();
        let cfg = ScalarizationConfig::new(vec![1.0, 1.0], ybar, vec![0.0], vec![10.0]);
        let s = scalarize_solve(&ex, &cfg).unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-6, "{:?}", s.x);
    }

    #[test]
    fn empty_sublevel_is_reported() {
        let q = Problem::new(1, vec![x1().powi(2)], FeasibleSet::Full).unwrap();
        let ybar = SublevelBound::new(vec![-1.0]).unwrap();
        let cfg = ScalarizationConfig::new(vec![1.0], ybar, vec![-5.0], vec![5.0]);
        assert!(matches!(scalarize_solve(&q, &cfg), Err(Error::EmptySublevel)));
    }

    #[test]
    fn front_examples() {
        let r = remark();
        let ybar = SublevelBound::unrestricted(2);
        let base = ScalarizationConfig::new(vec![1.0, 1.0], ybar.clone(), vec![-5.0], vec![5.0]);
        let lambdas = vec![vec![1.0, 1.0], vec![2.0, 1.0], vec![1.0, 2.0]];
        let front = pareto_front(&r, &ybar, &lambdas, &base, 1e-2);
        assert_eq!(front.points.len(), 3);
        let expect = [[-0.5, 0.25], [-1.0, 1.0], [-0.25, 0.0625]];
        for (p, e) in front.points.iter().zip(expect) {
            assert!(dist(&p.fx, &e) < 1e-6, "{:?}", p.fx);
        }
    }

    #[test]
    fn recession_examples() {
        let sched = RadiusSchedule::default();
        let probe = ProbeConfig::default();
        let rc = RecessionConfig::default();
        let r = recession_probe(&remark(), &sched, 7, &probe, &rc).unwrap();
        assert!(r.eq8_holds);
        assert!(r.directions.iter().any(|d| dist(d, &[0.0, 1.0]) < 1e-3));
        let e = recession_probe(&example_41(), &sched, 7, &probe, &rc).unwrap();
        assert!(!e.eq8_holds);
        assert!(dist(e.witness.as_ref().unwrap(), &[-1.0, 0.0]) < 1e-6);
    }
}
