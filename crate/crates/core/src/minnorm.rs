//! Min-norm points over `conv(V) + cone(R)` and the Rabier function.
//!
//! [`min_norm_point`] runs Wolfe's algorithm on the finite point set
//! `{v} ∪ {v + B r/|r|}`, whose hull is `conv(V)` plus the cone truncated at
//! total weight `B`. The bound starts at ten times the largest vertex norm
//! and doubles until the ray certificate `<z, r> >= -tol` holds.
//!
//! [`rabier_nu`] evaluates the extended Rabier function one sign pattern at
//! a time. For convex `S_i` the union over the unit simplex of
//! `sum_i λ_i S_i` equals `conv(∪ S_i)`, so each pattern is a single
//! min-norm program. Since the calculus polytopes over-approximate, the
//! value is a lower bound on the true `ν`; it is exact for smooth data.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{neg_subdiff, normal_cone, subdiff, Cone, Polytope, ACT_TOL};
use crate::linalg::{axpy, dot, norm, norm_sq, solve};
use crate::{Error, Problem, Result};

/// Default iteration cap for Wolfe's algorithm (major plus minor cycles).
pub const MAX_ITER: usize = 10_000;

/// Default tolerance for declaring `x ∈ Γ`.
pub const GAMMA_TOL: f64 = 1e-6;

/// Default threshold for `ν(x) = 0`.
pub const CRIT_TOL: f64 = 1e-6;

const RAY_BOUND_CAP: f64 = 1_152_921_504_606_846_976.0; // 2^60

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MinNormResult {
    /// Distance from the origin, equal to `|point|`.
    pub value: f64,
    pub point: Vec<f64>,
    /// Convex weights over the polytope vertices.
    pub hull_coeffs: Vec<f64>,
    /// Nonnegative weights over the cone rays.
    pub cone_coeffs: Vec<f64>,
}

impl MinNormResult {
    /// Optimality residuals `(vertex, ray)`: the largest values of
    /// `|z|^2 - <z, v>` and `-<z, r>` over vertices and rays, clipped at 0.
    pub fn certificate(&self, polytope: &Polytope, cone: &Cone) -> (f64, f64) {
        let zz = norm_sq(&self.point);
        let vgap = polytope
            .vertices()
            .iter()
            .map(|v| zz - dot(&self.point, v))
            .fold(0.0, f64::max);
        let rgap = cone
            .rays()
            .iter()
            .map(|r| -dot(&self.point, r))
            .fold(0.0, f64::max);
        (vgap, rgap)
    }
}

/// Min-norm point of `conv(polytope) + cone` with certificate tolerance `tol`.
pub fn min_norm_point(polytope: &Polytope, cone: &Cone, tol: f64) -> Result<MinNormResult> {
    min_norm_point_with(polytope, cone, tol, MAX_ITER)
}

pub fn min_norm_point_with(
    polytope: &Polytope,
    cone: &Cone,
    tol: f64,
    max_iter: usize,
) -> Result<MinNormResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidProblem("tolerance must be positive".into()));
    }
    let n = polytope.dim();
    if let Some(r) = cone.rays().iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    let verts = polytope.vertices();
    if cone.is_trivial() {
        let w = wolfe(verts, tol, max_iter).map_err(|(iters, gap, weights)| {
            no_convergence(iters, gap, finish(verts, &[], &weights, 1.0, verts.len()))
        })?;
        return Ok(finish(verts, &[], &w, 1.0, verts.len()));
    }

    let units: Vec<Vec<f64>> = cone
        .rays()
        .iter()
        .map(|r| {
            let s = 1.0 / norm(r);
            r.iter().map(|c| c * s).collect()
        })
        .collect();
    let vmax = verts.iter().map(|v| norm(v)).fold(0.0, f64::max);
    let mut bound = if vmax > 0.0 { 10.0 * vmax } else { 10.0 };
    loop {
        let points = augmented(verts, &units, bound);
        let res = match wolfe(&points, tol, max_iter) {
            Ok(w) => finish(verts, cone.rays(), &w, bound, verts.len()),
            Err((iters, gap, w)) => {
                return Err(no_convergence(
                    iters,
                    gap,
                    finish(verts, cone.rays(), &w, bound, verts.len()),
                ))
            }
        };
        let (_, rgap) = res.certificate(polytope, cone);
        if rgap <= tol || bound >= RAY_BOUND_CAP {
            return Ok(res);
        }
        bound *= 2.0;
    }
}

fn no_convergence(iterations: usize, gap: f64, best: MinNormResult) -> Error {
    Error::NoConvergence {
        iterations,
        gap,
        best: Box::new(best),
    }
}

/// Point list `v_0..v_{k-1}` followed by `v_i + B u_j` in `(i, j)` order.
fn augmented(verts: &[Vec<f64>], units: &[Vec<f64>], bound: f64) -> Vec<Vec<f64>> {
    let mut pts = verts.to_vec();
    for v in verts {
        for u in units {
            let mut p = v.clone();
            axpy(&mut p, bound, u);
            pts.push(p);
        }
    }
    pts
}

/// Maps augmented weights back to hull and cone coefficients and rebuilds
/// the point from them.
fn finish(
    verts: &[Vec<f64>],
    rays: &[Vec<f64>],
    weights: &[f64],
    bound: f64,
    k: usize,
) -> MinNormResult {
    let r = rays.len();
    let mut hull = vec![0.0; k];
    let mut cone = vec![0.0; r];
    for (idx, w) in weights.iter().enumerate() {
        if idx < k {
            hull[idx] += w;
        } else {
            let a = idx - k;
            let (i, j) = (a / r, a % r);
            hull[i] += w;
            cone[j] += w * bound / norm(&rays[j]);
        }
    }
    let total: f64 = hull.iter().sum();
    if total > 0.0 {
        for h in hull.iter_mut() {
            *h /= total;
        }
    }
    let mut point = vec![0.0; verts[0].len()];
    for (v, h) in verts.iter().zip(&hull) {
        axpy(&mut point, *h, v);
    }
    for (ray, c) in rays.iter().zip(&cone) {
        axpy(&mut point, *c, ray);
    }
    MinNormResult {
        value: norm(&point),
        point,
        hull_coeffs: hull,
        cone_coeffs: cone,
    }
}

/// Wolfe's min-norm-point algorithm on `conv(points)`. Returns convex
/// weights, or `(iterations, gap, last weights)` on hitting the cap.
fn wolfe(
    points: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> core::result::Result<Vec<f64>, (usize, f64, Vec<f64>)> {
    let k = points.len();
    let scale = points.iter().map(|p| norm_sq(p)).fold(0.0, f64::max);
    let eps = (1e-14 * scale).max(f64::MIN_POSITIVE).min(tol * 1e-3);

    let start = (0..k)
        .min_by(|&a, &b| norm_sq(&points[a]).total_cmp(&norm_sq(&points[b])))
        .expect("empty point set");
    let mut active: Vec<usize> = vec![start];
    let mut w: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();
    let mut iters = 0;

    let dense = |active: &[usize], w: &[f64]| {
        let mut out = vec![0.0; k];
        for (&i, &wi) in active.iter().zip(w) {
            out[i] += wi;
        }
        out
    };

    loop {
        let xx = norm_sq(&x);
        if xx <= (tol * 1e-3) * (tol * 1e-3) {
            return Ok(dense(&active, &w));
        }
        let (j, xj) = (0..k)
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("empty point set");
        let gap = xx - xj;
        if gap <= eps || active.contains(&j) {
            return Ok(dense(&active, &w));
        }
        let (prev_active, prev_w) = (active.clone(), w.clone());
        active.push(j);
        w.push(0.0);

        loop {
            iters += 1;
            if iters > max_iter {
                return Err((iters, gap, dense(&active, &w)));
            }
            let alpha = affine_minimizer(points, &active);
            if alpha.iter().all(|a| *a > 0.0) {
                w = alpha;
                break;
            }
            let mut theta = 1.0f64;
            let mut drop = usize::MAX;
            for (idx, (wi, ai)) in w.iter().zip(&alpha).enumerate() {
                if *ai <= 0.0 {
                    let d = wi - ai;
                    if d > 0.0 && wi / d < theta {
                        theta = wi / d;
                        drop = idx;
                    }
                }
            }
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = (1.0 - theta) * *wi + theta * ai;
            }
            // the ratio-test index leaves even if rounding kept it positive
            let mut keep_a = Vec::with_capacity(active.len());
            let mut keep_w = Vec::with_capacity(active.len());
            for (idx, (&i, &wi)) in active.iter().zip(&w).enumerate() {
                if idx != drop && wi > 1e-15 {
                    keep_a.push(i);
                    keep_w.push(wi);
                }
            }
            let total: f64 = keep_w.iter().sum();
            for wi in keep_w.iter_mut() {
                *wi /= total;
            }
            active = keep_a;
            w = keep_w;
            if active.len() == 1 {
                break;
            }
        }
        let mut next = vec![0.0; points[0].len()];
        for (&i, &wi) in active.iter().zip(&w) {
            axpy(&mut next, wi, &points[i]);
        }
        if norm_sq(&next) >= xx {
            // rounding stall: no major cycle can improve any further
            return Ok(dense(&prev_active, &prev_w));
        }
        x = next;
    }
}

/// Affine weights `α` (summing to one) minimizing `|sum α_i p_i|` over the
/// active points, from the normal equations in difference coordinates.
fn affine_minimizer(points: &[Vec<f64>], active: &[usize]) -> Vec<f64> {
    let s = active.len();
    if s == 1 {
        return vec![1.0];
    }
    let p0 = &points[active[0]];
    let diffs: Vec<Vec<f64>> = active[1..]
        .iter()
        .map(|&i| points[i].iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let d = s - 1;
    let mut g = vec![0.0; d * d];
    let mut rhs = vec![0.0; d];
    for a in 0..d {
        for b in 0..d {
            g[a * d + b] = dot(&diffs[a], &diffs[b]);
        }
        rhs[a] = -dot(&diffs[a], p0);
    }
    let trace: f64 = (0..d).map(|a| g[a * d + a]).sum();
    let beta = solve(g.clone(), rhs.clone(), 1e-13 * trace.max(f64::MIN_POSITIVE)).unwrap_or_else(|| {
        let mut reg = g;
        for a in 0..d {
            reg[a * d + a] += 1e-12 * trace.max(f64::MIN_POSITIVE);
        }
        solve(reg, rhs, 0.0).unwrap_or_else(|| vec![0.0; d])
    });
    let mut alpha = Vec::with_capacity(s);
    alpha.push(1.0 - beta.iter().sum::<f64>());
    alpha.extend(beta);
    alpha
}

/// Which subdifferential branches enter `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum RabierMode {
    /// `v_i ∈ ∂f_i(x) ∪ ∂(-f_i)(x)`.
    #[default]
    Full,
    /// `v_i ∈ ∂f_i(x)` only.
    PlusOnly,
}

/// Value of `ν` (or of the `Γ` residual) with the attaining data.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RabierValue {
    pub value: f64,
    /// Branch per objective: `true` for `∂f_i`, `false` for `∂(-f_i)`.
    pub signs: Vec<bool>,
    /// Simplex weights `λ_i` per objective.
    pub multipliers: Vec<f64>,
    /// Weight on `x` in the `Γ` residual (zero for `ν`).
    pub mu: f64,
    /// Coefficients over the normal-cone rays.
    pub cone_coeffs: Vec<f64>,
    /// The attaining vector `sum λ_i v_i (+ μ x) + w`.
    pub point: Vec<f64>,
}

/// `ν(x)` from precomputed parts: `plus[i]` and `minus[i]` over-approximate
/// `∂f_i(x)` and `∂(-f_i)(x)`.
pub fn rabier_from_parts(
    plus: &[Polytope],
    minus: &[Polytope],
    cone: &Cone,
    mode: RabierMode,
    tol: f64,
) -> Result<RabierValue> {
    best_over_patterns(plus, minus, cone, mode, tol, None)
}

/// `Γ` residual from parts: distance from 0 to
/// `{sum λ_i v_i + μ x + w : λ >= 0, sum λ_i + |μ| = 1}`.
pub fn gamma_from_parts(
    plus: &[Polytope],
    minus: &[Polytope],
    cone: &Cone,
    x: &[f64],
    mode: RabierMode,
    tol: f64,
) -> Result<RabierValue> {
    best_over_patterns(plus, minus, cone, mode, tol, Some(x))
}

fn best_over_patterns(
    plus: &[Polytope],
    minus: &[Polytope],
    cone: &Cone,
    mode: RabierMode,
    tol: f64,
    x: Option<&[f64]>,
) -> Result<RabierValue> {
    let m = plus.len();
    if m == 0 || minus.len() != m {
        return Err(Error::InvalidProblem("need one polytope pair per objective".into()));
    }
    if m >= 31 {
        return Err(Error::InvalidProblem("too many objectives for sign enumeration".into()));
    }
    let patterns: u32 = match mode {
        RabierMode::Full => 1 << m,
        RabierMode::PlusOnly => 1,
    };
    // μ x ranges over the segment [-x, x]; one program per endpoint
    let extras: Vec<Option<Vec<f64>>> = match x {
        None => vec![None],
        Some(x) => vec![Some(x.to_vec()), Some(x.iter().map(|c| -c).collect())],
    };
    let mut best: Option<RabierValue> = None;
    for pat in 0..patterns {
        let signs: Vec<bool> = (0..m).map(|i| pat & (1 << i) == 0).collect();
        let mut verts: Vec<Vec<f64>> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        for (i, s) in signs.iter().enumerate() {
            let p = if *s { &plus[i] } else { &minus[i] };
            for v in p.vertices() {
                if !verts.iter().any(|w| w == v) {
                    verts.push(v.clone());
                    owner.push(i);
                }
            }
        }
        for extra in &extras {
            let mut vs = verts.clone();
            let mut own = owner.clone();
            let mut extra_sign = 0.0;
            if let Some(e) = extra {
                extra_sign = if Some(e.as_slice()) == x { 1.0 } else { -1.0 };
                if !vs.iter().any(|w| w == e) {
                    vs.push(e.clone());
                    own.push(m);
                }
            }
            let poly = Polytope::new(vs.clone())?;
            let res = min_norm_point(&poly, cone, tol)?;
            if best.as_ref().is_some_and(|b| b.value <= res.value) {
                continue;
            }
            // Polytope::new only dedupes exact copies, which the loop above
            // already removed, so vertex order is preserved
            debug_assert_eq!(poly.len(), vs.len());
            let mut multipliers = vec![0.0; m];
            let mut mu = 0.0;
            for (h, &o) in res.hull_coeffs.iter().zip(&own) {
                if o < m {
                    multipliers[o] += h;
                } else {
                    mu += extra_sign * h;
                }
            }
            best = Some(RabierValue {
                value: res.value,
                signs: signs.clone(),
                multipliers,
                mu,
                cone_coeffs: res.cone_coeffs,
                point: res.point,
            });
            if best.as_ref().is_some_and(|b| b.value == 0.0) {
                return Ok(best.expect("just set"));
            }
        }
    }
    Ok(best.expect("at least one sign pattern"))
}

/// Subdifferential parts and normal cone of `problem` at `x`.
pub fn local_parts(problem: &Problem, x: &[f64]) -> Result<(Vec<Polytope>, Vec<Polytope>, Cone)> {
    if x.len() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: x.len(),
        });
    }
    let cone = normal_cone(problem.feasible(), x, ACT_TOL)?;
    let plus: Vec<Polytope> = problem.objectives().iter().map(|f| subdiff(f, x)).collect();
    let minus: Vec<Polytope> = problem.objectives().iter().map(|f| neg_subdiff(f, x)).collect();
    Ok((plus, minus, cone))
}

/// Extended Rabier function `ν(x)` of `problem` at a feasible `x`.
pub fn rabier_nu(problem: &Problem, x: &[f64], mode: RabierMode, tol: f64) -> Result<RabierValue> {
    let (plus, minus, cone) = local_parts(problem, x)?;
    rabier_from_parts(&plus, &minus, &cone, mode, tol)
}

/// Residual of the `Γ(f, Ω)` membership condition at a feasible `x`.
pub fn gamma_residual(
    problem: &Problem,
    x: &[f64],
    mode: RabierMode,
    tol: f64,
) -> Result<RabierValue> {
    let (plus, minus, cone) = local_parts(problem, x)?;
    gamma_from_parts(&plus, &minus, &cone, x, mode, tol)
}
