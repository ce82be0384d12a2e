//! Brute-force reference computations.
//!
//! These routines share no numerical code with the solvers they check:
//! [`grid_pareto`] has its own dominance loop and [`brute_min_norm`]
//! enumerates a simplex lattice instead of running a QP.

use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{Cone, Polytope};
use crate::linalg::solve;
use crate::{Error, Problem, Result};

/// Largest grid accepted by [`GridSpec::new`].
pub const GRID_LIMIT: u128 = 10_000_000;

/// Lattice guard for [`brute_min_norm`].
pub const LATTICE_LIMIT: u128 = 5_000_000;

/// Tensor grid over a finite box.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    steps: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, steps: Vec<usize>) -> Result<Self> {
        let n = lower.len();
        if n == 0 || upper.len() != n || steps.len() != n {
            return Err(Error::InvalidProblem("grid bounds and counts must share one dimension".into()));
        }
        for i in 0..n {
            if !(lower[i].is_finite() && upper[i].is_finite() && lower[i] <= upper[i]) {
                return Err(Error::InvalidProblem("grid box must be finite with lower <= upper".into()));
            }
            if steps[i] < 2 {
                return Err(Error::InvalidProblem("grid needs at least two points per axis".into()));
            }
        }
        let points = steps.iter().fold(1u128, |a, s| a.saturating_mul(*s as u128));
        if points > GRID_LIMIT {
            return Err(Error::GridTooLarge {
                points,
                limit: GRID_LIMIT,
            });
        }
        Ok(GridSpec { lower, upper, steps })
    }

    /// Same interval and count on each of `n` axes.
    pub fn uniform(n: usize, lo: f64, hi: f64, steps: usize) -> Result<Self> {
        GridSpec::new(vec![lo; n], vec![hi; n], vec![steps; n])
    }

    /// Grid with spacing at most `step` on every axis.
    pub fn with_spacing(lower: Vec<f64>, upper: Vec<f64>, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidProblem("grid step must be positive".into()));
        }
        let mut steps = Vec::with_capacity(lower.len());
        for (l, u) in lower.iter().zip(&upper) {
            let span = u - l;
            let count = libm::ceil(span / step - 1e-9).max(1.0) + 1.0;
            if !(count.is_finite() && count <= GRID_LIMIT as f64) {
                return Err(Error::GridTooLarge {
                    points: if count.is_finite() { count as u128 } else { u128::MAX },
                    limit: GRID_LIMIT,
                });
            }
            steps.push(count as usize);
        }
        GridSpec::new(lower, upper, steps)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate `j` of axis `i`.
    pub fn coord(&self, i: usize, j: usize) -> f64 {
        let t = j as f64 / (self.steps[i] - 1) as f64;
        if j + 1 == self.steps[i] {
            self.upper[i]
        } else {
            self.lower[i] + t * (self.upper[i] - self.lower[i])
        }
    }

    /// Grid point number `idx` in row-major order (last axis fastest).
    pub fn point(&self, mut idx: usize) -> Vec<f64> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let j = idx % self.steps[i];
            idx /= self.steps[i];
            x[i] = self.coord(i, j);
        }
        x
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// The same box with every count doubled minus one, so the old points
    /// are kept.
    pub fn refined(&self) -> Result<Self> {
        GridSpec::new(
            self.lower.clone(),
            self.upper.clone(),
            self.steps.iter().map(|s| 2 * s - 1).collect(),
        )
    }
}

/// A grid point with its image.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridPoint {
    pub x: Vec<f64>,
    pub fx: Vec<f64>,
}

fn weakly_better(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (p, q) in a.iter().zip(b) {
        if p > q {
            return false;
        }
        if p < q {
            strict = true;
        }
    }
    strict
}

/// Feasible grid points whose images no other feasible grid image
/// dominates, in grid order.
pub fn grid_pareto(problem: &Problem, grid: &GridSpec) -> Result<Vec<GridPoint>> {
    if grid.dim() != problem.n() {
        return Err(Error::DimensionMismatch {
            expected: problem.n(),
            got: grid.dim(),
        });
    }
    let feasible: Vec<GridPoint> = grid
        .points()
        .filter(|x| problem.feasible().is_feasible(x, 0.0))
        .map(|x| {
            let fx = problem.eval_unchecked(&x);
            GridPoint { x, fx }
        })
        .collect();
    // archive holds indices of currently undominated points
    let mut archive: Vec<usize> = Vec::new();
    for (i, p) in feasible.iter().enumerate() {
        if archive.iter().any(|&a| weakly_better(&feasible[a].fx, &p.fx)) {
            continue;
        }
        archive.retain(|&a| !weakly_better(&p.fx, &feasible[a].fx));
        archive.push(i);
    }
    archive.sort_unstable();
    let mut out = Vec::with_capacity(archive.len());
    let mut taken = vec![false; feasible.len()];
    for a in archive {
        taken[a] = true;
    }
    for (i, p) in feasible.into_iter().enumerate() {
        if taken[i] {
            out.push(p);
        }
    }
    Ok(out)
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Upper bound on the distance from 0 to `conv(V) + cone(R)`: the minimum of
/// `|sum θ_v v + sum t_r r|` over the simplex lattice with spacing
/// `λ_step` and `0 <= t_r <= ray_cap`. For each lattice point the ray part
/// is solved exactly by trying every subset of rays.
pub fn brute_min_norm(polytope: &Polytope, cone: &Cone, lambda_step: f64, ray_cap: f64) -> Result<f64> {
    if !(lambda_step > 0.0 && lambda_step <= 0.1) {
        return Err(Error::InvalidProblem("lambda_step must lie in (0, 0.1]".into()));
    }
    if !(ray_cap > 0.0) {
        return Err(Error::InvalidProblem("ray_cap must be positive".into()));
    }
    let verts = polytope.vertices();
    let rays = cone.rays();
    if verts.len() > 8 || rays.len() > 4 {
        return Err(Error::InvalidProblem("at most 8 vertices and 4 rays".into()));
    }
    let k = verts.len();
    let parts = libm::round(1.0 / lambda_step) as usize;
    let lattice = binomial((parts + k - 1) as u128, (k - 1) as u128);
    if lattice > LATTICE_LIMIT {
        return Err(Error::GridTooLarge {
            points: lattice,
            limit: LATTICE_LIMIT,
        });
    }
    let n = polytope.dim();
    let solvers = ray_subsets(rays, n);

    let mut best = f64::INFINITY;
    let mut counts = vec![0usize; k];
    counts[k - 1] = parts;
    let mut p = vec![0.0; n];
    let mut z = vec![0.0; n];
    loop {
        for v in p.iter_mut() {
            *v = 0.0;
        }
        for (c, v) in counts.iter().zip(verts) {
            if *c > 0 {
                let w = *c as f64 / parts as f64;
                for (pi, vi) in p.iter_mut().zip(v) {
                    *pi += w * vi;
                }
            }
        }
        for s in &solvers {
            if let Some(d) = s.residual(&p, rays, ray_cap, &mut z) {
                best = best.min(d);
            }
        }
        if !next_composition(&mut counts) {
            break;
        }
    }
    Ok(best)
}

/// Steps through the compositions of a fixed total into `counts.len()`
/// parts; returns false after the last one.
fn next_composition(counts: &mut [usize]) -> bool {
    let k = counts.len();
    if k == 1 {
        return false;
    }
    // find the rightmost position, excluding the last slot, that can grow
    let last = counts[k - 1];
    if last == 0 {
        let mut j = k - 1;
        while j > 0 && counts[j - 1] == 0 {
            j -= 1;
        }
        // counts[j..] are zero; j-1 holds the mass to move
        if j <= 1 {
            return false;
        }
        let i = j - 1;
        let moved = counts[i];
        counts[i] = 0;
        counts[i - 1] += 1;
        counts[k - 1] = moved - 1;
        true
    } else {
        counts[k - 2] += 1;
        counts[k - 1] -= 1;
        true
    }
}

struct SubsetSolver {
    members: Vec<usize>,
    /// `(R^T R)^{-1}` row-major, `|S| x |S|`.
    inv_gram: Vec<f64>,
}

impl SubsetSolver {
    /// Distance from 0 to `p + sum_{r in S} t_r r` at the unconstrained
    /// optimum over `t`, if that optimum lies in `[0, cap]^S`.
    fn residual(&self, p: &[f64], rays: &[Vec<f64>], cap: f64, z: &mut [f64]) -> Option<f64> {
        let s = self.members.len();
        z.copy_from_slice(p);
        if s > 0 {
            let mut rhs = [0.0; 4];
            for (r, &j) in rhs.iter_mut().zip(&self.members) {
                *r = -rays[j].iter().zip(p).map(|(a, b)| a * b).sum::<f64>();
            }
            let mut ts = [0.0; 4];
            for (a, ta) in ts.iter_mut().enumerate().take(s) {
                let t: f64 = (0..s).map(|b| self.inv_gram[a * s + b] * rhs[b]).sum();
                if !(-1e-12..=cap).contains(&t) {
                    return None;
                }
                *ta = t.max(0.0);
            }
            for (t, &j) in ts.iter().zip(&self.members) {
                for (zi, ri) in z.iter_mut().zip(&rays[j]) {
                    *zi += t * ri;
                }
            }
        }
        Some(libm::sqrt(z.iter().map(|v| v * v).sum()))
    }
}

fn ray_subsets(rays: &[Vec<f64>], n: usize) -> Vec<SubsetSolver> {
    let r = rays.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << r) {
        let members: Vec<usize> = (0..r).filter(|j| mask & (1 << j) != 0).collect();
        let s = members.len();
        if s > n {
            continue;
        }
        let mut gram = vec![0.0; s * s];
        for a in 0..s {
            for b in 0..s {
                gram[a * s + b] = rays[members[a]]
                    .iter()
                    .zip(&rays[members[b]])
                    .map(|(x, y)| x * y)
                    .sum();
            }
        }
        let mut inv = vec![0.0; s * s];
        let mut ok = true;
        for c in 0..s {
            let mut e = vec![0.0; s];
            e[c] = 1.0;
            match solve(gram.clone(), e, 1e-12) {
                Some(col) => {
                    for a in 0..s {
                        inv[a * s + c] = col[a];
                    }
                }
                None => ok = false,
            }
        }
        if ok {
            out.push(SubsetSolver {
                members,
                inv_gram: inv,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Expr, FeasibleSet};

    fn poly(vs: &[&[f64]]) -> Polytope {
        Polytope::new(vs.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    #[test]
    fn compositions_are_complete() {
        let mut c = vec![0, 0, 4];
        let mut seen = 1;
        while next_composition(&mut c) {
            assert_eq!(c.iter().sum::<usize>(), 4);
            seen += 1;
        }
        assert_eq!(seen, 15);
    }

    #[test]
    fn brute_examples() {
        let d = brute_min_norm(&poly(&[&[1.0, 0.0], &[0.0, 1.0]]), &Cone::trivial(), 0.02, 1.0).unwrap();
        assert!((d - core::f64::consts::FRAC_1_SQRT_2).abs() < 0.02);
        let d = brute_min_norm(&poly(&[&[-2.0], &[1.0]]), &Cone::trivial(), 0.02, 1.0).unwrap();
        assert!(d <= 0.03);
        let cone = Cone::new(vec![vec![-1.0, 0.0]]).unwrap();
        let d = brute_min_norm(&poly(&[&[1.0, 1.0]]), &cone, 0.02, 4.0).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn brute_guards() {
        let many: Vec<Vec<f64>> = (0..9).map(|i| vec![i as f64]).collect();
        let p = Polytope::new(many).unwrap();
        assert!(brute_min_norm(&p, &Cone::trivial(), 0.02, 1.0).is_err());
        assert!(brute_min_norm(&poly(&[&[1.0]]), &Cone::trivial(), 0.5, 1.0).is_err());
        assert!(matches!(
            GridSpec::uniform(3, 0.0, 1.0, 1000),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn grid_pareto_examples() {
        let x = Expr::var(0);
        let q = Problem::new(1, vec![x.clone().powi(2)], FeasibleSet::Full).unwrap();
        let front = grid_pareto(&q, &GridSpec::uniform(1, -1.0, 1.0, 201).unwrap()).unwrap();
        assert_eq!(front.len(), 1);
        assert!(front[0].x[0].abs() < 1e-12);

        let ex = Problem::new(1, vec![-(x.clone().powi(2)), x.clone()], FeasibleSet::half_line(0.0)).unwrap();
        let grid = GridSpec::uniform(1, 0.0, 10.0, 10_000).unwrap();
        assert_eq!(grid_pareto(&ex, &grid).unwrap().len(), 10_000);

        let r = Problem::new(1, vec![x.clone(), x.powi(2)], FeasibleSet::Full).unwrap();
        let front = grid_pareto(&r, &GridSpec::uniform(1, -5.0, 5.0, 10_001).unwrap()).unwrap();
        assert!(front.iter().all(|p| p.x[0] <= 1e-12));
        assert_eq!(front.len(), 5001);
    }

    #[test]
    fn spacing_keeps_endpoints() {
        let g = GridSpec::with_spacing(vec![0.0], vec![10.0], 1e-3).unwrap();
        assert_eq!(g.len(), 10_001);
        assert_eq!(g.point(10_000), vec![10.0]);
        assert!((g.point(2000)[0] - 2.0).abs() < 1e-12);
    }
}
