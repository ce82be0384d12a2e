//! Polyhedral subdifferential calculus and normal cones.
//!
//! [`subdiff`] returns a polytope that contains the limiting subdifferential
//! of an expression at a point. Smooth nodes differentiate classically, sums
//! map to Minkowski sums, `max`/`min` take the convex hull over active
//! branches and products use the generalized product rule. The result is
//! exact (a single gradient) wherever no `max`/`min`/`abs` node is tied.
//!
//! Because the polytopes over-approximate, every Rabier value computed from
//! them is a lower bound on the true value.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{norm_sq, rank, scaled, unit};
use crate::problem::{products_without_each, powi, Expr, FeasibleSet};
use crate::{Error, Result};

/// Default tolerance for treating `max`/`min` branches as tied.
pub const TIE_TOL: f64 = 1e-9;

/// Default tolerance for constraint activity.
pub const ACT_TOL: f64 = 1e-9;

/// Rank threshold for the active gradients of smooth constraints.
pub const RANK_TOL: f64 = 1e-8;

/// `conv(vertices)`, stored without duplicates.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Polytope {
    vertices: Vec<Vec<f64>>,
}

impl Polytope {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::InvalidProblem("polytope needs at least one vertex".into()));
        };
        let n = first.len();
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if vertices.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidProblem("polytope vertex is not finite".into()));
        }
        Ok(Polytope::from_raw(vertices))
    }

    pub fn singleton(v: Vec<f64>) -> Self {
        Polytope { vertices: vec![v] }
    }

    fn from_raw(vertices: Vec<Vec<f64>>) -> Self {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for v in vertices {
            push_unique(&mut out, v);
        }
        Polytope { vertices: out }
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn negated(&self) -> Polytope {
        self.scaled(-1.0)
    }

    pub fn scaled(&self, c: f64) -> Polytope {
        Polytope::from_raw(self.vertices.iter().map(|v| scaled(v, c)).collect())
    }

    /// Minkowski sum, keeping every pairwise sum (no hull pruning).
    pub fn minkowski(&self, other: &Polytope) -> Polytope {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.vertices {
            for b in &other.vertices {
                out.push(a.iter().zip(b).map(|(p, q)| p + q).collect());
            }
        }
        Polytope::from_raw(out)
    }

    /// `conv(self ∪ other)`.
    pub fn hull_union(&self, other: &Polytope) -> Polytope {
        let mut vs = self.vertices.clone();
        for v in &other.vertices {
            push_unique(&mut vs, v.clone());
        }
        Polytope { vertices: vs }
    }

    pub fn contains_vertex(&self, v: &[f64]) -> bool {
        self.vertices.iter().any(|w| w.as_slice() == v)
    }
}

fn push_unique(out: &mut Vec<Vec<f64>>, v: Vec<f64>) {
    // -0.0 and 0.0 compare equal, so they collapse as intended
    if !out.contains(&v) {
        out.push(v);
    }
}

/// `{ sum_j t_j r_j : t_j >= 0 }`; no rays means `{0}`.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Cone {
    rays: Vec<Vec<f64>>,
}

impl Cone {
    pub fn trivial() -> Self {
        Cone { rays: Vec::new() }
    }

    pub fn new(rays: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(first) = rays.first() {
            let n = first.len();
            for r in &rays {
                if r.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: r.len(),
                    });
                }
                if r.iter().any(|c| !c.is_finite()) || norm_sq(r) == 0.0 {
                    return Err(Error::InvalidProblem("cone rays must be finite and nonzero".into()));
                }
            }
        }
        Ok(Cone { rays })
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }
}

/// [`subdiff_with`] at the default tie tolerance.
pub fn subdiff(expr: &Expr, x: &[f64]) -> Polytope {
    subdiff_with(expr, x, TIE_TOL)
}

/// Polytope containing the limiting subdifferential of `expr` at `x`.
pub fn subdiff_with(expr: &Expr, x: &[f64], tie_tol: f64) -> Polytope {
    rule(expr, x, tie_tol).1
}

/// Over-approximation of `∂(-expr)(x)`, i.e. `-subdiff(expr, x)`.
pub fn neg_subdiff(expr: &Expr, x: &[f64]) -> Polytope {
    subdiff(expr, x).negated()
}

pub fn neg_subdiff_with(expr: &Expr, x: &[f64], tie_tol: f64) -> Polytope {
    subdiff_with(expr, x, tie_tol).negated()
}

fn rule(e: &Expr, x: &[f64], tie: f64) -> (f64, Polytope) {
    let n = x.len();
    match e {
        Expr::Const(c) => (*c, Polytope::singleton(vec![0.0; n])),
        Expr::Var(i) => (x[*i], Polytope::singleton(unit(n, *i, 1.0))),
        Expr::Add(cs) => {
            let mut parts = cs.iter().map(|c| rule(c, x, tie));
            let (mut v, mut p) = parts.next().expect("empty sum");
            for (cv, cp) in parts {
                v += cv;
                p = p.minkowski(&cp);
            }
            (v, p)
        }
        Expr::Mul(cs) => {
            let parts: Vec<(f64, Polytope)> = cs.iter().map(|c| rule(c, x, tie)).collect();
            let vals: Vec<f64> = parts.iter().map(|p| p.0).collect();
            let others = products_without_each(&vals);
            let mut acc: Option<Polytope> = None;
            for ((_, p), w) in parts.iter().zip(&others) {
                let term = p.scaled(*w);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.minkowski(&term),
                });
            }
            (vals.iter().product(), acc.expect("empty product"))
        }
        Expr::Neg(c) => {
            let (v, p) = rule(c, x, tie);
            (-v, p.negated())
        }
        Expr::Pow(c, k) => {
            let (u, p) = rule(c, x, tie);
            if *k == 0 {
                return (1.0, Polytope::singleton(vec![0.0; n]));
            }
            (powi(u, *k), p.scaled(f64::from(*k) * powi(u, k - 1)))
        }
        Expr::Sin(c) => {
            let (u, p) = rule(c, x, tie);
            (libm::sin(u), p.scaled(libm::cos(u)))
        }
        Expr::Cos(c) => {
            let (u, p) = rule(c, x, tie);
            (libm::cos(u), p.scaled(-libm::sin(u)))
        }
        Expr::Exp(c) => {
            let (u, p) = rule(c, x, tie);
            let eu = libm::exp(u);
            (eu, p.scaled(eu))
        }
        Expr::Abs(c) => {
            // max(u, -u): the branches tie when |u - (-u)| <= tie
            let (u, p) = rule(c, x, tie);
            if 2.0 * u.abs() <= tie {
                (u.abs(), p.hull_union(&p.negated()))
            } else if u > 0.0 {
                (u, p)
            } else {
                (-u, p.negated())
            }
        }
        Expr::Max(cs) => active_hull(cs, x, tie, true),
        Expr::Min(cs) => active_hull(cs, x, tie, false),
    }
}

fn active_hull(cs: &[Expr], x: &[f64], tie: f64, is_max: bool) -> (f64, Polytope) {
    let parts: Vec<(f64, Polytope)> = cs.iter().map(|c| rule(c, x, tie)).collect();
    let best = if is_max {
        parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
    } else {
        parts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
    };
    let mut acc: Option<Polytope> = None;
    for (v, p) in &parts {
        if (v - best).abs() <= tie {
            acc = Some(match acc {
                None => p.clone(),
                Some(a) => a.hull_union(p),
            });
        }
    }
    (best, acc.expect("max/min without an active branch"))
}

/// Normal cone `N(x; Ω)` at a feasible `x`.
///
/// Boxes and polyhedra give the exact cone of active constraint normals.
/// Smooth inequalities give the cone of active gradients, which requires
/// those gradients to be linearly independent.
pub fn normal_cone(set: &FeasibleSet, x: &[f64], act_tol: f64) -> Result<Cone> {
    let violation = set.violation(x);
    if violation > act_tol {
        return Err(Error::Infeasible { violation });
    }
    let n = x.len();
    let rays = match set {
        FeasibleSet::Full => Vec::new(),
        FeasibleSet::Box { lower, upper } => {
            let mut rays = Vec::new();
            for i in 0..n {
                if upper[i].is_finite() && x[i] >= upper[i] - act_tol {
                    rays.push(unit(n, i, 1.0));
                }
                if lower[i].is_finite() && x[i] <= lower[i] + act_tol {
                    rays.push(unit(n, i, -1.0));
                }
            }
            rays
        }
        FeasibleSet::Polyhedron(rows) => rows
            .iter()
            .filter(|h| crate::linalg::dot(&h.normal, x) >= h.offset - act_tol)
            .map(|h| h.normal.clone())
            .collect(),
        FeasibleSet::SmoothIneq(gs) => {
            let mut rays = Vec::new();
            for (j, g) in gs.iter().enumerate() {
                let (v, grad) = g.eval_grad(x);
                if v < -act_tol {
                    continue;
                }
                if norm_sq(&grad) == 0.0 {
                    return Err(Error::DegenerateConstraint(format!(
                        "constraint {j} is active with a zero gradient"
                    )));
                }
                rays.push(grad);
            }
            if rank(&rays, RANK_TOL) < rays.len() {
                return Err(Error::DegenerateConstraint(
                    "active constraint gradients are linearly dependent".into(),
                ));
            }
            rays
        }
    };
    Ok(Cone { rays })
}
