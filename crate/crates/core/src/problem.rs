//! Problem model: objective expression trees, feasible sets and evaluation.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{axpy, dot, norm_sq};
use crate::{Error, Result};

/// Expression tree for one objective or constraint component.
///
/// Every primitive is locally Lipschitz and there is no division, so
/// evaluation at a finite point is finite unless `Exp` overflows.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Expr {
    Const(f64),
    /// Zero-based variable index.
    Var(usize),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Abs(Box<Expr>),
    Max(Vec<Expr>),
    Min(Vec<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn constant(c: f64) -> Self {
        Expr::Const(c)
    }

    pub fn powi(self, k: u32) -> Self {
        Expr::Pow(Box::new(self), k)
    }

    pub fn sin(self) -> Self {
        Expr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Self {
        Expr::Cos(Box::new(self))
    }

    pub fn exp(self) -> Self {
        Expr::Exp(Box::new(self))
    }

    pub fn abs(self) -> Self {
        Expr::Abs(Box::new(self))
    }

    /// Evaluates the tree. Variable indices must be below `x.len()`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => x[*i],
            Expr::Add(cs) => cs.iter().map(|c| c.eval(x)).sum(),
            Expr::Mul(cs) => cs.iter().map(|c| c.eval(x)).product(),
            Expr::Neg(c) => -c.eval(x),
            Expr::Pow(c, k) => powi(c.eval(x), *k),
            Expr::Sin(c) => libm::sin(c.eval(x)),
            Expr::Cos(c) => libm::cos(c.eval(x)),
            Expr::Exp(c) => libm::exp(c.eval(x)),
            Expr::Abs(c) => c.eval(x).abs(),
            Expr::Max(cs) => cs.iter().map(|c| c.eval(x)).fold(f64::NEG_INFINITY, f64::max),
            Expr::Min(cs) => cs.iter().map(|c| c.eval(x)).fold(f64::INFINITY, f64::min),
        }
    }

    /// Value and one element of the subdifferential over-approximation:
    /// the classical gradient where smooth, the first attaining branch at
    /// `Max`/`Min` ties and `sign(u)` (with `sign(0) = 1`) for `Abs`.
    pub fn eval_grad(&self, x: &[f64]) -> (f64, Vec<f64>) {
        let n = x.len();
        match self {
            Expr::Const(c) => (*c, vec![0.0; n]),
            Expr::Var(i) => {
                let mut g = vec![0.0; n];
                g[*i] = 1.0;
                (x[*i], g)
            }
            Expr::Add(cs) => {
                let mut g = vec![0.0; n];
                let mut v = 0.0;
                for c in cs {
                    let (cv, cg) = c.eval_grad(x);
                    v += cv;
                    axpy(&mut g, 1.0, &cg);
                }
                (v, g)
            }
            Expr::Mul(cs) => {
                let parts: Vec<(f64, Vec<f64>)> = cs.iter().map(|c| c.eval_grad(x)).collect();
                let vals: Vec<f64> = parts.iter().map(|p| p.0).collect();
                let others = products_without_each(&vals);
                let mut g = vec![0.0; n];
                for (k, (_, cg)) in parts.iter().enumerate() {
                    axpy(&mut g, others[k], cg);
                }
                (vals.iter().product(), g)
            }
            Expr::Neg(c) => {
                let (v, g) = c.eval_grad(x);
                (-v, g.into_iter().map(|d| -d).collect())
            }
            Expr::Pow(c, k) => {
                let (u, g) = c.eval_grad(x);
                if *k == 0 {
                    return (1.0, vec![0.0; n]);
                }
                let d = f64::from(*k) * powi(u, k - 1);
                (powi(u, *k), g.into_iter().map(|gi| d * gi).collect())
            }
            Expr::Sin(c) => chain(c, x, libm::sin, libm::cos),
            Expr::Cos(c) => chain(c, x, libm::cos, |u| -libm::sin(u)),
            Expr::Exp(c) => chain(c, x, libm::exp, libm::exp),
            Expr::Abs(c) => {
                let (u, g) = c.eval_grad(x);
                if u >= 0.0 {
                    (u, g)
                } else {
                    (-u, g.into_iter().map(|d| -d).collect())
                }
            }
            Expr::Max(cs) => pick_branch(cs, x, |a, b| a > b),
            Expr::Min(cs) => pick_branch(cs, x, |a, b| a < b),
        }
    }

    /// Largest variable index appearing in the tree.
    pub fn max_var(&self) -> Option<usize> {
        let mut best = None;
        self.visit(&mut |e| {
            if let Expr::Var(i) = e {
                best = Some(best.map_or(*i, |b: usize| b.max(*i)));
            }
        });
        best
    }

    /// True when the tree has no `Abs`, `Max` or `Min` node.
    pub fn is_smooth(&self) -> bool {
        let mut smooth = true;
        self.visit(&mut |e| {
            if matches!(e, Expr::Abs(_) | Expr::Max(_) | Expr::Min(_)) {
                smooth = false;
            }
        });
        smooth
    }

    /// Rewrites every `Abs(u)` as `Max(u, Neg(u))`.
    pub fn canonical(&self) -> Expr {
        let map = |cs: &[Expr]| cs.iter().map(Expr::canonical).collect::<Vec<_>>();
        let bx = |c: &Expr| Box::new(c.canonical());
        match self {
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Add(cs) => Expr::Add(map(cs)),
            Expr::Mul(cs) => Expr::Mul(map(cs)),
            Expr::Max(cs) => Expr::Max(map(cs)),
            Expr::Min(cs) => Expr::Min(map(cs)),
            Expr::Neg(c) => Expr::Neg(bx(c)),
            Expr::Pow(c, k) => Expr::Pow(bx(c), *k),
            Expr::Sin(c) => Expr::Sin(bx(c)),
            Expr::Cos(c) => Expr::Cos(bx(c)),
            Expr::Exp(c) => Expr::Exp(bx(c)),
            Expr::Abs(c) => {
                let u = c.canonical();
                Expr::Max(vec![u.clone(), Expr::Neg(Box::new(u))])
            }
        }
    }

    /// Checks structural invariants against a problem dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut err = None;
        self.visit(&mut |e| {
            if err.is_some() {
                return;
            }
            err = match e {
                Expr::Const(c) if !c.is_finite() => Some(format!("non-finite constant {c}")),
                Expr::Var(i) if *i >= n => Some(format!("variable x{} exceeds n = {n}", i + 1)),
                Expr::Add(cs) | Expr::Mul(cs) if cs.is_empty() => Some("empty sum or product".into()),
                Expr::Max(cs) | Expr::Min(cs) if cs.len() < 2 => {
                    Some("max/min need at least two arguments".into())
                }
                _ => None,
            };
        });
        match err {
            Some(msg) => Err(Error::InvalidProblem(msg)),
            None => Ok(()),
        }
    }

    fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self {
            Expr::Const(_) | Expr::Var(_) => {}
            Expr::Add(cs) | Expr::Mul(cs) | Expr::Max(cs) | Expr::Min(cs) => {
                for c in cs {
                    c.visit(f);
                }
            }
            Expr::Neg(c)
            | Expr::Pow(c, _)
            | Expr::Sin(c)
            | Expr::Cos(c)
            | Expr::Exp(c)
            | Expr::Abs(c) => c.visit(f),
        }
    }
}

impl core::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl core::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, Expr::Neg(Box::new(rhs))])
    }
}

impl core::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl core::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

pub(crate) fn powi(u: f64, k: u32) -> f64 {
    let mut base = u;
    let mut e = k;
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    acc
}

/// `out[k] = prod_{j != k} vals[j]` without division.
pub(crate) fn products_without_each(vals: &[f64]) -> Vec<f64> {
    let k = vals.len();
    let mut out = vec![1.0; k];
    let mut acc = 1.0;
    for i in 0..k {
        out[i] = acc;
        acc *= vals[i];
    }
    acc = 1.0;
    for i in (0..k).rev() {
        out[i] *= acc;
        acc *= vals[i];
    }
    out
}

fn chain(c: &Expr, x: &[f64], f: fn(f64) -> f64, df: fn(f64) -> f64) -> (f64, Vec<f64>) {
    let (u, g) = c.eval_grad(x);
    let d = df(u);
    (f(u), g.into_iter().map(|gi| d * gi).collect())
}

fn pick_branch(cs: &[Expr], x: &[f64], better: fn(f64, f64) -> bool) -> (f64, Vec<f64>) {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for c in cs {
        let cand = c.eval_grad(x);
        match &best {
            Some(b) if !better(cand.0, b.0) => {}
            _ => best = Some(cand),
        }
    }
    best.expect("max/min with no arguments")
}

/// One half-space `normal · x <= offset`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Closed feasible set Ω.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FeasibleSet {
    Full,
    /// Componentwise bounds; entries may be infinite.
    Box {
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
    /// Intersection of half-spaces.
    Polyhedron(Vec<HalfSpace>),
    /// `g_j(x) <= 0` for smooth `g_j`.
    SmoothIneq(Vec<Expr>),
}

impl FeasibleSet {
    /// The half-line `[lo, +inf)` in one dimension.
    pub fn half_line(lo: f64) -> Self {
        FeasibleSet::Box {
            lower: vec![lo],
            upper: vec![f64::INFINITY],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            FeasibleSet::Full => Ok(()),
            FeasibleSet::Box { lower, upper } => {
                if lower.len() != n || upper.len() != n {
                    return Err(Error::InvalidProblem(format!(
                        "box has {} / {} bounds for n = {n}",
                        lower.len(),
                        upper.len()
                    )));
                }
                for (i, (l, u)) in lower.iter().zip(upper).enumerate() {
                    if l.is_nan() || u.is_nan() || l > u || *l == f64::INFINITY || *u == f64::NEG_INFINITY {
                        return Err(Error::InvalidProblem(format!("box bounds of x{} are invalid", i + 1)));
                    }
                }
                Ok(())
            }
            FeasibleSet::Polyhedron(rows) => {
                for (j, h) in rows.iter().enumerate() {
                    if h.normal.len() != n {
                        return Err(Error::InvalidProblem(format!("row {j} has wrong dimension")));
                    }
                    if !h.offset.is_finite() || h.normal.iter().any(|a| !a.is_finite()) {
                        return Err(Error::InvalidProblem(format!("row {j} is not finite")));
                    }
                    if norm_sq(&h.normal) == 0.0 {
                        return Err(Error::InvalidProblem(format!("row {j} has a zero normal")));
                    }
                }
                Ok(())
            }
            FeasibleSet::SmoothIneq(gs) => {
                for g in gs {
                    g.validate(n)?;
                    if !g.is_smooth() {
                        return Err(Error::InvalidProblem(
                            "smooth constraints may not use abs/max/min".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Largest constraint violation at `x` (zero when feasible).
    pub fn violation(&self, x: &[f64]) -> f64 {
        match self {
            FeasibleSet::Full => 0.0,
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(xi, (l, u))| (l - xi).max(xi - u).max(0.0))
                .fold(0.0, f64::max),
            FeasibleSet::Polyhedron(rows) => rows
                .iter()
                .map(|h| (dot(&h.normal, x) - h.offset).max(0.0))
                .fold(0.0, f64::max),
            FeasibleSet::SmoothIneq(gs) => gs.iter().map(|g| g.eval(x).max(0.0)).fold(0.0, f64::max),
        }
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        let v = self.violation(x);
        v <= tol
    }

    /// Maps `x` to a nearby feasible point: exact Euclidean projection for
    /// boxes, Dykstra's algorithm for polyhedra and a Gauss–Newton
    /// correction for smooth inequalities. `None` if no feasible point was
    /// reached.
    pub fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            FeasibleSet::Full => Some(x.to_vec()),
            FeasibleSet::Box { lower, upper } => Some(
                x.iter()
                    .zip(lower.iter().zip(upper))
                    .map(|(xi, (l, u))| xi.clamp(*l, *u))
                    .collect(),
            ),
            FeasibleSet::Polyhedron(rows) => project_polyhedron(rows, x),
            FeasibleSet::SmoothIneq(gs) => repair_smooth(gs, x),
        }
    }
}

fn project_polyhedron(rows: &[HalfSpace], x: &[f64]) -> Option<Vec<f64>> {
    if rows.iter().all(|h| dot(&h.normal, x) <= h.offset) {
        return Some(x.to_vec());
    }
    let scale = 1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut y = x.to_vec();
    let mut corr = vec![vec![0.0; x.len()]; rows.len()];
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for (h, p) in rows.iter().zip(corr.iter_mut()) {
            let z: Vec<f64> = y.iter().zip(p.iter()).map(|(a, b)| a + b).collect();
            let excess = dot(&h.normal, &z) - h.offset;
            let mut w = z.clone();
            if excess > 0.0 {
                axpy(&mut w, -excess / norm_sq(&h.normal), &h.normal);
            }
            for i in 0..w.len() {
                p[i] = z[i] - w[i];
                moved = moved.max((w[i] - y[i]).abs());
            }
            y = w;
        }
        if moved <= 1e-15 * scale {
            break;
        }
    }
    let worst = rows
        .iter()
        .map(|h| dot(&h.normal, &y) - h.offset)
        .fold(f64::NEG_INFINITY, f64::max);
    if worst > 1e-12 * scale {
        // Dykstra converges slowly near degenerate vertices; finish with
        // plain cyclic projections, which reach feasibility.
        for _ in 0..200 {
            let mut worst_now = f64::NEG_INFINITY;
            for h in rows {
                let excess = dot(&h.normal, &y) - h.offset;
                if excess > 0.0 {
                    axpy(&mut y, -(excess * (1.0 + 1e-12)) / norm_sq(&h.normal), &h.normal);
                }
                worst_now = worst_now.max(excess);
            }
            if worst_now <= 0.0 {
                break;
            }
        }
    }
    let ok = rows.iter().all(|h| dot(&h.normal, &y) - h.offset <= 1e-12 * scale);
    ok.then_some(y)
}

fn repair_smooth(gs: &[Expr], x: &[f64]) -> Option<Vec<f64>> {
    let mut y = x.to_vec();
    for _ in 0..100 {
        let mut worst: Option<(f64, Vec<f64>)> = None;
        for g in gs {
            let (v, grad) = g.eval_grad(&y);
            if v > 0.0 && worst.as_ref().is_none_or(|w| v > w.0) {
                worst = Some((v, grad));
            }
        }
        let Some((v, grad)) = worst else {
            return Some(y);
        };
        let gn = norm_sq(&grad);
        if gn == 0.0 || !v.is_finite() {
            return None;
        }
        // Slight overshoot so the iterate lands strictly inside.
        axpy(&mut y, -(v * (1.0 + 1e-9) + 1e-15) / gn, &grad);
    }
    gs.iter().all(|g| g.eval(&y) <= 0.0).then_some(y)
}

/// A problem `min f(x) s.t. x ∈ Ω` with `f = (f_1, ..., f_m)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Problem {
    n: usize,
    objectives: Vec<Expr>,
    feasible: FeasibleSet,
}

impl Problem {
    pub fn new(n: usize, objectives: Vec<Expr>, feasible: FeasibleSet) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem("n must be positive".into()));
        }
        if objectives.is_empty() {
            return Err(Error::InvalidProblem("at least one objective is required".into()));
        }
        for f in &objectives {
            f.validate(n)?;
        }
        feasible.validate(n)?;
        Ok(Problem {
            n,
            objectives,
            feasible,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.objectives.len()
    }

    pub fn objectives(&self) -> &[Expr] {
        &self.objectives
    }

    pub fn feasible(&self) -> &FeasibleSet {
        &self.feasible
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// `(f_1(x), ..., f_m(x))`.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> Vec<f64> {
        self.objectives.iter().map(|f| f.eval(x)).collect()
    }

    pub fn is_feasible(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.feasible.is_feasible(x, tol))
    }

    /// True iff `x ∈ Ω` and `f(x) <= ybar + tol` componentwise.
    pub fn sublevel_member(&self, ybar: &SublevelBound, x: &[f64], tol: f64) -> Result<bool> {
        self.check_dim(x)?;
        ybar.check_dim(self.m())?;
        if !self.feasible.is_feasible(x, tol) {
            return Ok(false);
        }
        Ok(ybar.contains(&self.eval_unchecked(x), tol))
    }
}

/// Upper bound `ȳ ∈ (R ∪ {+inf})^m` defining the sublevel `f(x) <= ȳ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SublevelBound(Vec<f64>);

impl SublevelBound {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan() || *v == f64::NEG_INFINITY) {
            return Err(Error::InvalidProblem("sublevel entries must be real or +inf".into()));
        }
        Ok(SublevelBound(values))
    }

    /// All entries `+inf`.
    pub fn unrestricted(m: usize) -> Self {
        SublevelBound(vec![f64::INFINITY; m])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unrestricted(&self) -> bool {
        self.0.iter().all(|v| *v == f64::INFINITY)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    /// Euclidean norm over the finite entries.
    pub fn finite_norm(&self) -> f64 {
        libm::sqrt(self.0.iter().filter(|v| v.is_finite()).map(|v| v * v).sum())
    }

    /// `max_i (y_i - ȳ_i)` over finite entries; `-inf` if every entry is `+inf`.
    pub fn excess(&self, y: &[f64]) -> f64 {
        y.iter()
            .zip(&self.0)
            .filter(|(_, b)| b.is_finite())
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        y.iter().zip(&self.0).all(|(a, b)| *a <= *b + tol)
    }

    pub(crate) fn check_dim(&self, m: usize) -> Result<()> {
        if self.0.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: self.0.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x1() -> Expr {
        Expr::var(0)
    }

    fn example_41() -> Problem {
        Problem::new(1, vec![-(x1().powi(2)), x1()], FeasibleSet::half_line(0.0)).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let sin = Problem::new(1, vec![x1().sin()], FeasibleSet::Full).unwrap();
        assert_eq!(sin.evaluate(&[0.0]).unwrap(), vec![0.0]);
        assert_eq!(example_41().evaluate(&[2.0]).unwrap(), vec![-4.0, 2.0]);
        let lin = Problem::new(2, vec![Expr::var(0) + Expr::var(1)], FeasibleSet::Full).unwrap();
        assert_eq!(lin.evaluate(&[3.0, -5.0]).unwrap(), vec![-2.0]);
    }

    #[test]
    fn evaluate_rejects_wrong_dimension() {
        let err = example_41().evaluate(&[1.0, 2.0]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 1, got: 2 });
    }

    #[test]
    fn feasibility_examples() {
        assert!(FeasibleSet::Full.is_feasible(&[-1e300, 4.0], 0.0));
        let half = FeasibleSet::half_line(0.0);
        assert!(!half.is_feasible(&[-0.5], 0.0));
        assert!(half.is_feasible(&[0.0], 0.0));
    }

    #[test]
    fn sublevel_examples() {
        let p = example_41();
        let ybar = SublevelBound::new(vec![-4.0, 2.0]).unwrap();
        assert!(p.sublevel_member(&ybar, &[2.0], 0.0).unwrap());
        assert!(!p.sublevel_member(&ybar, &[1.0], 0.0).unwrap());
        let all = SublevelBound::unrestricted(2);
        assert!(p.sublevel_member(&all, &[17.0], 0.0).unwrap());
        assert!(!p.sublevel_member(&all, &[-1.0], 0.0).unwrap());
    }

    #[test]
    fn invalid_problems_are_rejected() {
        assert!(Problem::new(1, vec![Expr::var(1)], FeasibleSet::Full).is_err());
        assert!(Problem::new(1, vec![Expr::Max(vec![x1()])], FeasibleSet::Full).is_err());
        let bad_box = FeasibleSet::Box {
            lower: vec![1.0],
            upper: vec![0.0],
        };
        assert!(Problem::new(1, vec![x1()], bad_box).is_err());
        let zero_row = FeasibleSet::Polyhedron(vec![HalfSpace {
            normal: vec![0.0],
            offset: 1.0,
        }]);
        assert!(Problem::new(1, vec![x1()], zero_row).is_err());
        let nonsmooth = FeasibleSet::SmoothIneq(vec![x1().abs()]);
        assert!(Problem::new(1, vec![x1()], nonsmooth).is_err());
        assert!(SublevelBound::new(vec![f64::NEG_INFINITY]).is_err());
    }

    #[test]
    fn abs_canonicalizes_to_max() {
        let e = (x1() + Expr::constant(1.0)).abs().canonical();
        assert!(matches!(&e, Expr::Max(cs) if cs.len() == 2));
        for x in [-3.0, -1.0, 0.5] {
            assert_eq!(e.eval(&[x]), (x + 1.0f64).abs());
        }
    }

    #[test]
    fn polyhedron_projection_is_feasible() {
        let rows = FeasibleSet::Polyhedron(vec![
            HalfSpace {
                normal: vec![1.0, 1.0],
                offset: 1.0,
            },
            HalfSpace {
                normal: vec![-1.0, 0.0],
                offset: 0.0,
            },
        ]);
        let y = rows.project(&[3.0, 2.0]).unwrap();
        assert!(rows.is_feasible(&y, 1e-12));
        // projection of (3,2) onto x1+x2<=1 is (1,0), which also satisfies x1>=0
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn smooth_repair_reaches_disc() {
        let disc = FeasibleSet::SmoothIneq(vec![
            Expr::var(0).powi(2) + Expr::var(1).powi(2) - Expr::constant(1.0),
        ]);
        let y = disc.project(&[3.0, 4.0]).unwrap();
        assert!(disc.is_feasible(&y, 0.0));
    }
}
