//! Local search helpers: admitting points into a region, repairing sublevel
//! violations and descending a nonnegative statistic.

use alloc::vec::Vec;

use crate::linalg::{axpy, norm, norm_sq, scaled};
use crate::{Problem, SublevelBound};

/// Where a local search may move: `Ω`, the sublevel set, and optionally a
/// radial shell `lo <= |x| < hi` and a coordinate box.
pub(crate) struct Region<'a> {
    pub problem: &'a Problem,
    pub ybar: &'a SublevelBound,
    pub shell: Option<(f64, f64)>,
    pub bbox: Option<(&'a [f64], &'a [f64])>,
    pub tol: f64,
}

impl Region<'_> {
    fn in_shell(&self, x: &[f64]) -> bool {
        match self.shell {
            None => true,
            Some((lo, hi)) => {
                let r = norm(x);
                r >= lo && r < hi
            }
        }
    }

    fn in_box(&self, x: &[f64]) -> bool {
        match self.bbox {
            None => true,
            Some((l, u)) => x.iter().zip(l.iter().zip(u)).all(|(v, (a, b))| v >= a && v <= b),
        }
    }

    fn clamp_shell(&self, x: &mut Vec<f64>) {
        if let Some((lo, hi)) = self.shell {
            let r = norm(x);
            if r == 0.0 {
                return;
            }
            let target = if r < lo {
                lo
            } else if r >= hi {
                hi * (1.0 - 1e-12)
            } else {
                return;
            };
            *x = scaled(x, target / r);
        }
    }

    fn clamp_box(&self, x: &mut [f64]) {
        if let Some((l, u)) = self.bbox {
            for (v, (a, b)) in x.iter_mut().zip(l.iter().zip(u)) {
                *v = v.clamp(*a, *b);
            }
        }
    }

    /// Pulls `x` into the shell, the box and `Ω` (ignoring the sublevel
    /// constraint). `None` if the pieces cannot be reconciled.
    pub fn place(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut y = x.to_vec();
        for _ in 0..4 {
            self.clamp_shell(&mut y);
            self.clamp_box(&mut y);
            y = self.problem.feasible().project(&y)?;
            if self.in_shell(&y) && self.in_box(&y) && y.iter().all(|v| v.is_finite()) {
                return Some(y);
            }
        }
        None
    }

    /// Sublevel excess `max_i (f_i - ȳ_i)` and the gradient of an attaining
    /// component; `None` when the sublevel is unrestricted.
    fn excess(&self, x: &[f64]) -> Option<(f64, Vec<f64>)> {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for (f, b) in self.problem.objectives().iter().zip(self.ybar.values()) {
            if !b.is_finite() {
                continue;
            }
            let (v, g) = f.eval_grad(x);
            let e = v - b;
            if best.as_ref().is_none_or(|(be, _)| e > *be) {
                best = Some((e, g));
            }
        }
        best
    }

    pub fn admits(&self, x: &[f64]) -> bool {
        self.in_shell(x)
            && self.in_box(x)
            && self.problem.feasible().is_feasible(x, self.tol)
            && self.ybar.contains(&self.problem.eval_unchecked(x), self.tol)
    }

    /// Moves `x` into the region: placement followed by Newton steps on the
    /// sublevel excess, each followed by placement again.
    pub fn repair(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut y = self.place(x)?;
        let cap = match self.shell {
            Some((lo, hi)) => (hi - lo).max(1.0),
            None => 1.0 + norm(&y),
        };
        let mut outside: Option<Vec<f64>> = None;
        for _ in 0..40 {
            if self.admits(&y) {
                return Some(match outside {
                    Some(o) => self.to_boundary(o, y),
                    None => y,
                });
            }
            outside = Some(y.clone());
            let (e, g) = self.excess(&y)?;
            let gg = norm_sq(&g);
            if gg == 0.0 || !e.is_finite() {
                return None;
            }
            let mut step = (e + 0.5 * self.tol) / gg;
            let len = step * libm::sqrt(gg);
            if len > cap {
                step *= cap / len;
            }
            let mut z = y.clone();
            axpy(&mut z, -step, &g);
            y = self.place(&z)?;
        }
        self.admits(&y).then_some(y)
    }

    /// Bisects the segment from a rejected point to an admitted one, so a
    /// repaired point ends on the boundary of the region like a projection
    /// would. Returns the last admitted point.
    fn to_boundary(&self, mut out: Vec<f64>, mut inside: Vec<f64>) -> Vec<f64> {
        for _ in 0..60 {
            let mid: Vec<f64> = out.iter().zip(&inside).map(|(a, b)| 0.5 * (a + b)).collect();
            if mid == out || mid == inside {
                break;
            }
            match self.place(&mid) {
                Some(p) if self.admits(&p) => inside = p,
                Some(p) => out = p,
                None => break,
            }
        }
        inside
    }

    /// Descends a nonnegative statistic `s` from an admitted `x` with
    /// Polyak steps toward zero, `x - s g / |g|^2`, where `g` is the
    /// central-difference gradient of `s^2 / 2` divided by `s`. Steps are
    /// halved until they decrease `s` and stay in the region. Stops once
    /// `s <= target`, on stalling, or after `max_steps`.
    pub fn descend<F>(&self, x: Vec<f64>, stat: &F, target: f64, max_steps: usize) -> (Vec<f64>, f64)
    where
        F: Fn(&[f64]) -> Option<f64>,
    {
        let Some(mut s) = stat(&x) else {
            return (x, f64::INFINITY);
        };
        let mut x = x;
        for _ in 0..max_steps {
            if s <= target || s == 0.0 {
                break;
            }
            let Some(g) = fd_gradient(&x, s, stat) else {
                break;
            };
            let gg = norm_sq(&g);
            if gg == 0.0 || !gg.is_finite() {
                break;
            }
            let mut t = s / gg;
            let cap = 0.25 * (1.0 + norm(&x));
            let len = t * libm::sqrt(gg);
            if len > cap {
                t *= cap / len;
            }
            let mut improved = None;
            for _ in 0..30 {
                let mut z = x.clone();
                axpy(&mut z, -t, &g);
                if let Some(z) = self.place(&z).filter(|z| self.admits(z)) {
                    if let Some(sz) = stat(&z) {
                        if sz < s {
                            improved = Some((z, sz));
                            break;
                        }
                    }
                }
                t *= 0.5;
            }
            match improved {
                Some((z, sz)) => {
                    x = z;
                    s = sz;
                }
                None => break,
            }
        }
        (x, s)
    }

    /// Gradient descent on a smooth-ish scalar `value` (may be negative),
    /// with backtracking and an initial step of a quarter of `|x| + 1`.
    pub fn minimize<F>(&self, x: Vec<f64>, value: &F, max_steps: usize) -> (Vec<f64>, f64)
    where
        F: Fn(&[f64]) -> (f64, Vec<f64>),
    {
        let (mut v, mut g) = value(&x);
        let mut x = x;
        for _ in 0..max_steps {
            let gn = norm(&g);
            if gn == 0.0 || !gn.is_finite() {
                break;
            }
            let mut t = 0.25 * (1.0 + norm(&x)) / gn;
            let mut moved = false;
            for _ in 0..40 {
                let mut z = x.clone();
                axpy(&mut z, -t, &g);
                if let Some(z) = self.place(&z).filter(|z| self.admits(z)) {
                    let (vz, gz) = value(&z);
                    if vz < v {
                        x = z;
                        v = vz;
                        g = gz;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        (x, v)
    }
}

fn fd_gradient<F>(x: &[f64], s: f64, stat: &F) -> Option<Vec<f64>>
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let mut g = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    for i in 0..x.len() {
        let ulp = f64::EPSILON * x[i].abs().max(1.0);
        let h = (64.0 * ulp).max(1e-6);
        probe[i] = x[i] + h;
        let sp = stat(&probe);
        probe[i] = x[i] - h;
        let sm = stat(&probe);
        probe[i] = x[i];
        let d = match (sp, sm) {
            (Some(a), Some(b)) => (a * a - b * b) / (4.0 * h * s),
            (Some(a), None) => (a * a - s * s) / (2.0 * h * s),
            (None, Some(b)) => (s * s - b * b) / (2.0 * h * s),
            (None, None) => return None,
        };
        g.push(d);
    }
    Some(g)
}
