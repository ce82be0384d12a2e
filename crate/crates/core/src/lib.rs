//! Numerical diagnostics for constrained nonsmooth vector optimization.
//!
//! The crate models a problem `min f(x) over x in Ω` with `f: R^n -> R^m`
//! built from a small expression language and `Ω` given as a box, a
//! polyhedron or a finite set of smooth inequalities. On top of that it
//! provides:
//!
//! * polyhedral over-approximations of limiting subdifferentials and exact
//!   normal cones for the supported feasible sets ([`calculus`]),
//! * a min-norm-point solver over `conv(V) + cone(R)` and the extended Rabier
//!   function built on it ([`minnorm`]),
//! * sampling probes for properness, Palais–Smale, weak Palais–Smale and
//!   M-tameness at a sublevel ([`asymptotics`]),
//! * Pareto / Geoffrion checks, weighted-sum scalarization and the recession
//!   cone condition ([`efficiency`]),
//! * brute-force reference computations ([`oracle`]).
//!
//! Probes return *evidence*. A witness sequence that refutes a condition is
//! sound; an empty cloud only means nothing was found up to the outermost
//! radius at the configured thresholds.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod asymptotics;
pub mod calculus;
pub mod efficiency;
mod error;
pub mod linalg;
pub mod minnorm;
pub mod oracle;
pub mod problem;
mod search;
pub mod verdict;

pub use error::{Error, Result};
pub use problem::{Expr, FeasibleSet, HalfSpace, Problem, SublevelBound};
