//! Evidence records shared by the probes and the efficiency checks.

use alloc::vec::Vec;

use crate::linalg::norm;
use crate::Problem;

/// One sampled point, stored so it can be re-evaluated later.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleRecord {
    /// Shell index, if the point came from a shell.
    pub shell: Option<usize>,
    pub x: Vec<f64>,
    pub norm_x: f64,
    pub fx: Vec<f64>,
    /// Rabier value at `x`, when it was computed.
    pub nu: Option<f64>,
    /// `Γ` residual at `x`, when it was computed.
    pub gamma: Option<f64>,
}

impl SampleRecord {
    pub fn at(problem: &Problem, x: Vec<f64>, shell: Option<usize>) -> Self {
        let fx = problem.eval_unchecked(&x);
        SampleRecord {
            shell,
            norm_x: norm(&x),
            x,
            fx,
            nu: None,
            gamma: None,
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Status {
    HoldsEvidence,
    FailsWithWitness,
}

/// Per-shell trend statistics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShellSummary {
    pub shell: usize,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub samples: usize,
    /// Smallest `|f(x)|` among the shell's samples.
    pub min_norm_f: Option<f64>,
    /// Smallest value of the probe's own statistic.
    pub min_stat: Option<f64>,
}

/// Outcome of a probe. A failing verdict always carries a witness.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub status: Status,
    pub witness: Vec<SampleRecord>,
    pub summary: Vec<ShellSummary>,
}

impl Verdict {
    pub fn holds(summary: Vec<ShellSummary>) -> Self {
        Verdict {
            status: Status::HoldsEvidence,
            witness: Vec::new(),
            summary,
        }
    }

    /// Panics if `witness` is empty.
    pub fn fails(witness: Vec<SampleRecord>, summary: Vec<ShellSummary>) -> Self {
        assert!(!witness.is_empty(), "a failing verdict needs a witness");
        Verdict {
            status: Status::FailsWithWitness,
            witness,
            summary,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.status == Status::HoldsEvidence
    }
}
