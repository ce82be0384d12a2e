//! JSON reports and witness replay.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use vecopt_core::linalg::{dist, norm};
use vecopt_core::minnorm::{gamma_residual, rabier_nu, RabierMode};
use vecopt_core::verdict::SampleRecord;

use crate::parse::parse_problem;
use crate::CliError;

/// Rows kept per witness table and shell unless `--full` is given.
pub const ROW_CAP: usize = 50;

/// Replay tolerance for every recorded value.
pub const REPLAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub problem: ProblemEcho,
    pub seed: Option<u64>,
    /// Mode and tolerance used for the recorded `nu` and `gamma` values.
    pub mode: RabierMode,
    pub minnorm_tol: f64,
    pub thresholds: Value,
    pub result: Value,
    pub witnesses: Vec<WitnessRow>,
    pub omitted_rows: usize,
    pub timing: Timing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemEcho {
    /// SHA-256 of `text`.
    pub digest: String,
    /// Canonical problem file.
    pub text: String,
}

impl ProblemEcho {
    pub fn new(text: String) -> Self {
        ProblemEcho {
            digest: digest(&text),
            text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    pub table: String,
    pub shell: Option<usize>,
    pub x: Vec<f64>,
    pub norm_x: f64,
    pub fx: Vec<f64>,
    pub nu: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// JSON value of a float; non-finite values become strings.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        Value::from(v)
    } else if v.is_nan() {
        Value::from("nan")
    } else if v > 0.0 {
        Value::from("inf")
    } else {
        Value::from("-inf")
    }
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

/// Witness tables with the per-shell row cap.
#[derive(Debug, Default)]
pub struct Witnesses {
    full: bool,
    rows: Vec<WitnessRow>,
    omitted: usize,
    counts: BTreeMap<(String, Option<usize>), usize>,
}

impl Witnesses {
    pub fn new(full: bool) -> Self {
        Witnesses {
            full,
            ..Default::default()
        }
    }

    pub fn push(&mut self, table: &str, rec: &SampleRecord) {
        let count = self.counts.entry((table.to_string(), rec.shell)).or_insert(0);
        *count += 1;
        if !self.full && *count > ROW_CAP {
            self.omitted += 1;
            return;
        }
        self.rows.push(WitnessRow {
            table: table.to_string(),
            shell: rec.shell,
            x: rec.x.clone(),
            norm_x: rec.norm_x,
            fx: rec.fx.clone(),
            nu: rec.nu,
            gamma: rec.gamma,
        });
    }

    pub fn extend<'a>(&mut self, table: &str, recs: impl IntoIterator<Item = &'a SampleRecord>) {
        for r in recs {
            self.push(table, r);
        }
    }

    pub fn into_parts(self) -> (Vec<WitnessRow>, usize) {
        (self.rows, self.omitted)
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// The report without its timing field, for comparing runs.
    pub fn body(&self) -> String {
        let mut r = self.clone();
        r.timing.elapsed_ms = 0.0;
        r.to_json()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub row: usize,
    pub field: String,
    pub recorded: Value,
    pub replayed: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayOutcome {
    pub rows: usize,
    pub digest_ok: bool,
    pub mismatches: Vec<Mismatch>,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.digest_ok && self.mismatches.is_empty()
    }
}

/// Re-evaluates every witness row of a report against its embedded problem.
pub fn replay(report: &Report) -> Result<ReplayOutcome, CliError> {
    let problem = parse_problem(&report.problem.text)?;
    let mut mismatches = Vec::new();
    let mut check = |row: usize, field: &str, recorded: &[f64], replayed: &[f64]| {
        let far = recorded.len() != replayed.len() || dist(recorded, replayed) > REPLAY_TOL;
        if far {
            mismatches.push(Mismatch {
                row,
                field: field.to_string(),
                recorded: nums(recorded),
                replayed: nums(replayed),
            });
        }
    };
    for (i, w) in report.witnesses.iter().enumerate() {
        if w.x.len() != problem.n() {
            check(i, "x", &w.x, &vec![0.0; problem.n()]);
            continue;
        }
        check(i, "fx", &w.fx, &problem.evaluate(&w.x)?);
        check(i, "norm_x", &[w.norm_x], &[norm(&w.x)]);
        if let Some(nu) = w.nu {
            let again = rabier_nu(&problem, &w.x, report.mode, report.minnorm_tol)?.value;
            check(i, "nu", &[nu], &[again]);
        }
        if let Some(g) = w.gamma {
            let again = gamma_residual(&problem, &w.x, report.mode, report.minnorm_tol)?.value;
            check(i, "gamma", &[g], &[again]);
        }
    }
    Ok(ReplayOutcome {
        rows: report.witnesses.len(),
        digest_ok: digest(&report.problem.text) == report.problem.digest,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            digest("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn rows_are_capped_per_shell() {
        let rec = |shell| SampleRecord {
            shell: Some(shell),
            x: vec![1.0],
            norm_x: 1.0,
            fx: vec![0.0],
            nu: None,
            gamma: None,
        };
        let mut w = Witnesses::new(false);
        for _ in 0..60 {
            w.push("t", &rec(1));
            w.push("t", &rec(2));
        }
        let (rows, omitted) = w.into_parts();
        assert_eq!(rows.len(), 100);
        assert_eq!(omitted, 20);
        let mut w = Witnesses::new(true);
        for _ in 0..60 {
            w.push("t", &rec(1));
        }
        assert_eq!(w.into_parts().0.len(), 60);
    }

    #[test]
    fn non_finite_numbers_are_strings() {
        assert_eq!(num(f64::INFINITY), Value::from("inf"));
        assert_eq!(num(1.5), Value::from(1.5));
    }
}
