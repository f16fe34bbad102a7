use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::linalg::ComplexMatrix;

/// How a step relates its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `lhs <= rhs`, holds when `slack >= -tolerance`.
    LessEq,
    /// `lhs == rhs`, holds when `|slack| <= tolerance`.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStep {
    pub label: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl ChainStep {
    fn new(label: impl Into<String>, relation: Relation, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        let holds = match relation {
            Relation::LessEq => slack >= -tolerance,
            Relation::Equal => slack.abs() <= tolerance,
        };
        Self {
            label: label.into(),
            relation,
            lhs,
            rhs,
            slack,
            tolerance,
            holds,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Identifies the inputs a report was computed from.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Fingerprint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Truncated SHA-256 of each input matrix, in argument order.
    pub hashes: Vec<String>,
}

/// Hex prefix of the SHA-256 of a matrix's shape and entries.
pub fn matrix_hash(m: &ComplexMatrix) -> String {
    let mut h = Sha256::new();
    h.update((m.rows() as u64).to_le_bytes());
    h.update((m.cols() as u64).to_le_bytes());
    for z in m.entries() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    hex::encode(&h.finalize()[..8])
}

/// Evaluated lines of one inequality chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub name: String,
    pub steps: Vec<ChainStep>,
    pub verdict: Verdict,
    pub fingerprint: Fingerprint,
}

impl ChainReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            steps: Vec::new(),
            verdict: Verdict::Pass,
            fingerprint: Fingerprint::default(),
        }
    }

    pub fn with_inputs<'a>(mut self, inputs: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        self.fingerprint.hashes = inputs.into_iter().map(matrix_hash).collect();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.fingerprint.seed = Some(seed);
        self
    }

    pub fn push(&mut self, step: ChainStep) {
        if !step.holds {
            self.verdict = Verdict::Fail;
        }
        self.steps.push(step);
    }

    /// Records `lhs <= rhs` up to `tol`.
    pub fn le(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        self.push(ChainStep::new(label, Relation::LessEq, lhs, rhs, tol));
    }

    /// Records `lhs == rhs` up to `tol`.
    pub fn identity(&mut self, label: impl Into<String>, lhs: f64, rhs: f64, tol: f64) {
        self.push(ChainStep::new(label, Relation::Equal, lhs, rhs, tol));
    }

    /// Appends another report's steps under a label prefix.
    pub fn absorb(&mut self, prefix: &str, other: ChainReport) {
        for mut step in other.steps {
            step.label = format!("{prefix}{}", step.label);
            self.push(step);
        }
        self.fingerprint.hashes.extend(other.fingerprint.hashes);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn step(&self, label: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.label == label)
    }

    /// Smallest slack over inequality steps.
    pub fn worst_slack(&self) -> Option<f64> {
        self.steps
            .iter()
            .filter(|s| s.relation == Relation::LessEq)
            .map(|s| s.slack)
            .reduce(f64::min)
    }

    /// Largest `|slack|` over identity steps.
    pub fn worst_identity_error(&self) -> Option<f64> {
        self.steps
            .iter()
            .filter(|s| s.relation == Relation::Equal)
            .map(|s| s.slack.abs())
            .reduce(f64::max)
    }
}
