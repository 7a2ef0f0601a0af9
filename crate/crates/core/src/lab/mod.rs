//! Batch experiments: configuration, lemma-check suites and deterministic
//! JSON/CSV reports.

mod report;
mod suites;

pub use report::{emit, render, render_value, Case, Format, Relation, Report};
pub use suites::{run_lemma_suite, SUITES};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantifier::GridSpec;
use crate::Budgets;

/// Parameter lists swept by the suites. `n` is a generator depth (states
/// of `n + 1` qubits), `eps` a precision, `r` a grid precision, `t` a
/// majority-vote width and `v` an acceptance value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweeps {
    pub n: Vec<usize>,
    pub eps: Vec<f64>,
    pub r: Vec<u32>,
    pub t: Vec<usize>,
    pub v: Vec<f64>,
    /// Random samples per suite (or per sweep point).
    pub samples: usize,
    /// Probe states per separability check.
    pub probes: usize,
}

impl Default for Sweeps {
    fn default() -> Self {
        Sweeps {
            n: vec![0, 1, 2, 3],
            eps: vec![0.25, 0.0625],
            r: vec![2, 3, 4, 5],
            t: vec![1, 3, 5],
            v: vec![0.25, 0.5, 0.75],
            samples: 20,
            probes: 100,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub budgets: Budgets,
    pub sweeps: Sweeps,
    pub output: OutputSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig { seed: 7, budgets: Budgets::default(), sweeps: Sweeps::default(), output: OutputSpec::default() }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::IoFailure(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn with_seed(self, seed: u64) -> Self {
        ExperimentConfig { seed, ..self }
    }

    /// Positive budgets and sweep values that fit them.
    pub fn validate(&self) -> Result<()> {
        self.budgets.validate()?;
        let s = &self.sweeps;
        let bad = |what: String| Err(Error::ConfigInvalid(what));
        if s.samples == 0 {
            return bad("sweeps.samples must be positive".into());
        }
        if let Some(n) = s.n.iter().find(|&&n| n + 1 > self.budgets.qubits.min(crate::codec::MAX_DEPTH + 1)) {
            return bad(format!("sweeps.n = {n} exceeds the qubit budget"));
        }
        if let Some(e) = s.eps.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
            return bad(format!("sweeps.eps = {e} is not in (0, 1)"));
        }
        for &r in &s.r {
            GridSpec::new(1, r).map_err(|e| Error::ConfigInvalid(format!("sweeps.r = {r}: {e}")))?;
        }
        if let Some(t) = s.t.iter().find(|&&t| t % 2 == 0) {
            return bad(format!("sweeps.t = {t} is not odd"));
        }
        if let Some(v) = s.v.iter().find(|&&v| !(0.0..=1.0).contains(&v)) {
            return bad(format!("sweeps.v = {v} is not a probability"));
        }
        Ok(())
    }
}
