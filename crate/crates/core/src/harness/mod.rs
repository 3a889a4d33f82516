//! Seeded property suites, machine-readable reports and file formats.

pub mod formats;
mod suites;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use suites::SUITE_IDS;

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `i` under master seed `master`.
pub fn trial_seed(master: u64, i: usize) -> u64 {
    splitmix64(master.wrapping_add((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Lowercase hex SHA-256 of `text`.
pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSpec {
    pub id: String,
    pub seed: u64,
    /// `None` selects the suite default.
    pub trials: Option<usize>,
    /// Size knob (largest class or side); `None` selects the suite default.
    pub n: Option<usize>,
}

impl SuiteSpec {
    pub fn new(id: &str, seed: u64) -> Self {
        SuiteSpec { id: id.to_string(), seed, trials: None, n: None }
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Neither confirmed nor refuted (budget, heuristic limits, unmet preconditions).
    Caveat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub digest: String,
    pub outcome: Outcome,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub n: usize,
    pub passed: bool,
    pub failures: usize,
    pub caveats: Vec<String>,
    pub records: Vec<TrialRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    /// Pretty JSON with sorted keys.
    pub fn to_json(&self) -> String {
        canonical_json(self)
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn canonical_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("report values serialise");
    serde_json::to_string_pretty(&value).expect("JSON values print")
}

/// Runs a registered suite. Trials run in parallel and are reported in order.
pub fn run_suite(spec: &SuiteSpec) -> Result<Report> {
    run_suite_with(spec, false)
}

/// As [`run_suite`], optionally recording wall time.
pub fn run_suite_with(spec: &SuiteSpec, timing: bool) -> Result<Report> {
    let suite = suites::lookup(&spec.id).ok_or_else(|| Error::UnknownSuite(spec.id.clone()))?;
    let trials = spec.trials.unwrap_or(suite.trials);
    let n = spec.n.unwrap_or(suite.n);
    if n == 0 {
        return Err(Error::ParameterOutOfContract("size knob must be positive".into()));
    }
    let start = Instant::now();
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|index| {
            let seed = trial_seed(spec.seed, index);
            let out = (suite.body)(&mut suites::Ctx::new(seed, n));
            let (digest_text, outcome, detail) = match out {
                Ok(t) => (t.instance, t.outcome, t.detail),
                Err(e @ Error::BudgetExceeded(_)) => (String::new(), Outcome::Caveat, Value::String(e.to_string())),
                Err(e) => (String::new(), Outcome::Fail, Value::String(format!("error: {e}"))),
            };
            TrialRecord { index, seed, digest: digest(&digest_text), outcome, detail }
        })
        .collect();
    let failures = records.iter().filter(|r| r.outcome == Outcome::Fail).count();
    let caveats = records
        .iter()
        .filter(|r| r.outcome == Outcome::Caveat)
        .map(|r| match &r.detail {
            Value::String(s) => format!("trial {}: {s}", r.index),
            v => format!("trial {}: {}", r.index, v.get("caveat").and_then(Value::as_str).unwrap_or("unresolved")),
        })
        .collect();
    Ok(Report {
        suite: spec.id.clone(),
        seed: spec.seed,
        trials,
        n,
        passed: failures == 0,
        failures,
        caveats,
        records,
        wall_time_ms: timing.then(|| start.elapsed().as_millis() as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_spread() {
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_ne!(trial_seed(1, 0), trial_seed(2, 0));
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite(&SuiteSpec::new("nope", 0)), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_suite_runs() {
        for id in SUITE_IDS {
            let r = run_suite(&SuiteSpec::new(id, 3).trials(2)).unwrap();
            assert!(r.passed, "{id}: {}", r.to_json());
            assert_eq!(r.records.len(), 2);
        }
    }
}
