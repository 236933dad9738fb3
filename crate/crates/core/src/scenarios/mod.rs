//! Executable scenarios: each builds its distributions, runs the relevant
//! indicator and convolution machinery, and grades the observations against
//! claim constants compiled into the scenario definition.
//!
//! Verdicts derive mechanically from the observations and the stated
//! tolerances; a scenario reports what it measured even when that contradicts
//! the claim it probes.

mod breiman;
mod lattice_product;
mod oscillating;
mod sin_mod;
mod square_exp;
mod transfer;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::Error;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One graded sub-check; `passed = None` marks a step that could not be
/// evaluated (and forces an inconclusive verdict).
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: Option<bool>,
    pub detail: String,
}

impl CheckResult {
    pub fn graded(name: &str, passed: bool, detail: String) -> Self {
        CheckResult { name: name.into(), passed: Some(passed), detail }
    }

    pub fn skipped(name: &str, detail: String) -> Self {
        CheckResult { name: name.into(), passed: None, detail }
    }
}

/// A named numeric series recorded by a scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Observation {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioResult {
    pub scenario_id: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub claim: String,
    pub observations: Vec<Observation>,
    pub checks: Vec<CheckResult>,
    pub verdict: Verdict,
    pub runtime_seconds: f64,
}

impl ScenarioResult {
    pub(crate) fn grade(
        scenario_id: &str,
        claim: &str,
        parameters: BTreeMap<String, serde_json::Value>,
        observations: Vec<Observation>,
        checks: Vec<CheckResult>,
        started: Instant,
    ) -> ScenarioResult {
        let verdict = if checks.iter().any(|c| c.passed.is_none()) {
            Verdict::Inconclusive
        } else if checks.iter().all(|c| c.passed == Some(true)) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        ScenarioResult {
            scenario_id: scenario_id.into(),
            claim: claim.into(),
            parameters,
            observations,
            checks,
            verdict,
            runtime_seconds: started.elapsed().as_secs_f64(),
        }
    }
}

/// String-keyed scenario parameters (from the CLI `--param k=v` surface).
pub type Params = BTreeMap<String, String>;

pub(crate) fn param_f64(params: &Params, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s
            .parse::<f64>()
            .map_err(|_| Error::Scenario(format!("parameter `{key}` is not a number: {s}"))),
    }
}

pub(crate) fn param_usize(params: &Params, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        None => Ok(default),
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| Error::Scenario(format!("parameter `{key}` is not an integer: {s}"))),
    }
}

pub(crate) fn param_str<'a>(params: &'a Params, key: &'a str, default: &'a str) -> &'a str {
    params.get(key).map(String::as_str).unwrap_or(default)
}

/// All scenario ids, CLI-addressable.
pub const SCENARIO_IDS: [&str; 6] = [
    "sin-modulation",
    "oscillating-plateau",
    "lattice-plateau-product",
    "square-exponential-product",
    "breiman",
    "transfer",
];

/// Run a scenario by id.
pub fn run_scenario(id: &str, params: &Params) -> Result<ScenarioResult> {
    match id {
        "sin-modulation" => sin_mod::run(params),
        "oscillating-plateau" => oscillating::run(params),
        "lattice-plateau-product" => lattice_product::run(params),
        "square-exponential-product" => square_exp::run(params),
        "breiman" => breiman::run(params),
        "transfer" => transfer::run(params),
        _ => Err(Error::Scenario(format!(
            "unknown scenario `{id}`; available: {}",
            SCENARIO_IDS.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_scenario_is_an_error() {
        let err = run_scenario("does-not-exist", &Params::new()).unwrap_err();
        assert!(err.to_string().contains("unknown scenario"));
    }

    #[test]
    fn bad_parameter_is_an_error() {
        let mut p = Params::new();
        p.insert("gamma".into(), "abc".into());
        assert!(run_scenario("sin-modulation", &p).is_err());
    }
}
