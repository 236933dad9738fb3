//! Sinusoidally modulated exponential-polynomial tail: a valid distribution
//! whose shift ratios oscillate forever (no exponential class fits) yet whose
//! t→0 indicator collapses to 1.

use std::collections::BTreeMap;
use std::time::Instant;

use super::{param_f64, CheckResult, Observation, Params, ScenarioResult};
use crate::dist::{power_law_shifted, sin_modulated, tilt};
use crate::grid::GridSpec;
use crate::indicators::{c_star_series, c_zero_extrapolate, decay_exponent};
use crate::Result;

const CLAIM: &str = "the modulated tail e^{-gx}(1+x)^{-3}(1+sin(x)/a) is a valid survival \
function; its shift-ratio sup stays within e^{gt}(a+1)/(a-1); the t->0 indicator extrapolates \
to 1 within 2%; and the decay exponent at alpha=1 pins to g within 1%";

pub fn run(params: &Params) -> Result<ScenarioResult> {
    let started = Instant::now();
    let gamma = param_f64(params, "gamma", 0.5)?;
    let a = param_f64(params, "a", 10.0)?;
    let grid_max = param_f64(params, "grid_max", 1e6)?;

    let mut meta = BTreeMap::new();
    meta.insert("gamma".into(), serde_json::json!(gamma));
    meta.insert("a".into(), serde_json::json!(a));
    meta.insert("grid_max".into(), serde_json::json!(grid_max));

    let base = tilt(power_law_shifted(3.0, 0.0, 1.0)?, gamma, 1.0)?;
    let f = match sin_modulated(base, a) {
        Ok(f) => f,
        Err(e) => {
            // parameter-validity failures are reported, not thrown
            let checks = vec![CheckResult::skipped("construction", e.to_string())];
            return Ok(ScenarioResult::grade(
                "sin-modulation",
                CLAIM,
                meta,
                Vec::new(),
                checks,
                started,
            ));
        }
    };

    let mut checks = Vec::new();
    let report = crate::dist::validate(&f);
    checks.push(CheckResult::graded("tail-is-monotone", report.ok, report.summary()));

    let grid = GridSpec::geometric(10.0, grid_max, 400).build();
    let mut observations = Vec::new();

    // shift-ratio sup bounded by e^{γt}(a+1)/(a−1)
    for &t in &[0.5, 1.0] {
        let s = c_star_series(&f, t, &grid)?;
        let bound = (gamma * t).exp() * (a + 1.0) / (a - 1.0);
        // 1e-4 slack covers the finite-x drift of the power-law base
        // ((1+x)/(1+x-t))^3 over the sampled window
        checks.push(CheckResult::graded(
            &format!("sup-bound-t-{t}"),
            s.sup_estimate() <= bound * (1.0 + 1e-4),
            format!("sup = {:.8}, bound = {bound:.8}", s.sup_estimate()),
        ));
        if t == 0.5 {
            observations.push(Observation {
                name: "shift_ratio_t0.5".into(),
                points: s.points.iter().map(|p| (p.x, p.log_ratio.exp())).collect(),
            });
        }
    }

    // t→0 extrapolation lands within 2% of 1
    let series: Vec<_> = [0.0625, 0.125, 0.25, 0.5]
        .iter()
        .map(|&t| c_star_series(&f, t, &grid))
        .collect::<Result<_>>()?;
    let ext = c_zero_extrapolate(&series)?;
    checks.push(CheckResult::graded(
        "zero-shift-extrapolation",
        (ext.c_star_0 - 1.0).abs() <= 0.02 && ext.monotone_ok,
        format!("C*(F,0) = {:.6}, C_*(F,0) = {:.6}", ext.c_star_0, ext.c_substar_0),
    ));
    observations.push(Observation {
        name: "sup_by_t".into(),
        points: series.iter().map(|s| (s.t, s.sup_estimate())).collect(),
    });

    // decay exponent at α = 1 pins to γ
    let est = decay_exponent(&f, 1.0, &grid)?;
    checks.push(CheckResult::graded(
        "decay-exponent-alpha-1",
        (est.lo_hat - gamma).abs() <= 0.01 * gamma && (est.hi_quarter - gamma).abs() <= 0.01 * gamma,
        format!("lo = {:.6}, hi(quarter) = {:.6}, target = {gamma}", est.lo_hat, est.hi_quarter),
    ));

    Ok(ScenarioResult::grade("sin-modulation", CLAIM, meta, observations, checks, started))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::Verdict;

    #[test]
    fn defaults_pass() {
        let r = run(&Params::new()).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{:#?}", r.checks);
    }

    #[test]
    fn tight_a_is_inconclusive() {
        // a below the hazard threshold (1+b)/b = 3 is rejected at construction
        let mut p = Params::new();
        p.insert("a".into(), "2.9".into());
        let r = run(&p).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.checks[0].detail.contains("a > (1+b)/b"));
    }

    #[test]
    fn huge_a_approaches_unmodulated() {
        let mut p = Params::new();
        p.insert("a".into(), "1e6".into());
        let r = run(&p).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        // sup at t over the bound e^{γt}: modulated part negligible
        let sup_by_t = r.observations.iter().find(|o| o.name == "sup_by_t").unwrap();
        for &(t, sup) in &sup_by_t.points {
            assert!((sup - (0.5 * t).exp()).abs() < 1e-4, "t={t} sup={sup}");
        }
    }
}
