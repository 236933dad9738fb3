//! Self-product of the squared-exponential tail `e^{−x²}`.
//!
//! The factor falls outside the generalized long-tailed class (its own shift
//! ratio diverges like `e^{2xt}`), and this scenario measures how much of
//! that divergence survives in the product. The graded claim asserts an
//! unbounded, eventually-large product shift ratio; the measured ratio is
//! what the engine brackets say, whichever way that goes. (The product tail
//! here has the exact Bessel form `2xK₁(2x)`, whose shift log-ratio tends to
//! the constant `2t` — the recorded observations make the bounded limit
//! visible next to the graded floor.)

use std::collections::BTreeMap;
use std::time::Instant;

use super::{param_f64, CheckResult, Observation, Params, ScenarioResult};
use crate::conv::product_tail;
use crate::dist::exp_polynomial;
use crate::grid::GridSpec;
use crate::indicators::decay_exponent;
use crate::Result;

const CLAIM: &str = "for F = G with tail e^{-x^2}, the product shift log-ratio \
log H(x-t) - log H(x) increases strictly along x = 10, 20, 40 and exceeds 10 at the top, \
while both factors satisfy the two-sided decay conditions at alpha = 2";

const LOG_RATIO_FLOOR: f64 = 10.0;

pub fn run(params: &Params) -> Result<ScenarioResult> {
    let started = Instant::now();
    let t = param_f64(params, "t", 1.0)?;
    let tol = param_f64(params, "tol", 1e-6)?;

    let mut meta = BTreeMap::new();
    meta.insert("t".into(), serde_json::json!(t));
    meta.insert("tol".into(), serde_json::json!(tol));

    let f = exp_polynomial(&[(1.0, 2.0)])?;
    let xs = [10.0, 20.0, 40.0];

    let mut log_ratios = Vec::new();
    for &x in &xs {
        let shifted = product_tail(&f, &f, x - t, tol)?;
        let plain = product_tail(&f, &f, x, tol)?;
        log_ratios.push((
            x,
            shifted.bracket.lo - plain.bracket.hi,
            shifted.bracket.midpoint_log() - plain.bracket.midpoint_log(),
            shifted.bracket.hi - plain.bracket.lo,
        ));
    }

    let mut checks = Vec::new();
    let strictly_increasing = log_ratios.windows(2).all(|w| w[1].1 > w[0].3);
    checks.push(CheckResult::graded(
        "log-ratio-strictly-increasing",
        strictly_increasing,
        format!("midpoints: {:?}", log_ratios.iter().map(|r| r.2).collect::<Vec<_>>()),
    ));
    let last = log_ratios.last().unwrap();
    checks.push(CheckResult::graded(
        "log-ratio-exceeds-floor",
        last.1 > LOG_RATIO_FLOOR,
        format!(
            "log-ratio at x={} in [{:.6}, {:.6}], floor {LOG_RATIO_FLOOR}",
            last.0, last.1, last.3
        ),
    ));

    let grid = GridSpec::geometric(10.0, 1e4, 100).build();
    let est = decay_exponent(&f, 2.0, &grid)?;
    checks.push(CheckResult::graded(
        "factor-decay-alpha-2",
        (est.lo_hat - 1.0).abs() < 1e-9 && (est.hi_hat - 1.0).abs() < 1e-9,
        format!("-log F/x^2 in [{}, {}]", est.lo_hat, est.hi_hat),
    ));

    let observations = vec![Observation {
        name: "product_log_ratio".into(),
        points: log_ratios.iter().map(|r| (r.0, r.2)).collect(),
    }];

    Ok(ScenarioResult::grade(
        "square-exponential-product",
        CLAIM,
        meta,
        observations,
        checks,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::Verdict;

    #[test]
    fn ratio_is_bounded_near_two_t_so_the_floor_fails() {
        // exact product tail is 2xK₁(2x): log-ratio at t=1 tends to 2 from
        // below (1.9493, 1.9748, 1.9875 at x = 10, 20, 40)
        let r = run(&Params::new()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail, "{:#?}", r.checks);
        let obs = &r.observations[0].points;
        let expect = [1.94930012, 1.97483452, 1.98745979];
        for ((_, got), want) in obs.iter().zip(expect) {
            assert!((got - want).abs() < 2e-4, "got {got}, want {want}");
        }
        // increasing holds; the >10 floor is what fails
        assert_eq!(r.checks[0].passed, Some(true));
        assert_eq!(r.checks[1].passed, Some(false));
        assert_eq!(r.checks[2].passed, Some(true));
    }

    #[test]
    fn zero_like_shift_gives_unit_ratio() {
        let mut p = Params::new();
        p.insert("t".into(), "1e-9".into());
        let r = run(&p).unwrap();
        for &(_, lr) in &r.observations[0].points {
            assert!(lr.abs() < 1e-6, "{lr}");
        }
    }
}
