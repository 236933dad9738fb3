//! Polynomial moment transfer: for a power-law factor, `x^β H̄(x)` converges
//! to the β-th moment of the light factor; with two light factors every
//! polynomial rate sends `x^δ H̄(x)` to zero.

use std::collections::BTreeMap;
use std::time::Instant;

use super::{param_f64, CheckResult, Observation, Params, ScenarioResult};
use crate::conv::product_tail;
use crate::dist::{exponential, point_mass, power_law};
use crate::indicators::fit_line;
use crate::Result;

const CLAIM: &str = "x^2 H(x) for PowerLaw(2) x Exp(1) is within 2% of E[Y^2] = 2 at x = 10^4; \
x H(x) = c exactly for a point-mass factor; and for Exp x Exp, x^d H(x) drains to zero for \
d = 1, 5, 10";

pub fn run(params: &Params) -> Result<ScenarioResult> {
    let started = Instant::now();
    let beta = param_f64(params, "beta", 2.0)?;
    let x_eval = param_f64(params, "x", 1e4)?;
    let tol = param_f64(params, "tol", 1e-6)?;

    let mut meta = BTreeMap::new();
    meta.insert("beta".into(), serde_json::json!(beta));
    meta.insert("x".into(), serde_json::json!(x_eval));
    meta.insert("tol".into(), serde_json::json!(tol));

    let mut checks = Vec::new();
    let mut observations = Vec::new();

    // moment transfer: x^β H̄(x) → E[Y^β] = Γ(β+1) for G = Exp(1)
    let f = power_law(beta, 1.0)?;
    let g = exponential(1.0)?;
    let enc = product_tail(&f, &g, x_eval, tol)?;
    let scaled = (beta * x_eval.ln() + enc.bracket.midpoint_log()).exp();
    let target = gamma_integer(beta);
    checks.push(CheckResult::graded(
        "moment-transfer",
        (scaled / target - 1.0).abs() <= 0.02,
        format!("x^beta H(x) = {scaled:.6}, target {target:.6}"),
    ));

    // degenerate multiplier: x·H̄(x) = c exactly for F = PowerLaw(1), G = δ_c
    let f1 = power_law(1.0, 1.0)?;
    let c = 3.0;
    let pm = point_mass(c)?;
    let enc = product_tail(&f1, &pm, x_eval, 1e-12)?;
    let got = (x_eval.ln() + enc.bracket.midpoint_log()).exp();
    checks.push(CheckResult::graded(
        "point-mass-moment",
        (got - c).abs() <= 1e-9 * c,
        format!("x H(x) = {got}, expected {c}"),
    ));

    // two light factors: x^δ H̄(x) → 0 for every tested δ
    let xs: Vec<f64> = (0..12).map(|i| 10.0 * (1.45_f64).powi(i)).collect();
    let mut mids = Vec::with_capacity(xs.len());
    for &x in &xs {
        let enc = product_tail(&g, &g, x, 1e-5)?;
        mids.push(enc.bracket.midpoint_log());
    }
    observations.push(Observation {
        name: "exp_exp_log_tail".into(),
        points: xs.iter().copied().zip(mids.iter().copied()).collect(),
    });
    for &delta in &[1.0, 5.0, 10.0] {
        let tail: Vec<(f64, f64)> = xs
            .iter()
            .zip(&mids)
            .skip(xs.len() / 2)
            .map(|(&x, &m)| (x.ln(), delta * x.ln() + m))
            .collect();
        let change = tail.last().unwrap().1 - tail[0].1;
        let (_, slope, _) = fit_line(
            &tail.iter().map(|p| p.0).collect::<Vec<_>>(),
            &tail.iter().map(|p| p.1).collect::<Vec<_>>(),
        );
        checks.push(CheckResult::graded(
            &format!("poly-limit-to-zero-delta-{delta}"),
            change < -1.0 && slope < 0.0,
            format!("change {change:.3} over the top half, slope {slope:.3}"),
        ));
    }

    // dominated variation fails for the light product: H̄(x)/H̄(2x) grows
    let mut dv = Vec::new();
    for &x in &[40.0, 80.0, 160.0] {
        let a = product_tail(&g, &g, x, 1e-5)?;
        let b = product_tail(&g, &g, 2.0 * x, 1e-5)?;
        dv.push((x, a.bracket.midpoint_log() - b.bracket.midpoint_log()));
    }
    checks.push(CheckResult::graded(
        "not-dominated-variation",
        dv.windows(2).all(|w| w[1].1 > w[0].1 + 0.5),
        format!("log H(x)/H(2x): {:?}", dv.iter().map(|p| p.1).collect::<Vec<_>>()),
    ));

    Ok(ScenarioResult::grade("breiman", CLAIM, meta, observations, checks, started))
}

/// Γ(β+1) for the small integer/half-integer βs used here; falls back to a
/// Stirling-series evaluation for other arguments.
fn gamma_integer(beta: f64) -> f64 {
    if (beta - beta.round()).abs() < 1e-12 && beta >= 0.0 && beta <= 20.0 {
        let mut v = 1.0;
        for k in 1..=(beta.round() as u64) {
            v *= k as f64;
        }
        v
    } else {
        // Stirling series for Γ(z+1), adequate for the diagnostic tolerance
        let z = beta;
        (2.0 * std::f64::consts::PI * z).sqrt()
            * (z / std::f64::consts::E).powf(z)
            * (1.0 + 1.0 / (12.0 * z) + 1.0 / (288.0 * z * z))
    }
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
    fn gamma_values() {
        assert_eq!(gamma_integer(2.0), 2.0);
        assert_eq!(gamma_integer(5.0), 120.0);
        assert!((gamma_integer(2.5) - 3.323350970).abs() < 1e-3);
    }
}
