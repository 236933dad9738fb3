//! Atom-interference and domination conditions relating `F`, `G`, and the
//! product tail `H`.

use serde::Serialize;

use super::classify::Evidence;
use super::fit_line;
use crate::conv::product_tail;
use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::log_diff_exp;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
    Mixed,
}

/// Classify the trend of `(ln x, value)` samples by total change and slope.
pub(crate) fn classify_trend(points: &[(f64, f64)]) -> Trend {
    if points.len() < 4 {
        return Trend::Mixed;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let change = ys.last().unwrap() - ys.first().unwrap();
    let (_, slope, _) = fit_line(&xs, &ys);
    if change.abs() <= 0.15 && slope.abs() <= 0.1 {
        Trend::Flat
    } else if change < -0.5 && slope < 0.0 {
        Trend::Decreasing
    } else if change > 0.5 && slope > 0.0 {
        Trend::Increasing
    } else {
        Trend::Mixed
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomCheck {
    pub location: f64,
    pub trend: Trend,
    /// `(x, log[(Ḡ(x/d) − Ḡ((x+1)/d)) / H̄(x)])` over the sampled grid.
    pub series: Vec<(f64, f64)>,
}

/// Per-atom interference check: for each positive atom `d` of `F`, the mass
/// `Ḡ(x/d) − Ḡ((x+1)/d)` must vanish relative to `H̄(x)` for the product to
/// stay long-tailed.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionAReport {
    /// No atoms at all: the condition holds vacuously.
    pub vacuous: bool,
    pub atoms: Vec<AtomCheck>,
    pub atoms_truncated: bool,
    pub evidence: Evidence,
}

pub fn condition_a_check(
    f: &Distribution,
    g: &Distribution,
    grid: &[f64],
    tol: f64,
) -> Result<ConditionAReport> {
    if grid.len() < 6 {
        return Err(Error::Domain("condition_a_check needs >= 6 grid points".into()));
    }
    let (atoms, atoms_truncated) = f.atoms_in(0.0, f64::MAX, 24);
    if atoms.is_empty() {
        return Ok(ConditionAReport {
            vacuous: true,
            atoms: Vec::new(),
            atoms_truncated: false,
            evidence: Evidence::For,
        });
    }
    // thin the grid: every point costs an adaptive integral
    let step = (grid.len() / 12).max(1);
    let xs: Vec<f64> = grid.iter().copied().step_by(step).collect();
    let mut h_mid = Vec::with_capacity(xs.len());
    for &x in &xs {
        let enc = product_tail(f, g, x, tol.max(1e-6))?;
        h_mid.push(enc.bracket.midpoint_log());
    }
    let mut checks = Vec::new();
    let mut parts = Vec::new();
    for a in &atoms {
        let d = a.location;
        let mut series = Vec::new();
        for (&x, &hm) in xs.iter().zip(&h_mid) {
            let ga = g.log_tail(x / d);
            let gb = g.log_tail((x + 1.0) / d);
            let diff = if ga > gb { log_diff_exp(ga, gb) } else { f64::NEG_INFINITY };
            if hm.is_finite() {
                series.push((x, diff - hm));
            }
        }
        let trend = classify_trend(&series);
        parts.push(match trend {
            Trend::Decreasing => Evidence::For,
            Trend::Flat | Trend::Increasing => Evidence::Against,
            Trend::Mixed => Evidence::Inconclusive,
        });
        checks.push(AtomCheck { location: d, trend, series });
    }
    let evidence = parts.iter().fold(Evidence::For, |acc, &e| match (acc, e) {
        (Evidence::Against, _) | (_, Evidence::Against) => Evidence::Against,
        (Evidence::Inconclusive, _) | (_, Evidence::Inconclusive) => Evidence::Inconclusive,
        _ => Evidence::For,
    });
    Ok(ConditionAReport { vacuous: false, atoms: checks, atoms_truncated, evidence })
}

/// Domination conditions on the factors alone: `Ḡ(vx)/Ḡ(x) → 0` for some
/// `v > 1`, or `Ḡ(vx)/F̄(x) → 0` for some `v > 0`.
#[derive(Debug, Clone, Serialize)]
pub struct TangReport {
    pub v: f64,
    pub c1_trend: Option<Trend>,
    pub c1_evidence: Option<Evidence>,
    pub c2_trend: Trend,
    pub c2_evidence: Evidence,
}

pub fn tang_c_conditions(
    f: &Distribution,
    g: &Distribution,
    v: f64,
    grid: &[f64],
) -> Result<TangReport> {
    if !(v > 0.0) {
        return Err(Error::Domain(format!("v must be positive, got {v}")));
    }
    let to_evidence = |t: Trend| match t {
        Trend::Decreasing => Evidence::For,
        Trend::Flat | Trend::Increasing => Evidence::Against,
        Trend::Mixed => Evidence::Inconclusive,
    };
    let (c1_trend, c1_evidence) = if v > 1.0 {
        let series: Vec<(f64, f64)> =
            grid.iter().map(|&x| (x, g.log_tail(v * x) - g.log_tail(x))).collect();
        let t = classify_trend(&series);
        (Some(t), Some(to_evidence(t)))
    } else {
        (None, None)
    };
    let series: Vec<(f64, f64)> =
        grid.iter().map(|&x| (x, g.log_tail(v * x) - f.log_tail(x))).collect();
    let c2_trend = classify_trend(&series);
    Ok(TangReport { v, c1_trend, c1_evidence, c2_trend, c2_evidence: to_evidence(c2_trend) })
}
