//! Second sum-convolution tail `V̄*²(x) = P(X₁ + X₂ > x)`.

use super::{assemble_boundaries, geometric_seed, Cell, EngineConfig, Enclosure, Refiner, NUDGE};
use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::{log_diff_exp, LogSum, LOG_ZERO};
use crate::Result;

const ATOM_CAP: usize = 4_000_000;
const BP_CAP: usize = 200_000;

/// Bracket `V̄*²(x) = V̄(x) + ∫_{[0,x]} V̄(x−y) V(dy)`.
pub fn sum_conv2_tail_with(v: &Distribution, x: f64, cfg: EngineConfig) -> Result<Enclosure> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("sum_conv2_tail needs x > 0, got {x}")));
    }
    // exact parts: the X₂ > x term and every atom in (0, x]
    let mut exact = LogSum::new();
    exact.push(v.log_tail(x));
    let (atoms, atoms_truncated) = v.atoms_in(0.0, x, ATOM_CAP);
    for a in &atoms {
        exact.push(v.log_tail(x - a.location) + a.log_mass);
    }

    // boundaries: V's kinks, their reflections x − b (kinks of the
    // integrand), atoms, and geometric fills from both endpoints
    let mut cand: Vec<f64> = Vec::new();
    let (bp, _) = v.breakpoints_in(0.0, x, BP_CAP);
    cand.extend(bp.iter().copied());
    cand.extend(bp.iter().map(|b| x - b).filter(|&y| y > 0.0 && y < x));
    cand.extend(atoms.iter().map(|a| a.location));
    cand.extend(atoms.iter().map(|a| x - a.location).filter(|&y| y > 0.0 && y < x));
    let eps = (x * 1e-12).max(1e-300);
    cand.extend(geometric_seed(eps, x / 2.0, 64));
    cand.extend(geometric_seed(eps, x / 2.0, 64).into_iter().map(|y| x - y));
    cand.push(eps);
    let boundaries = assemble_boundaries(0.0, x, &mut cand);

    let make_cell = |u: f64, v_hi: f64| -> Cell {
        let mass = log_diff_exp(v.log_tail(u), v.log_tail_left(v_hi));
        if mass == LOG_ZERO {
            return Cell { u, v: v_hi, lo_term: LOG_ZERO, hi_term: LOG_ZERO };
        }
        // ψ(y) = V̄(x−y) is non-decreasing on (u, v): bound by the endpoints,
        // nudged so rounding never crosses a jump of V̄
        let arg_lo = ((x - u) * (1.0 + NUDGE)).max(0.0);
        let arg_hi = ((x - v_hi) * (1.0 - NUDGE)).max(0.0);
        let lo = v.log_tail(arg_lo) + mass;
        let hi = v.log_tail(arg_hi) + mass;
        Cell { u, v: v_hi, lo_term: lo.min(hi), hi_term: hi.max(lo) }
    };

    let refiner =
        Refiner { make_cell: &make_cell, exact_log: exact.value(), outside_hi: &[], cfg };
    let mut enc = refiner.run(&boundaries);
    if atoms_truncated {
        enc.converged = false;
    }
    Ok(enc)
}

/// [`sum_conv2_tail_with`] at the default budget.
pub fn sum_conv2_tail(v: &Distribution, x: f64, tol: f64) -> Result<Enclosure> {
    sum_conv2_tail_with(v, x, EngineConfig { tol, ..Default::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{exponential, point_mass, power_law};

    #[test]
    fn erlang2_closed_form() {
        // Exp(1)*Exp(1): tail (1+x)e^{−x}
        let v = exponential(1.0).unwrap();
        for &x in &[0.5, 1.0, 4.0] {
            let enc = sum_conv2_tail(&v, x, 1e-8).unwrap();
            let expect = (1.0 + x) * (-x).exp();
            assert!(
                (enc.bracket.midpoint() / expect - 1.0).abs() < 1e-7,
                "x={x}: {:?} vs {expect}",
                enc.bracket
            );
        }
    }

    #[test]
    fn point_mass_sum() {
        // δ_c + δ_c = δ_{2c}
        let v = point_mass(1.5).unwrap();
        let enc = sum_conv2_tail(&v, 2.9, 1e-9).unwrap();
        assert!((enc.bracket.midpoint() - 1.0).abs() < 1e-9);
        let enc = sum_conv2_tail(&v, 3.0, 1e-9).unwrap();
        assert!(enc.bracket.is_zero());
    }

    #[test]
    fn pareto_subexponential_ratio() {
        // V̄*²(x)/V̄(x) → 2 for Pareto(2); 2.008 at x = 10³
        let v = power_law(2.0, 1.0).unwrap();
        let x = 1e3;
        let enc = sum_conv2_tail(&v, x, 1e-6).unwrap();
        let ratio = (enc.bracket.midpoint_log() - v.log_tail(x)).exp();
        assert!((ratio - 2.0).abs() < 0.1, "ratio = {ratio}");
        assert!((ratio - 2.00808).abs() < 5e-3, "ratio = {ratio}");
    }
}
