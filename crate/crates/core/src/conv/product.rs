//! Product-convolution tail `H̄(x) = ∫ F̄(x/y) G(dy)` with certified brackets.

use super::{assemble_boundaries, geometric_seed, Cell, EngineConfig, Enclosure, Refiner, NUDGE};
use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::{log1mexp, log_diff_exp, LogBracket, LogSum, LOG_ZERO};
use crate::Result;

const ATOM_CAP: usize = 4_000_000;
const BP_CAP: usize = 200_000;

/// Certified upper bound on `∫_{[0, ylo]} F̄(x/y) G(dy)`.
fn below_bound(f: &Distribution, g: &Distribution, x: f64, ylo: f64) -> f64 {
    let mass = log1mexp(g.log_tail(ylo)); // P(Y <= ylo)
    if mass == LOG_ZERO {
        return LOG_ZERO;
    }
    f.log_tail((x / ylo) * (1.0 - NUDGE)) + mass
}

/// Certified upper bound on `∫_{(yhi, ∞)} F̄(x/y) G(dy)`.
fn above_bound(g: &Distribution, yhi: f64) -> f64 {
    g.log_tail(yhi)
}

/// Coarse inner bracket used while searching for the integration range.
fn coarse_inner(f: &Distribution, g: &Distribution, x: f64, ylo: f64, yhi: f64) -> f64 {
    let mut lo = LogSum::new();
    let (atoms, _) = g.atoms_in(ylo, yhi, 512);
    for a in &atoms {
        lo.push(f.log_tail(x / a.location) + a.log_mass);
    }
    let mut bs = geometric_seed(ylo, yhi, 96);
    let bs = assemble_boundaries(ylo, yhi, &mut bs);
    for w in bs.windows(2) {
        let mass = log_diff_exp(g.log_tail(w[0]), g.log_tail_left(w[1]));
        lo.push(f.log_tail((x / w[0]) * (1.0 + NUDGE)) + mass);
    }
    lo.value()
}

/// Expand `[ylo, yhi]` until the tails outside it are certified negligible
/// relative to the inner mass. Returns `None` when the integral is exactly 0.
fn find_range(
    f: &Distribution,
    g: &Distribution,
    x: f64,
    tol: f64,
) -> Option<(f64, f64)> {
    // candidate centres: the geometric balance point and the medians of both
    // factors (covers point masses far from sqrt(x))
    let gm = g.inverse_survival(0.5).max(1e-12);
    let fm = f.inverse_survival(0.5).max(1e-12);
    let centers = [x.sqrt().max(1e-150), gm, (x / fm).max(1e-150)];
    let mut ylo = centers.iter().cloned().fold(f64::INFINITY, f64::min) / 4.0;
    let mut yhi = centers.iter().cloned().fold(0.0_f64, f64::max) * 4.0;
    ylo = ylo.max(1e-290);
    let slack = (tol / 8.0).ln();
    for _ in 0..220 {
        let inner = coarse_inner(f, g, x, ylo, yhi);
        let below = below_bound(f, g, x, ylo);
        let above = above_bound(g, yhi);
        if inner == LOG_ZERO && below == LOG_ZERO && above == LOG_ZERO {
            return None;
        }
        let ok_below = below <= inner + slack;
        let ok_above = above <= inner + slack;
        if ok_below && ok_above && inner > LOG_ZERO {
            return Some((ylo, yhi));
        }
        if !ok_below || inner == LOG_ZERO {
            ylo = (ylo / 8.0).max(1e-290);
        }
        if !ok_above || inner == LOG_ZERO {
            yhi *= 8.0;
        }
        if ylo <= 1e-290 && yhi >= 1e290 {
            break;
        }
    }
    Some((ylo, yhi))
}

/// Bracket `H̄(x) = P(XY > x)` for independent `X ~ F`, `Y ~ G`.
///
/// The lower bound additionally honours the guaranteed floors
/// `H̄(x) ≥ Ḡ(1)·F̄(x)` and `H̄(x) ≥ F̄(1)·Ḡ(x)`. Non-convergence within the
/// cell budget is reported through [`Enclosure::converged`], never by
/// silently degrading the bracket.
pub fn product_tail_with(
    f: &Distribution,
    g: &Distribution,
    x: f64,
    cfg: EngineConfig,
) -> Result<Enclosure> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("product_tail needs x > 0, got {x}")));
    }
    if !(cfg.tol > 0.0 && cfg.tol < 1.0) {
        return Err(Error::Domain(format!("tol must be in (0,1), got {}", cfg.tol)));
    }
    let (ylo, yhi) = match find_range(f, g, x, cfg.tol) {
        Some(r) => r,
        None => {
            return Ok(Enclosure { bracket: LogBracket::zero(), converged: true, cells_used: 0 })
        }
    };

    // exact atom part
    let (atoms, atoms_truncated) = g.atoms_in(ylo, yhi, ATOM_CAP);
    let mut exact = LogSum::new();
    for a in &atoms {
        exact.push(f.log_tail(x / a.location) + a.log_mass);
    }

    // initial boundaries: G's own breakpoints, F's breakpoints mapped through
    // y = x/b (the integrand's kinks), every atom, and a geometric fill
    let mut cand: Vec<f64> = Vec::new();
    let (gbp, _) = g.breakpoints_in(ylo, yhi, BP_CAP);
    cand.extend(gbp);
    let (fbp, _) = f.breakpoints_in(x / yhi, x / ylo, BP_CAP);
    cand.extend(fbp.into_iter().map(|b| x / b));
    cand.extend(atoms.iter().map(|a| a.location));
    cand.extend(geometric_seed(ylo, yhi, 128));
    let boundaries = assemble_boundaries(ylo, yhi, &mut cand);

    let make_cell = |u: f64, v: f64| -> Cell {
        let mass = log_diff_exp(g.log_tail(u), g.log_tail_left(v));
        if mass == LOG_ZERO {
            return Cell { u, v, lo_term: LOG_ZERO, hi_term: LOG_ZERO };
        }
        let lo = f.log_tail((x / u) * (1.0 + NUDGE)) + mass;
        let hi = f.log_tail((x / v) * (1.0 - NUDGE)) + mass;
        Cell { u, v, lo_term: lo.min(hi), hi_term: hi.max(lo) }
    };

    let outside = [below_bound(f, g, x, ylo), above_bound(g, yhi)];
    let refiner =
        Refiner { make_cell: &make_cell, exact_log: exact.value(), outside_hi: &outside, cfg };
    let mut enc = refiner.run(&boundaries);

    // guaranteed lower floors: {X > x, Y > 1} and {Y > x, X > 1} both imply XY > x
    let floor = (g.log_tail(1.0) + f.log_tail(x)).max(f.log_tail(1.0) + g.log_tail(x));
    if floor > enc.bracket.lo {
        debug_assert!(
            floor <= enc.bracket.hi + 1e-9,
            "lower floor {floor} exceeds upper bound {}",
            enc.bracket.hi
        );
        enc.bracket = LogBracket::new(floor.min(enc.bracket.hi), enc.bracket.hi);
    }
    if atoms_truncated {
        enc.converged = false;
    }
    Ok(enc)
}

/// [`product_tail_with`] at the default budget.
pub fn product_tail(f: &Distribution, g: &Distribution, x: f64, tol: f64) -> Result<Enclosure> {
    product_tail_with(f, g, x, EngineConfig { tol, ..Default::default() })
}

/// Brackets for a batch of points; per-point failures are propagated in the
/// result slots without aborting the batch, and output order matches input.
pub fn product_tail_grid(
    f: &Distribution,
    g: &Distribution,
    xs: &[f64],
    tol: f64,
) -> Vec<(f64, Result<Enclosure>)> {
    xs.iter().map(|&x| (x, product_tail(f, g, x, tol))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{exponential, point_mass, power_law};

    #[test]
    fn point_mass_collapses_to_shifted_tail() {
        // G = δ_c: H̄(x) = F̄(x/c) exactly
        let f = exponential(1.0).unwrap();
        for &c in &[0.5, 1.0, 2.0, 7.3] {
            let g = point_mass(c).unwrap();
            for &x in &[0.3, 1.0, 10.0] {
                let enc = product_tail(&f, &g, x, 1e-12).unwrap();
                let expect = f.log_tail(x / c);
                assert!(enc.converged);
                assert!(enc.bracket.width() <= 1e-12);
                assert!(
                    (enc.bracket.midpoint_log() - expect).abs() <= 1e-12,
                    "c={c} x={x}: {:?} vs {expect}",
                    enc.bracket
                );
            }
        }
    }

    #[test]
    fn pareto_times_point_mass() {
        let f = power_law(2.0, 1.0).unwrap();
        let g = point_mass(2.0).unwrap();
        let enc = product_tail(&f, &g, 10.0, 1e-10).unwrap();
        assert!((enc.bracket.midpoint() - 0.04).abs() < 1e-10);
    }

    #[test]
    fn degenerate_zero_tail() {
        // F = G = δ_1: H̄(x) = 0 for x >= 1
        let f = point_mass(1.0).unwrap();
        let enc = product_tail(&f, &f, 2.0, 1e-6).unwrap();
        assert!(enc.bracket.is_zero());
        assert!(enc.converged);
        // and 1 for x < 1
        let enc = product_tail(&f, &f, 0.5, 1e-9).unwrap();
        assert!((enc.bracket.midpoint() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_x() {
        let f = exponential(1.0).unwrap();
        assert!(product_tail(&f, &f, 0.0, 1e-6).is_err());
        assert!(product_tail(&f, &f, -1.0, 1e-6).is_err());
    }

    #[test]
    fn exp_exp_matches_bessel_value() {
        // H̄(1) = 2 K₁(2) = 0.27973176363304485 for F = G = Exp(1)
        let f = exponential(1.0).unwrap();
        let enc = product_tail(&f, &f, 1.0, 1e-5).unwrap();
        assert!(enc.converged);
        let expect = 0.27973176363304485_f64;
        // the bracket certifies 1e-5; the midpoint is far more accurate
        // (averaging the monotone bounds cancels the first-order error)
        assert!(
            (enc.bracket.midpoint() / expect - 1.0).abs() < 1e-7,
            "{:?}",
            enc.bracket
        );
        assert!(enc.bracket.contains_log(expect.ln()));
    }

    #[test]
    fn monotone_refinement() {
        // halving tol never widens the bracket
        let f = exponential(1.0).unwrap();
        let mut last = f64::INFINITY;
        for tol in [1e-2, 5e-3, 2.5e-3, 1e-4] {
            let enc = product_tail(&f, &f, 3.0, tol).unwrap();
            assert!(enc.bracket.width() <= last + 1e-15);
            last = enc.bracket.width();
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let f = exponential(1.0).unwrap();
        let xs = [0.5, 1.0, 2.0];
        let grid = product_tail_grid(&f, &f, &xs, 1e-8);
        for (i, (x, enc)) in grid.iter().enumerate() {
            assert_eq!(*x, xs[i]);
            let single = product_tail(&f, &f, *x, 1e-8).unwrap();
            let e = enc.as_ref().unwrap();
            assert!(e.bracket.intersects(&single.bracket));
        }
        // midpoints non-increasing in x
        let mids: Vec<f64> =
            grid.iter().map(|(_, e)| e.as_ref().unwrap().bracket.midpoint_log()).collect();
        assert!(mids.windows(2).all(|w| w[0] >= w[1]));
    }
}
