//! Shift-ratio indicator series, decay exponents, polynomial limit checks.
//!
//! The central objects are the sampled ratios `V̄(x−t)/V̄(x)` whose limsup and
//! liminf define `C*(V,t)` and `C_*(V,t)`. Limits are not computable from
//! finitely many samples, so every estimate here is windowed evidence: the
//! running extrema over the tail of an (augmented) grid, with
//! construction-aware critical points injected so that suprema attained on
//! measure-zero sequences are actually sampled.

mod classify;
mod conditions;

pub use classify::{classify, ClassReport, ClassVerdict, ClassifyConfig, Evidence, HeavyLight};
pub use conditions::{condition_a_check, tang_c_conditions, ConditionAReport, TangReport};

use serde::Serialize;

use crate::dist::Distribution;
use crate::error::Error;
use crate::Result;

/// `log [V̄(x−t)/V̄(x)]` for `0 < t < x`.
pub fn shift_ratio(v: &Distribution, t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) || !(t < x) {
        return Err(Error::Domain(format!("shift_ratio needs 0 < t < x, got t={t} x={x}")));
    }
    Ok((v.log_tail(x - t) - v.log_tail(x)).max(0.0))
}

/// One sampled ratio; `left_limit` marks the pre-jump variant
/// `V̄((x−t)⁻)/V̄(x⁻)` taken at construction-critical points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SeriesPoint {
    pub x: f64,
    pub log_ratio: f64,
    pub left_limit: bool,
    /// Injected from the construction's critical sequence rather than the grid.
    pub critical: bool,
}

/// Sampled shift ratios at one `t` with running tail extrema.
#[derive(Debug, Clone, Serialize)]
pub struct IndicatorSeries {
    pub t: f64,
    pub points: Vec<SeriesPoint>,
    /// Tail-window size: the extrema below run over the last `window` points.
    pub window: usize,
    /// `log` of the C*(V,t) estimate (sup over the tail window).
    pub tail_sup_log: f64,
    /// `log` of the C_*(V,t) estimate (inf over the tail window).
    pub tail_inf_log: f64,
}

impl IndicatorSeries {
    pub fn sup_estimate(&self) -> f64 {
        self.tail_sup_log.exp()
    }

    pub fn inf_estimate(&self) -> f64 {
        self.tail_inf_log.exp()
    }

    /// Extrema of the log-ratio over the points with `x` in `[lo, hi]`.
    pub fn extrema_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        let mut sup = f64::NEG_INFINITY;
        let mut inf = f64::INFINITY;
        for p in &self.points {
            if p.x >= lo && p.x <= hi {
                sup = sup.max(p.log_ratio);
                inf = inf.min(p.log_ratio);
            }
        }
        (sup > f64::NEG_INFINITY).then_some((sup, inf))
    }
}

/// Sample the shift-ratio series of `v` at shift `t` over `grid`, augmented
/// with the construction's critical points (plateau ends, ramp ends, phase
/// sweeps) where the extremes actually live.
pub fn c_star_series(v: &Distribution, t: f64, grid: &[f64]) -> Result<IndicatorSeries> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let (lo, hi) = (grid[0], *grid.last().unwrap());
    let critical = v.critical_shift_points(t, lo, hi);
    let mut points: Vec<SeriesPoint> = Vec::with_capacity(grid.len() + 2 * critical.len());
    for &x in grid.iter().filter(|&&x| x > t) {
        points.push(SeriesPoint {
            x,
            log_ratio: shift_ratio(v, t, x)?,
            left_limit: false,
            critical: false,
        });
    }
    for &x in &critical {
        points.push(SeriesPoint {
            x,
            log_ratio: shift_ratio(v, t, x)?,
            left_limit: false,
            critical: true,
        });
        // pre-jump variant: lim_{z↑x} V̄(z−t)/V̄(z)
        let left = (v.log_tail_left(x - t) - v.log_tail_left(x)).max(0.0);
        points.push(SeriesPoint { x, log_ratio: left, left_limit: true, critical: true });
    }
    points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());
    if points.is_empty() {
        return Err(Error::Domain("grid has no points above t".into()));
    }
    // tail window: the last quarter of the points, extended backwards when a
    // construction's critical sequence is sparse (ramp ends recur at
    // double-exponential spacing and a blind window would sit entirely
    // inside one plateau)
    let n = points.len();
    let mut start = n - (n / 4).max(8).min(n);
    let crit_idx: Vec<usize> =
        points.iter().enumerate().filter(|(_, p)| p.critical).map(|(i, _)| i).collect();
    if !crit_idx.is_empty() {
        let k = crit_idx.len().saturating_sub(6);
        start = start.min(crit_idx[k]);
    }
    let tail = &points[start..];
    let window = tail.len();
    let tail_sup_log = tail.iter().map(|p| p.log_ratio).fold(f64::NEG_INFINITY, f64::max);
    let tail_inf_log = tail.iter().map(|p| p.log_ratio).fold(f64::INFINITY, f64::min);
    Ok(IndicatorSeries { t, points, window, tail_sup_log, tail_inf_log })
}

/// Result of extrapolating the per-`t` indicator estimates to `t → 0` with
/// the model `c·e^{κt}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZeroShiftExtrapolation {
    /// Intercept of the sup estimates: the C*(V,0) estimate.
    pub c_star_0: f64,
    /// Intercept of the inf estimates: the C_*(V,0) estimate.
    pub c_substar_0: f64,
    pub kappa_sup: f64,
    pub kappa_inf: f64,
    /// Max absolute fit residual in log domain, sup/inf fits.
    pub residual_sup: f64,
    pub residual_inf: f64,
    /// Sup and inf estimates are non-decreasing in t, as the exact
    /// indicators must be; a violation flags the estimates as unreliable.
    pub monotone_ok: bool,
}

/// Fit `log est = log c + κ t` over at least four shifts and report the
/// intercepts at `t = 0`.
pub fn c_zero_extrapolate(series: &[IndicatorSeries]) -> Result<ZeroShiftExtrapolation> {
    if series.len() < 4 {
        return Err(Error::Domain(format!(
            "extrapolation needs >= 4 shifts, got {}",
            series.len()
        )));
    }
    let mut s = series.to_vec();
    s.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    let mono = |vals: &[f64]| vals.windows(2).all(|w| w[1] >= w[0] - 1e-9);
    let sups: Vec<f64> = s.iter().map(|r| r.tail_sup_log).collect();
    let infs: Vec<f64> = s.iter().map(|r| r.tail_inf_log).collect();
    let ts: Vec<f64> = s.iter().map(|r| r.t).collect();
    let (b_sup, k_sup, r_sup) = fit_line(&ts, &sups);
    let (b_inf, k_inf, r_inf) = fit_line(&ts, &infs);
    Ok(ZeroShiftExtrapolation {
        c_star_0: b_sup.exp(),
        c_substar_0: b_inf.exp(),
        kappa_sup: k_sup,
        kappa_inf: k_inf,
        residual_sup: r_sup,
        residual_inf: r_inf,
        monotone_ok: mono(&sups) && mono(&infs),
    })
}

/// Least squares `y = b + k t`; returns `(b, k, max |residual|)`.
pub fn fit_line(ts: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = ts.iter().map(|t| (t - mt) * (t - mt)).sum();
    let sxy: f64 = ts.iter().zip(ys).map(|(t, y)| (t - mt) * (y - my)).sum();
    let k = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let b = my - k * mt;
    let res = ts
        .iter()
        .zip(ys)
        .map(|(t, y)| (y - (b + k * t)).abs())
        .fold(0.0_f64, f64::max);
    (b, k, res)
}

/// Estimated bounds on `−log V̄(x)/x^α` over the top half of a grid,
/// operationalizing the exponential-decay side conditions.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecayExponentEstimate {
    pub alpha: f64,
    pub lo_hat: f64,
    pub hi_hat: f64,
    /// Extrema restricted to the top quarter of the grid.
    pub lo_quarter: f64,
    pub hi_quarter: f64,
    /// Slope of `ln(−log V̄/x^α)` against `ln x` over the top half: negative
    /// when the normalized decay rate is still draining to zero.
    pub log_slope: f64,
    /// Extrema over the top quarter stay within a factor-2 envelope of the
    /// top-half extrema (a drifting window means no finite limit).
    pub window_stable: bool,
}

impl DecayExponentEstimate {
    /// Evidence that `e^{λ₁ x^α} V̄ → ∞` for some λ₁ and `e^{λ₂ x^α} V̄ → 0`
    /// for some λ₂ (two-sided pinning of the decay rate).
    pub fn two_sided_evidence(&self) -> Evidence {
        if self.lo_hat > 0.0 && self.hi_hat.is_finite() && self.window_stable {
            Evidence::For
        } else if self.lo_hat <= 0.0 || !self.hi_hat.is_finite() {
            Evidence::Against
        } else {
            Evidence::Inconclusive
        }
    }

    /// Evidence that `e^{λ₃ x^α} V̄ → 0` for some λ₃ (one-sided upper decay).
    pub fn upper_decay_evidence(&self) -> Evidence {
        if self.lo_hat > 0.0 {
            Evidence::For
        } else {
            Evidence::Against
        }
    }
}

/// Min/max of `−log V̄(x)/x^α` over the top half of `grid`.
pub fn decay_exponent(v: &Distribution, alpha: f64, grid: &[f64]) -> Result<DecayExponentEstimate> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
    }
    if grid.len() < 20 {
        return Err(Error::Domain("decay_exponent needs a grid of >= 20 points".into()));
    }
    let vals: Vec<f64> = grid.iter().map(|&x| -v.log_tail(x) / x.powf(alpha)).collect();
    let half = &vals[vals.len() / 2..];
    let quarter = &vals[vals.len() * 3 / 4..];
    let lo_hat = half.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi_hat = half.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo_quarter = quarter.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi_quarter = quarter.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lxs: Vec<f64> = grid[grid.len() / 2..].iter().map(|x| x.ln()).collect();
    let lys: Vec<f64> = half.iter().map(|v| v.max(1e-300).ln()).collect();
    let (_, log_slope, _) = fit_line(&lxs, &lys);
    let window_stable =
        hi_hat <= 2.0 * hi_quarter.max(1e-300) && lo_quarter <= 2.0 * lo_hat.max(1e-300);
    Ok(DecayExponentEstimate {
        alpha,
        lo_hat,
        hi_hat,
        lo_quarter,
        hi_quarter,
        log_slope,
        window_stable,
    })
}

/// Outcome of a polynomial-limit trend check on `x^δ V̄(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyLimit {
    ToInfinity,
    ToZero,
    Bounded,
    Inconclusive,
}

/// Trend of `δ·log x + log V̄(x)` over the grid tail.
pub fn poly_limit_check(v: &Distribution, delta: f64, grid: &[f64]) -> Result<PolyLimit> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    if grid.len() < 8 {
        return Err(Error::Domain("poly_limit_check needs >= 8 grid points".into()));
    }
    let tail: Vec<(f64, f64)> = grid[grid.len() / 2..]
        .iter()
        .map(|&x| (x.ln(), delta * x.ln() + v.log_tail(x)))
        .collect();
    let change = tail.last().unwrap().1 - tail[0].1;
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let (_, slope, _) = fit_line(&xs, &ys);
    Ok(if change.abs() <= 0.2 && slope.abs() < 0.2 {
        PolyLimit::Bounded
    } else if change > 1.0 && slope > 0.0 {
        PolyLimit::ToInfinity
    } else if change < -1.0 && slope < 0.0 {
        PolyLimit::ToZero
    } else {
        PolyLimit::Inconclusive
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{
        exp_polynomial, exponential, oscillating_heavy, plateau_modification, power_law, PairSeq,
    };
    use crate::grid::GridSpec;

    #[test]
    fn exponential_shift_ratio_exact() {
        let v = exponential(0.7).unwrap();
        for &(t, x) in &[(0.5, 2.0), (1.0, 50.0), (2.0, 1e6)] {
            assert!((shift_ratio(&v, t, x).unwrap() - 0.7 * t).abs() < 1e-9);
        }
        assert!(shift_ratio(&v, 2.0, 1.0).is_err());
        assert!(shift_ratio(&v, 0.0, 1.0).is_err());
    }

    #[test]
    fn squared_exponential_shift_ratio() {
        // V̄ = e^{−x²}: log ratio = x² − (x−t)² = 2xt − t²
        let v = exp_polynomial(&[(1.0, 2.0)]).unwrap();
        assert!((shift_ratio(&v, 1.0, 10.0).unwrap() - 19.0).abs() < 1e-10);
    }

    #[test]
    fn oscillating_ramp_end_ratio_approaches_one_plus_t() {
        let v = oscillating_heavy(1.55, 25.0).unwrap();
        let grid = GridSpec::geometric(10.0, 1e10, 200).build();
        let s = c_star_series(&v, 1.0, &grid).unwrap();
        // the ramp-end critical points push the sup to 1 + t
        assert!((s.sup_estimate() - 2.0).abs() < 0.01, "sup = {}", s.sup_estimate());
        // deep-plateau points pull the inf to 1
        assert!(s.inf_estimate() < 1.001, "inf = {}", s.inf_estimate());
    }

    #[test]
    fn plateau_series_sup_and_inf() {
        // lattice construction with gamma = ln 2: sup -> a e^{γt}, inf -> 1
        let f0 = exp_polynomial(&[(2f64.ln(), 1.0), (1.0, 0.5)]).unwrap();
        let f = plateau_modification(f0, PairSeq::Lattice { first_x: 2.0, gap: 2.0, width: 1.0 })
            .unwrap();
        let grid = GridSpec::geometric(10.0, 1e6, 400).build();
        let t = 0.5;
        let s = c_star_series(&f, t, &grid).unwrap();
        let expect_sup = 2.0 * (2f64.ln() * t).exp();
        assert!(
            (s.sup_estimate() / expect_sup - 1.0).abs() < 0.01,
            "sup = {} expect {expect_sup}",
            s.sup_estimate()
        );
        assert!((s.inf_estimate() - 1.0).abs() < 1e-9, "inf = {}", s.inf_estimate());
    }

    #[test]
    fn extrapolation_on_exponential_is_exact() {
        let v = exponential(1.0).unwrap();
        let grid = GridSpec::default().build();
        let series: Vec<_> = [0.5, 0.25, 0.125, 0.0625]
            .iter()
            .map(|&t| c_star_series(&v, t, &grid).unwrap())
            .collect();
        let ext = c_zero_extrapolate(&series).unwrap();
        assert!((ext.c_star_0 - 1.0).abs() < 1e-9);
        assert!((ext.c_substar_0 - 1.0).abs() < 1e-9);
        assert!((ext.kappa_sup - 1.0).abs() < 1e-9);
        assert!(ext.monotone_ok);
        assert!(ext.residual_sup < 1e-12);
    }

    #[test]
    fn extrapolation_needs_four_shifts() {
        let v = exponential(1.0).unwrap();
        let grid = GridSpec::default().build();
        let series: Vec<_> =
            [0.5, 0.25].iter().map(|&t| c_star_series(&v, t, &grid).unwrap()).collect();
        assert!(c_zero_extrapolate(&series).is_err());
    }

    #[test]
    fn decay_exponent_cases() {
        let grid = GridSpec::default().build();
        // V̄ = e^{−2x}: exactly (2, 2)
        let v = exponential(2.0).unwrap();
        let est = decay_exponent(&v, 1.0, &grid).unwrap();
        assert!((est.lo_hat - 2.0).abs() < 1e-12 && (est.hi_hat - 2.0).abs() < 1e-12);
        assert_eq!(est.two_sided_evidence(), Evidence::For);
        // e^{−γx−√x} at α = 1: pinched to γ as √x/x → 0
        let f0 = exp_polynomial(&[(0.5, 1.0), (1.0, 0.5)]).unwrap();
        let est = decay_exponent(&f0, 1.0, &grid).unwrap();
        assert!(est.lo_hat >= 0.5 && est.hi_quarter <= 0.5 + 0.01, "{est:?}");
        // power law at α = 1: β ln x / x → 0 with slope −1 in log-log
        let p = power_law(2.0, 1.0).unwrap();
        let est = decay_exponent(&p, 1.0, &grid).unwrap();
        assert!(est.hi_quarter < 1e-3, "{est:?}");
        assert!(est.log_slope < -0.5);
        assert_eq!(est.upper_decay_evidence(), Evidence::For); // lo_hat > 0 still
    }

    #[test]
    fn poly_limit_cases() {
        let grid = GridSpec::default().build();
        let p = power_law(2.0, 1.0).unwrap();
        assert_eq!(poly_limit_check(&p, 3.0, &grid).unwrap(), PolyLimit::ToInfinity);
        assert_eq!(poly_limit_check(&p, 2.0, &grid).unwrap(), PolyLimit::Bounded);
        assert_eq!(poly_limit_check(&p, 1.0, &grid).unwrap(), PolyLimit::ToZero);
        let e = exponential(1.0).unwrap();
        for &d in &[1.0, 5.0, 10.0] {
            assert_eq!(poly_limit_check(&e, d, &grid).unwrap(), PolyLimit::ToZero);
        }
    }

    #[test]
    fn cocycle_identity() {
        // ratio(t+s, x) = ratio(t, x−s) + ratio(s, x) exactly
        let f0 = exp_polynomial(&[(2f64.ln(), 1.0), (1.0, 0.5)]).unwrap();
        let f = plateau_modification(f0, PairSeq::Lattice { first_x: 2.0, gap: 2.0, width: 1.0 })
            .unwrap();
        for &(t, s, x) in &[(0.5, 0.25, 10.0), (1.0, 2.0, 123.4), (0.1, 3.3, 40.7)] {
            let lhs = shift_ratio(&f, t + s, x).unwrap();
            let rhs = shift_ratio(&f, t, x - s).unwrap() + shift_ratio(&f, s, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-12, "t={t} s={s} x={x}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn monotone_in_t() {
        let f0 = exp_polynomial(&[(2f64.ln(), 1.0), (1.0, 0.5)]).unwrap();
        let f = plateau_modification(f0, PairSeq::Lattice { first_x: 2.0, gap: 2.0, width: 1.0 })
            .unwrap();
        let x = 57.3;
        let mut last = -1.0;
        for i in 1..40 {
            let t = i as f64 * 0.1;
            let r = shift_ratio(&f, t, x).unwrap();
            assert!(r >= last - 1e-13);
            last = r;
        }
    }
}
