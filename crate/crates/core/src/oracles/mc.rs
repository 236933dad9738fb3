//! Monte Carlo estimate of the product tail by exact inverse-survival
//! sampling.

use super::rng::CounterRng;
use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::LogBracket;
use crate::Result;

/// A Monte Carlo tail estimate with a 99% normal-approximation interval.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct McEstimate {
    pub p_hat: f64,
    /// `2.576 · sqrt(p̂(1−p̂)/n)`.
    pub ci_half_width: f64,
    pub n: u64,
    pub seed: u64,
    pub hits: u64,
}

impl McEstimate {
    pub fn ci(&self) -> (f64, f64) {
        ((self.p_hat - self.ci_half_width).max(0.0), (self.p_hat + self.ci_half_width).min(1.0))
    }

    /// Whether this estimate is statistically consistent with a certified
    /// bracket: the CI must intersect it, and a zero count is inconsistent
    /// whenever the bracket promises `n·H̄ > 100` expected hits.
    pub fn consistent_with(&self, bracket: &LogBracket) -> bool {
        if self.hits == 0 {
            return (self.n as f64) * bracket.hi.exp() <= 100.0;
        }
        let (lo, hi) = self.ci();
        bracket.intersects_linear(lo, hi)
    }
}

/// Draw one sample of `d` from the uniform `u ∈ (0,1)`: the generalized
/// inverse of the survival function (exact on atoms and plateaus).
pub fn sample(d: &Distribution, u: f64) -> f64 {
    d.inverse_survival(u)
}

/// Estimate `P(XY > x)` from `n` independent pairs; pair `i` consumes the
/// counter values `2i` and `2i+1`, so the estimate depends only on
/// `(seed, n)` regardless of evaluation order.
pub fn mc_product_tail(
    f: &Distribution,
    g: &Distribution,
    x: f64,
    n: u64,
    seed: u64,
) -> Result<McEstimate> {
    if n < 10_000 {
        return Err(Error::Domain(format!("mc_product_tail needs n >= 10^4, got {n}")));
    }
    let rng = CounterRng::new(seed);
    let mut hits = 0u64;
    for i in 0..n {
        let xv = f.inverse_survival(rng.open01_at(2 * i));
        let yv = g.inverse_survival(rng.open01_at(2 * i + 1));
        if xv * yv > x {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / n as f64;
    let ci_half_width = 2.576 * (p_hat * (1.0 - p_hat) / n as f64).sqrt();
    Ok(McEstimate { p_hat, ci_half_width, n, seed, hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{exponential, point_mass};

    #[test]
    fn sample_point_mass_and_exp() {
        let pm = point_mass(2.5).unwrap();
        assert_eq!(sample(&pm, 0.37), 2.5);
        let e = exponential(1.0).unwrap();
        assert!((sample(&e, (-1.0f64).exp()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_zero_is_certain() {
        let e = exponential(1.0).unwrap();
        let est = mc_product_tail(&e, &e, 1e-300, 10_000, 1).unwrap();
        assert_eq!(est.p_hat, 1.0);
    }

    #[test]
    fn reproducible_by_seed() {
        let e = exponential(1.0).unwrap();
        let a = mc_product_tail(&e, &e, 1.0, 20_000, 99).unwrap();
        let b = mc_product_tail(&e, &e, 1.0, 20_000, 99).unwrap();
        assert_eq!(a.hits, b.hits);
        let c = mc_product_tail(&e, &e, 1.0, 20_000, 100).unwrap();
        assert_ne!(a.hits, c.hits);
    }

    #[test]
    fn point_mass_scaling() {
        // G = δ_2, F = Exp(1), x = 2: P = e^{-1}
        let f = exponential(1.0).unwrap();
        let g = point_mass(2.0).unwrap();
        let est = mc_product_tail(&f, &g, 2.0, 200_000, 7).unwrap();
        assert!((est.p_hat - (-1.0f64).exp()).abs() < 4.0 * est.ci_half_width + 1e-3);
    }

    #[test]
    fn rejects_small_n() {
        let e = exponential(1.0).unwrap();
        assert!(mc_product_tail(&e, &e, 1.0, 100, 1).is_err());
    }
}
