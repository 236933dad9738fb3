//! Log-domain arithmetic for probabilities that underflow `f64`.
//!
//! Every tail value in this crate is carried as `log V̄(x)`; probabilities as
//! small as `e^{-10^12}` stay representable. `f64::NEG_INFINITY` encodes an
//! exact zero probability.

/// log of an exact zero probability.
pub const LOG_ZERO: f64 = f64::NEG_INFINITY;

/// `log(1 - e^x)` for `x <= 0`, stable near both ends.
///
/// Uses `ln(-expm1(x))` for `x < -ln 2` and `ln1p(-exp(x))` otherwise.
pub fn log1mexp(x: f64) -> f64 {
    debug_assert!(x <= 1e-12, "log1mexp needs x <= 0, got {x}");
    if x == 0.0 {
        return LOG_ZERO;
    }
    if x < -std::f64::consts::LN_2 {
        (-x.exp()).ln_1p()
    } else {
        (-x.exp_m1()).ln()
    }
}

/// `log(e^a - e^b)` for `a >= b`.
pub fn log_diff_exp(a: f64, b: f64) -> f64 {
    debug_assert!(
        a >= b - 1e-12 * b.abs().max(1.0),
        "log_diff_exp needs a >= b, got a={a} b={b}"
    );
    if b == LOG_ZERO {
        return a;
    }
    if a <= b {
        return LOG_ZERO;
    }
    a + log1mexp(b - a)
}

/// `log(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == LOG_ZERO {
        return b;
    }
    if b == LOG_ZERO {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Streaming max-shifted, compensated log-sum-exp accumulator.
///
/// Terms may arrive in any order and span hundreds of orders of magnitude;
/// the running sum is rescaled whenever a new maximum arrives, and the
/// mantissa sum uses Kahan compensation so that block sums of 2^16+ atom
/// terms lose no more than a few ulps.
#[derive(Debug, Clone)]
pub struct LogSum {
    max: f64,
    sum: f64,
    comp: f64,
    count: usize,
}

impl Default for LogSum {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSum {
    pub fn new() -> Self {
        LogSum { max: LOG_ZERO, sum: 0.0, comp: 0.0, count: 0 }
    }

    /// Add a term given as `log(term)`.
    pub fn push(&mut self, log_term: f64) {
        if log_term == LOG_ZERO {
            return;
        }
        debug_assert!(!log_term.is_nan());
        self.count += 1;
        if log_term > self.max {
            if self.max > LOG_ZERO {
                let scale = (self.max - log_term).exp();
                self.sum = (self.sum + self.comp) * scale;
                self.comp = 0.0;
            }
            self.max = log_term;
            self.kahan_add(1.0);
        } else {
            self.kahan_add((log_term - self.max).exp());
        }
    }

    fn kahan_add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    /// `log` of the accumulated sum.
    pub fn value(&self) -> f64 {
        if self.max == LOG_ZERO {
            LOG_ZERO
        } else {
            self.max + (self.sum + self.comp).ln()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.max == LOG_ZERO
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Log-sum-exp of a slice of log-domain terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let mut acc = LogSum::new();
    for &t in terms {
        acc.push(t);
    }
    acc.value()
}

/// A certified enclosure `[lo, hi]` of the natural logarithm of a probability.
///
/// `hi - lo` is the certified relative-error width in log domain. Both ends
/// are `<= 0`; a pair of `-inf` encodes an exactly-zero probability.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogBracket {
    pub lo: f64,
    pub hi: f64,
}

impl LogBracket {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi + 1e-12, "bracket inverted: lo={lo} hi={hi}");
        LogBracket { lo: lo.min(hi), hi }
    }

    /// Exact zero probability.
    pub fn zero() -> Self {
        LogBracket { lo: LOG_ZERO, hi: LOG_ZERO }
    }

    pub fn is_zero(&self) -> bool {
        self.hi == LOG_ZERO
    }

    /// Certified width in log domain (0 for an exact zero).
    pub fn width(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    /// Log-domain midpoint; `-inf` for an exact zero.
    pub fn midpoint_log(&self) -> f64 {
        if self.is_zero() {
            LOG_ZERO
        } else if self.lo == LOG_ZERO {
            self.hi
        } else {
            0.5 * (self.lo + self.hi)
        }
    }

    /// Midpoint as a probability.
    pub fn midpoint(&self) -> f64 {
        self.midpoint_log().exp()
    }

    pub fn contains_log(&self, log_p: f64) -> bool {
        if self.is_zero() {
            return log_p == LOG_ZERO;
        }
        self.lo <= log_p && log_p <= self.hi
    }

    /// Whether two brackets intersect as intervals of probabilities.
    pub fn intersects(&self, other: &LogBracket) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Whether a linear-domain interval `[p_lo, p_hi]` intersects this bracket.
    pub fn intersects_linear(&self, p_lo: f64, p_hi: f64) -> bool {
        let lo = self.lo.exp();
        let hi = self.hi.exp();
        lo <= p_hi && p_lo <= hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log1mexp_matches_naive() {
        for &x in &[-0.1f64, -0.5, -0.6931, -1.0, -5.0, -40.0] {
            let naive = (1.0 - x.exp()).ln();
            assert!((log1mexp(x) - naive).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn log1mexp_tiny_argument() {
        // 1 - e^{-1e-15} ~ 1e-15; the naive path loses all digits
        let v = log1mexp(-1e-15);
        assert!((v - (1e-15f64).ln()).abs() < 1e-9);
    }

    #[test]
    fn logsum_matches_direct() {
        let terms = [-3.0f64, -700.0, -1.5, -2.0, -0.5];
        let direct: f64 = terms.iter().map(|t| t.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&terms) - direct).abs() < 1e-13);
    }

    #[test]
    fn logsum_deep_scale() {
        // sum of e^-1000 and e^-1001 without underflow
        let v = log_sum_exp(&[-1000.0, -1001.0]);
        let expect = -1000.0 + (1.0 + (-1.0f64).exp()).ln();
        assert!((v - expect).abs() < 1e-12);
    }

    #[test]
    fn logsum_empty_is_zero_prob() {
        assert_eq!(LogSum::new().value(), LOG_ZERO);
    }

    #[test]
    fn bracket_zero_and_width() {
        let z = LogBracket::zero();
        assert!(z.is_zero());
        assert_eq!(z.width(), 0.0);
        let b = LogBracket::new(-2.0, -1.0);
        assert_eq!(b.width(), 1.0);
        assert!(b.contains_log(-1.5));
        assert!(!b.contains_log(-3.0));
    }

    #[test]
    fn bracket_intersections() {
        let a = LogBracket::new(-2.0, -1.0);
        let b = LogBracket::new(-1.2, -0.5);
        let c = LogBracket::new(-5.0, -3.0);
        assert!(a.intersects(&b));
        assert!(!a.intersects(&c));
        assert!(a.intersects_linear(0.2, 0.5));
    }
}
