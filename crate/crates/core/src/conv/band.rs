//! Truncation band: a concrete `(b₁, x/b₂]` carrying almost all of `H̄(x)`.

use super::{product_tail_with, EngineConfig};
use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::{log1mexp, log_add_exp, LOG_ZERO};
use crate::Result;

/// A concrete truncation band at height `x`: the contribution to `H̄(x)` from
/// `y ≤ b1` together with `y > x/b2` is certified `≤ exp(mass_outside_log)`.
#[derive(Debug, Clone, Copy)]
pub struct Band {
    pub b1: f64,
    pub b2: f64,
    pub x: f64,
    pub mass_outside_log: f64,
    /// Fraction of the bracket lower bound actually achieved; `<= eps` on
    /// success, larger in the diagnostic (failed) case.
    pub achieved_fraction: f64,
    pub achieved: bool,
}

/// Find `b1, b2` by doubling search outward from `b1 = b2 = x^{1/3}` such
/// that the certified mass outside `(b1, x/b2]` is at most `eps` times the
/// bracket lower bound of the full integral.
///
/// When no band within the search range achieves `eps` (tails too entangled
/// for a dominating band at this `x`), the best band found is returned with
/// `achieved = false` and the fraction it did achieve.
pub fn truncation_band(
    f: &Distribution,
    g: &Distribution,
    x: f64,
    eps: f64,
) -> Result<Band> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("truncation_band needs x > 0, got {x}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must be in (0,1), got {eps}")));
    }
    let enc = product_tail_with(f, g, x, EngineConfig::with_tol((eps / 4.0).min(1e-2)))?;
    let h_lo = enc.bracket.lo;
    if enc.bracket.is_zero() {
        // no mass anywhere: any band is vacuously fine
        let b = x.cbrt();
        return Ok(Band {
            b1: b,
            b2: b,
            x,
            mass_outside_log: LOG_ZERO,
            achieved_fraction: 0.0,
            achieved: true,
        });
    }

    let outside = |b1: f64, b2: f64| -> f64 {
        // below: ∫_{[0,b1]} F̄(x/y) G(dy) ≤ F̄(x/b1) · P(Y ≤ b1)
        let below = {
            let mass = log1mexp(g.log_tail(b1));
            if mass == LOG_ZERO {
                LOG_ZERO
            } else {
                f.log_tail(x / b1) + mass
            }
        };
        // above: ∫_{(x/b2, ∞)} F̄(x/y) G(dy) ≤ Ḡ(x/b2)
        log_add_exp(below, g.log_tail(x / b2))
    };

    let target = h_lo + eps.ln();
    let mut b1 = x.cbrt();
    let mut b2 = x.cbrt();
    let mut best = (b1, b2, outside(b1, b2));
    for _ in 0..240 {
        let out = outside(b1, b2);
        if out < best.2 {
            best = (b1, b2, out);
        }
        if out <= target && b1 < x / b2 {
            return Ok(Band {
                b1,
                b2,
                x,
                mass_outside_log: out,
                achieved_fraction: (out - h_lo).exp(),
                achieved: true,
            });
        }
        // widen the side that dominates the leakage
        let below = {
            let mass = log1mexp(g.log_tail(b1));
            if mass == LOG_ZERO {
                LOG_ZERO
            } else {
                f.log_tail(x / b1) + mass
            }
        };
        let above = g.log_tail(x / b2);
        if below >= above {
            b1 /= 2.0;
        } else {
            b2 /= 2.0;
        }
        if b1 < 1e-280 && b2 < 1e-280 {
            break;
        }
    }
    Ok(Band {
        b1: best.0,
        b2: best.1,
        x,
        mass_outside_log: best.2,
        achieved_fraction: (best.2 - h_lo).exp(),
        achieved: best.2 <= target,
    })
}
