//! Non-adaptive fixed-grid Stieltjes bracket for `H̄(x)`.
//!
//! This is the certification oracle for the adaptive engine: the same
//! monotone upper/lower sums on a fixed nested geometric partition, written
//! independently (no shared integrator code). Cell counts round up to powers
//! of two over a band chosen from `x` alone, so a finer grid is an exact
//! refinement of a coarser one and the brackets are nested.

use crate::dist::Distribution;
use crate::error::Error;
use crate::logdomain::{log1mexp, log_diff_exp, LogBracket, LogSum, LOG_ZERO};
use crate::Result;

/// Bracket `H̄(x)` with `cells` (rounded up to a power of two, minimum 2^10)
/// geometric cells.
pub fn fixed_grid_stieltjes(
    f: &Distribution,
    g: &Distribution,
    x: f64,
    cells: usize,
) -> Result<LogBracket> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("fixed_grid_stieltjes needs x > 0, got {x}")));
    }
    if cells < 1_000 {
        return Err(Error::Domain(format!("fixed_grid_stieltjes needs >= 10^3 cells, got {cells}")));
    }
    let n = cells.next_power_of_two().max(1024);

    // band from x alone (deterministic so different cell counts nest):
    // doubling outward from sqrt(x) and the medians until the endpoint
    // bounds stop improving the coarse inner estimate
    let gm = g.inverse_survival(0.5).max(1e-12);
    let fm = f.inverse_survival(0.5).max(1e-12);
    let mut ylo =
        [x.sqrt(), gm, x / fm].iter().cloned().fold(f64::INFINITY, f64::min).max(1e-280) / 4.0;
    let mut yhi = [x.sqrt(), gm, x / fm].iter().cloned().fold(0.0_f64, f64::max) * 4.0;
    for _ in 0..200 {
        let inner = coarse_lower(f, g, x, ylo, yhi);
        let below = outside_below(f, g, x, ylo);
        let above = g.log_tail(yhi);
        if inner == LOG_ZERO && below == LOG_ZERO && above == LOG_ZERO {
            return Ok(LogBracket::zero());
        }
        let slack = inner - 40.0; // e^{-40} relative leakage target
        if below <= slack && above <= slack && inner > LOG_ZERO {
            break;
        }
        if below > slack || inner == LOG_ZERO {
            ylo = (ylo / 8.0).max(1e-280);
        }
        if above > slack || inner == LOG_ZERO {
            yhi *= 8.0;
        }
        if ylo <= 1e-280 && yhi >= 1e280 {
            break;
        }
    }

    // exact atoms
    let mut lo = LogSum::new();
    let mut hi = LogSum::new();
    let (atoms, truncated) = g.atoms_in(ylo, yhi, 8_000_000);
    if truncated {
        return Err(Error::Domain("atom enumeration overflow in fixed grid".into()));
    }
    for a in &atoms {
        let t = f.log_tail(x / a.location) + a.log_mass;
        lo.push(t);
        hi.push(t);
    }

    // fixed geometric partition; the open-cell mass Ḡ(u) − Ḡ(v⁻) excludes
    // boundary atoms only if the boundary lands exactly on an atom, so atom
    // locations inside cells are simply covered by the monotone bounds
    let lr = (yhi / ylo).ln();
    let mut u = ylo;
    for i in 1..=n {
        let v = if i == n { yhi } else { ylo * (lr * i as f64 / n as f64).exp() };
        let mass = sub_atom_mass(g, u, v, &atoms);
        if mass != LOG_ZERO {
            lo.push(f.log_tail(x / u) + mass);
            hi.push(f.log_tail(x / v) + mass);
        }
        u = v;
    }
    hi.push(outside_below(f, g, x, ylo));
    hi.push(g.log_tail(yhi));
    Ok(LogBracket::new(lo.value().min(hi.value()), hi.value()))
}

/// Mass of `(u, v]` minus the enumerated atoms inside it.
fn sub_atom_mass(g: &Distribution, u: f64, v: f64, atoms: &[crate::dist::Atom]) -> f64 {
    let gross = log_diff_exp(g.log_tail(u), g.log_tail(v));
    if gross == LOG_ZERO {
        return LOG_ZERO;
    }
    let mut atom_sum = LogSum::new();
    // atoms is sorted by location
    let start = atoms.partition_point(|a| a.location <= u);
    for a in &atoms[start..] {
        if a.location > v {
            break;
        }
        atom_sum.push(a.log_mass);
    }
    if atom_sum.is_zero() {
        gross
    } else {
        let s = atom_sum.value();
        if s >= gross {
            LOG_ZERO
        } else {
            log_diff_exp(gross, s)
        }
    }
}

fn outside_below(f: &Distribution, g: &Distribution, x: f64, ylo: f64) -> f64 {
    let mass = log1mexp(g.log_tail(ylo));
    if mass == LOG_ZERO {
        LOG_ZERO
    } else {
        f.log_tail(x / ylo) + mass
    }
}

fn coarse_lower(f: &Distribution, g: &Distribution, x: f64, ylo: f64, yhi: f64) -> f64 {
    let mut lo = LogSum::new();
    let (atoms, _) = g.atoms_in(ylo, yhi, 256);
    for a in &atoms {
        lo.push(f.log_tail(x / a.location) + a.log_mass);
    }
    let lr = (yhi / ylo).ln();
    let mut u = ylo;
    for i in 1..=64 {
        let v = ylo * (lr * i as f64 / 64.0).exp();
        lo.push(f.log_tail(x / u) + log_diff_exp(g.log_tail(u), g.log_tail_left(v)));
        u = v;
    }
    lo.value()
}
