//! Rigorous two-sided enclosures of convolution tails.
//!
//! The integrands are monotone: `y ↦ F̄(x/y)` is non-decreasing for the
//! product tail and `y ↦ V̄(x−y)` for the second sum-convolution. On any cell
//! `(u, v)` the contribution of the (continuous plus interior-atomic) measure
//! therefore lies between `φ(u)·ΔG` and `φ(v)·ΔG` with `ΔG = Ḡ(u) − Ḡ(v⁻)`,
//! while atoms placed on cell boundaries are summed exactly. Cells are
//! refined adaptively where the bound gap dominates; all accumulation is
//! max-shifted compensated log-sum.

mod band;
mod product;
mod sum2;

pub use band::{truncation_band, Band};
pub use product::{product_tail, product_tail_grid, product_tail_with};
pub use sum2::{sum_conv2_tail, sum_conv2_tail_with};

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::logdomain::{log1mexp, LogBracket, LogSum, LOG_ZERO};

/// Engine configuration: `tol` is the target log-domain bracket width
/// (relative error on the probability); `budget` caps cell evaluations.
#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub tol: f64,
    pub budget: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { tol: 1e-6, budget: 1_000_000 }
    }
}

impl EngineConfig {
    pub fn with_tol(tol: f64) -> Self {
        EngineConfig { tol, ..Default::default() }
    }
}

/// A certified enclosure plus convergence diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct Enclosure {
    pub bracket: LogBracket,
    /// Whether the requested tolerance was reached within budget.
    pub converged: bool,
    /// Number of cell evaluations spent.
    pub cells_used: usize,
}

/// Multiplicative nudge (a few ulps) applied to integrand arguments so that
/// float rounding at mapped jump points can never flip a bound to the wrong
/// side of the jump.
pub(crate) const NUDGE: f64 = 4.0 * f64::EPSILON;

/// One refinement cell `(u, v)` with its precomputed log-domain terms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Cell {
    pub u: f64,
    pub v: f64,
    /// `log(φ_lo · ΔG)`.
    pub lo_term: f64,
    /// `log(φ_hi · ΔG)`.
    pub hi_term: f64,
}

impl Cell {
    /// Log of the linear-domain gap `φ_hi·ΔG − φ_lo·ΔG`.
    fn gap_log(&self) -> f64 {
        if self.hi_term == LOG_ZERO {
            LOG_ZERO
        } else if self.lo_term == LOG_ZERO {
            self.hi_term
        } else if self.lo_term >= self.hi_term {
            LOG_ZERO
        } else {
            self.hi_term + log1mexp(self.lo_term - self.hi_term)
        }
    }
}

#[derive(Debug)]
struct HeapEntry {
    gap_log: f64,
    cell: Cell,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.gap_log == other.gap_log
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on gap; gaps are never NaN
        self.gap_log.partial_cmp(&other.gap_log).unwrap_or(Ordering::Equal)
    }
}

/// Generic adaptive loop over monotone-bounded cells.
///
/// `make_cell(u, v)` computes the enclosure terms for a cell; `exact_log` is
/// the log-sum of exactly-known contributions (atoms, standalone terms);
/// `outside_hi` are certified upper bounds on mass outside the cell range
/// (added to the upper bracket only).
pub(crate) struct Refiner<'a> {
    pub make_cell: &'a dyn Fn(f64, f64) -> Cell,
    pub exact_log: f64,
    pub outside_hi: &'a [f64],
    pub cfg: EngineConfig,
}

impl<'a> Refiner<'a> {
    pub fn run(&self, boundaries: &[f64]) -> Enclosure {
        let mut heap: BinaryHeap<HeapEntry> = BinaryHeap::new();
        let mut cells_used = 0usize;
        for w in boundaries.windows(2) {
            if w[0] >= w[1] {
                continue;
            }
            let c = (self.make_cell)(w[0], w[1]);
            cells_used += 1;
            heap.push(HeapEntry { gap_log: c.gap_log(), cell: c });
        }

        let totals = |heap: &BinaryHeap<HeapEntry>| -> LogBracket {
            let mut lo = LogSum::new();
            let mut hi = LogSum::new();
            lo.push(self.exact_log);
            hi.push(self.exact_log);
            for e in heap.iter() {
                lo.push(e.cell.lo_term);
                hi.push(e.cell.hi_term);
            }
            for &b in self.outside_hi {
                hi.push(b);
            }
            LogBracket::new(lo.value().min(hi.value()), hi.value())
        };

        let mut bracket = totals(&heap);
        let mut since_recompute = 0usize;
        while bracket.width() > self.cfg.tol && cells_used < self.cfg.budget {
            let top = match heap.pop() {
                Some(t) => t,
                None => break,
            };
            if top.gap_log == LOG_ZERO {
                heap.push(top);
                break;
            }
            let Cell { u, v, .. } = top.cell;
            let m = if v / u > 4.0 { (u * v).sqrt() } else { 0.5 * (u + v) };
            if !(m > u && m < v) {
                // cell no longer splittable in f64; keep it and stop refining it
                heap.push(HeapEntry { gap_log: LOG_ZERO, cell: top.cell });
                continue;
            }
            let left = (self.make_cell)(u, m);
            let right = (self.make_cell)(m, v);
            cells_used += 2;
            heap.push(HeapEntry { gap_log: left.gap_log(), cell: left });
            heap.push(HeapEntry { gap_log: right.gap_log(), cell: right });
            since_recompute += 1;
            if since_recompute >= (heap.len() / 2).max(64) {
                bracket = totals(&heap);
                since_recompute = 0;
            }
        }
        bracket = totals(&heap);
        let converged = bracket.width() <= self.cfg.tol || bracket.is_zero();
        Enclosure { bracket, converged, cells_used }
    }
}

/// Merge boundary candidate lists into a sorted, deduplicated partition of
/// `[lo, hi]`, always keeping `lo` and `hi` themselves.
pub(crate) fn assemble_boundaries(lo: f64, hi: f64, candidates: &mut Vec<f64>) -> Vec<f64> {
    candidates.push(lo);
    candidates.push(hi);
    candidates.retain(|&y| y.is_finite() && y >= lo && y <= hi);
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    std::mem::take(candidates)
}

/// Geometric seed points between `lo` and `hi`.
pub(crate) fn geometric_seed(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if lo <= 0.0 || hi <= lo {
        return out;
    }
    let lr = (hi / lo).ln();
    for i in 1..n {
        out.push(lo * (lr * i as f64 / n as f64).exp());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_gap_log() {
        let c = Cell { u: 1.0, v: 2.0, lo_term: -3.0, hi_term: -2.0 };
        let expect = ((-2.0f64).exp() - (-3.0f64).exp()).ln();
        assert!((c.gap_log() - expect).abs() < 1e-12);
        let z = Cell { u: 1.0, v: 2.0, lo_term: LOG_ZERO, hi_term: LOG_ZERO };
        assert_eq!(z.gap_log(), LOG_ZERO);
    }

    #[test]
    fn boundaries_sorted_dedup() {
        let mut cand = vec![3.0, 1.5, 3.0, 0.2, 9.0];
        let b = assemble_boundaries(1.0, 5.0, &mut cand);
        assert_eq!(b, vec![1.0, 1.5, 3.0, 5.0]);
    }
}
