//! Numerical toolkit for tail probabilities of product convolutions.
//!
//! Given independent nonnegative random variables `X ~ F` and `Y ~ G`, the
//! distribution `H` of the product `XY` has survival function
//!
//! ```text
//! H̄(x) = ∫ F̄(x/y) G(dy)
//! ```
//!
//! This crate models `F` and `G` as exact piecewise-analytic survival
//! functions (with atoms), computes certified two-sided enclosures of `H̄(x)`
//! entirely in log domain, estimates shift-ratio indicators
//! `C*(V,t) = limsup V̄(x−t)/V̄(x)` and `C_*(V,t) = liminf V̄(x−t)/V̄(x)`,
//! classifies tails into the classes `L`, `L(γ)`, `OL`, `D`, and packages a
//! set of executable scenarios that probe long-tail transfer to the product.
//!
//! Modules:
//! - [`dist`]: distribution model, constructors, validation, JSON specs
//! - [`conv`]: rigorous Stieltjes enclosures of product and sum convolutions
//! - [`indicators`]: shift-ratio series, decay exponents, class diagnostics
//! - [`oracles`]: independent cross-checks (Monte Carlo, fixed-grid sums,
//!   closed-form quadrature)
//! - [`scenarios`]: end-to-end reproducible experiments with pass/fail verdicts

pub mod conv;
pub mod dist;
pub mod error;
pub mod grid;
pub mod indicators;
pub mod logdomain;
pub mod oracles;
pub mod scenarios;

pub use dist::{Atom, Distribution, Segment, TailForm, ValidationReport};
pub use error::Error;
pub use grid::{GridScale, GridSpec};
pub use logdomain::LogBracket;

/// Crate result alias.
pub type Result<T> = std::result::Result<T, Error>;
