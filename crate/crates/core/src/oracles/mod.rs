//! Independent ground-truth generators used to certify the engine:
//! counter-based Monte Carlo, a non-adaptive fixed-grid Stieltjes
//! integrator, and a closed-form quadrature for the Exp⊗Exp product.
//!
//! The fixed-grid integrator deliberately shares no code with the adaptive
//! engine beyond `Distribution` evaluation, so agreement between the two is
//! meaningful evidence rather than a tautology.

mod mc;
mod quad;
mod rng;
mod stieltjes;

pub use mc::{mc_product_tail, sample, McEstimate};
pub use quad::expexp_closed_form;
pub use rng::CounterRng;
pub use stieltjes::fixed_grid_stieltjes;
