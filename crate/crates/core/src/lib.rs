//! Hierarchical ("higher-order") meta-distribution reliability of wireless
//! networks.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`specfun`]: modified Bessel I₀, first-order Marcum Q with its exponential
//!   approximation, Lambert W₀ and the beta function.
//! * [`stochgeom`]: exact samplers for ordered PPP distances, Bernoulli
//!   interferer marks and Rayleigh/Rician power fading.
//! * [`mdcore`]: the generic n-layer nested Monte Carlo estimator, zeroth-order
//!   reliability and the order-reduction integral.
//! * [`canonical`]: the interference-limited cellular model with slowly varying
//!   Bernoulli interferers (closed forms and Monte Carlo bindings).
//! * [`thz`]: the frequency-hopping THz link model with molecular absorption.
//!
//! File formats, the CLI and multi-threaded drivers live in the `metadist`
//! companion crate.
#![no_std]

extern crate alloc;

pub mod canonical;
pub mod error;
pub mod mdcore;
pub mod numeric;
pub mod rng;
pub mod specfun;
pub mod stochgeom;
pub mod thz;

pub use error::{Error, Result};
pub use mdcore::{LayeredModel, MdEstimate, MdQuery};
