//! Special functions used by the link-level models.
//!
//! All functions are pure and validate their domain; out-of-domain input is an
//! [`Error::Domain`](crate::Error::Domain), never a silent NaN.

mod bessel;
mod beta;
mod lambert;
mod marcum;

pub use bessel::{bessel_i0, bessel_i0e};
pub use beta::{beta_fn, ln_beta};
pub use lambert::lambert_w0;
pub use marcum::{
    calibrate_marcum_coeffs, eval_mu_nu, marcum_q1, marcum_q1_complement, marcum_q1_exp_approx,
    marcum_q1_inverse_b, MarcumApproxCoeffs, MarcumPolyCoeffs,
};
