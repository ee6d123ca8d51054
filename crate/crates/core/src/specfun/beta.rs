#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use crate::error::{domain, Result};

/// Natural log of the beta function, via log-gamma.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) || x <= 0.0 || y <= 0.0 {
        return Err(domain("beta_fn", "arguments must be finite and positive"));
    }
    Ok(libm::lgamma(x) + libm::lgamma(y) - libm::lgamma(x + y))
}

/// Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}
