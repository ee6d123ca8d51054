#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use crate::error::{domain, Result};

const INV_E: f64 = 0.367_879_441_171_442_33;

/// Principal branch W₀ of the Lambert W function, `W e^W = x`, for `x ≥ -1/e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("lambert_w0", "non-finite argument"));
    }
    let gap = x + INV_E;
    if gap < 0.0 {
        // allow a few ulps of rounding below the branch point
        if gap > -4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return Err(domain("lambert_w0", "argument below -1/e"));
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = if x < -0.25 {
        // series about the branch point in p = sqrt(2(ex + 1))
        let p = (2.0 * core::f64::consts::E * gap).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        (1.0 + x).ln()
    } else {
        let l = x.ln();
        l - l.ln()
    };
    if w <= -1.0 {
        return Ok(-1.0);
    }

    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}
