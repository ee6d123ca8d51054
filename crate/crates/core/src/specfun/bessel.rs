#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use crate::error::{domain, Result};

const SERIES_LIMIT: f64 = 30.0;

// Σ (x/2)^{2k} / (k!)², summed until the term no longer moves the total.
fn i0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= y / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
        k += 1.0;
    }
}

// e^{-x} I₀(x) ≈ (2πx)^{-1/2} Σ [(2k-1)!!]² / (k! (8x)^k), valid for large x.
fn i0e_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while k < 200.0 {
        let next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        k += 1.0;
    }
    sum / (2.0 * core::f64::consts::PI * x).sqrt()
}

/// Modified Bessel function of the first kind, order zero.
///
/// Overflows to `+inf` for `x` beyond roughly 713.
pub fn bessel_i0(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain("bessel_i0", "argument must be finite and non-negative"));
    }
    if x <= SERIES_LIMIT {
        Ok(i0_series(x))
    } else {
        Ok(i0e_asymptotic(x) * x.exp())
    }
}

/// Exponentially scaled I₀: `e^{-x} I₀(x)`, finite for every finite `x ≥ 0`.
pub fn bessel_i0e(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain("bessel_i0e", "argument must be finite and non-negative"));
    }
    Ok(i0e_unchecked(x))
}

pub(crate) fn i0e_unchecked(x: f64) -> f64 {
    if x <= SERIES_LIMIT {
        i0_series(x) * (-x).exp()
    } else {
        i0e_asymptotic(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        assert!((bessel_i0(1.0).unwrap() - 1.266_065_877_752_008_4).abs() < 1e-14);
        assert!((bessel_i0(5.0).unwrap() / 27.239_871_823_604_45 - 1.0).abs() < 1e-13);
    }

    #[test]
    fn asymptotic_branch_is_continuous() {
        let below = i0_series(30.0) * (-30.0f64).exp();
        let above = i0e_asymptotic(30.0);
        assert!((below / above - 1.0).abs() < 1e-13);
        let big = bessel_i0e(400.0).unwrap();
        assert!((big - 1.0 / (2.0 * core::f64::consts::PI * 400.0).sqrt() * (1.0 + 1.0 / 3200.0)).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_i0(-1.0).is_err());
        assert!(bessel_i0(f64::NAN).is_err());
        assert!(bessel_i0e(f64::INFINITY).is_err());
    }
}
