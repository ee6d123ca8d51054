//! Monotone absorption band: closed form through the Lambert W function.
//!
//! With `k` non-decreasing, `g(f, r)` increases in both `f` and `r`, so
//! `P₂(r) = F(F̃(r))` with `F̃(r)` the root of `g(f, r) = p̃₁`, and
//! `P₂(r) > p₂ ⟺ r < R₀` where `g(f₀, R₀) = p̃₁` and `F(f₀) = p₂`.

#[allow(unused_imports)] // method resolution without std
use num_traits::Float;
use core::f64::consts::PI;

use super::{check_p, geometric_gain, p1_tilde_with, AbsorptionTable, ThresholdPath, ThzParams};
use crate::error::{domain, require_finite, Error, Result};
use crate::numeric::bisect;
use crate::specfun::lambert_w0;

pub(crate) fn check_scenario1(params: &ThzParams, table: &AbsorptionTable) -> Result<()> {
    params.validate()?;
    table.require_covers(params.f_low, params.f_high)?;
    if !table.is_non_decreasing_on(params.f_low, params.f_high) {
        return Err(Error::Scenario(alloc::format!(
            "k(f) decreases somewhere on [{}, {}] Hz; use the non-monotone (scenario 2) solver",
            params.f_low, params.f_high
        )));
    }
    Ok(())
}

/// Root of `f r e^{k(f) r/2} = p̃₁` in the band, or `None` when the two sides
/// do not cross there.
pub fn f_tilde_scenario1(r: f64, p1_tilde: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<Option<f64>> {
    check_scenario1(params, table)?;
    require_finite("f_tilde_scenario1", &[r, p1_tilde])?;
    if r < 0.0 || p1_tilde <= 0.0 {
        return Err(domain("f_tilde_scenario1", "need r ≥ 0 and p1_tilde > 0"));
    }
    let h = |f: f64| geometric_gain(f, r, table.k_unchecked(f)) - p1_tilde;
    let (lo, hi) = (params.f_low, params.f_high);
    if h(lo).signum() == h(hi).signum() && h(lo) != 0.0 {
        return Ok(None);
    }
    bisect(h, lo, hi, hi * 1e-15).map(Some)
}

/// Intermediate quantities of the monotone-band closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario1Solution {
    /// Carrier quantile with `F(f₀) = p₂` (Hz).
    pub f0: f64,
    /// `k(f₀)` (m⁻¹).
    pub k0: f64,
    /// Threshold `p̃₁`.
    pub p1_tilde: f64,
    /// Argument `k(f₀) p̃₁ / (2 f₀)` of the Lambert function.
    pub lambert_arg: f64,
    /// Switching radius: `P₂(r) > p₂` exactly for `r < R₀` (m).
    pub r0: f64,
    /// `R_[2] = 1 - exp(-4λπ W₀² / k²(f₀))`.
    pub r2: f64,
}

pub fn scenario1_solution(
    p1: f64,
    p2: f64,
    params: &ThzParams,
    table: &AbsorptionTable,
    path: ThresholdPath,
) -> Result<Scenario1Solution> {
    check_scenario1(params, table)?;
    check_p("r2_scenario1", p2)?;
    let pt = p1_tilde_with(p1, params, path)?;
    let f0 = params.carrier()?.inverse_cdf(p2)?;
    let k0 = table.k_unchecked(f0);
    let lam = params.intensity * PI;
    if k0 == 0.0 {
        // k → 0 limit of the Lambert form
        let r0 = pt / f0;
        return Ok(Scenario1Solution {
            f0,
            k0,
            p1_tilde: pt,
            lambert_arg: 0.0,
            r0,
            r2: -(-lam * r0 * r0).exp_m1(),
        });
    }
    let lambert_arg = k0 * pt / (2.0 * f0);
    let w = lambert_w0(lambert_arg)?;
    Ok(Scenario1Solution {
        f0,
        k0,
        p1_tilde: pt,
        lambert_arg,
        r0: 2.0 * w / k0,
        r2: -(-4.0 * lam * w * w / (k0 * k0)).exp_m1(),
    })
}

/// Second-order reliability on a band where `k(f)` is non-decreasing.
pub fn r2_scenario1(p1: f64, p2: f64, params: &ThzParams, table: &AbsorptionTable, path: ThresholdPath) -> Result<f64> {
    scenario1_solution(p1, p2, params, table, path).map(|s| s.r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochgeom::nearest_distance_cdf;

    #[test]
    fn rejects_valley_band() {
        let p = ThzParams::default_scenario2();
        let t = AbsorptionTable::synthetic_valley();
        assert!(matches!(
            r2_scenario1(0.9, 0.5, &p, &t, ThresholdPath::default()),
            Err(Error::Scenario(_))
        ));
    }

    #[test]
    fn uniform_quantile_and_identity() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::synthetic_monotone();
        let s = scenario1_solution(0.9, 0.3, &p, &t, ThresholdPath::default()).unwrap();
        assert!((s.f0 - (0.3 * 35e9 + 340e9)).abs() < 1e-3);
        let direct = nearest_distance_cdf(s.r0, p.intensity).unwrap();
        assert!((direct - s.r2).abs() < 1e-12);
        let half = 0.5 * s.k0 * s.r0;
        assert!((half * half.exp() - s.lambert_arg).abs() <= 1e-10 * s.lambert_arg);
        assert!(s.r2 > 0.05 && s.r2 < 0.999, "non-degenerate: {}", s.r2);
    }

    #[test]
    fn constant_absorption_root() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::constant(0.5, 330e9, 380e9).unwrap();
        let r = 12.0;
        let target = 357e9 * r * (0.25 * r).exp();
        let f = f_tilde_scenario1(r, target, &p, &t).unwrap().unwrap();
        assert!((f / 357e9 - 1.0).abs() < 1e-12);
        assert!(f_tilde_scenario1(r, target * 1e-3, &p, &t).unwrap().is_none());
    }

    #[test]
    fn zero_absorption_limit() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::constant(0.0, 330e9, 380e9).unwrap();
        let s = scenario1_solution(0.9, 0.5, &p, &t, ThresholdPath::default()).unwrap();
        assert!((s.r0 - s.p1_tilde / s.f0).abs() < 1e-12 * s.r0);
    }
}
