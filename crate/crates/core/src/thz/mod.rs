//! Wideband frequency-hopping THz downlink: Rician link success through the
//! Marcum Q-function, a shaped carrier-frequency law, and second-order
//! reliability over distance (outer), carrier (middle) and fading (inner).
//!
//! Under the exponential Marcum approximation the link target `P₁ > p₁`
//! becomes the geometric event `g(f, r) = f r e^{k(f) r / 2} < p̃₁`, which both
//! scenario solvers work with.

mod absorption;
mod carrier;
mod mc;
mod scenario1;
mod scenario2;

pub use absorption::AbsorptionTable;
pub use carrier::{carrier_cdf_series, carrier_pdf_coefficients, CarrierDistribution};
pub use mc::{run_thz_mc, ThzModel, ThzState};
pub use scenario1::{f_tilde_scenario1, r2_scenario1, scenario1_solution, Scenario1Solution};
pub use scenario2::{
    event_intervals, optimal_bandwidth_sweep, p2_scenario2, r2_scenario2, r2_scenario2_with, roots_scenario2,
    BandwidthSweep, RadialOptions,
};

use core::f64::consts::{LN_2, PI};
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use crate::error::{domain, require_finite, Result};
use crate::specfun::{marcum_q1, marcum_q1_inverse_b, MarcumApproxCoeffs};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Thermal noise density at room temperature, −174 dBm/Hz, in W/Hz.
pub const THERMAL_NOISE_DENSITY: f64 = 3.981_071_705_534_969e-21;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Link, network and band parameters of the THz model (linear SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThzParams {
    /// Transmit power (W).
    pub tx_power: f64,
    /// Transmit antenna gain (linear).
    pub gain_tx: f64,
    /// Receive antenna gain (linear).
    pub gain_rx: f64,
    /// Noise power spectral density (W/Hz).
    pub noise_density: f64,
    /// Signal bandwidth `W` (Hz).
    pub bandwidth: f64,
    /// Packet size `l` (bits).
    pub bits: f64,
    /// Delivery deadline `t_th` (s).
    pub deadline: f64,
    /// Rician shape factor `K`.
    pub rician_k: f64,
    /// Base-station intensity `λ` (m⁻²).
    pub intensity: f64,
    /// Lower band edge `f̲` (Hz).
    pub f_low: f64,
    /// Upper band edge `f̄` (Hz).
    pub f_high: f64,
    /// Carrier-law shape `m`.
    pub m: u32,
    /// Replaces `2^{l/(W t_th)} - 1` when set.
    pub q_override: Option<f64>,
    /// Replaces the link-budget constant `c₁` when set (Hz⁻² m⁻²).
    pub c1_override: Option<f64>,
}

impl ThzParams {
    /// Defaults for the monotone-absorption band (340-375 GHz): 0.1 W,
    /// 25 dB antennas, 1 GHz, 1000 bits in 10 µs, K = 2, λ = 1.5e-3 m⁻², m = 0.
    pub fn default_scenario1() -> Self {
        Self {
            tx_power: 0.1,
            gain_tx: db_to_linear(25.0),
            gain_rx: db_to_linear(25.0),
            noise_density: THERMAL_NOISE_DENSITY,
            bandwidth: 1e9,
            bits: 1000.0,
            deadline: 10e-6,
            rician_k: 2.0,
            intensity: 1.5e-3,
            f_low: 340e9,
            f_high: 375e9,
            m: 0,
            q_override: None,
            c1_override: None,
        }
    }

    /// Same link budget over the wider 325-375 GHz band.
    pub fn default_scenario2() -> Self {
        Self {
            f_low: 325e9,
            ..Self::default_scenario1()
        }
    }

    /// Normalized regime used for Monte Carlo cross-checks: `q = 1`,
    /// `c₁ = 0.01/f̄²`, `m = 1`, 340-375 GHz.
    pub fn normalized_check() -> Self {
        Self {
            q_override: Some(1.0),
            c1_override: Some(0.01 / (375e9 * 375e9)),
            m: 1,
            ..Self::default_scenario1()
        }
    }

    pub fn with_band(mut self, f_low: f64, f_high: f64) -> Self {
        self.f_low = f_low;
        self.f_high = f_high;
        self
    }

    pub fn validate(&self) -> Result<()> {
        const F: &str = "ThzParams";
        let positive = [
            self.tx_power,
            self.gain_tx,
            self.gain_rx,
            self.noise_density,
            self.bandwidth,
            self.bits,
            self.deadline,
            self.intensity,
            self.f_low,
            self.f_high,
        ];
        require_finite(F, &positive)?;
        require_finite(F, &[self.rician_k])?;
        if positive.iter().any(|&v| v <= 0.0) {
            return Err(domain(F, "physical quantities must be positive"));
        }
        if self.rician_k < 0.0 {
            return Err(domain(F, "Rician K must be non-negative"));
        }
        if self.f_low >= self.f_high {
            return Err(domain(F, "f_low must be below f_high"));
        }
        for v in [self.q_override, self.c1_override].into_iter().flatten() {
            if !(v.is_finite() && v > 0.0) {
                return Err(domain(F, "q and c1 overrides must be positive"));
            }
        }
        Ok(())
    }

    /// QoS threshold `q = 2^{l/(W t_th)} - 1` (or the override).
    pub fn q(&self) -> f64 {
        self.q_override
            .unwrap_or_else(|| (LN_2 * self.bits / (self.bandwidth * self.deadline)).exp_m1())
    }

    /// `c₁ = (4π)² N₀ W / (P_T G_T G_R c²)` (or the override).
    pub fn c1(&self) -> f64 {
        self.c1_override.unwrap_or_else(|| {
            let four_pi = 4.0 * PI;
            four_pi * four_pi * self.noise_density * self.bandwidth
                / (self.tx_power * self.gain_tx * self.gain_rx * SPEED_OF_LIGHT * SPEED_OF_LIGHT)
        })
    }

    /// `c₂ = √(2 c₁ q (K+1))` at the model's own `q`.
    pub fn c2(&self) -> f64 {
        c2_at(self.c1(), self.q(), self.rician_k)
    }

    /// First Marcum argument `a = √(2K)`.
    pub fn marcum_a(&self) -> f64 {
        (2.0 * self.rician_k).sqrt()
    }

    pub fn carrier(&self) -> Result<CarrierDistribution> {
        CarrierDistribution::new(self.f_low, self.f_high, self.m)
    }
}

pub(crate) fn c2_at(c1: f64, q: f64, k: f64) -> f64 {
    (2.0 * c1 * q * (k + 1.0)).sqrt()
}

/// `g(f, r) = f r e^{k r / 2}`, the quantity compared against `p̃₁`.
pub(crate) fn geometric_gain(f: f64, r: f64, k: f64) -> f64 {
    f * r * (0.5 * k * r).exp()
}

/// How the link target `p₁` is turned into the threshold `p̃₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPath {
    /// Exponential Marcum approximation with the given coefficients.
    Approx(MarcumApproxCoeffs),
    /// Exact Marcum inverse: `p̃₁ = b*(p₁)/c₂` with `Q₁(a, b*) = p₁`.
    Exact,
}

impl Default for ThresholdPath {
    fn default() -> Self {
        ThresholdPath::Approx(MarcumApproxCoeffs::NEAR_UNITY_K2)
    }
}

/// `p̃₁ = (1/c₂) [-ln p₁ / e^ν]^{1/μ}`.
pub fn p1_tilde(p1: f64, params: &ThzParams, approx: MarcumApproxCoeffs) -> Result<f64> {
    params.validate()?;
    check_p("p1_tilde", p1)?;
    let b = (-p1.ln() / approx.nu().exp()).powf(1.0 / approx.mu());
    Ok(b / params.c2())
}

/// `p̃₁` from the exact Marcum inverse.
pub fn p1_tilde_exact(p1: f64, params: &ThzParams) -> Result<f64> {
    params.validate()?;
    check_p("p1_tilde_exact", p1)?;
    Ok(marcum_q1_inverse_b(params.marcum_a(), p1)? / params.c2())
}

pub fn p1_tilde_with(p1: f64, params: &ThzParams, path: ThresholdPath) -> Result<f64> {
    match path {
        ThresholdPath::Approx(c) => p1_tilde(p1, params, c),
        ThresholdPath::Exact => p1_tilde_exact(p1, params),
    }
}

pub(crate) fn check_p(func: &'static str, p: f64) -> Result<()> {
    require_finite(func, &[p])?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(func, "target must lie strictly inside (0, 1)"));
    }
    Ok(())
}

/// Composite constants derived from the parameters and a link target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    pub c1: f64,
    pub c2: f64,
    pub q: f64,
    pub a: f64,
    pub p1_tilde: f64,
    pub path: ThresholdPath,
}

impl DerivedConstants {
    pub fn new(params: &ThzParams, p1: f64, path: ThresholdPath) -> Result<Self> {
        Ok(Self {
            c1: params.c1(),
            c2: params.c2(),
            q: params.q(),
            a: params.marcum_a(),
            p1_tilde: p1_tilde_with(p1, params, path)?,
            path,
        })
    }
}

fn check_fr(func: &'static str, f: f64, r: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<f64> {
    params.validate()?;
    require_finite(func, &[f, r])?;
    if r < 0.0 {
        return Err(domain(func, "distance must be non-negative"));
    }
    table.k_at(f)
}

/// `SNR = P_T G_T G_R c² / (4πf)² · h r^{-2} e^{-k(f) r} / (N₀ W)`, i.e.
/// `h / (c₁ f² r² e^{k(f) r})`.
pub fn thz_snr(h: f64, f: f64, r: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<f64> {
    let k = check_fr("thz_snr", f, r, params, table)?;
    require_finite("thz_snr", &[h])?;
    if h < 0.0 {
        return Err(domain("thz_snr", "fading power must be non-negative"));
    }
    let g = geometric_gain(f, r, k);
    Ok(h / (params.c1() * g * g))
}

/// Link success `P₁ = Q₁(√(2K), c₂ f r e^{k(f) r / 2})`.
pub fn p1_thz(f: f64, r: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<f64> {
    let k = check_fr("p1_thz", f, r, params, table)?;
    marcum_q1(params.marcum_a(), params.c2() * geometric_gain(f, r, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::marcum_q1_exp_approx;

    #[test]
    fn table_one_constants() {
        let p = ThzParams::default_scenario1();
        assert!((p.q() / (2f64.powf(0.1) - 1.0) - 1.0).abs() < 1e-13);
        let hand = (4.0 * PI).powi(2) * 3.981071705534969e-21 * 1e9
            / (0.1 * 316.22776601683796 * 316.22776601683796 * 299792458f64.powi(2));
        assert!((p.c1() / hand - 1.0).abs() < 1e-12);
        assert_eq!(p.marcum_a(), 2.0);
    }

    #[test]
    fn snr_scaling() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::constant(0.0, 300e9, 800e9).unwrap();
        let s1 = thz_snr(1.0, 350e9, 10.0, &p, &t).unwrap();
        let s2 = thz_snr(1.0, 350e9, 20.0, &p, &t).unwrap();
        let s3 = thz_snr(1.0, 700e9, 10.0, &p, &t).unwrap();
        assert!((s1 / s2 - 4.0).abs() < 1e-12);
        assert!((s1 / s3 - 4.0).abs() < 1e-12);
        assert!(thz_snr(1.0, 900e9, 10.0, &p, &t).is_err());
    }

    #[test]
    fn p1_at_origin_is_one() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::synthetic_monotone();
        assert_eq!(p1_thz(350e9, 0.0, &p, &t).unwrap(), 1.0);
    }

    #[test]
    fn p1_tilde_inverts_the_approximation() {
        let p = ThzParams::default_scenario1();
        let c = MarcumApproxCoeffs::NEAR_UNITY_K2;
        let pt = p1_tilde(0.9, &p, c).unwrap();
        let back = marcum_q1_exp_approx(p.marcum_a(), p.c2() * pt, c).unwrap();
        assert!((back - 0.9).abs() < 1e-12);
        let pt_hi = p1_tilde(1.0 - 1e-9, &p, c).unwrap();
        assert!(pt_hi < pt * 1e-2);
        assert!(p1_tilde(1.0, &p, c).is_err());
    }

    #[test]
    fn param_validation() {
        let mut p = ThzParams::default_scenario1();
        p.f_low = 400e9;
        assert!(p.validate().is_err());
        let mut p = ThzParams::default_scenario1();
        p.q_override = Some(-1.0);
        assert!(p.validate().is_err());
        assert!(ThzParams::normalized_check().validate().is_ok());
    }
}
