use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use super::bessel::i0e_unchecked;
use crate::error::{domain, require_finite, Error, Result};
use crate::numeric::{bisect, integrate};

const QUAD_TOL: f64 = 1e-16;
// e^{-72} is far below the 1e-18 integrand cutoff.
const TAIL_SPAN: f64 = 12.0;

/// Coefficients of the exponential approximation
/// `Q₁(a, b) ≈ exp(-e^ν b^μ)` at a fixed first argument `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarcumApproxCoeffs {
    mu: f64,
    nu: f64,
}

impl MarcumApproxCoeffs {
    /// Values tuned for link reliabilities of about 0.97 to 0.99 at `a = √6`.
    pub const NEAR_UNITY_K2: MarcumApproxCoeffs = MarcumApproxCoeffs {
        mu: 2.4246,
        nu: -3.3042,
    };

    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        require_finite("MarcumApproxCoeffs::new", &[mu, nu])?;
        if mu <= 0.0 {
            return Err(domain(
                "MarcumApproxCoeffs::new",
                "mu must be positive for the approximation to decrease in b",
            ));
        }
        Ok(Self { mu, nu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Polynomial coefficient sets `μ(a) = Σ μₙ aⁿ`, `ν(a) = Σ νₙ aⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarcumPolyCoeffs {
    mu_poly: Vec<f64>,
    nu_poly: Vec<f64>,
}

impl MarcumPolyCoeffs {
    pub fn new(mu_poly: Vec<f64>, nu_poly: Vec<f64>) -> Result<Self> {
        if mu_poly.is_empty() || mu_poly.len() != nu_poly.len() {
            return Err(domain(
                "MarcumPolyCoeffs::new",
                "mu and nu polynomials must be non-empty and of equal length",
            ));
        }
        require_finite("MarcumPolyCoeffs::new", &mu_poly)?;
        require_finite("MarcumPolyCoeffs::new", &nu_poly)?;
        Ok(Self { mu_poly, nu_poly })
    }

    /// Least-squares fit over `a ∈ [1, 5]` (K ∈ [0.5, 12]), degree four.
    pub fn least_squares_a1_5() -> Self {
        Self {
            mu_poly: alloc::vec![2.174, -0.592, 0.593, -0.092, 0.005],
            nu_poly: alloc::vec![-0.840, 0.327, -0.740, 0.083, -0.004],
        }
    }

    pub fn mu_poly(&self) -> &[f64] {
        &self.mu_poly
    }

    pub fn nu_poly(&self) -> &[f64] {
        &self.nu_poly
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Evaluates `(μ(a), ν(a))` from the polynomial coefficient sets.
pub fn eval_mu_nu(a: f64, coeffs: &MarcumPolyCoeffs) -> Result<MarcumApproxCoeffs> {
    require_finite("eval_mu_nu", &[a])?;
    MarcumApproxCoeffs::new(horner(&coeffs.mu_poly, a), horner(&coeffs.nu_poly, a))
}

fn integrand(a: f64, x: f64) -> f64 {
    let d = x - a;
    x * (-0.5 * d * d).exp() * i0e_unchecked(a * x)
}

/// `(Q₁(a,b), 1 - Q₁(a,b))`, each computed directly on the side where it is
/// small so that neither loses relative precision.
fn marcum_parts(a: f64, b: f64) -> Result<(f64, f64)> {
    if b == 0.0 {
        return Ok((1.0, 0.0));
    }
    // roughly the median of the Rician amplitude
    let split = (a * a + 2.0 * core::f64::consts::LN_2).sqrt();
    if b < split {
        let lower = integrate(|x| integrand(a, x), 0.0, b, QUAD_TOL)?.clamp(0.0, 1.0);
        Ok((1.0 - lower, lower))
    } else {
        let upper_limit = a.max(b) + TAIL_SPAN;
        let upper = integrate(|x| integrand(a, x), b, upper_limit, QUAD_TOL)?.clamp(0.0, 1.0);
        Ok((upper, 1.0 - upper))
    }
}

fn check_ab(func: &'static str, a: f64, b: f64) -> Result<()> {
    require_finite(func, &[a, b])?;
    if a < 0.0 || b < 0.0 {
        return Err(domain(func, "arguments must be non-negative"));
    }
    Ok(())
}

/// First-order Marcum Q-function
/// `Q₁(a, b) = ∫_b^∞ x exp(-(x² + a²)/2) I₀(ax) dx`.
///
/// Evaluated by adaptive Gauss-Kronrod quadrature of the defining integral on
/// an exponentially scaled integrand.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    check_ab("marcum_q1", a, b)?;
    marcum_parts(a, b).map(|(q, _)| q)
}

/// `1 - Q₁(a, b)`, accurate when `Q₁` is close to one.
pub fn marcum_q1_complement(a: f64, b: f64) -> Result<f64> {
    check_ab("marcum_q1_complement", a, b)?;
    marcum_parts(a, b).map(|(_, c)| c)
}

/// Smallest `b*` with `Q₁(a, b*) = p`, found by bracketing and bisection.
pub fn marcum_q1_inverse_b(a: f64, p: f64) -> Result<f64> {
    require_finite("marcum_q1_inverse_b", &[a, p])?;
    if a < 0.0 {
        return Err(domain("marcum_q1_inverse_b", "a must be non-negative"));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("marcum_q1_inverse_b", "p must lie strictly inside (0, 1)"));
    }
    // 1 - p is exact for p ≥ 1/2, so compare on the complement there.
    let use_complement = p >= 0.5;
    let target = if use_complement { 1.0 - p } else { p };
    let residual = |b: f64| -> f64 {
        match marcum_parts(a, b) {
            Ok((q, c)) => {
                if use_complement {
                    target - c
                } else {
                    q - target
                }
            }
            Err(_) => f64::NAN,
        }
    };
    let mut hi = 1.0;
    while residual(hi) > 0.0 {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Search(format!("no bracket for Q1({a}, b) = {p}")));
        }
    }
    let b = bisect(residual, 0.0, hi, 1e-15 * hi)?;
    if b.is_nan() {
        return Err(Error::Accuracy("marcum inverse produced NaN".into()));
    }
    Ok(b)
}

/// `exp(-e^ν b^μ)`; the first argument is implicit in the coefficients.
pub fn marcum_q1_exp_approx(_a: f64, b: f64, coeffs: MarcumApproxCoeffs) -> Result<f64> {
    require_finite("marcum_q1_exp_approx", &[b])?;
    if b < 0.0 {
        return Err(domain("marcum_q1_exp_approx", "b must be non-negative"));
    }
    Ok((-(coeffs.nu.exp() * b.powf(coeffs.mu))).exp())
}

// ln(-ln p) without cancellation near p = 1
fn log_neg_log(p: f64) -> f64 {
    (-(-(1.0 - p)).ln_1p()).ln()
}

/// Two-point collocation in log-log space: the returned approximation
/// reproduces `Q₁` exactly at the reliabilities `p_lo` and `p_hi`.
pub fn calibrate_marcum_coeffs(a: f64, p_lo: f64, p_hi: f64) -> Result<MarcumApproxCoeffs> {
    require_finite("calibrate_marcum_coeffs", &[a, p_lo, p_hi])?;
    if !(0.0 < p_lo && p_lo < p_hi && p_hi < 1.0) {
        return Err(domain(
            "calibrate_marcum_coeffs",
            "anchors must satisfy 0 < p_lo < p_hi < 1",
        ));
    }
    let b_lo = marcum_q1_inverse_b(a, p_lo)?;
    let b_hi = marcum_q1_inverse_b(a, p_hi)?;
    let (lb_lo, lb_hi) = (b_lo.ln(), b_hi.ln());
    if lb_lo == lb_hi {
        return Err(Error::Calibration(format!(
            "anchors {p_lo} and {p_hi} map to the same threshold b"
        )));
    }
    let (y_lo, y_hi) = (log_neg_log(p_lo), log_neg_log(p_hi));
    let mu = (y_lo - y_hi) / (lb_lo - lb_hi);
    let nu = y_lo - mu * lb_lo;
    MarcumApproxCoeffs::new(mu, nu).map_err(|e| Error::Calibration(format!("{e}")))
}
