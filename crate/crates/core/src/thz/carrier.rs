use alloc::vec::Vec;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;
use rand::Rng;

use crate::error::{domain, require_finite, Error, Result};
use crate::numeric::bisect_predicate;
use crate::specfun::beta_fn;

/// Carrier-frequency law on `[f̲, f̄]` with density
/// `c [(f̄ - f)(f - f̲)]^m`, `c = (f̄ - f̲)^{-1-2m} / B(1+m, 1+m)`.
///
/// In the normalized variable `u = (f - f̲)/(f̄ - f̲)` this is Beta(m+1, m+1),
/// so the cdf is evaluated as the binomial tail
/// `Σ_{j=m+1}^{2m+1} C(2m+1, j) u^j (1-u)^{2m+1-j}`, which stays accurate
/// for large `m` where the power-series form cancels badly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierDistribution {
    f_low: f64,
    f_high: f64,
    m: u32,
    norm: f64,
}

impl CarrierDistribution {
    pub fn new(f_low: f64, f_high: f64, m: u32) -> Result<Self> {
        require_finite("CarrierDistribution::new", &[f_low, f_high])?;
        if !(f_low > 0.0 && f_low < f_high) {
            return Err(domain("CarrierDistribution::new", "need 0 < f_low < f_high"));
        }
        let mf = m as f64;
        let norm = 1.0 / beta_fn(mf + 1.0, mf + 1.0)?;
        Ok(Self {
            f_low,
            f_high,
            m,
            norm,
        })
    }

    pub fn f_low(&self) -> f64 {
        self.f_low
    }

    pub fn f_high(&self) -> f64 {
        self.f_high
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    fn width(&self) -> f64 {
        self.f_high - self.f_low
    }

    fn normalize(&self, func: &'static str, f: f64) -> Result<f64> {
        require_finite(func, &[f])?;
        if f < self.f_low || f > self.f_high {
            return Err(Error::Table(alloc::format!(
                "frequency {f} Hz outside band [{}, {}] Hz",
                self.f_low,
                self.f_high
            )));
        }
        Ok(((f - self.f_low) / self.width()).clamp(0.0, 1.0))
    }

    /// Density in Hz⁻¹.
    pub fn pdf(&self, f: f64) -> Result<f64> {
        let u = self.normalize("carrier_pdf", f)?;
        Ok(self.norm * (u * (1.0 - u)).powi(self.m as i32) / self.width())
    }

    pub fn cdf(&self, f: f64) -> Result<f64> {
        let u = self.normalize("carrier_cdf", f)?;
        Ok(self.cdf_normalized(u))
    }

    pub(crate) fn cdf_normalized(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let n = 2 * self.m + 1;
        let (lu, lv) = (u.ln(), (-u).ln_1p());
        // C(n, j) built up from C(n, m+1)
        let mut ln_c = ln_choose(n, self.m + 1);
        let mut total = 0.0;
        for j in (self.m + 1)..=n {
            total += (ln_c + j as f64 * lu + (n - j) as f64 * lv).exp();
            ln_c += ((n - j) as f64).ln() - ((j + 1) as f64).ln();
        }
        total.min(1.0)
    }

    /// Smallest frequency with `cdf(f) ≥ p`, by bisection.
    pub fn inverse_cdf(&self, p: f64) -> Result<f64> {
        require_finite("carrier_inverse_cdf", &[p])?;
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("carrier_inverse_cdf", "probability must lie in [0, 1]"));
        }
        Ok(self.f_low + self.width() * self.inverse_normalized(p))
    }

    fn inverse_normalized(&self, p: f64) -> f64 {
        if self.m == 0 {
            return p;
        }
        bisect_predicate(|u| self.cdf_normalized(u) < p, 0.0, 1.0, 1e-15)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p: f64 = rng.gen();
        self.f_low + self.width() * self.inverse_normalized(p)
    }
}

fn ln_choose(n: u32, k: u32) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Coefficients `b_j` of the normalized density expanded in powers of `u`:
/// `pdf(u) = Σ_j b_j u^j`, `b_{m+i} = (-1)^i C(m, i) / B(m+1, m+1)`.
pub fn carrier_pdf_coefficients(m: u32) -> Result<Vec<f64>> {
    let mf = m as f64;
    let norm = 1.0 / beta_fn(mf + 1.0, mf + 1.0)?;
    let mut b = alloc::vec![0.0; 2 * m as usize + 1];
    let mut c = 1.0;
    for i in 0..=m {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        b[(m + i) as usize] = sign * c * norm;
        c = c * (m - i) as f64 / (i + 1) as f64;
    }
    Ok(b)
}

/// Normalized cdf from the term-by-term integrated expansion
/// `F(u) = Σ_{n=1}^{2m+1} b_{n-1} u^n / n`. Exact in exact arithmetic; in
/// floating point it cancels for large `m`.
pub fn carrier_cdf_series(u: f64, m: u32) -> Result<f64> {
    require_finite("carrier_cdf_series", &[u])?;
    if !(0.0..=1.0).contains(&u) {
        return Err(domain("carrier_cdf_series", "u must lie in [0, 1]"));
    }
    let b = carrier_pdf_coefficients(m)?;
    Ok(b.iter()
        .enumerate()
        .rev()
        .fold(0.0, |acc, (j, bj)| acc * u + bj / (j + 1) as f64)
        * u)
}
