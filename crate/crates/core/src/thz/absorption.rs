use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Molecular absorption coefficient `k(f)` (m⁻¹) sampled at ascending
/// frequencies (Hz), linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable {
    freqs: Vec<f64>,
    k: Vec<f64>,
}

impl AbsorptionTable {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Table("need at least two samples".into()));
        }
        for (i, &(f, k)) in samples.iter().enumerate() {
            if !f.is_finite() || !k.is_finite() {
                return Err(Error::Table(format!("sample {i} is not finite")));
            }
            if f <= 0.0 {
                return Err(Error::Table(format!("sample {i}: frequency must be positive")));
            }
            if k < 0.0 {
                return Err(Error::Table(format!("sample {i}: k must be non-negative")));
            }
        }
        if let Some(i) = samples.windows(2).position(|w| w[0].0 >= w[1].0) {
            return Err(Error::Table(format!(
                "frequencies must be strictly ascending (sample {} is {} Hz after {} Hz)",
                i + 1,
                samples[i + 1].0,
                samples[i].0
            )));
        }
        let (freqs, k) = samples.into_iter().unzip();
        Ok(Self { freqs, k })
    }

    /// Constant `k` over `[f_lo, f_hi]`.
    pub fn constant(k: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        Self::new(alloc::vec![(f_lo, k), (f_hi, k)])
    }

    /// Tabulates `k` on a uniform grid of `n` points over `[f_lo, f_hi]`.
    pub fn from_fn<F: Fn(f64) -> f64>(k: F, f_lo: f64, f_hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Table("need at least two grid points".into()));
        }
        let step = (f_hi - f_lo) / (n - 1) as f64;
        Self::new(
            (0..n)
                .map(|i| {
                    let f = if i + 1 == n { f_hi } else { f_lo + i as f64 * step };
                    (f, k(f))
                })
                .collect(),
        )
    }

    /// Valley-shaped synthetic table on 315-385 GHz: `k` falls from about
    /// 2.1 m⁻¹ to a minimum of 0.35 m⁻¹ at 345 GHz and climbs to 3 m⁻¹.
    pub fn synthetic_valley() -> Self {
        let table = Self::from_fn(
            |f| {
                let d = (f - 345e9) / 1e9;
                0.35 + 0.0026 * d * d
            },
            315e9,
            385e9,
            71,
        );
        table.expect("synthetic valley table is well formed")
    }

    /// Monotone increasing synthetic table on 330-385 GHz, from about
    /// 0.36 m⁻¹ up to 1.4 m⁻¹.
    pub fn synthetic_monotone() -> Self {
        let table = Self::from_fn(
            |f| {
                let t = (f - 340e9) / 35e9;
                0.4 + 0.3 * t + 0.5 * t * t
            },
            330e9,
            385e9,
            56,
        );
        table.expect("synthetic monotone table is well formed")
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.freqs.iter().copied().zip(self.k.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn f_min(&self) -> f64 {
        self.freqs[0]
    }

    pub fn f_max(&self) -> f64 {
        self.freqs[self.freqs.len() - 1]
    }

    pub fn covers(&self, f_lo: f64, f_hi: f64) -> bool {
        f_lo >= self.f_min() && f_hi <= self.f_max()
    }

    pub fn require_covers(&self, f_lo: f64, f_hi: f64) -> Result<()> {
        if self.covers(f_lo, f_hi) {
            Ok(())
        } else {
            Err(Error::Table(format!(
                "table spans [{}, {}] Hz but [{f_lo}, {f_hi}] Hz is needed",
                self.f_min(),
                self.f_max()
            )))
        }
    }

    // index of the segment containing f (the last segment includes f_max)
    fn segment(&self, f: f64) -> usize {
        let i = self.freqs.partition_point(|&x| x <= f);
        i.clamp(1, self.freqs.len() - 1) - 1
    }

    /// Interpolated `k(f)`; sample points return the sample exactly.
    pub fn k_at(&self, f: f64) -> Result<f64> {
        if !(f >= self.f_min() && f <= self.f_max()) {
            return Err(Error::Table(format!(
                "frequency {f} Hz outside table range [{}, {}] Hz",
                self.f_min(),
                self.f_max()
            )));
        }
        Ok(self.k_unchecked(f))
    }

    pub(crate) fn k_unchecked(&self, f: f64) -> f64 {
        let i = self.segment(f);
        let (f0, f1) = (self.freqs[i], self.freqs[i + 1]);
        if f == f0 {
            return self.k[i];
        }
        if f == f1 {
            return self.k[i + 1];
        }
        let t = (f - f0) / (f1 - f0);
        self.k[i] + t * (self.k[i + 1] - self.k[i])
    }

    /// Slope of the segment containing `f`.
    pub(crate) fn slope_unchecked(&self, f: f64) -> f64 {
        let i = self.segment(f);
        (self.k[i + 1] - self.k[i]) / (self.freqs[i + 1] - self.freqs[i])
    }

    /// Sample frequencies strictly inside `(f_lo, f_hi)`.
    pub fn breakpoints_in(&self, f_lo: f64, f_hi: f64) -> impl Iterator<Item = f64> + '_ {
        self.freqs.iter().copied().filter(move |&f| f > f_lo && f < f_hi)
    }

    /// Whether the interpolated `k` never decreases on `[f_lo, f_hi]`.
    pub fn is_non_decreasing_on(&self, f_lo: f64, f_hi: f64) -> bool {
        let mut prev = self.k_unchecked(f_lo);
        for f in self.breakpoints_in(f_lo, f_hi).chain(core::iter::once(f_hi)) {
            let k = self.k_unchecked(f);
            if k < prev {
                return false;
            }
            prev = k;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linear_interpolation() {
        let t = AbsorptionTable::new(vec![(1.0, 0.0), (2.0, 2.0)]).unwrap();
        assert_eq!(t.k_at(1.5).unwrap(), 1.0);
        assert_eq!(t.k_at(1.0).unwrap(), 0.0);
        assert_eq!(t.k_at(2.0).unwrap(), 2.0);
        assert!(t.k_at(2.5).is_err());
        assert!(t.k_at(f64::NAN).is_err());
    }

    #[test]
    fn validation() {
        assert!(AbsorptionTable::new(vec![(1.0, 0.0)]).is_err());
        assert!(AbsorptionTable::new(vec![(1.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(AbsorptionTable::new(vec![(2.0, 0.0), (1.0, 1.0)]).is_err());
        assert!(AbsorptionTable::new(vec![(1.0, -0.1), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn synthetic_shapes() {
        let v = AbsorptionTable::synthetic_valley();
        assert!(!v.is_non_decreasing_on(325e9, 375e9));
        assert!(v.is_non_decreasing_on(345e9, 375e9));
        assert_eq!(v.k_at(345e9).unwrap(), 0.35);
        let m = AbsorptionTable::synthetic_monotone();
        assert!(m.is_non_decreasing_on(330e9, 385e9));
        assert!(m.covers(340e9, 375e9));
    }

    #[test]
    fn sample_points_are_exact() {
        let v = AbsorptionTable::synthetic_valley();
        for (f, k) in v.samples() {
            assert_eq!(v.k_at(f).unwrap(), k);
        }
    }
}
