//! Exact samplers for the spatial and fading randomness.
//!
//! Ordered distances of a homogeneous planar PPP seen from the origin are
//! generated radially: the squared distances `R_i²` are the arrival times of a
//! one-dimensional Poisson process of rate `λπ`, so no simulation window (and no
//! edge truncation) is involved.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{domain, require_finite, Result};

/// Homogeneous PPP seen from the typical user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PppConfig {
    intensity: f64,
    n_points: usize,
}

impl PppConfig {
    pub fn new(intensity: f64, n_points: usize) -> Result<Self> {
        require_finite("PppConfig::new", &[intensity])?;
        if intensity <= 0.0 {
            return Err(domain("PppConfig::new", "intensity must be positive"));
        }
        if n_points == 0 {
            return Err(domain("PppConfig::new", "n_points must be at least 1"));
        }
        Ok(Self {
            intensity,
            n_points,
        })
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }
}

/// Whether every marked base station interferes or only the nearest marked one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MarkMode {
    All,
    SingleInterferer,
}

/// One spatial realization plus one interferer pattern.
///
/// `distances` are strictly ascending; `marks[0]` belongs to the serving base
/// station and is always `false`.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub distances: Vec<f64>,
    pub marks: Vec<bool>,
}

/// Writes the first `out.len()` ordered distances into `out`.
pub fn fill_ordered_distances<R: Rng + ?Sized>(intensity: f64, out: &mut [f64], rng: &mut R) {
    let rate = intensity * PI;
    let mut arrival = 0.0;
    for d in out.iter_mut() {
        let gap: f64 = Exp1.sample(rng);
        arrival += gap;
        *d = (arrival / rate).sqrt();
    }
}

/// The `n_points` nearest distances, ascending.
pub fn sample_ordered_distances<R: Rng + ?Sized>(cfg: &PppConfig, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; cfg.n_points];
    fill_ordered_distances(cfg.intensity, &mut out, rng);
    out
}

/// `P(R₁ ≤ r) = 1 - exp(-λπr²)`.
pub fn nearest_distance_cdf(r: f64, intensity: f64) -> Result<f64> {
    require_finite("nearest_distance_cdf", &[r, intensity])?;
    if r < 0.0 {
        return Err(domain("nearest_distance_cdf", "distance must be non-negative"));
    }
    if intensity <= 0.0 {
        return Err(domain("nearest_distance_cdf", "intensity must be positive"));
    }
    Ok(-(-intensity * PI * r * r).exp_m1())
}

/// Distance to the nearest point: inverse-cdf draw of `1 - exp(-λπr²)`.
pub fn sample_nearest_distance<R: Rng + ?Sized>(intensity: f64, rng: &mut R) -> f64 {
    let e: f64 = Exp1.sample(rng);
    (e / (intensity * PI)).sqrt()
}

pub(crate) fn check_zeta(func: &'static str, zeta: f64) -> Result<()> {
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(domain(func, "interferer probability must lie in (0, 1]"));
    }
    Ok(())
}

/// Fills `marks` with i.i.d. Bernoulli(ζ) interferer indicators (index 0 is the
/// serving station and stays `false`).
pub fn fill_marks<R: Rng + ?Sized>(zeta: f64, mode: MarkMode, marks: &mut [bool], rng: &mut R) {
    let mut seen = false;
    for (i, m) in marks.iter_mut().enumerate() {
        // nothing after the first interferer matters in single mode
        if i == 0 || (seen && mode == MarkMode::SingleInterferer) {
            *m = false;
            continue;
        }
        *m = zeta >= 1.0 || rng.gen::<f64>() < zeta;
        seen |= *m;
    }
}

pub fn sample_marks<R: Rng + ?Sized>(
    n: usize,
    zeta: f64,
    mode: MarkMode,
    rng: &mut R,
) -> Result<Vec<bool>> {
    check_zeta("sample_marks", zeta)?;
    if n < 2 {
        return Err(domain("sample_marks", "need the serving station plus at least one other"));
    }
    let mut marks = vec![false; n];
    fill_marks(zeta, mode, &mut marks, rng);
    Ok(marks)
}

/// Unit-mean exponential power gain (Rayleigh amplitude).
pub fn sample_rayleigh_power<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

/// Unit-mean Rician power gain `|√(K/(K+1)) + Z|²`, `Z ~ CN(0, 1/(K+1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianPower {
    los: f64,
    sigma: f64,
}

impl RicianPower {
    pub fn new(k: f64) -> Result<Self> {
        require_finite("RicianPower::new", &[k])?;
        if k < 0.0 {
            return Err(domain("sample_rician_power", "Rician K must be non-negative"));
        }
        Ok(Self {
            los: (k / (k + 1.0)).sqrt(),
            sigma: (0.5 / (k + 1.0)).sqrt(),
        })
    }
}

impl Distribution<f64> for RicianPower {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        let re = self.los + self.sigma * x;
        let im = self.sigma * y;
        re * re + im * im
    }
}

pub fn sample_rician_power<R: Rng + ?Sized>(k: f64, rng: &mut R) -> Result<f64> {
    Ok(RicianPower::new(k)?.sample(rng))
}

/// Interferer field beyond the last generated point, used to add the expected
/// remainder of a truncated power sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub intensity: f64,
    pub zeta: f64,
}

/// One sample of `Σ_i (R̃₁/R̃_i)^α` over the active interferers of a realization,
/// where `R̃_i` is the distance of the i-th nearest interferer.
///
/// With a tail model, the conditional mean of the terms beyond the last
/// generated distance `R_n` is added (Campbell's theorem for the thinned PPP
/// outside `R_n`): `2πζλ R̃₁^α R_n^{2-α} / (α - 2)`. Returns `None` when the
/// realization has no active interferer.
pub fn interference_ratio_sum(
    realization: &Realization,
    alpha: f64,
    tail: Option<TailModel>,
) -> Option<f64> {
    let mut active = realization
        .distances
        .iter()
        .zip(&realization.marks)
        .filter(|(_, &m)| m)
        .map(|(&d, _)| d);
    let first = active.next()?;
    let mut sum = 1.0;
    for d in active {
        sum += (first / d).powf(alpha);
    }
    if let (Some(t), Some(&last)) = (tail, realization.distances.last()) {
        sum += 2.0 * PI * t.zeta * t.intensity * first.powf(alpha) * last.powf(2.0 - alpha)
            / (alpha - 2.0);
    }
    Some(sum)
}
