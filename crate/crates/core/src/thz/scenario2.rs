//! Non-monotone (valley-shaped) absorption band: root classification of
//! `g(f, r) = p̃₁` and radial integration of the second-layer indicator.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;

use super::{check_p, geometric_gain, p1_tilde_with, AbsorptionTable, ThresholdPath, ThzParams};
use crate::error::{domain, require_finite, Error, Result};
use crate::numeric::bisect_predicate;

fn check_shape(params: &ThzParams, table: &AbsorptionTable) -> Result<()> {
    params.validate()?;
    table.require_covers(params.f_low, params.f_high)?;
    // k may fall and then rise, never rise and then fall
    let mut rising = false;
    let mut prev = table.k_unchecked(params.f_low);
    for f in table
        .breakpoints_in(params.f_low, params.f_high)
        .chain(core::iter::once(params.f_high))
    {
        let k = table.k_unchecked(f);
        if k > prev {
            rising = true;
        } else if k < prev && rising {
            return Err(Error::Scenario(format!(
                "k(f) has an interior local maximum below {f} Hz; only a single valley is supported"
            )));
        }
        prev = k;
    }
    Ok(())
}

/// Frequencies splitting the band into pieces on which `g(·, r)` is monotone:
/// the table breakpoints plus, on falling segments, the turning point
/// `f* = -2/(k' r)` where `d ln g / df = 1/f + k' r/2` vanishes.
fn monotone_pieces(r: f64, params: &ThzParams, table: &AbsorptionTable) -> Vec<f64> {
    let (lo, hi) = (params.f_low, params.f_high);
    let mut knots: Vec<f64> = core::iter::once(lo)
        .chain(table.breakpoints_in(lo, hi))
        .chain(core::iter::once(hi))
        .collect();
    if r > 0.0 {
        let mut turning = Vec::new();
        for w in knots.windows(2) {
            let slope = table.slope_unchecked(0.5 * (w[0] + w[1]));
            if slope < 0.0 {
                let f_star = -2.0 / (slope * r);
                if f_star > w[0] && f_star < w[1] {
                    turning.push(f_star);
                }
            }
        }
        knots.extend(turning);
        knots.sort_by(|a, b| a.total_cmp(b));
    }
    knots
}

// The event g(f, r) < p̃₁ (link target met under the threshold map).
fn event(f: f64, r: f64, p1_tilde: f64, table: &AbsorptionTable) -> bool {
    geometric_gain(f, r, table.k_unchecked(f)) < p1_tilde
}

fn switch_points(r: f64, p1_tilde: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<Vec<f64>> {
    check_shape(params, table)?;
    require_finite("roots_scenario2", &[r, p1_tilde])?;
    if r < 0.0 || p1_tilde <= 0.0 {
        return Err(domain("roots_scenario2", "need r ≥ 0 and p1_tilde > 0"));
    }
    let knots = monotone_pieces(r, params, table);
    let tol = params.f_high * 1e-15;
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let left = event(w[0], r, p1_tilde, table);
        if left != event(w[1], r, p1_tilde, table) {
            roots.push(bisect_predicate(|f| event(f, r, p1_tilde, table) == left, w[0], w[1], tol));
        }
    }
    if roots.len() > 2 {
        return Err(Error::Scenario(format!(
            "{} crossings of g(f, r) = p̃₁ at r = {r} m; the table is not valley shaped",
            roots.len()
        )));
    }
    Ok(roots)
}

/// Ascending solutions (zero, one or two) of `f r e^{k(f) r/2} = p̃₁` in the band.
pub fn roots_scenario2(r: f64, p1_tilde: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<Vec<f64>> {
    switch_points(r, p1_tilde, params, table)
}

/// Sub-intervals of the band on which the link target is met.
pub fn event_intervals(
    r: f64,
    p1_tilde: f64,
    params: &ThzParams,
    table: &AbsorptionTable,
) -> Result<Vec<(f64, f64)>> {
    let roots = switch_points(r, p1_tilde, params, table)?;
    let mut inside = event(params.f_low, r, p1_tilde, table);
    let mut start = params.f_low;
    let mut out = Vec::with_capacity(2);
    for s in roots {
        if inside {
            out.push((start, s));
        } else {
            start = s;
        }
        inside = !inside;
    }
    if inside {
        out.push((start, params.f_high));
    }
    Ok(out)
}

/// `P₂(r)`: carrier probability of the event-true frequency window(s).
pub fn p2_scenario2(r: f64, p1_tilde: f64, params: &ThzParams, table: &AbsorptionTable) -> Result<f64> {
    let carrier = params.carrier()?;
    let mut total = 0.0;
    for (a, b) in event_intervals(r, p1_tilde, params, table)? {
        total += carrier.cdf(b)? - carrier.cdf(a)?;
    }
    Ok(total.clamp(0.0, 1.0))
}

/// Controls of the radial integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOptions {
    /// Radial cell width (m); `None` uses `0.05/√(λπ)`.
    pub dr: Option<f64>,
    /// Integration stops once `exp(-λπr²)` falls below this.
    pub tail: f64,
    /// Largest accepted change when the cell width is halved.
    pub refinement_tol: f64,
}

impl Default for RadialOptions {
    fn default() -> Self {
        Self {
            dr: None,
            tail: 1e-8,
            refinement_tol: 1e-3,
        }
    }
}

// ∫ 1[P₂(r) > p₂] f_R(r) dr with exact cell masses and bisected switch radii
fn radial_integral(
    p2: f64,
    p1_tilde: f64,
    params: &ThzParams,
    table: &AbsorptionTable,
    dr: f64,
    r_max: f64,
) -> Result<f64> {
    let lam = params.intensity * PI;
    let mass_below = |r: f64| -(-lam * r * r).exp_m1();
    let mut failure = None;
    let mut indicator = |r: f64| match p2_scenario2(r, p1_tilde, params, table) {
        Ok(v) => v > p2,
        Err(e) => {
            failure.get_or_insert(e);
            false
        }
    };
    let cells = (r_max / dr).ceil() as usize;
    let mut total = 0.0;
    let mut a = 0.0;
    let mut ia = indicator(a);
    for j in 1..=cells {
        let b = j as f64 * dr;
        let ib = indicator(b);
        if ia == ib {
            if ia {
                total += mass_below(b) - mass_below(a);
            }
        } else {
            let s = bisect_predicate(|r| indicator(r) == ia, a, b, 1e-9 * b);
            total += if ia {
                mass_below(s) - mass_below(a)
            } else {
                mass_below(b) - mass_below(s)
            };
        }
        a = b;
        ia = ib;
    }
    if ia {
        total += (-lam * a * a).exp();
    }
    match failure {
        Some(e) => Err(e),
        None => Ok(total.clamp(0.0, 1.0)),
    }
}

/// Second-order reliability on a general (single-valley) band by radial
/// integration, with the default cell width and refinement check.
pub fn r2_scenario2(p1: f64, p2: f64, params: &ThzParams, table: &AbsorptionTable, path: ThresholdPath) -> Result<f64> {
    r2_scenario2_with(p1, p2, params, table, path, RadialOptions::default())
}

/// Radial integration at cell width `dr` and `dr/2`; fails with an accuracy
/// error when the two differ by more than `refinement_tol`, otherwise
/// returns the finer value.
pub fn r2_scenario2_with(
    p1: f64,
    p2: f64,
    params: &ThzParams,
    table: &AbsorptionTable,
    path: ThresholdPath,
    opts: RadialOptions,
) -> Result<f64> {
    check_shape(params, table)?;
    check_p("r2_scenario2", p2)?;
    let pt = p1_tilde_with(p1, params, path)?;
    let lam = params.intensity * PI;
    let dr = opts.dr.unwrap_or(0.05 / lam.sqrt());
    if !(dr > 0.0 && dr.is_finite()) || !(opts.tail > 0.0 && opts.tail < 1.0) {
        return Err(domain("r2_scenario2", "need dr > 0 and tail in (0, 1)"));
    }
    let r_max = (-opts.tail.ln() / lam).sqrt();
    let coarse = radial_integral(p2, pt, params, table, dr, r_max)?;
    let fine = radial_integral(p2, pt, params, table, 0.5 * dr, r_max)?;
    if (coarse - fine).abs() > opts.refinement_tol {
        return Err(Error::Accuracy(format!(
            "radial integration moved by {} when halving dr = {dr} m",
            (coarse - fine).abs()
        )));
    }
    Ok(fine)
}

/// Reliability over bands `(f_low, f_low + BW)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSweep {
    /// `(BW, R_[2])` pairs in grid order.
    pub points: Vec<(f64, f64)>,
    /// Index of the largest reliability (first one on ties).
    pub argmax: usize,
}

pub fn optimal_bandwidth_sweep(
    params: &ThzParams,
    table: &AbsorptionTable,
    p1: f64,
    p2: f64,
    bw_grid: &[f64],
    path: ThresholdPath,
    opts: RadialOptions,
) -> Result<BandwidthSweep> {
    if bw_grid.is_empty() {
        return Err(domain("optimal_bandwidth_sweep", "empty bandwidth grid"));
    }
    let mut points = Vec::with_capacity(bw_grid.len());
    let mut argmax = 0;
    for (i, &bw) in bw_grid.iter().enumerate() {
        if !(bw > 0.0) {
            return Err(domain("optimal_bandwidth_sweep", "bandwidths must be positive"));
        }
        let band = params.with_band(params.f_low, params.f_low + bw);
        let r = r2_scenario2_with(p1, p2, &band, table, path, opts)?;
        if r > points.get(argmax).map_or(f64::NEG_INFINITY, |p: &(f64, f64)| p.1) {
            argmax = i;
        }
        points.push((bw, r));
    }
    Ok(BandwidthSweep { points, argmax })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thz::r2_scenario1;

    fn valley() -> (ThzParams, AbsorptionTable) {
        (ThzParams::default_scenario2(), AbsorptionTable::synthetic_valley())
    }

    #[test]
    fn extreme_thresholds_have_no_roots() {
        let (p, t) = valley();
        let r = 10.0;
        assert!(roots_scenario2(r, 1e30, &p, &t).unwrap().is_empty());
        assert_eq!(p2_scenario2(r, 1e30, &p, &t).unwrap(), 1.0);
        assert!(roots_scenario2(r, 1.0, &p, &t).unwrap().is_empty());
        assert_eq!(p2_scenario2(r, 1.0, &p, &t).unwrap(), 0.0);
    }

    #[test]
    fn valley_cut_gives_two_roots() {
        let (p, t) = valley();
        let r = 10.0;
        let g = |f: f64| geometric_gain(f, r, t.k_at(f).unwrap());
        let target = 0.5 * (g(345e9) + g(325e9).min(g(375e9)));
        let roots = roots_scenario2(r, target, &p, &t).unwrap();
        assert_eq!(roots.len(), 2);
        for f in &roots {
            assert!((g(*f) / target - 1.0).abs() < 1e-8);
        }
        let iv = event_intervals(r, target, &p, &t).unwrap();
        assert_eq!(iv, [(roots[0], roots[1])]);
    }

    #[test]
    fn rejects_peaked_table() {
        let p = ThzParams::default_scenario2();
        let t = AbsorptionTable::new(alloc::vec![(320e9, 0.1), (350e9, 1.0), (380e9, 0.1)]).unwrap();
        assert!(matches!(p2_scenario2(5.0, 1e15, &p, &t), Err(Error::Scenario(_))));
    }

    #[test]
    fn matches_closed_form_on_monotone_band() {
        let p = ThzParams::default_scenario1();
        let t = AbsorptionTable::synthetic_monotone();
        let path = ThresholdPath::default();
        for (p1, p2) in [(0.9, 0.3), (0.99, 0.7)] {
            let a = r2_scenario1(p1, p2, &p, &t, path).unwrap();
            let b = r2_scenario2(p1, p2, &p, &t, path).unwrap();
            assert!((a - b).abs() < 2e-3, "{a} vs {b}");
        }
    }
}
