//! The acceptance suite behind `metadist validate`: twelve criteria, each
//! checked against an oracle that does not share code with the quantity under
//! test where that is possible.

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use metadist_core::canonical::{
    first_order_md_mc, interference_ratio_expectation, p1_hat, r2_multi_interferer_with, r2_single_interferer,
    BandwidthSearch, BandwidthSolver, CanonicalModel, CanonicalParams, InterfererMode, MultiInterfererForm, QosSpec,
    ReliabilityOrder,
};
use metadist_core::mdcore::{reduce_order, InnerLayer, MdQuery};
use metadist_core::rng::stream_rng;
use metadist_core::specfun::{
    eval_mu_nu, lambert_w0, marcum_q1, marcum_q1_exp_approx, MarcumApproxCoeffs, MarcumPolyCoeffs,
};
use metadist_core::stochgeom::{fill_marks, interference_ratio_sum, MarkMode, PppConfig, Realization, TailModel};
use metadist_core::thz::{
    optimal_bandwidth_sweep, r2_scenario1, r2_scenario2, AbsorptionTable, RadialOptions, ThresholdPath, ThzModel,
    ThzParams,
};
use metadist_core::Result;

use crate::parallel::par_nested_md_estimate;

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "single-interferer closed form vs Monte Carlo"),
    (2, "interference-ratio expectation vs Monte Carlo"),
    (3, "interference-ratio expectation endpoints"),
    (4, "unit interferer probability degeneracy"),
    (5, "multi-interferer ordering and lower bound"),
    (6, "order reduction over p2"),
    (7, "THz scenario 1 closed form vs nested quadrature"),
    (8, "THz scenario 2 numeric vs Monte Carlo"),
    (9, "THz scenario 2 engine on a monotone table"),
    (10, "special functions"),
    (11, "monotonicity of closed forms and required bandwidth"),
    (12, "interior bandwidth optimum on a valley table"),
];

const ALPHA: f64 = 3.5;
const INTENSITY: f64 = 1e-4;

#[derive(Debug, Clone)]
pub struct ValidationConfig {
    pub seed: u64,
    /// `(N₀, N₁, N₂)` of the nested estimates in criteria 1, 4 and 8.
    pub trials: [u64; 3],
    /// Realizations per `(α, ζ)` in criterion 2.
    pub ratio_realizations: usize,
    /// Random tuples of the ordering check in criterion 5.
    pub random_tuples: usize,
    /// `(N₀, N₁)` of the lumped first-order estimate in criterion 6.
    pub first_order_trials: [u64; 2],
    /// Swaps in the reciprocal multi-interferer factor (mutation test hook).
    pub perturb_multi_factor: bool,
    /// Monotone-absorption table for criteria 7, 9 and 11.
    pub monotone_table: Option<AbsorptionTable>,
    /// Valley-shaped table for criteria 8 and 12.
    pub valley_table: Option<AbsorptionTable>,
    /// Runs only these criteria when set.
    pub only: Option<Vec<u32>>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: [2000, 200, 2000],
            ratio_realizations: 100_000,
            random_tuples: 1000,
            first_order_trials: [2000, 20_000],
            perturb_multi_factor: false,
            monotone_table: Some(AbsorptionTable::synthetic_monotone()),
            valley_table: Some(AbsorptionTable::synthetic_valley()),
            only: None,
        }
    }
}

impl ValidationConfig {
    fn multi_form(&self) -> MultiInterfererForm {
        if self.perturb_multi_factor {
            MultiInterfererForm::InvertedFactor
        } else {
            MultiInterfererForm::EffectiveInterferer
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// One comparison inside a criterion: passes when
/// `|value - reference| <= tolerance`, or for one-sided checks when the stated
/// inequality holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub label: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Case {
    fn close(label: String, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            passed: (value - reference).abs() <= tolerance,
            label,
            value,
            reference,
            tolerance,
        }
    }

    fn relative(label: String, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            passed: (value / reference - 1.0).abs() <= tolerance,
            label,
            value,
            reference,
            tolerance,
        }
    }

    /// Passes when `value <= reference + tolerance`.
    fn at_most(label: String, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            passed: value <= reference + tolerance,
            label,
            value,
            reference,
            tolerance,
        }
    }

    fn holds(label: String, ok: bool) -> Self {
        Self {
            label,
            value: f64::from(u8::from(ok)),
            reference: 1.0,
            tolerance: 0.0,
            passed: ok,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub id: u32,
    pub title: String,
    pub status: Status,
    pub detail: String,
    pub cases: Vec<Case>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub seed: u64,
    pub version: String,
    pub perturbed: bool,
    pub criteria: Vec<CriterionReport>,
    pub all_passed: bool,
    /// False when some criterion was skipped.
    pub complete: bool,
}

impl Report {
    pub fn criterion(&self, id: u32) -> Option<&CriterionReport> {
        self.criteria.iter().find(|c| c.id == id)
    }
}

pub fn run(cfg: &ValidationConfig) -> Report {
    run_with(cfg, |_| {})
}

/// Runs the suite, calling `progress` as each criterion finishes.
pub fn run_with(cfg: &ValidationConfig, mut progress: impl FnMut(&CriterionReport)) -> Report {
    let mut criteria = Vec::new();
    for (id, _) in CRITERIA {
        if cfg.only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let report = run_criterion(id, cfg);
        progress(&report);
        criteria.push(report);
    }
    Report {
        seed: cfg.seed,
        version: crate::version_string(),
        perturbed: cfg.perturb_multi_factor,
        all_passed: criteria.iter().all(|c| c.status == Status::Pass),
        complete: criteria.iter().all(|c| c.status != Status::Skipped),
        criteria,
    }
}

pub fn run_criterion(id: u32, cfg: &ValidationConfig) -> CriterionReport {
    let title = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown criterion", |c| c.1)
        .to_string();
    let start = std::time::Instant::now();
    let missing = |what: &str| Err(format!("skipped: no {what} absorption table"));
    let outcome: std::result::Result<Result<Vec<Case>>, String> = match id {
        1 => Ok(criterion1(cfg)),
        2 => Ok(criterion2(cfg)),
        3 => Ok(criterion3()),
        4 => Ok(criterion4(cfg)),
        5 => Ok(criterion5(cfg)),
        6 => Ok(criterion6(cfg)),
        7 => cfg.monotone_table.as_ref().map_or_else(|| missing("monotone"), |t| Ok(criterion7(t))),
        8 => cfg.valley_table.as_ref().map_or_else(|| missing("valley"), |t| Ok(criterion8(cfg, t))),
        9 => cfg.monotone_table.as_ref().map_or_else(|| missing("monotone"), |t| Ok(criterion9(t))),
        10 => Ok(criterion10()),
        11 => Ok(criterion11(cfg)),
        12 => cfg.valley_table.as_ref().map_or_else(|| missing("valley"), |t| Ok(criterion12(t))),
        _ => Err(format!("no criterion {id}")),
    };
    let (status, detail, cases) = match outcome {
        Err(msg) => (Status::Skipped, msg, Vec::new()),
        Ok(Err(e)) => (Status::Fail, format!("error: {e}"), Vec::new()),
        Ok(Ok(cases)) => {
            let failed: Vec<&Case> = cases.iter().filter(|c| !c.passed).collect();
            if failed.is_empty() {
                (Status::Pass, format!("{} cases", cases.len()), cases)
            } else {
                let shown: Vec<String> = failed
                    .iter()
                    .take(4)
                    .map(|c| format!("{} ({:.6} vs {:.6}, tol {:.3e})", c.label, c.value, c.reference, c.tolerance))
                    .collect();
                (
                    Status::Fail,
                    format!("{}/{} cases failed: {}", failed.len(), cases.len(), shown.join("; ")),
                    cases,
                )
            }
        }
    };
    CriterionReport {
        id,
        title,
        status,
        detail,
        cases,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn canonical(zeta: f64, mode: InterfererMode) -> Result<CanonicalParams> {
    CanonicalParams::new(INTENSITY, ALPHA, zeta, QosSpec::Direct(1.0), mode)
}

/// `(ζ, p₁, p₂)` grid shared by criteria 1 and 5.
pub fn criterion1_grid() -> Vec<(f64, f64, f64)> {
    let mut g = Vec::new();
    for zeta in [0.2, 0.5, 1.0] {
        for p1 in [0.8, 0.9] {
            for p2 in [0.3, 0.5, 0.8] {
                g.push((zeta, p1, p2));
            }
        }
    }
    g
}

fn criterion1(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for (zeta, p1, p2) in criterion1_grid() {
        let model = CanonicalModel::second_order(canonical(zeta, InterfererMode::Single)?);
        let query = MdQuery::new(1.0, vec![p1, p2], cfg.trials.to_vec())?;
        let est = par_nested_md_estimate(&model, &query, cfg.seed)?;
        let closed = r2_single_interferer(p1, p2, 1.0, ALPHA, zeta)?;
        cases.push(Case::close(
            format!("zeta={zeta} p1={p1} p2={p2}"),
            est.value,
            closed,
            (3.0 * est.stderr).max(0.02),
        ));
    }
    Ok(cases)
}

fn criterion2(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let grid: Vec<(usize, f64, f64)> = [3.0, 3.5, 4.0]
        .into_iter()
        .flat_map(|a| [0.2, 0.5, 1.0].map(|z| (a, z)))
        .enumerate()
        .map(|(i, (a, z))| (i, a, z))
        .collect();
    let n = cfg.ratio_realizations;
    let ppp = PppConfig::new(INTENSITY, 200)?;
    grid.par_iter()
        .map(|&(i, alpha, zeta)| {
            let mut rng = stream_rng(cfg.seed, 0, i as u64);
            let tail = Some(TailModel {
                intensity: INTENSITY,
                zeta,
            });
            let mut real = Realization {
                distances: vec![0.0; ppp.n_points()],
                marks: vec![false; ppp.n_points()],
            };
            let (mut sum, mut used) = (0.0, 0usize);
            for _ in 0..n {
                metadist_core::stochgeom::fill_ordered_distances(INTENSITY, &mut real.distances, &mut rng);
                fill_marks(zeta, MarkMode::All, &mut real.marks, &mut rng);
                if let Some(s) = interference_ratio_sum(&real, alpha, tail) {
                    sum += s;
                    used += 1;
                }
            }
            let exact = interference_ratio_expectation(alpha, zeta)?;
            Ok(Case::relative(
                format!("alpha={alpha} zeta={zeta}"),
                sum / used as f64,
                exact,
                0.03,
            ))
        })
        .collect()
}

fn criterion3() -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    for alpha in [2.5, 3.0, 3.5, 4.0, 5.0, 6.0] {
        let one = interference_ratio_expectation(alpha, 1.0)?;
        cases.push(Case::close(format!("alpha={alpha} zeta=1"), one, (alpha + 2.0) / (alpha - 2.0), 1e-12));
        let zero = interference_ratio_expectation(alpha, 1e-15)?;
        cases.push(Case::close(format!("alpha={alpha} zeta->0"), zero, alpha / (alpha - 2.0), 1e-12));
    }
    Ok(cases)
}

fn criterion4(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    let params = canonical(1.0, InterfererMode::Single)?;
    for p1 in [0.8, 0.9] {
        let s = p1_hat(p1, 1.0, ALPHA)?.powi(-2);
        let first_p2 = r2_single_interferer(p1, 0.05, 1.0, ALPHA, 1.0)?;
        cases.push(Case::close(format!("p1={p1} closed form = p1_hat^-2"), first_p2, s, 1e-15));
        let constant = (1..20)
            .map(|k| r2_single_interferer(p1, k as f64 * 0.05, 1.0, ALPHA, 1.0))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|&r| r == first_p2);
        cases.push(Case::holds(format!("p1={p1} constant over p2"), constant));

        let query = MdQuery::new(1.0, vec![p1, 0.5], cfg.trials.to_vec())?;
        let second = par_nested_md_estimate(&CanonicalModel::second_order(params), &query, cfg.seed)?;
        let first = first_order_md_mc(
            &params,
            1.0,
            p1,
            [cfg.trials[0], cfg.trials[2]],
            InnerLayer::Sampled,
            cfg.seed.wrapping_add(1),
        )?;
        let sigma = (second.stderr.powi(2) + first.stderr.powi(2)).sqrt();
        cases.push(Case::close(
            format!("p1={p1} second-order MC vs first-order MC"),
            second.value,
            first.value,
            3.0 * sigma,
        ));
    }
    Ok(cases)
}

fn criterion5(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let form = cfg.multi_form();
    let mut cases = Vec::new();
    let mut rng = stream_rng(cfg.seed, 5, 0);
    let mut worst: Option<(f64, String)> = None;
    let mut violations = 0usize;
    for _ in 0..cfg.random_tuples {
        let p1 = rng.gen_range(0.01..0.9999);
        let p2 = rng.gen_range(0.01..0.99);
        let q = rng.gen_range(0.01..10.0);
        let alpha = rng.gen_range(2.1..6.0);
        let zeta = rng.gen_range(0.01..=1.0);
        let single = r2_single_interferer(p1, p2, q, alpha, zeta)?;
        let multi = r2_multi_interferer_with(p1, p2, q, alpha, zeta, form)?;
        let excess = multi - single;
        if excess > 0.0 {
            violations += 1;
        }
        if worst.as_ref().map_or(true, |w| excess > w.0) {
            worst = Some((excess, format!("p1={p1:.4} p2={p2:.4} q={q:.4} alpha={alpha:.3} zeta={zeta:.4}")));
        }
    }
    if let Some((excess, at)) = worst {
        cases.push(Case {
            label: format!("multi <= single on {} random tuples ({violations} violations; worst at {at})", cfg.random_tuples),
            value: excess,
            reference: 0.0,
            tolerance: 0.0,
            passed: violations == 0,
        });
    }
    for (zeta, p1, p2) in criterion1_grid() {
        let model = CanonicalModel::second_order(canonical(zeta, InterfererMode::Multi)?);
        let query = MdQuery::new(1.0, vec![p1, p2], cfg.trials.to_vec())?.with_inner(InnerLayer::Analytic);
        let est = par_nested_md_estimate(&model, &query, cfg.seed)?;
        let closed = r2_multi_interferer_with(p1, p2, 1.0, ALPHA, zeta, form)?;
        // MC >= closed - 0.03
        cases.push(Case::at_most(format!("MC multi zeta={zeta} p1={p1} p2={p2}"), closed, est.value, 0.03));
    }
    Ok(cases)
}

fn criterion6(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let (zeta, p1) = (0.5, 0.8);
    let s = p1_hat(p1, 1.0, ALPHA)?.powi(-2);
    let curve = (0..=20)
        .map(|k| {
            let p2 = k as f64 / 20.0;
            let r = match k {
                0 => Ok(1.0),
                20 => Ok(s),
                _ => r2_single_interferer(p1, p2, 1.0, ALPHA, zeta),
            };
            r.map(|r| (p2, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let integral = reduce_order(&curve)?;
    let params = canonical(zeta, InterfererMode::Single)?;
    let mc = first_order_md_mc(&params, 1.0, p1, cfg.first_order_trials, InnerLayer::Sampled, cfg.seed)?;
    Ok(vec![Case::close(
        format!("zeta={zeta} p1={p1}: 21-point integral vs first-order MC"),
        integral,
        mc.value,
        0.02,
    )])
}

/// `(m, p₁, p₂)` grid of criteria 7 and 9.
pub fn criterion7_grid() -> Vec<(u32, f64, f64)> {
    let mut g = Vec::new();
    for m in [0, 1] {
        for p1 in [0.9, 0.99] {
            for p2 in [0.3, 0.7] {
                g.push((m, p1, p2));
            }
        }
    }
    g
}

/// `R_[2]` by brute-force nested midpoint quadrature: the carrier integral
/// gives `P₂(r)` at each radius, the switching radius of `1[P₂(r) > p₂]` is
/// located by a scan plus bisection, and the nearest-distance density is
/// integrated over the radii where the indicator is on.
pub fn nested_quadrature_r2(
    p1: f64,
    p2: f64,
    params: &ThzParams,
    table: &AbsorptionTable,
    coeffs: MarcumApproxCoeffs,
) -> Result<f64> {
    let (lo, hi) = (params.f_low, params.f_high);
    let m = params.m;
    // (2m+1)! / (m!)², the normalizer of u^m (1-u)^m on [0, 1]
    let norm = (1..=m).fold(2.0 * m as f64 + 1.0, |acc, j| acc * (m + j) as f64 / j as f64);
    let c2 = params.c2();
    let a = params.marcum_a();
    let lambda = params.intensity;

    let p2_at = |r: f64, cells: usize| -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..cells {
            let u = (i as f64 + 0.5) / cells as f64;
            let f = lo + u * (hi - lo);
            let k = table.k_at(f)?;
            let b = c2 * f * r * (0.5 * k * r).exp();
            let link = if b.is_finite() { marcum_q1_exp_approx(a, b, coeffs)? } else { 0.0 };
            if link > p1 {
                acc += norm * (u * (1.0 - u)).powi(m as i32);
            }
        }
        Ok(acc / cells as f64)
    };
    let on = |r: f64, cells: usize| -> Result<bool> { Ok(p2_at(r, cells)? > p2) };

    let r_max = (-(1e-12f64).ln() / (lambda * PI)).sqrt();
    let scan = 400;
    let fine = 200_000;
    let mut edges = Vec::new();
    let mut prev = on(0.0, 20_000)?;
    let start_on = prev;
    for j in 1..=scan {
        let r = r_max * j as f64 / scan as f64;
        let cur = on(r, 20_000)?;
        if cur != prev {
            let (mut x0, mut x1) = (r_max * (j - 1) as f64 / scan as f64, r);
            for _ in 0..60 {
                let mid = 0.5 * (x0 + x1);
                if on(mid, fine)? == prev {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            edges.push(0.5 * (x0 + x1));
            prev = cur;
        }
    }
    let density = |r: f64| 2.0 * PI * lambda * r * (-lambda * PI * r * r).exp();
    let mass = |x0: f64, x1: f64| {
        let n = 20_000;
        let h = (x1 - x0) / n as f64;
        (0..n).map(|i| density(x0 + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let mut bounds = vec![0.0];
    bounds.extend(edges);
    bounds.push(r_max);
    let mut total = 0.0;
    let mut state = start_on;
    for w in bounds.windows(2) {
        if state {
            total += mass(w[0], w[1]);
        }
        state = !state;
    }
    Ok(total)
}

fn criterion7(table: &AbsorptionTable) -> Result<Vec<Case>> {
    let coeffs = MarcumApproxCoeffs::NEAR_UNITY_K2;
    criterion7_grid()
        .par_iter()
        .map(|&(m, p1, p2)| {
            let params = ThzParams {
                m,
                ..ThzParams::default_scenario1()
            };
            let closed = r2_scenario1(p1, p2, &params, table, ThresholdPath::Approx(coeffs))?;
            let quad = nested_quadrature_r2(p1, p2, &params, table, coeffs)?;
            Ok(Case::close(format!("m={m} p1={p1} p2={p2}"), closed, quad, 1e-3))
        })
        .collect()
}

fn criterion8(cfg: &ValidationConfig, table: &AbsorptionTable) -> Result<Vec<Case>> {
    let params = ThzParams::normalized_check();
    let model = ThzModel::new(&params, table)?;
    let mut cases = Vec::new();
    for p1 in [0.3, 0.5, 0.7] {
        for p2 in [0.3, 0.5, 0.7] {
            let numeric = r2_scenario2(p1, p2, &params, table, ThresholdPath::Exact)?;
            let query = MdQuery::new(params.q(), vec![p1, p2], cfg.trials.to_vec())?;
            let est = par_nested_md_estimate(&model, &query, cfg.seed)?;
            cases.push(Case::close(format!("p1={p1} p2={p2}"), numeric, est.value, 0.03));
        }
    }
    Ok(cases)
}

fn criterion9(table: &AbsorptionTable) -> Result<Vec<Case>> {
    let path = ThresholdPath::default();
    criterion7_grid()
        .into_iter()
        .map(|(m, p1, p2)| {
            let params = ThzParams {
                m,
                ..ThzParams::default_scenario1()
            };
            let s1 = r2_scenario1(p1, p2, &params, table, path)?;
            let s2 = r2_scenario2(p1, p2, &params, table, path)?;
            Ok(Case::close(format!("m={m} p1={p1} p2={p2}"), s2, s1, 2e-3))
        })
        .collect()
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..1000 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// `Q₁(a, b) = ∫_b^∞ x e^{-(x²+a²)/2} I₀(ax) dx` by composite Simpson.
pub fn marcum_quadrature_oracle(a: f64, b: f64) -> f64 {
    let upper = b.max(a) + 14.0;
    let n = 40_000;
    let h = (upper - b) / n as f64;
    let g = |x: f64| x * (-(x * x + a * a) / 2.0).exp() * i0_series(a * x);
    let mut s = g(b) + g(upper);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * g(b + i as f64 * h);
    }
    s * h / 3.0
}

fn criterion10() -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    let mut worst = (0.0f64, String::new());
    for a in [0.0, 0.5, 1.0, 2.0, 6f64.sqrt(), 3.0] {
        for i in 0..=24 {
            let b = 0.25 * i as f64;
            let err = (marcum_q1(a, b)? - marcum_quadrature_oracle(a, b)).abs();
            if err >= worst.0 {
                worst = (err, format!("a={a:.4} b={b}"));
            }
        }
    }
    cases.push(Case::at_most(format!("Marcum Q1 vs quadrature (worst at {})", worst.1), worst.0, 0.0, 1e-8));

    let mut worst_w = (0.0f64, 0.0);
    let branch = -(-1f64).exp();
    let mut xs: Vec<f64> = (0..=200).map(|i| branch * (1.0 - 1e-12) * (1.0 - i as f64 / 200.0)).collect();
    xs.extend((-300..=300).map(|i| 10f64.powf(i as f64 / 20.0)));
    for x in xs {
        let w = lambert_w0(x)?;
        let rel = (w * w.exp() - x).abs() / x.abs().max(f64::MIN_POSITIVE);
        if rel > worst_w.0 {
            worst_w = (rel, x);
        }
    }
    cases.push(Case::at_most(
        format!("Lambert W0 relative residual (worst at x={:e})", worst_w.1),
        worst_w.0,
        0.0,
        1e-12,
    ));

    let c = eval_mu_nu(6f64.sqrt(), &MarcumPolyCoeffs::least_squares_a1_5())?;
    cases.push(Case::close("mu(sqrt 6)".into(), c.mu(), 3.1098, 5e-4));
    cases.push(Case::close("nu(sqrt 6)".into(), c.nu(), -3.4032, 5e-4));
    Ok(cases)
}

fn non_increasing(label: String, values: &[f64]) -> Case {
    let rise = values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Case::at_most(label, rise, 0.0, 0.0)
}

fn criterion11(cfg: &ValidationConfig) -> Result<Vec<Case>> {
    let form = cfg.multi_form();
    let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    let q_grid: Vec<f64> = (0..=40).map(|i| 10f64.powf(-2.0 + i as f64 * 0.075)).collect();
    let mut cases = Vec::new();
    for zeta in [0.2, 0.5, 1.0] {
        for &fixed in &[0.3, 0.7] {
            let single = |p1: f64, p2: f64, q: f64| r2_single_interferer(p1, p2, q, ALPHA, zeta);
            let multi = |p1: f64, p2: f64, q: f64| r2_multi_interferer_with(p1, p2, q, ALPHA, zeta, form);
            let forms: [(&str, &dyn Fn(f64, f64, f64) -> Result<f64>); 2] = [("single", &single), ("multi", &multi)];
            for (name, f) in forms {
                let in_p1 = grid.iter().map(|&p| f(p, fixed, 1.0)).collect::<Result<Vec<_>>>()?;
                let in_p2 = grid.iter().map(|&p| f(fixed, p, 1.0)).collect::<Result<Vec<_>>>()?;
                let in_q = q_grid.iter().map(|&q| f(fixed, fixed, q)).collect::<Result<Vec<_>>>()?;
                cases.push(non_increasing(format!("{name} zeta={zeta} in p1 (p2={fixed})"), &in_p1));
                cases.push(non_increasing(format!("{name} zeta={zeta} in p2 (p1={fixed})"), &in_p2));
                cases.push(non_increasing(format!("{name} zeta={zeta} in q (p1=p2={fixed})"), &in_q));
            }
        }
    }
    if let Some(table) = &cfg.monotone_table {
        let params = ThzParams::default_scenario1();
        let path = ThresholdPath::default();
        let p1s = [0.5, 0.7, 0.9, 0.95, 0.99, 0.999];
        for &p2 in &[0.3, 0.7] {
            let vals = p1s
                .iter()
                .map(|&p1| r2_scenario1(p1, p2, &params, table, path))
                .collect::<Result<Vec<_>>>()?;
            cases.push(non_increasing(format!("THz scenario 1 in p1 (p2={p2})"), &vals));
        }
        let vals = grid
            .iter()
            .map(|&p2| r2_scenario1(0.99, p2, &params, table, path))
            .collect::<Result<Vec<_>>>()?;
        cases.push(non_increasing("THz scenario 1 in p2 (p1=0.99)".into(), &vals));
    }

    let targets: Vec<f64> = (1..=9).map(|i| i as f64 * 0.1).collect();
    for zeta in [0.2, 1.0] {
        let params = CanonicalParams::new(
            INTENSITY,
            ALPHA,
            zeta,
            QosSpec::Link {
                bits: 256.0,
                bandwidth_hz: 1e7,
                deadline_s: 1e-3,
            },
            InterfererMode::Single,
        )?;
        let search = BandwidthSearch::new(1e3, 1e11, cfg.seed);
        let solver = BandwidthSolver::new(&params, 0.999, 0.7, &search, true)?;
        for (order, name) in [
            (ReliabilityOrder::Zeroth, "0"),
            (ReliabilityOrder::First, "1"),
            (ReliabilityOrder::Second, "2"),
        ] {
            let w = targets
                .iter()
                .map(|&t| solver.required_bandwidth(t, order, &search))
                .collect::<Result<Vec<_>>>()?;
            let drop = w.windows(2).map(|p| p[0] - p[1]).fold(0.0, f64::max);
            cases.push(Case::at_most(
                format!("required W order {name} zeta={zeta} non-decreasing in target"),
                drop,
                0.0,
                0.0,
            ));
        }
    }
    Ok(cases)
}

fn criterion12(table: &AbsorptionTable) -> Result<Vec<Case>> {
    let grid: Vec<f64> = (1..=12).map(|i| i as f64 * 5e9).collect();
    let mut interior = Vec::new();
    let mut tried = 0;
    for m in [0, 1, 60] {
        for (p1, p2) in [(0.9, 0.3), (0.9, 0.7), (0.99, 0.7)] {
            let params = ThzParams {
                m,
                ..ThzParams::default_scenario2()
            };
            let sweep = optimal_bandwidth_sweep(
                &params,
                table,
                p1,
                p2,
                &grid,
                ThresholdPath::default(),
                RadialOptions::default(),
            )?;
            tried += 1;
            let best = sweep.points[sweep.argmax].1;
            let ends = sweep.points[0].1.max(sweep.points[grid.len() - 1].1);
            if best > ends {
                interior.push(format!("m={m} p1={p1} p2={p2} at BW={:.0} GHz", sweep.points[sweep.argmax].0 / 1e9));
            }
        }
    }
    Ok(vec![Case::holds(
        format!(
            "interior maximum in {}/{tried} configurations{}",
            interior.len(),
            interior.first().map_or(String::new(), |s| format!(" (e.g. {s})"))
        ),
        !interior.is_empty(),
    )])
}
