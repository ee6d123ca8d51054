//! Interference-limited cellular downlink with Bernoulli (block ALOHA)
//! interferers: SIR, second-order closed forms, the interference-ratio
//! expectation, Monte Carlo bindings and the required-bandwidth search.
//!
//! Base stations form a PPP; the user is served by the nearest one. Each other
//! base station interferes with probability `ζ` (marks frozen over a block) and
//! all links see unit-mean Rayleigh fading. Three layers drive the nested
//! estimator: locations (2), marks (1) and fading (0).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::LN_2;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;
use rand::{Rng, SeedableRng};

use crate::error::{domain, require_finite, Error, Result};
use crate::mdcore::{nested_md_estimate, InnerLayer, LayeredModel, MdEstimate, MdQuery};
use crate::numeric::bisect_predicate;
use crate::rng::{stream_rng, SimRng};
use crate::stochgeom::{check_zeta, fill_marks, fill_ordered_distances, sample_rayleigh_power, MarkMode, Realization};

/// Number of nearest base stations generated per realization by default.
pub const DEFAULT_N_POINTS: usize = 200;

/// How the QoS threshold is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QosSpec {
    /// SIR threshold given directly.
    Direct(f64),
    /// `l` bits within `t_th` seconds over `W` Hz: `q = 2^{l/(W t_th)} - 1`.
    Link {
        bits: f64,
        bandwidth_hz: f64,
        deadline_s: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterfererMode {
    Single,
    Multi,
}

impl From<InterfererMode> for MarkMode {
    fn from(m: InterfererMode) -> Self {
        match m {
            InterfererMode::Single => MarkMode::SingleInterferer,
            InterfererMode::Multi => MarkMode::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalParams {
    intensity: f64,
    alpha: f64,
    zeta: f64,
    qos: QosSpec,
    mode: InterfererMode,
    n_points: usize,
}

impl CanonicalParams {
    pub fn new(intensity: f64, alpha: f64, zeta: f64, qos: QosSpec, mode: InterfererMode) -> Result<Self> {
        const F: &str = "CanonicalParams::new";
        require_finite(F, &[intensity, alpha, zeta])?;
        if intensity <= 0.0 {
            return Err(domain(F, "intensity must be positive"));
        }
        check_alpha(F, alpha)?;
        check_zeta(F, zeta)?;
        // validates the QoS inputs
        qos_value(qos)?;
        Ok(Self {
            intensity,
            alpha,
            zeta,
            qos,
            mode,
            n_points: DEFAULT_N_POINTS,
        })
    }

    pub fn with_n_points(mut self, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(domain("CanonicalParams::with_n_points", "need at least 2 points"));
        }
        self.n_points = n_points;
        Ok(self)
    }

    pub fn with_mode(mut self, mode: InterfererMode) -> Self {
        self.mode = mode;
        self
    }

    /// Same model at another bandwidth; only valid for link-specified QoS.
    pub fn with_bandwidth(mut self, bandwidth_hz: f64) -> Result<Self> {
        match self.qos {
            QosSpec::Link { bits, deadline_s, .. } => {
                self.qos = QosSpec::Link {
                    bits,
                    bandwidth_hz,
                    deadline_s,
                };
                qos_value(self.qos)?;
                Ok(self)
            }
            QosSpec::Direct(_) => Err(Error::Config(
                "bandwidth only applies when q is derived from (l, W, t_th)".into(),
            )),
        }
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn qos(&self) -> QosSpec {
        self.qos
    }

    pub fn mode(&self) -> InterfererMode {
        self.mode
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// `δ = 2/α`.
    pub fn delta(&self) -> f64 {
        2.0 / self.alpha
    }

    pub fn q(&self) -> f64 {
        // validated at construction
        qos_value(self.qos).unwrap_or(f64::NAN)
    }
}

fn check_alpha(func: &'static str, alpha: f64) -> Result<()> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(domain(func, "path-loss exponent must exceed 2"));
    }
    Ok(())
}

fn check_unit_open(func: &'static str, name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(domain(func, format!("{name} must lie strictly inside (0, 1)")));
    }
    Ok(())
}

fn qos_value(qos: QosSpec) -> Result<f64> {
    match qos {
        QosSpec::Direct(q) => {
            require_finite("qos", &[q])?;
            if q <= 0.0 {
                return Err(domain("qos", "q must be positive"));
            }
            Ok(q)
        }
        QosSpec::Link {
            bits,
            bandwidth_hz,
            deadline_s,
        } => qos_threshold(bits, bandwidth_hz, deadline_s),
    }
}

/// `q = 2^{l/(W t_th)} - 1`.
pub fn qos_threshold(l: f64, w: f64, t_th: f64) -> Result<f64> {
    require_finite("qos_threshold", &[l, w, t_th])?;
    if l <= 0.0 || w <= 0.0 || t_th <= 0.0 {
        return Err(domain("qos_threshold", "l, W and t_th must be positive"));
    }
    Ok((LN_2 * l / (w * t_th)).exp_m1())
}

/// Distance-ratio threshold `p̂₁ = [p₁q/(1-p₁)]^{1/α}`.
pub fn p1_hat(p1: f64, q: f64, alpha: f64) -> Result<f64> {
    require_finite("p1_hat", &[p1, q, alpha])?;
    check_unit_open("p1_hat", "p1", p1)?;
    if q <= 0.0 {
        return Err(domain("p1_hat", "q must be positive"));
    }
    check_alpha("p1_hat", alpha)?;
    Ok((p1 * q / (1.0 - p1)).powf(1.0 / alpha))
}

/// `H₁R₁^{-α} / Σ_{i≥2} b_i H_i R_i^{-α}`; `+∞` when no interferer is active.
pub fn sir(realization: &Realization, fadings: &[f64], alpha: f64) -> Result<f64> {
    let n = realization.distances.len();
    if fadings.len() != n || realization.marks.len() != n {
        return Err(domain("sir", "distances, marks and fadings must have equal length"));
    }
    if n == 0 {
        return Err(domain("sir", "empty realization"));
    }
    let r1 = realization.distances[0];
    let mut interference = 0.0;
    for i in 1..n {
        if realization.marks[i] {
            interference += fadings[i] * (r1 / realization.distances[i]).powf(alpha);
        }
    }
    Ok(if interference > 0.0 {
        fadings[0] / interference
    } else {
        f64::INFINITY
    })
}

// Number of admissible interferer counts n with (1-ζ)^n > p₂, i.e. ⌈L⌉ for
// L = ln p₂ / ln(1-ζ). L within 1e-9 of an integer is treated as that integer
// so lattice ties resolve strictly; ζ = 1 leaves only n = 0.
fn admissible_count(p2: f64, zeta: f64) -> f64 {
    if zeta >= 1.0 {
        return 1.0;
    }
    let l = p2.ln() / (-zeta).ln_1p();
    let nearest = l.round();
    if (l - nearest).abs() < 1e-9 {
        nearest.max(1.0)
    } else {
        l.ceil()
    }
}

// 1 - (1 - p̂^{-2})^{count}, or 1 when p̂ ≤ 1.
fn second_order_form(p_hat: f64, p2: f64, zeta: f64) -> f64 {
    if p_hat <= 1.0 {
        return 1.0;
    }
    let s = p_hat.powi(-2);
    let exponent = admissible_count(p2, zeta);
    -(exponent * (-s).ln_1p()).exp_m1()
}

fn check_closed_inputs(func: &'static str, p1: f64, p2: f64, q: f64, alpha: f64, zeta: f64) -> Result<()> {
    require_finite(func, &[p1, p2, q, alpha, zeta])?;
    check_unit_open(func, "p2", p2)?;
    check_zeta(func, zeta)
}

/// Second-order reliability with a single (nearest marked) interferer.
pub fn r2_single_interferer(p1: f64, p2: f64, q: f64, alpha: f64, zeta: f64) -> Result<f64> {
    check_closed_inputs("r2_single_interferer", p1, p2, q, alpha, zeta)?;
    Ok(second_order_form(p1_hat(p1, q, alpha)?, p2, zeta))
}

/// `E[Σ_i (R̃₁/R̃_i)^α] = (1+δζ)/(1-δ)` with `δ = 2/α`.
pub fn interference_ratio_expectation(alpha: f64, zeta: f64) -> Result<f64> {
    require_finite("interference_ratio_expectation", &[alpha, zeta])?;
    check_alpha("interference_ratio_expectation", alpha)?;
    check_zeta("interference_ratio_expectation", zeta)?;
    let delta = 2.0 / alpha;
    Ok((1.0 + delta * zeta) / (1.0 - delta))
}

/// Which correction factor the multi-interferer form applies to `p̂₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MultiInterfererForm {
    /// `p̂₁ ((1+δζ)/(1-δ))^{δ/2}`: all interferers folded into an effective
    /// single interferer through the interference-ratio expectation.
    #[default]
    EffectiveInterferer,
    /// The reciprocal factor `((1-δ)/(1+δζ))^{δ/2}`. It makes the multi
    /// interferer reliability exceed the single one and exists only as a
    /// known-bad variant for validation mutation tests.
    InvertedFactor,
}

/// Effective distance-ratio threshold of the multi-interferer approximation.
pub fn p1_hat_effective(p1: f64, q: f64, alpha: f64, zeta: f64, form: MultiInterfererForm) -> Result<f64> {
    let p_hat = p1_hat(p1, q, alpha)?;
    let e = interference_ratio_expectation(alpha, zeta)?;
    let exponent = 1.0 / alpha;
    Ok(match form {
        MultiInterfererForm::EffectiveInterferer => p_hat * e.powf(exponent),
        MultiInterfererForm::InvertedFactor => p_hat / e.powf(exponent),
    })
}

/// Second-order reliability approximation when every marked base station
/// interferes.
pub fn r2_multi_interferer(p1: f64, p2: f64, q: f64, alpha: f64, zeta: f64) -> Result<f64> {
    r2_multi_interferer_with(p1, p2, q, alpha, zeta, MultiInterfererForm::default())
}

pub fn r2_multi_interferer_with(
    p1: f64,
    p2: f64,
    q: f64,
    alpha: f64,
    zeta: f64,
    form: MultiInterfererForm,
) -> Result<f64> {
    check_closed_inputs("r2_multi_interferer", p1, p2, q, alpha, zeta)?;
    Ok(second_order_form(p1_hat_effective(p1, q, alpha, zeta, form)?, p2, zeta))
}

/// Closed-form second-order reliability for the configured interferer mode.
pub fn r2_closed_form(params: &CanonicalParams, p1: f64, p2: f64) -> Result<f64> {
    let (q, a, z) = (params.q(), params.alpha, params.zeta);
    match params.mode {
        InterfererMode::Single => r2_single_interferer(p1, p2, q, a, z),
        InterfererMode::Multi => r2_multi_interferer(p1, p2, q, a, z),
    }
}

/// pmf of the number of base stations strictly between the serving one and
/// radius `p̂₁R₁`: `(1 - p̂₁^{-2})^n p̂₁^{-2}`.
pub fn nprime_pmf(n: u64, p1_hat: f64) -> Result<f64> {
    require_finite("nprime_pmf", &[p1_hat])?;
    if p1_hat <= 1.0 {
        return Err(domain("nprime_pmf", "p1_hat must exceed 1"));
    }
    let s = p1_hat.powi(-2);
    Ok((n as f64 * (-s).ln_1p()).exp() * s)
}

/// Realized state of the canonical model.
#[derive(Debug, Clone)]
pub struct CanonicalState {
    distances: Vec<f64>,
    // (R₁/R_i)^α, aligned with `distances`
    ratio_pow: Vec<f64>,
    marks: Vec<bool>,
    // ratio_pow of the currently active interferers
    active: Vec<f64>,
    sir: f64,
}

impl CanonicalState {
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn marks(&self) -> &[bool] {
        &self.marks
    }

    pub fn sir(&self) -> f64 {
        self.sir
    }
}

/// The canonical model as a layered Monte Carlo model.
///
/// With `lumped` set, locations and marks are drawn together as one outer
/// layer, giving the first-order MD over the joint spatial randomness.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalModel {
    params: CanonicalParams,
    lumped: bool,
}

impl CanonicalModel {
    pub fn second_order(params: CanonicalParams) -> Self {
        Self { params, lumped: false }
    }

    pub fn first_order(params: CanonicalParams) -> Self {
        Self { params, lumped: true }
    }

    // Locations and marks come from a sub-generator seeded off the shared
    // stream, so a realization with more points extends the shorter one and
    // the stream position does not depend on n_points.
    fn sample_locations<R: Rng + ?Sized>(&self, s: &mut CanonicalState, rng: &mut R) {
        let mut sub = SimRng::seed_from_u64(rng.gen());
        fill_ordered_distances(self.params.intensity, &mut s.distances, &mut sub);
        let r1 = s.distances[0];
        let alpha = self.params.alpha;
        for (w, d) in s.ratio_pow.iter_mut().zip(&s.distances) {
            *w = (r1 / d).powf(alpha);
        }
    }

    fn sample_marks<R: Rng + ?Sized>(&self, s: &mut CanonicalState, rng: &mut R) {
        let mut sub = SimRng::seed_from_u64(rng.gen());
        fill_marks(self.params.zeta, self.params.mode.into(), &mut s.marks, &mut sub);
        s.active.clear();
        for (w, &m) in s.ratio_pow.iter().zip(&s.marks) {
            if m {
                s.active.push(*w);
            }
        }
    }
}

impl LayeredModel for CanonicalModel {
    type State = CanonicalState;

    fn layers(&self) -> usize {
        if self.lumped {
            2
        } else {
            3
        }
    }

    fn new_state(&self) -> CanonicalState {
        let n = self.params.n_points;
        CanonicalState {
            distances: vec![0.0; n],
            ratio_pow: vec![0.0; n],
            marks: vec![false; n],
            active: Vec::with_capacity(n),
            sir: 0.0,
        }
    }

    fn sample_layer<R: Rng + ?Sized>(&self, layer: usize, s: &mut CanonicalState, rng: &mut R) {
        match (layer, self.lumped) {
            (0, _) => {
                let h1 = sample_rayleigh_power(rng);
                let mut interference = 0.0;
                for w in &s.active {
                    interference += w * sample_rayleigh_power(rng);
                }
                s.sir = if interference > 0.0 {
                    h1 / interference
                } else {
                    f64::INFINITY
                };
            }
            (1, true) => {
                self.sample_locations(s, rng);
                self.sample_marks(s, rng);
            }
            (1, false) => self.sample_marks(s, rng),
            _ => self.sample_locations(s, rng),
        }
    }

    fn qos(&self, s: &CanonicalState) -> f64 {
        s.sir
    }

    /// `Π_i 1/(1 + q (R₁/R̃_i)^α)`, exact under Rayleigh fading.
    fn conditional_success(&self, s: &CanonicalState, q: f64) -> Option<f64> {
        Some(link_success(&s.active, q))
    }
}

fn link_success(active: &[f64], q: f64) -> f64 {
    active.iter().map(|w| 1.0 / (1.0 + q * w)).product()
}

/// Second-order reliability `R_[2](p₁, p₂)` by nested Monte Carlo.
/// The QoS threshold is taken from `query`.
pub fn run_canonical_mc(params: &CanonicalParams, query: &MdQuery, seed: u64) -> Result<MdEstimate> {
    if query.order() != 2 {
        return Err(Error::Config("the canonical model needs a second-order query".into()));
    }
    nested_md_estimate(&CanonicalModel::second_order(*params), query, seed)
}

/// First-order reliability with locations and marks lumped into one layer.
/// `trials` are `(N₀, N₁)`.
pub fn first_order_md_mc(
    params: &CanonicalParams,
    q: f64,
    p1: f64,
    trials: [u64; 2],
    inner: InnerLayer,
    seed: u64,
) -> Result<MdEstimate> {
    let query = MdQuery::new(q, vec![p1], trials.to_vec())?.with_inner(inner);
    nested_md_estimate(&CanonicalModel::first_order(*params), &query, seed)
}

/// Reliability order used by the bandwidth search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReliabilityOrder {
    /// `P(SIR > q)`.
    Zeroth,
    /// `P(P₁ > p₁)` over locations and marks jointly.
    First,
    /// Closed-form `R_[2](p₁, p₂)`.
    Second,
}

/// Fixed set of joint (location, mark) draws reused across every bandwidth
/// tried, so the Monte Carlo reliabilities are monotone in `W`.
#[derive(Debug, Clone)]
pub struct InterferenceSamples {
    weights: Vec<f64>,
    offsets: Vec<usize>,
}

impl InterferenceSamples {
    pub fn new(params: &CanonicalParams, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(Error::Config("sample count must be at least 1".into()));
        }
        let model = CanonicalModel::first_order(*params);
        let mut state = model.new_state();
        let mut weights = Vec::new();
        let mut offsets = Vec::with_capacity(count + 1);
        offsets.push(0);
        for i in 0..count {
            let mut rng = stream_rng(seed, 1, i as u64);
            model.sample_layer(1, &mut state, &mut rng);
            weights.extend_from_slice(&state.active);
            offsets.push(weights.len());
        }
        Ok(Self { weights, offsets })
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn realizations(&self) -> impl Iterator<Item = &[f64]> {
        self.offsets.windows(2).map(|w| &self.weights[w[0]..w[1]])
    }

    /// `E[P₁]`, the plain ccdf of the SIR at `q`.
    pub fn zeroth_order(&self, q: f64) -> f64 {
        self.realizations().map(|a| link_success(a, q)).sum::<f64>() / self.len() as f64
    }

    /// Fraction of draws with `P₁ > p₁`.
    pub fn first_order(&self, q: f64, p1: f64) -> f64 {
        let hits = self.realizations().filter(|a| link_success(a, q) > p1).count();
        hits as f64 / self.len() as f64
    }
}

/// Options of the bandwidth search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthSearch {
    pub w_lo: f64,
    pub w_hi: f64,
    /// Relative width of the final bracket.
    pub rel_tol: f64,
    /// Joint draws for the Monte Carlo orders.
    pub mc_samples: usize,
    pub seed: u64,
}

impl BandwidthSearch {
    pub fn new(w_lo: f64, w_hi: f64, seed: u64) -> Self {
        Self {
            w_lo,
            w_hi,
            rel_tol: 1e-3,
            mc_samples: 20_000,
            seed,
        }
    }
}

/// Reliability as a function of bandwidth for one order, with its Monte Carlo
/// draws fixed.
#[derive(Debug, Clone)]
pub struct BandwidthSolver {
    params: CanonicalParams,
    p1: f64,
    p2: f64,
    samples: Option<InterferenceSamples>,
}

impl BandwidthSolver {
    pub fn new(params: &CanonicalParams, p1: f64, p2: f64, search: &BandwidthSearch, needs_mc: bool) -> Result<Self> {
        require_finite("BandwidthSolver::new", &[p1, p2])?;
        check_unit_open("BandwidthSolver::new", "p1", p1)?;
        check_unit_open("BandwidthSolver::new", "p2", p2)?;
        params.with_bandwidth(search.w_lo)?;
        let samples = if needs_mc {
            Some(InterferenceSamples::new(params, search.mc_samples, search.seed)?)
        } else {
            None
        };
        Ok(Self {
            params: *params,
            p1,
            p2,
            samples,
        })
    }

    pub fn reliability(&self, order: ReliabilityOrder, bandwidth_hz: f64) -> Result<f64> {
        let params = self.params.with_bandwidth(bandwidth_hz)?;
        let q = params.q();
        let mc = || {
            self.samples
                .as_ref()
                .ok_or_else(|| Error::Config("solver built without Monte Carlo draws".into()))
        };
        match order {
            ReliabilityOrder::Second => r2_closed_form(&params, self.p1, self.p2),
            ReliabilityOrder::First => Ok(mc()?.first_order(q, self.p1)),
            ReliabilityOrder::Zeroth => Ok(mc()?.zeroth_order(q)),
        }
    }

    /// Smallest `W` in the search range whose reliability reaches `target`.
    pub fn required_bandwidth(&self, target: f64, order: ReliabilityOrder, search: &BandwidthSearch) -> Result<f64> {
        require_finite("required_bandwidth", &[target])?;
        check_unit_open("required_bandwidth", "target", target)?;
        if !(search.w_lo > 0.0 && search.w_lo < search.w_hi) || !(search.rel_tol > 0.0) {
            return Err(domain("required_bandwidth", "need 0 < w_lo < w_hi and a positive tolerance"));
        }
        let lo = self.reliability(order, search.w_lo)?;
        let hi = self.reliability(order, search.w_hi)?;
        if !(lo < target && hi >= target) {
            return Err(Error::Search(format!(
                "reliability over [{}, {}] Hz spans [{lo}, {hi}], which does not bracket {target}",
                search.w_lo, search.w_hi
            )));
        }
        let mut failure = None;
        let log_w = bisect_predicate(
            |lw| match self.reliability(order, lw.exp()) {
                Ok(r) => r < target,
                Err(e) => {
                    failure.get_or_insert(e);
                    false
                }
            },
            search.w_lo.ln(),
            search.w_hi.ln(),
            search.rel_tol,
        );
        match failure {
            Some(e) => Err(e),
            // upper end of the final bracket, so the target is met
            None => Ok((log_w + 0.5 * search.rel_tol).exp().min(search.w_hi)),
        }
    }
}

/// Smallest bandwidth meeting `target_r` at the given reliability order.
pub fn required_bandwidth(
    target_r: f64,
    order: ReliabilityOrder,
    params: &CanonicalParams,
    p1: f64,
    p2: f64,
    search: &BandwidthSearch,
) -> Result<f64> {
    let solver = BandwidthSolver::new(params, p1, p2, search, order != ReliabilityOrder::Second)?;
    solver.required_bandwidth(target_r, order, search)
}
