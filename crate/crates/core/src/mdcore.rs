//! Hierarchical meta-distribution machinery: the n-layer nested Monte Carlo
//! estimator, zeroth-order reliability and the order-reduction integral.
//!
//! Layers are indexed from the innermost (fastest varying, index 0) to the
//! outermost (most static, index n). An n-th order query carries thresholds
//! `p₁..p_n` (innermost first) and trial counts `N₀..N_n`.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)] // method resolution without std
use num_traits::Float;
use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::rng::{stream_rng, SimRng};

/// Largest model depth accepted unless a query raises it.
pub const DEFAULT_MAX_LAYERS: usize = 4;

// Stream tag for joint (non-nested) sampling; nested runs tag by layer index.
const JOINT_STREAM: u8 = u8::MAX;

/// A model built from ordered random-element classes plus a QoS evaluator.
///
/// `sample_layer(k, ..)` must only read the parts of `state` written by layers
/// above `k` and must overwrite everything layer `k` owns.
pub trait LayeredModel {
    type State;

    /// Number of random-element classes (`n + 1` for an n-th order MD).
    fn layers(&self) -> usize;

    fn new_state(&self) -> Self::State;

    fn sample_layer<R: Rng + ?Sized>(&self, layer: usize, state: &mut Self::State, rng: &mut R);

    /// QoS of a fully realized state.
    fn qos(&self, state: &Self::State) -> f64;

    /// `P(Q > q)` over layer 0 given the outer layers, when known in closed
    /// form. Used instead of sampling layer 0 when the query asks for it.
    fn conditional_success(&self, _state: &Self::State, _q: f64) -> Option<f64> {
        None
    }
}

/// How the innermost probability `P₁` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InnerLayer {
    /// Raw fraction over `N₀` draws of layer 0.
    #[default]
    Sampled,
    /// The model's `conditional_success`; `N₀` is ignored.
    Analytic,
}

/// Thresholds and trial counts of an n-th order reliability query.
#[derive(Debug, Clone, PartialEq)]
pub struct MdQuery {
    q: f64,
    p: Vec<f64>,
    trials: Vec<u64>,
    inner: InnerLayer,
    max_layers: usize,
}

impl MdQuery {
    /// `p` holds `p₁..p_n` and `trials` holds `N₀..N_n`.
    pub fn new(q: f64, p: Vec<f64>, trials: Vec<u64>) -> Result<Self> {
        if !q.is_finite() {
            return Err(domain("MdQuery::new", "q must be finite"));
        }
        if p.is_empty() {
            return Err(Error::Config("a nested query needs at least one threshold".into()));
        }
        if let Some(bad) = p.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
            return Err(domain("MdQuery::new", format!("threshold {bad} not strictly inside (0, 1)")));
        }
        if trials.len() != p.len() + 1 {
            return Err(Error::Config(format!(
                "{} thresholds need {} trial counts, got {}",
                p.len(),
                p.len() + 1,
                trials.len()
            )));
        }
        if trials.contains(&0) {
            return Err(Error::Config("trial counts must be at least 1".into()));
        }
        Ok(Self {
            q,
            p,
            trials,
            inner: InnerLayer::Sampled,
            max_layers: DEFAULT_MAX_LAYERS,
        })
    }

    pub fn with_inner(mut self, inner: InnerLayer) -> Self {
        self.inner = inner;
        self
    }

    pub fn with_max_layers(mut self, max_layers: usize) -> Self {
        self.max_layers = max_layers;
        self
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn trials(&self) -> &[u64] {
        &self.trials
    }

    pub fn inner(&self) -> InnerLayer {
        self.inner
    }

    /// Order of the query (number of thresholds).
    pub fn order(&self) -> usize {
        self.p.len()
    }

    pub fn outer_trials(&self) -> u64 {
        self.trials[self.p.len()]
    }
}

/// A Monte Carlo reliability estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct MdEstimate {
    pub value: f64,
    /// Binomial standard error at the outermost layer.
    pub stderr: f64,
    pub trials: Vec<u64>,
    pub seed: u64,
}

impl MdEstimate {
    /// Estimate from `successes` out of the last entry of `trials`.
    pub fn from_counts(successes: u64, trials: Vec<u64>, seed: u64) -> Self {
        let n = *trials.last().unwrap_or(&1) as f64;
        let value = successes as f64 / n;
        Self {
            value,
            stderr: (value * (1.0 - value) / n).sqrt(),
            trials,
            seed,
        }
    }
}

/// Checks that `model` can answer `query`.
pub fn check_query<M: LayeredModel>(model: &M, query: &MdQuery) -> Result<()> {
    let layers = model.layers();
    if layers != query.order() + 1 {
        return Err(Error::Config(format!(
            "model has {layers} layers but the query has {} thresholds",
            query.order()
        )));
    }
    if layers > query.max_layers {
        return Err(Error::Config(format!(
            "model has {layers} layers, more than the limit of {}",
            query.max_layers
        )));
    }
    Ok(())
}

// Estimate of P_level given every layer at or above `level` is realized.
fn level_probability<M: LayeredModel>(
    model: &M,
    query: &MdQuery,
    level: usize,
    state: &mut M::State,
    rng: &mut SimRng,
) -> Result<f64> {
    if level == 1 {
        return match query.inner {
            InnerLayer::Analytic => model.conditional_success(state, query.q).ok_or_else(|| {
                Error::Config("model has no analytic inner layer".into())
            }),
            InnerLayer::Sampled => {
                let n0 = query.trials[0];
                let mut hits = 0u64;
                for _ in 0..n0 {
                    model.sample_layer(0, state, rng);
                    if model.qos(state) > query.q {
                        hits += 1;
                    }
                }
                Ok(hits as f64 / n0 as f64)
            }
        };
    }
    let inner = level - 1;
    let n = query.trials[inner];
    let mut hits = 0u64;
    for _ in 0..n {
        model.sample_layer(inner, state, rng);
        if level_probability(model, query, inner, state, rng)? > query.p[inner - 1] {
            hits += 1;
        }
    }
    Ok(hits as f64 / n as f64)
}

/// Whether outer realization `index` meets the outermost threshold. Each index
/// owns its random stream, so indices may be evaluated in any order or in
/// parallel; `nested_md_estimate` is the ordered sum of these indicators.
pub fn outer_indicator<M: LayeredModel>(
    model: &M,
    query: &MdQuery,
    seed: u64,
    index: u64,
) -> Result<bool> {
    let top = query.order();
    let mut rng = stream_rng(seed, top as u8, index);
    let mut state = model.new_state();
    model.sample_layer(top, &mut state, &mut rng);
    Ok(level_probability(model, query, top, &mut state, &mut rng)? > query.p[top - 1])
}

/// n-th order MD reliability `P(P_n > p_n)` by nested Monte Carlo.
pub fn nested_md_estimate<M: LayeredModel>(model: &M, query: &MdQuery, seed: u64) -> Result<MdEstimate> {
    check_query(model, query)?;
    let mut successes = 0u64;
    for index in 0..query.outer_trials() {
        if outer_indicator(model, query, seed, index)? {
            successes += 1;
        }
    }
    Ok(MdEstimate::from_counts(successes, query.trials.clone(), seed))
}

/// Whether joint realization `index` satisfies `Q > q`.
pub fn joint_indicator<M: LayeredModel>(model: &M, q: f64, seed: u64, index: u64) -> bool {
    let mut rng = stream_rng(seed, JOINT_STREAM, index);
    let mut state = model.new_state();
    for layer in (0..model.layers()).rev() {
        model.sample_layer(layer, &mut state, &mut rng);
    }
    model.qos(&state) > q
}

/// Plain ccdf `P(Q > q)` over all layers jointly.
pub fn zeroth_order_reliability<M: LayeredModel>(
    model: &M,
    q: f64,
    n_trials: u64,
    seed: u64,
) -> Result<MdEstimate> {
    if n_trials == 0 {
        return Err(Error::Config("n_trials must be at least 1".into()));
    }
    let successes = (0..n_trials)
        .filter(|&i| joint_indicator(model, q, seed, i))
        .count() as u64;
    Ok(MdEstimate::from_counts(successes, alloc::vec![n_trials], seed))
}

/// `∫₀¹ R(p) dp` from samples `(p, R(p))` on an ascending grid, by the
/// trapezoid rule. The curve is held constant from the first sample down to 0
/// and from the last sample up to 1.
pub fn reduce_order(curve: &[(f64, f64)]) -> Result<f64> {
    let (first, last) = match (curve.first(), curve.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(domain("reduce_order", "curve is empty")),
    };
    for &(p, v) in curve {
        if !(0.0..=1.0).contains(&p) || !v.is_finite() {
            return Err(domain("reduce_order", format!("sample ({p}, {v}) out of range")));
        }
    }
    if curve.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(domain("reduce_order", "grid must be strictly ascending"));
    }
    let mut total = first.1 * first.0 + last.1 * (1.0 - last.0);
    for w in curve.windows(2) {
        total += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    struct Constant(f64);

    impl LayeredModel for Constant {
        type State = ();
        fn layers(&self) -> usize {
            2
        }
        fn new_state(&self) {}
        fn sample_layer<R: Rng + ?Sized>(&self, _: usize, _: &mut (), _: &mut R) {}
        fn qos(&self, _: &()) -> f64 {
            self.0
        }
    }

    #[test]
    fn strict_inequality_on_constant_model() {
        assert_eq!(zeroth_order_reliability(&Constant(2.0), 1.0, 10, 0).unwrap().value, 1.0);
        assert_eq!(zeroth_order_reliability(&Constant(2.0), 2.0, 10, 0).unwrap().value, 0.0);
        let q = MdQuery::new(1.0, vec![0.5], vec![3, 5]).unwrap();
        let e = nested_md_estimate(&Constant(2.0), &q, 1).unwrap();
        assert_eq!((e.value, e.stderr), (1.0, 0.0));
    }

    #[test]
    fn query_validation() {
        assert!(MdQuery::new(1.0, vec![], vec![1]).is_err());
        assert!(MdQuery::new(1.0, vec![1.0], vec![1, 1]).is_err());
        assert!(MdQuery::new(1.0, vec![0.0], vec![1, 1]).is_err());
        assert!(MdQuery::new(1.0, vec![0.5], vec![1]).is_err());
        assert!(MdQuery::new(1.0, vec![0.5], vec![0, 1]).is_err());
        assert!(MdQuery::new(f64::NAN, vec![0.5], vec![1, 1]).is_err());
        let q = MdQuery::new(1.0, vec![0.5, 0.5], vec![1, 1, 1]).unwrap();
        assert!(matches!(nested_md_estimate(&Constant(2.0), &q, 0), Err(Error::Config(_))));
    }

    #[test]
    fn analytic_inner_requires_model_support() {
        let q = MdQuery::new(1.0, vec![0.5], vec![1, 1])
            .unwrap()
            .with_inner(InnerLayer::Analytic);
        assert!(nested_md_estimate(&Constant(2.0), &q, 0).is_err());
    }

    #[test]
    fn max_layers_enforced() {
        let q = MdQuery::new(1.0, vec![0.5], vec![1, 1]).unwrap().with_max_layers(1);
        assert!(matches!(nested_md_estimate(&Constant(2.0), &q, 0), Err(Error::Config(_))));
    }

    #[test]
    fn reduce_order_constant_and_errors() {
        let flat: Vec<(f64, f64)> = (0..=10).map(|i| (i as f64 / 10.0, 0.3)).collect();
        assert!((reduce_order(&flat).unwrap() - 0.3).abs() < 1e-15);
        assert!((reduce_order(&[(0.5, 0.7)]).unwrap() - 0.7).abs() < 1e-15);
        assert!(reduce_order(&[]).is_err());
        assert!(reduce_order(&[(0.2, 1.0), (0.1, 1.0)]).is_err());
        assert!(reduce_order(&[(0.2, 1.0), (1.2, 1.0)]).is_err());
    }

    #[test]
    fn estimate_stderr_bound() {
        let e = MdEstimate::from_counts(50, vec![1, 100], 0);
        assert_eq!(e.value, 0.5);
        assert!((e.stderr - 0.05).abs() < 1e-15);
    }
}
