use metadist_core::mdcore::*;
use rand::Rng;

/// Outer fair coin picks a link success probability of 0.9 or 0.3.
struct CoinLink;

#[derive(Default)]
struct CoinState {
    p: f64,
    ok: bool,
}

impl LayeredModel for CoinLink {
    type State = CoinState;

    fn layers(&self) -> usize {
        2
    }

    fn new_state(&self) -> CoinState {
        CoinState::default()
    }

    fn sample_layer<R: Rng + ?Sized>(&self, layer: usize, s: &mut CoinState, rng: &mut R) {
        if layer == 1 {
            s.p = if rng.gen::<bool>() { 0.9 } else { 0.3 };
        } else {
            s.ok = rng.gen::<f64>() < s.p;
        }
    }

    fn qos(&self, s: &CoinState) -> f64 {
        if s.ok {
            1.0
        } else {
            0.0
        }
    }

    fn conditional_success(&self, s: &CoinState, _q: f64) -> Option<f64> {
        Some(s.p)
    }
}

struct Fixed(f64, usize);

impl LayeredModel for Fixed {
    type State = ();

    fn layers(&self) -> usize {
        self.1
    }

    fn new_state(&self) {}

    fn sample_layer<R: Rng + ?Sized>(&self, _: usize, _: &mut (), _: &mut R) {}

    fn qos(&self, _: &()) -> f64 {
        self.0
    }
}

fn within(est: &MdEstimate, exact: f64) -> bool {
    (est.value - exact).abs() <= (3.0 * est.stderr).max(1e-3)
}

#[test]
fn zeroth_order_boundaries() {
    assert_eq!(zeroth_order_reliability(&Fixed(2.0, 2), 1.0, 100, 1).unwrap().value, 1.0);
    assert_eq!(zeroth_order_reliability(&Fixed(2.0, 2), 2.0, 100, 1).unwrap().value, 0.0);
    assert!(zeroth_order_reliability(&Fixed(2.0, 2), 1.0, 0, 1).is_err());
}

#[test]
fn zeroth_order_coin() {
    let est = zeroth_order_reliability(&CoinLink, 0.5, 40_000, 9).unwrap();
    assert!(within(&est, 0.6), "{est:?}");
}

#[test]
fn first_order_coin() {
    let q = MdQuery::new(0.5, vec![0.5], vec![4000, 4000]).unwrap();
    let est = nested_md_estimate(&CoinLink, &q, 3).unwrap();
    assert!(within(&est, 0.5), "{est:?}");
    let q = MdQuery::new(0.5, vec![0.95], vec![4000, 4000]).unwrap();
    let est = nested_md_estimate(&CoinLink, &q, 3).unwrap();
    assert!(within(&est, 0.0), "{est:?}");
}

#[test]
fn analytic_inner_matches_sampled() {
    let q = MdQuery::new(0.5, vec![0.5], vec![1, 4000]).unwrap().with_inner(InnerLayer::Analytic);
    let est = nested_md_estimate(&CoinLink, &q, 3).unwrap();
    assert!(within(&est, 0.5));
}

#[test]
fn deterministic_layers_give_one() {
    let q = MdQuery::new(1.0, vec![0.5, 0.5], vec![3, 3, 50]).unwrap();
    let est = nested_md_estimate(&Fixed(2.0, 3), &q, 0).unwrap();
    assert_eq!(est.value, 1.0);
    assert_eq!(est.stderr, 0.0);
}

#[test]
fn arity_mismatch_is_config_error() {
    let q = MdQuery::new(1.0, vec![0.5, 0.5], vec![3, 3, 3]).unwrap();
    assert!(matches!(
        nested_md_estimate(&CoinLink, &q, 0),
        Err(metadist_core::Error::Config(_))
    ));
    let q = MdQuery::new(1.0, vec![0.5; 4], vec![1; 5]).unwrap();
    assert!(nested_md_estimate(&Fixed(2.0, 5), &q, 0).is_err());
}

#[test]
fn query_validation() {
    assert!(MdQuery::new(1.0, vec![1.0], vec![1, 1]).is_err());
    assert!(MdQuery::new(1.0, vec![0.5], vec![0, 1]).is_err());
    assert!(MdQuery::new(1.0, vec![0.5], vec![1]).is_err());
}

#[test]
fn estimates_are_deterministic() {
    let q = MdQuery::new(0.5, vec![0.6], vec![50, 500]).unwrap();
    let a = nested_md_estimate(&CoinLink, &q, 17).unwrap();
    let b = nested_md_estimate(&CoinLink, &q, 17).unwrap();
    assert_eq!(a, b);
    let by_index = (0..500).filter(|&i| outer_indicator(&CoinLink, &q, 17, i).unwrap()).count();
    assert_eq!(by_index as f64 / 500.0, a.value);
}

#[test]
fn monotone_in_threshold() {
    let mut prev = 1.0;
    for p in [0.1, 0.4, 0.7, 0.95] {
        let q = MdQuery::new(0.5, vec![p], vec![500, 2000]).unwrap();
        let est = nested_md_estimate(&CoinLink, &q, 5).unwrap();
        assert!(est.value <= prev + 3.0 * est.stderr);
        prev = est.value;
    }
}

#[test]
fn order_reduction_on_step_curve() {
    // R_[1](p) = 1 for p < 0.3, 0.5 for 0.3 ≤ p < 0.9, 0 above
    let grid: Vec<(f64, f64)> = (0..=1000)
        .map(|i| {
            let p = i as f64 / 1000.0;
            let v = if p < 0.3 {
                1.0
            } else if p < 0.9 {
                0.5
            } else {
                0.0
            };
            (p, v)
        })
        .collect();
    assert!((reduce_order(&grid).unwrap() - 0.6).abs() < 2e-3);
    assert_eq!(reduce_order(&[(0.2, 0.7), (0.8, 0.7)]).unwrap(), 0.7);
    assert!(reduce_order(&[(0.5, 1.0), (0.4, 1.0)]).is_err());
    assert!(reduce_order(&[]).is_err());
}
