use metadist_core::canonical::*;
use metadist_core::mdcore::{InnerLayer, MdQuery};
use proptest::prelude::*;

const ALPHA: f64 = 3.5;

fn direct(zeta: f64, mode: InterfererMode) -> CanonicalParams {
    CanonicalParams::new(1e-4, ALPHA, zeta, QosSpec::Direct(1.0), mode).unwrap()
}

fn link(zeta: f64) -> CanonicalParams {
    let qos = QosSpec::Link {
        bits: 256.0,
        bandwidth_hz: 1e7,
        deadline_s: 1e-3,
    };
    CanonicalParams::new(1e-4, ALPHA, zeta, qos, InterfererMode::Single).unwrap()
}

#[test]
fn unit_interferer_probability_ignores_p2() {
    for p1 in [0.6, 0.8, 0.95] {
        let s = p1_hat(p1, 1.0, ALPHA).unwrap().powi(-2);
        let first = r2_single_interferer(p1, 0.05, 1.0, ALPHA, 1.0).unwrap();
        assert!((first - s).abs() < 1e-15);
        for p2 in [0.3, 0.5, 0.8, 0.99] {
            assert_eq!(r2_single_interferer(p1, p2, 1.0, ALPHA, 1.0).unwrap(), first);
        }
    }
}

#[test]
fn saturates_below_unit_ratio() {
    // p̂₁ ≤ 1 iff p₁ q/(1-p₁) ≤ 1
    for p1 in [0.1, 0.3, 0.5] {
        assert_eq!(r2_single_interferer(p1, 0.5, 1.0, ALPHA, 0.2).unwrap(), 1.0);
        assert_eq!(r2_multi_interferer(p1 * 0.5, 0.5, 1.0, ALPHA, 0.2).unwrap(), 1.0);
    }
}

#[test]
fn fig_three_lower_bounds() {
    let q = qos_threshold(256.0, 1e7, 1e-3).unwrap();
    let single = r2_single_interferer(0.999, 0.5, q, ALPHA, 1.0).unwrap();
    let multi = r2_multi_interferer(0.999, 0.5, q, ALPHA, 1.0).unwrap();
    assert!((single - 0.2).abs() < 0.01, "{single}");
    assert!((multi - 0.09).abs() < 0.01, "{multi}");
}

#[test]
fn ratio_expectation_boundaries() {
    for alpha in [2.5, 3.0, 3.5, 4.0, 6.0] {
        let one = interference_ratio_expectation(alpha, 1.0).unwrap();
        assert!((one - (alpha + 2.0) / (alpha - 2.0)).abs() < 1e-12);
        let tiny = interference_ratio_expectation(alpha, 1e-15).unwrap();
        assert!((tiny - alpha / (alpha - 2.0)).abs() < 1e-12);
    }
}

#[test]
fn single_closed_form_against_mc_off_lattice() {
    // (ζ, p₂) = (0.5, 0.3): L = 1.74, far from an integer
    let params = direct(0.5, InterfererMode::Single);
    let query = MdQuery::new(1.0, vec![0.8, 0.3], vec![400, 100, 1000]).unwrap();
    let est = run_canonical_mc(&params, &query, 21).unwrap();
    let closed = r2_single_interferer(0.8, 0.3, 1.0, ALPHA, 0.5).unwrap();
    assert!((est.value - closed).abs() <= (3.0 * est.stderr).max(0.03), "{est:?} vs {closed}");
}

#[test]
fn multi_mc_sits_above_closed_form() {
    let params = direct(0.5, InterfererMode::Multi);
    let query = MdQuery::new(1.0, vec![0.9, 0.8], vec![1, 100, 1000])
        .unwrap()
        .with_inner(InnerLayer::Analytic);
    let est = run_canonical_mc(&params, &query, 4).unwrap();
    let closed = r2_multi_interferer(0.9, 0.8, 1.0, ALPHA, 0.5).unwrap();
    assert!(est.value >= closed - 0.03, "{} vs {closed}", est.value);
}

#[test]
fn doubling_points_barely_moves_estimate() {
    let query = MdQuery::new(1.0, vec![0.8, 0.5], vec![1, 100, 1000])
        .unwrap()
        .with_inner(InnerLayer::Analytic);
    let base = direct(0.2, InterfererMode::Multi);
    let a = run_canonical_mc(&base, &query, 8).unwrap();
    let b = run_canonical_mc(&base.with_n_points(400).unwrap(), &query, 8).unwrap();
    assert!((a.value - b.value).abs() < 0.005, "{} vs {}", a.value, b.value);
}

#[test]
fn second_order_equals_first_at_unit_zeta() {
    let params = direct(1.0, InterfererMode::Single);
    let query = MdQuery::new(1.0, vec![0.8, 0.5], vec![1, 20, 4000])
        .unwrap()
        .with_inner(InnerLayer::Analytic);
    let second = run_canonical_mc(&params, &query, 2).unwrap();
    let first = first_order_md_mc(&params, 1.0, 0.8, [1, 4000], InnerLayer::Analytic, 3).unwrap();
    let sigma = (second.stderr.powi(2) + first.stderr.powi(2)).sqrt();
    assert!((second.value - first.value).abs() <= 3.0 * sigma);
}

#[test]
fn order_reduction_matches_first_order_mc() {
    let zeta = 0.5;
    let p1 = 0.8;
    let curve: Vec<(f64, f64)> = (0..=20)
        .map(|k| {
            let p2 = k as f64 / 20.0;
            let r = match k {
                0 => 1.0,
                20 => p1_hat(p1, 1.0, ALPHA).unwrap().powi(-2),
                _ => r2_single_interferer(p1, p2, 1.0, ALPHA, zeta).unwrap(),
            };
            (p2, r)
        })
        .collect();
    let integral = metadist_core::mdcore::reduce_order(&curve).unwrap();
    let params = direct(zeta, InterfererMode::Single);
    let mc = first_order_md_mc(&params, 1.0, p1, [1, 5000], InnerLayer::Analytic, 5).unwrap();
    assert!((integral - mc.value).abs() < 0.02, "{integral} vs {}", mc.value);
}

#[test]
fn required_bandwidth_orders() {
    let search = BandwidthSearch {
        mc_samples: 4000,
        ..BandwidthSearch::new(1e5, 1e10, 1)
    };
    let params = link(1.0);
    let solver = BandwidthSolver::new(&params, 0.999, 0.5, &search, true).unwrap();
    let mut prev = 0.0;
    for target in [0.1, 0.2, 0.3, 0.4] {
        let w2 = solver.required_bandwidth(target, ReliabilityOrder::Second, &search).unwrap();
        let w1 = solver.required_bandwidth(target, ReliabilityOrder::First, &search).unwrap();
        assert!(w2 >= prev);
        prev = w2;
        // identical laws at ζ = 1; only Monte Carlo noise separates them
        assert!((w2 / w1 - 1.0).abs() < 0.1, "target {target}: {w2} vs {w1}");
    }
}

#[test]
fn required_bandwidth_needs_bracket() {
    let search = BandwidthSearch::new(1e5, 1e6, 1);
    let err = required_bandwidth(0.9, ReliabilityOrder::Second, &link(0.2), 0.999, 0.5, &search);
    assert!(matches!(err, Err(metadist_core::Error::Search(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multi_never_exceeds_single(
        p1 in 0.01f64..0.9999,
        p2 in 0.01f64..0.99,
        q in 0.01f64..10.0,
        alpha in 2.1f64..6.0,
        zeta in 0.01f64..=1.0,
    ) {
        let s = r2_single_interferer(p1, p2, q, alpha, zeta).unwrap();
        let m = r2_multi_interferer(p1, p2, q, alpha, zeta).unwrap();
        prop_assert!(m <= s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn closed_forms_non_increasing(
        p1 in 0.01f64..0.99,
        p2 in 0.01f64..0.98,
        q in 0.01f64..10.0,
        zeta in 0.01f64..=1.0,
        bump in 1.001f64..1.5,
    ) {
        for f in [r2_single_interferer, r2_multi_interferer] {
            let base = f(p1, p2, q, ALPHA, zeta).unwrap();
            prop_assert!(f((p1 * bump).min(0.999), p2, q, ALPHA, zeta).unwrap() <= base);
            prop_assert!(f(p1, (p2 * bump).min(0.99), q, ALPHA, zeta).unwrap() <= base);
            prop_assert!(f(p1, p2, q * bump, ALPHA, zeta).unwrap() <= base);
            prop_assert!((0.0..=1.0).contains(&base));
        }
    }
}
