use metadist_core::specfun::*;
use proptest::prelude::*;

// Q₁(a, b) as a Poisson mixture of Gamma tails:
// Σ_n Pois(n; a²/2) · Σ_{j≤n} Pois(j; b²/2).
fn marcum_poisson_oracle(a: f64, b: f64) -> f64 {
    let x = 0.5 * a * a;
    let y = 0.5 * b * b;
    let mut outer_term = (-x).exp();
    let mut inner_term = (-y).exp();
    let mut inner_sum = inner_term;
    let mut total = outer_term * inner_sum;
    for n in 1..400 {
        let nf = n as f64;
        outer_term *= x / nf;
        inner_term *= y / nf;
        inner_sum += inner_term;
        total += outer_term * inner_sum.min(1.0);
        if outer_term < 1e-20 && nf > x {
            break;
        }
    }
    total
}

fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..500 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

#[test]
fn marcum_matches_poisson_mixture_on_grid() {
    for a in [0.0, 1.0, 6f64.sqrt(), 3.0] {
        let mut prev = 1.0;
        for i in 0..=60 {
            let b = 0.1 * i as f64;
            let q = marcum_q1(a, b).unwrap();
            assert!(
                (q - marcum_poisson_oracle(a, b)).abs() < 1e-8,
                "a={a} b={b}: {q} vs {}",
                marcum_poisson_oracle(a, b)
            );
            assert!(q <= prev);
            prev = q;
        }
    }
}

#[test]
fn marcum_reference_values() {
    assert!((marcum_q1(0.0, 2.0).unwrap() - (-2f64).exp()).abs() < 1e-14);
    let v = marcum_q1(1.0, 1.0).unwrap();
    assert!((v - 0.7328798).abs() < 1e-6);
}

#[test]
fn marcum_increases_in_a() {
    let mut prev = 0.0;
    for a in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let q = marcum_q1(a, 2.0).unwrap();
        assert!(q > prev);
        prev = q;
    }
}

#[test]
fn marcum_rejects_bad_input() {
    assert!(marcum_q1(-1.0, 1.0).is_err());
    assert!(marcum_q1(1.0, f64::NAN).is_err());
    assert!(marcum_q1_inverse_b(1.0, 1.0).is_err());
}

#[test]
fn bessel_matches_series() {
    for i in 0..=40 {
        let x = 0.5 * i as f64;
        let v = bessel_i0(x).unwrap();
        assert!((v / i0_series(x) - 1.0).abs() < 1e-10, "x={x}");
    }
    assert!((bessel_i0(1.0).unwrap() - 1.2660658).abs() < 1e-7);
    assert!((bessel_i0(5.0).unwrap() - 27.239872).abs() < 1e-6);
}

#[test]
fn beta_identities() {
    assert!((beta_fn(1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((beta_fn(2.0, 2.0).unwrap() - 1.0 / 6.0).abs() < 1e-14);
    assert!((beta_fn(3.0, 3.0).unwrap() - 1.0 / 30.0).abs() < 1e-14);
    assert!(beta_fn(0.0, 1.0).is_err());
}

#[test]
fn lambert_reference_values() {
    assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
    assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
    // fixed-point oracle for W(1)
    let mut w = 0.5f64;
    for _ in 0..100 {
        w -= (w * w.exp() - 1.0) / (w.exp() * (1.0 + w));
    }
    assert!((lambert_w0(1.0).unwrap() - w).abs() < 1e-14);
    assert!((w - 0.5671433).abs() < 1e-7);
    assert!(lambert_w0(-1.0).is_err());
    assert!((lambert_w0(-(-1f64).exp()).unwrap() + 1.0).abs() < 1e-7);
}

#[test]
fn approximation_polynomial_at_sqrt6() {
    let c = eval_mu_nu(6f64.sqrt(), &MarcumPolyCoeffs::least_squares_a1_5()).unwrap();
    assert!((c.mu() - 3.1098).abs() < 5e-4);
    assert!((c.nu() + 3.4032).abs() < 5e-4);
}

#[test]
fn tuned_coefficients_hit_threshold_at_sqrt6() {
    let a = 6f64.sqrt();
    let b = marcum_q1_inverse_b(a, 0.99).unwrap();
    let v = marcum_q1_exp_approx(a, b, MarcumApproxCoeffs::NEAR_UNITY_K2).unwrap();
    assert!((v - 0.99).abs() < 0.01);
}

#[test]
fn approximation_is_strictly_decreasing() {
    let c = MarcumApproxCoeffs::NEAR_UNITY_K2;
    let vals: Vec<f64> = (1..=30)
        .map(|i| marcum_q1_exp_approx(2.0, 0.1 * i as f64, c).unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn inverse_near_unity_against_bisection() {
    let a = 6f64.sqrt();
    let b = marcum_q1_inverse_b(a, 0.99999).unwrap();
    let (mut lo, mut hi) = (0.0, 3.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if marcum_q1_complement(a, mid).unwrap() < 1e-5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((b - lo).abs() < 1e-10);
}

#[test]
fn collocation_is_exact_at_anchors() {
    let a = 6f64.sqrt();
    let (lo, hi) = (0.99, 1.0 - 1e-7);
    let c = calibrate_marcum_coeffs(a, lo, hi).unwrap();
    for p in [lo, hi] {
        let b = marcum_q1_inverse_b(a, p).unwrap();
        let v = marcum_q1_exp_approx(a, b, c).unwrap();
        assert!((v - p).abs() < 1e-8, "anchor {p}: {v}");
    }
}

#[test]
fn collocation_tends_to_tangent() {
    let a = 6f64.sqrt();
    let p = 0.99;
    let eps = 1e-6;
    let c = calibrate_marcum_coeffs(a, p - eps, p).unwrap();
    // slope of ln(-ln Q) against ln b at b*(p) by central differences
    let b = marcum_q1_inverse_b(a, p).unwrap();
    let h = 1e-5 * b;
    let y = |b: f64| (-(marcum_q1(a, b).unwrap()).ln()).ln();
    let slope = (y(b + h) - y(b - h)) / ((b + h).ln() - (b - h).ln());
    assert!((c.mu() - slope).abs() < 1e-3, "{} vs {slope}", c.mu());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn inverse_round_trip(a in 0.0f64..4.0, p in 0.01f64..0.999) {
        let b = marcum_q1_inverse_b(a, p).unwrap();
        prop_assert!((marcum_q1(a, b).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn lambert_residual(x in -0.367_878_441_171_442_3f64..1e6) {
        let w = lambert_w0(x).unwrap();
        prop_assert!(w >= -1.0);
        prop_assert!((w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn marcum_complement_sums_to_one(a in 0.0f64..5.0, b in 0.0f64..8.0) {
        let q = marcum_q1(a, b).unwrap();
        let c = marcum_q1_complement(a, b).unwrap();
        prop_assert!((q + c - 1.0).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&q));
    }
}
