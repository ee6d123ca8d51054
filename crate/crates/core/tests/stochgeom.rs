use metadist_core::canonical::{interference_ratio_expectation, nprime_pmf, p1_hat};
use metadist_core::rng::stream_rng;
use metadist_core::specfun::marcum_q1;
use metadist_core::stochgeom::*;

fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn nearest_distance_law() {
    let lambda = 1.0 / std::f64::consts::PI;
    let cfg = PppConfig::new(lambda, 2).unwrap();
    let mut rng = stream_rng(11, 0, 0);
    let mut r1 = Vec::with_capacity(100_000);
    let mut ratio_sq = 0.0;
    for _ in 0..100_000 {
        let d = sample_ordered_distances(&cfg, &mut rng);
        r1.push(d[0]);
        ratio_sq += (d[0] / d[1]).powi(2);
    }
    let mean_sq = r1.iter().map(|r| r * r).sum::<f64>() / 1e5;
    assert!((mean_sq - 1.0).abs() < 0.02);
    assert!((ratio_sq / 1e5 - 0.5).abs() < 0.01);
    let ks = ks_distance(r1, |r| nearest_distance_cdf(r, lambda).unwrap());
    assert!(ks < 0.01, "ks = {ks}");
}

#[test]
fn direct_nearest_sampler_matches_cdf() {
    let mut rng = stream_rng(12, 0, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| sample_nearest_distance(1.5e-3, &mut rng)).collect();
    assert!(ks_distance(xs, |r| nearest_distance_cdf(r, 1.5e-3).unwrap()) < 0.01);
}

#[test]
fn distances_reproducible() {
    let cfg = PppConfig::new(1e-4, 200).unwrap();
    let a = sample_ordered_distances(&cfg, &mut stream_rng(5, 2, 9));
    let b = sample_ordered_distances(&cfg, &mut stream_rng(5, 2, 9));
    assert_eq!(a, b);
    assert!(a.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn mark_modes() {
    let mut rng = stream_rng(1, 0, 0);
    let all = sample_marks(6, 1.0, MarkMode::All, &mut rng).unwrap();
    assert_eq!(all, vec![false, true, true, true, true, true]);
    let single = sample_marks(6, 1.0, MarkMode::SingleInterferer, &mut rng).unwrap();
    assert_eq!(single, vec![false, true, false, false, false, false]);
    assert!(sample_marks(6, 0.0, MarkMode::All, &mut rng).is_err());
    assert!(sample_marks(1, 0.5, MarkMode::All, &mut rng).is_err());

    let first_hit = (0..100_000)
        .filter(|_| sample_marks(50, 0.2, MarkMode::SingleInterferer, &mut rng).unwrap()[1])
        .count();
    assert!((first_hit as f64 / 1e5 - 0.2).abs() < 0.01);
}

#[test]
fn rayleigh_moments_and_ratio_law() {
    let mut rng = stream_rng(2, 0, 0);
    let n = 1_000_000;
    let mut sum = 0.0;
    let mut above = 0usize;
    for _ in 0..n {
        let h = sample_rayleigh_power(&mut rng);
        sum += h;
        above += (h > 1.0) as usize;
    }
    assert!((sum / n as f64 - 1.0).abs() < 0.005);
    assert!((above as f64 / n as f64 - (-1f64).exp()).abs() < 0.005);
    let ratios: Vec<f64> = (0..100_000)
        .map(|_| sample_rayleigh_power(&mut rng) / sample_rayleigh_power(&mut rng))
        .collect();
    assert!(ks_distance(ratios, |x| x / (1.0 + x)) < 0.01);
}

#[test]
fn rician_degenerates_to_exponential() {
    let mut rng = stream_rng(3, 0, 0);
    let xs: Vec<f64> = (0..100_000).map(|_| sample_rician_power(0.0, &mut rng).unwrap()).collect();
    assert!(ks_distance(xs, |x| 1.0 - (-x).exp()) < 0.01);
    assert!(sample_rician_power(-1.0, &mut rng).is_err());
}

#[test]
fn rician_ccdf_is_marcum() {
    let k = 2.0;
    let mut rng = stream_rng(4, 0, 0);
    let n = 1_000_000;
    let hs: Vec<f64> = (0..n).map(|_| sample_rician_power(k, &mut rng).unwrap()).collect();
    let mean = hs.iter().sum::<f64>() / n as f64;
    assert!((mean - 1.0).abs() < 0.005);
    for h0 in [0.05, 0.3, 1.0, 2.0] {
        let emp = hs.iter().filter(|&&h| h > h0).count() as f64 / n as f64;
        let exact = marcum_q1((2.0 * k).sqrt(), (2.0 * (k + 1.0) * h0).sqrt()).unwrap();
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((emp - exact).abs() < (3.0 * sigma).max(1e-4), "h0={h0}: {emp} vs {exact}");
    }
}

#[test]
fn nprime_matches_annulus_counts() {
    // N' = number of base stations inside p̂₁R₁ other than the serving one
    let p_hat = p1_hat(0.8, 1.0, 3.5).unwrap();
    let cfg = PppConfig::new(1e-4, 60).unwrap();
    let mut rng = stream_rng(6, 0, 0);
    let n = 100_000;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        let d = sample_ordered_distances(&cfg, &mut rng);
        let limit = p_hat * d[0];
        let c = d[1..].iter().take_while(|&&r| r < limit).count();
        if c < counts.len() {
            counts[c] += 1;
        }
    }
    for (k, &c) in counts.iter().enumerate() {
        let exact = nprime_pmf(k as u64, p_hat).unwrap();
        let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
        assert!((c as f64 / n as f64 - exact).abs() < 4.0 * sigma, "k={k}");
    }
}

#[test]
fn interference_ratio_mean_small_run() {
    let intensity = 1e-4;
    let cfg = PppConfig::new(intensity, 200).unwrap();
    for (alpha, zeta) in [(3.5, 0.5), (4.0, 1.0)] {
        let tail = Some(TailModel { intensity, zeta });
        let mut rng = stream_rng(7, 0, 0);
        let mut sum = 0.0;
        let mut used = 0usize;
        for _ in 0..20_000 {
            let distances = sample_ordered_distances(&cfg, &mut rng);
            let mut marks = vec![false; distances.len()];
            fill_marks(zeta, MarkMode::All, &mut marks, &mut rng);
            let real = Realization { distances, marks };
            if let Some(s) = interference_ratio_sum(&real, alpha, tail) {
                sum += s;
                used += 1;
            }
        }
        let expected = interference_ratio_expectation(alpha, zeta).unwrap();
        assert!((sum / used as f64 / expected - 1.0).abs() < 0.03);
    }
}
