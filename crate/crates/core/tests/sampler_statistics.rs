use spacings::diagnostics::{empirical_distance, sample_correlation};
use spacings::sampler::pooled_spacings;
use spacings::*;

#[test]
fn conditioning_rate_matches_size_tail() {
    let (n, p, i) = (6, 0.3, 2);
    let trials = 1_000_000u64;
    let c = collect_empirical(n, p, i, trials, RngSeed(7)).unwrap();
    let rate = c.empirical.total() as f64 / trials as f64;
    let tail = size_tail(n, p, i).unwrap().prob();
    let se = (tail * (1.0 - tail) / trials as f64).sqrt();
    assert!((rate - tail).abs() < 4.0 * se, "rate {rate} vs {tail}");
}

#[test]
fn small_grid_histogram_tracks_exact_law() {
    let (n, p, i) = (8, 0.4, 3);
    let c = collect_empirical(n, p, i, 400_000, RngSeed(99)).unwrap();
    let table = DistributionTable::new(ModelParams::new(n, p, i).unwrap()).unwrap();
    let total = c.empirical.total() as f64;
    for (d, m) in table.iter() {
        let se = (m * (1.0 - m) / total).sqrt();
        let got = c.empirical.mass(d as u64);
        assert!((got - m).abs() < 5.0 * se + 1e-12, "d={d}: {got} vs {m}");
    }
}

#[test]
fn grid_spacing_and_second_inter_arrival_agree() {
    // D_{1,n} for large n against M_2 of the unbounded process
    let draws = 1_000_000;
    let grid_side = collect_empirical(50_000, 0.1, 1, draws, RngSeed(2024)).unwrap().empirical;
    let stream = inter_arrival_stream(0.1, RngSeed(4048), 2 * draws as usize).unwrap();
    let second: EmpiricalDistribution = stream.chunks(2).map(|c| c[1]).collect();
    let r = empirical_distance(&grid_side, &second).unwrap();
    assert!(r.tv < 0.01, "{r:?}");
}

#[test]
fn stream_mean_and_independence() {
    let draws = inter_arrival_stream(0.5, RngSeed(31), 1_000_000).unwrap();
    let mean = draws.iter().sum::<u64>() as f64 / draws.len() as f64;
    // Var of Geometric(1/2) on {1,2,...} is (1-p)/p^2 = 2
    let se = (2.0f64 / draws.len() as f64).sqrt();
    assert!((mean - 2.0).abs() < 3.0 * se, "mean {mean}");

    let pairs = inter_arrival_stream(0.1, RngSeed(32), 2_000_000).unwrap();
    let (a, b): (Vec<f64>, Vec<f64>) = pairs.chunks(2).map(|c| (c[0] as f64, c[1] as f64)).unzip();
    let rho = sample_correlation(&a, &b).unwrap();
    assert!(rho.abs() < 0.01, "rho {rho}");
}

#[test]
fn thinned_farey_spacings_look_exponential() {
    let points = farey(300).unwrap();
    let spacings = pooled_spacings(&points, 0.1, RngSeed(5), 4).unwrap();
    let r = scaled_mean_exponential_check(&spacings).unwrap();
    assert!(r.ks < 0.05, "{r:?}");
}

#[test]
fn pooled_spacings_are_reproducible() {
    let points = rotation(2f64.sqrt(), 5000).unwrap();
    let a = pooled_spacings(&points, 0.2, RngSeed(1), 3).unwrap();
    let b = pooled_spacings(&points, 0.2, RngSeed(1), 3).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|&s| s > 0.0));
}
