//! The unbounded Bernoulli process: inter-arrival times are i.i.d.
//! Geometric(p), and the second one matches the first grid spacing.

use spacings::diagnostics::{empirical_distance, sample_correlation};
use spacings::{collect_empirical, inter_arrival_stream, ks_to_geometric, EmpiricalDistribution, RngSeed};

fn main() -> spacings::Result<()> {
    let p = 0.1;
    let draws = inter_arrival_stream(p, RngSeed(7), 400_000)?;
    let first: EmpiricalDistribution = draws.iter().step_by(2).copied().collect();
    let second: EmpiricalDistribution = draws.iter().skip(1).step_by(2).copied().collect();
    println!("mean M1 = {:.4}, mean M2 = {:.4} (1/p = {})", first.mean(), second.mean(), 1.0 / p);
    println!("ks(M1) = {:.5}, ks(M2) = {:.5}", ks_to_geometric(&first, p)?.ks, ks_to_geometric(&second, p)?.ks);

    let a: Vec<f64> = draws.iter().step_by(2).map(|&v| v as f64).collect();
    let b: Vec<f64> = draws.iter().skip(1).step_by(2).map(|&v| v as f64).collect();
    println!("corr(M1, M2) = {:.5}", sample_correlation(&a, &b)?);

    let grid = collect_empirical(50_000, p, 1, 200_000, RngSeed(8))?.empirical;
    let r = empirical_distance(&grid, &second)?;
    println!("grid D_1 vs M2: ks = {:.5}, tv = {:.5}", r.ks, r.tv);
    Ok(())
}
