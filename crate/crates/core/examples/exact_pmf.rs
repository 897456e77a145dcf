//! Exact law of the i-th scaled spacing next to its geometric limit.
//!
//!     cargo run --example exact_pmf -- 1000 0.1 3

use spacings::{limit_cdf, limit_pmf, size_tail, DistributionTable, ModelParams};

fn main() -> spacings::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let p: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let i: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(3);

    let params = ModelParams::new(n, p, i)?;
    let table = DistributionTable::new(params)?;
    let cdf = table.cdf_values();
    println!("n={n} p={p} i={i}  P(|S'| > i) = {:.6}", size_tail(n, p, i)?.prob());
    println!("{:>4} {:>14} {:>14} {:>14} {:>14}", "d", "pmf", "limit_pmf", "cdf", "limit_cdf");
    for d in 1..=n.min(15) {
        println!(
            "{d:>4} {:>14.6e} {:>14.6e} {:>14.10} {:>14.10}",
            table.mass(d),
            limit_pmf(p, d)?,
            cdf[d - 1],
            limit_cdf(p, d)?
        );
    }
    println!("total mass = {:.15}", table.total());
    Ok(())
}
