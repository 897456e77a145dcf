//! Monte Carlo histogram of the first scaled spacing of a thinned grid with
//! n = 50000 and p = 1/10, written as CSV with the geometric overlay column.
//!
//!     cargo run --release --example grid_histogram > hist.csv

use spacings::{collect_empirical, ks_to_geometric, limit_pmf, RngSeed};

fn main() -> spacings::Result<()> {
    let (n, p) = (50_000, 0.1);
    let collected = collect_empirical(n, p, 1, 100_000, RngSeed(42))?;
    let emp = &collected.empirical;
    println!("d,count,empirical_mass,limit_pmf");
    for d in 1..=emp.max_value().unwrap_or(0) {
        println!("{d},{},{:?},{:?}", emp.count(d), emp.mass(d), limit_pmf(p, d as usize)?);
    }
    let report = ks_to_geometric(emp, p)?;
    eprintln!(
        "retained={} discarded={} ks={:.4} tv={:.4}",
        emp.total(),
        collected.discarded,
        report.ks,
        report.tv
    );
    Ok(())
}
