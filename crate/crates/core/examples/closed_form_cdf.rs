//! First-spacing CDF from the closed form, at sizes where the naive powers
//! of (1-p) underflow.

use spacings::{cdf_scaled_closed_i1, limit_cdf, DistributionTable, ModelParams};

fn main() -> spacings::Result<()> {
    let p = 0.1;
    let small = DistributionTable::new(ModelParams::new(30, p, 1)?)?.cdf_values();
    println!("n=30: closed form vs summed table");
    for d in [1, 5, 10, 20, 30] {
        let closed = cdf_scaled_closed_i1(30, p, d)?;
        println!("  d={d:<3} closed={closed:.17} summed={:.17}", small[d - 1]);
    }
    println!("large n against the geometric limit");
    for n in [50_000, 1_000_000] {
        for d in [1, 10, 50] {
            let closed = cdf_scaled_closed_i1(n, p, d)?;
            println!("  n={n:<8} d={d:<3} closed={closed:.17} limit={:.17}", limit_cdf(p, d)?);
        }
    }
    Ok(())
}
