//! Two numerical facts behind the general-i limit: the negative-binomial
//! series sums to (1-p)^(i-1)/p^i, and the binomial lower tail vanishes.

use spacings::dist::identity_stopping_index;
use spacings::{binomial_cdf_tail_check, binomial_sum_partial};

fn main() -> spacings::Result<()> {
    for &p in &[0.1, 0.5, 0.9] {
        for i in [1, 3, 10] {
            let stop = identity_stopping_index(p, i)?;
            let s = binomial_sum_partial(p, i, stop)?;
            println!(
                "p={p} i={i:<2} J={stop:<4} partial={:.15e} closed={:.15e} rel_gap={:.1e}",
                s.partial,
                s.closed,
                s.relative_gap()
            );
        }
    }
    for n in [10, 100, 1_000, 10_000, 100_000] {
        let lower = binomial_cdf_tail_check(n, 0.1, 5)?;
        println!("n={n:<6} ln P(Bin(n+1, 0.1) <= 5) = {:.3}", lower.ln());
    }
    Ok(())
}
