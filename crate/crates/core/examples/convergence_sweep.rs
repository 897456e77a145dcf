//! Exact sup-distance between the spacing CDF and 1 - (1-p)^d as n grows.

use spacings::{convergence_sweep, convergence_sweep_closed_i1};

fn main() -> spacings::Result<()> {
    let ns = [25, 50, 100, 200, 400, 800];
    for i in [1, 2, 5] {
        println!("p=0.1 i={i}");
        for row in convergence_sweep(0.1, i, &ns, 25)? {
            println!("  n={:<4} sup_distance={:.3e}", row.n, row.sup_distance);
        }
    }
    println!("closed-form route, i=1");
    for row in convergence_sweep_closed_i1(0.1, &ns, 25)? {
        println!("  n={:<4} sup_distance={:.3e}", row.n, row.sup_distance);
    }
    Ok(())
}
