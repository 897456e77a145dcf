//! Thinned Farey fractions and irrational rotations: mean-scaled spacings
//! against the unit exponential law.

use spacings::sampler::pooled_spacings;
use spacings::{farey, rotation, scaled_mean_exponential_check, PointSet, RngSeed};

fn report(points: &PointSet, p: f64) -> spacings::Result<()> {
    let spacings = pooled_spacings(points, p, RngSeed(1), 4)?;
    let r = scaled_mean_exponential_check(&spacings)?;
    println!(
        "{:<28} p={p:<5} points={:<6} spacings={:<6} ks={:.4} tv={:.4}",
        points.descriptor().to_string(),
        points.len(),
        spacings.len(),
        r.ks,
        r.tv
    );
    Ok(())
}

fn main() -> spacings::Result<()> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    for p in [1.0, 0.5, 0.1] {
        report(&farey(300)?, p)?;
        report(&rotation(golden, 20_000)?, p)?;
    }
    Ok(())
}
