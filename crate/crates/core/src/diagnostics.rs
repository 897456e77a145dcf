//! Distances between exact, empirical and limiting spacing laws.
//!
//! KS distances over discrete supports are the supremum of CDF differences at
//! the atoms, with no continuity correction.

use crate::dist::{cdf_scaled_closed_i1, limit_cdf, limit_pmf, DistributionTable, ModelParams};
use crate::error::{check_probability, Result, SpacingError};
use crate::logprob::CompensatedSum;
use crate::sampler::EmpiricalDistribution;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceReport {
    /// Sup-norm distance between CDFs.
    pub ks: f64,
    /// Total variation, half the L1 distance between masses.
    pub tv: f64,
    /// Sample size behind the comparison; 0 for exact-vs-exact.
    pub n_effective: u64,
}

/// Empirical spacings against the geometric law `p (1-p)^(d-1)`.
pub fn ks_to_geometric(emp: &EmpiricalDistribution, p: f64) -> Result<DistanceReport> {
    check_probability(p)?;
    let total = emp.total();
    if total == 0 {
        return Err(SpacingError::SampleSize { needed: 1, got: 0 });
    }
    let max = emp.max_value().unwrap_or(0).max(1);
    let mut ks = 0.0f64;
    let mut l1 = CompensatedSum::new();
    // a zero spacing lies outside the geometric support
    let mut below = emp.count(0);
    l1.add(below as f64 / total as f64);
    for d in 1..=max {
        let c = emp.count(d);
        below += c;
        let emp_cdf = below as f64 / total as f64;
        ks = ks.max((emp_cdf - limit_cdf(p, d as usize)?).abs());
        l1.add((c as f64 / total as f64 - limit_pmf(p, d as usize)?).abs());
    }
    l1.add(1.0 - limit_cdf(p, max as usize)?);
    Ok(DistanceReport {
        ks,
        tv: (0.5 * l1.value()).min(1.0),
        n_effective: total,
    })
}

/// KS distance between two mass vectors on the same support.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut ca = CompensatedSum::new();
    let mut cb = CompensatedSum::new();
    let mut sup = 0.0f64;
    for k in 0..a.len().max(b.len()) {
        ca.add(a.get(k).copied().unwrap_or(0.0));
        cb.add(b.get(k).copied().unwrap_or(0.0));
        sup = sup.max((ca.value() - cb.value()).abs());
    }
    sup
}

/// Total variation between two mass vectors on the same support.
pub fn tv_distance(a: &[f64], b: &[f64]) -> f64 {
    let l1: CompensatedSum = (0..a.len().max(b.len()))
        .map(|k| (a.get(k).copied().unwrap_or(0.0) - b.get(k).copied().unwrap_or(0.0)).abs())
        .collect();
    (0.5 * l1.value()).min(1.0)
}

pub fn compare_masses(a: &[f64], b: &[f64]) -> DistanceReport {
    DistanceReport {
        ks: ks_distance(a, b),
        tv: tv_distance(a, b),
        n_effective: 0,
    }
}

/// Exact table against its geometric limit over `d = 1..=n`; TV includes the
/// geometric mass beyond `n`.
pub fn table_to_limit(table: &DistributionTable) -> Result<DistanceReport> {
    let p = table.params().p();
    let n = table.params().n();
    let limit: Vec<f64> = (1..=n).map(|d| limit_pmf(p, d)).collect::<Result<_>>()?;
    let mut report = compare_masses(table.masses(), &limit);
    report.tv = (report.tv + 0.5 * (1.0 - limit_cdf(p, n)?)).min(1.0);
    Ok(report)
}

/// Two empirical samples over the integers.
pub fn empirical_distance(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<DistanceReport> {
    if a.total() == 0 || b.total() == 0 {
        return Err(SpacingError::SampleSize {
            needed: 1,
            got: 0,
        });
    }
    let mut values: Vec<u64> = a.iter().chain(b.iter()).map(|(v, _)| v).collect();
    values.sort_unstable();
    values.dedup();
    let (ta, tb) = (a.total() as f64, b.total() as f64);
    let (mut ca, mut cb) = (0u64, 0u64);
    let mut ks = 0.0f64;
    let mut l1 = CompensatedSum::new();
    for v in values {
        let (na, nb) = (a.count(v), b.count(v));
        ca += na;
        cb += nb;
        ks = ks.max((ca as f64 / ta - cb as f64 / tb).abs());
        l1.add((na as f64 / ta - nb as f64 / tb).abs());
    }
    Ok(DistanceReport {
        ks,
        tv: (0.5 * l1.value()).min(1.0),
        n_effective: a.total().min(b.total()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    /// `sup_{d <= d_max} |F_n(d) - (1 - (1-p)^d)|`
    pub sup_distance: f64,
}

fn sweep_order(n_list: &[usize], i: usize, d_max: usize) -> Result<Vec<usize>> {
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let Some(&smallest) = ns.first() else {
        return Err(SpacingError::domain("n_list", "[]", "need at least one grid size"));
    };
    if smallest < i.max(1) {
        return Err(SpacingError::domain("n_list", smallest, "every n must be at least i"));
    }
    if d_max < 1 || d_max > smallest {
        return Err(SpacingError::domain("d_max", d_max, "d_max must lie in 1..=min(n_list)"));
    }
    Ok(ns)
}

/// Exact distance from the CDF of the i-th scaled spacing to the geometric
/// limit, for each grid size, ordered by `n`.
pub fn convergence_sweep(p: f64, i: usize, n_list: &[usize], d_max: usize) -> Result<Vec<SweepRow>> {
    check_probability(p)?;
    sweep_order(n_list, i, d_max)?
        .into_iter()
        .map(|n| {
            let table = DistributionTable::new(ModelParams::new(n, p, i)?)?;
            let cdf = table.cdf_values();
            let mut sup = 0.0f64;
            for d in 1..=d_max {
                sup = sup.max((cdf[d - 1] - limit_cdf(p, d)?).abs());
            }
            Ok(SweepRow { n, sup_distance: sup })
        })
        .collect()
}

/// [`convergence_sweep`] for `i = 1` through the closed-form CDF.
pub fn convergence_sweep_closed_i1(p: f64, n_list: &[usize], d_max: usize) -> Result<Vec<SweepRow>> {
    check_probability(p)?;
    sweep_order(n_list, 1, d_max)?
        .into_iter()
        .map(|n| {
            let mut sup = 0.0f64;
            for d in 1..=d_max {
                sup = sup.max((cdf_scaled_closed_i1(n, p, d)? - limit_cdf(p, d)?).abs());
            }
            Ok(SweepRow { n, sup_distance: sup })
        })
        .collect()
}

/// Minimum sample for [`scaled_mean_exponential_check`].
pub const MIN_EXPONENTIAL_SAMPLE: usize = 100;
/// Bin width on the mean-scaled axis for the binned TV; the last bin is `[8, inf)`.
pub const EXPONENTIAL_BIN_WIDTH: f64 = 0.1;
const EXPONENTIAL_BINS: usize = 80;

/// Rescales real spacings by their mean and compares them with the unit
/// exponential law. `ks` is taken at the sample atoms; `tv` is computed on
/// bins of width [`EXPONENTIAL_BIN_WIDTH`].
pub fn scaled_mean_exponential_check(spacings: &[f64]) -> Result<DistanceReport> {
    if spacings.len() < MIN_EXPONENTIAL_SAMPLE {
        return Err(SpacingError::SampleSize {
            needed: MIN_EXPONENTIAL_SAMPLE,
            got: spacings.len(),
        });
    }
    if spacings.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(SpacingError::domain("spacings", "non-finite or negative", "spacings must be finite and non-negative"));
    }
    let mean = spacings.iter().copied().collect::<CompensatedSum>().value() / spacings.len() as f64;
    if mean <= 0.0 {
        return Err(SpacingError::domain("spacings", mean, "mean spacing must be positive"));
    }
    let mut xs: Vec<f64> = spacings.iter().map(|s| s / mean).collect();
    xs.sort_by(f64::total_cmp);
    let total = xs.len() as f64;

    let mut ks = 0.0f64;
    let mut k = 0;
    while k < xs.len() {
        let x = xs[k];
        while k < xs.len() && xs[k] == x {
            k += 1;
        }
        let exp_cdf = -(-x).exp_m1();
        ks = ks.max((k as f64 / total - exp_cdf).abs());
    }

    let mut counts = vec![0u64; EXPONENTIAL_BINS + 1];
    for &x in &xs {
        let b = ((x / EXPONENTIAL_BIN_WIDTH) as usize).min(EXPONENTIAL_BINS);
        counts[b] += 1;
    }
    let l1: CompensatedSum = counts
        .iter()
        .enumerate()
        .map(|(b, &c)| {
            let lo = b as f64 * EXPONENTIAL_BIN_WIDTH;
            let expected = if b == EXPONENTIAL_BINS {
                (-lo).exp()
            } else {
                (-lo).exp() - (-(lo + EXPONENTIAL_BIN_WIDTH)).exp()
            };
            (c as f64 / total - expected).abs()
        })
        .collect();
    Ok(DistanceReport {
        ks,
        tv: (0.5 * l1.value()).min(1.0),
        n_effective: xs.len() as u64,
    })
}

/// Pearson correlation of two equal-length samples.
pub fn sample_correlation(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(SpacingError::SampleSize {
            needed: 2,
            got: xs.len().min(ys.len()),
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().copied().collect::<CompensatedSum>().value() / n;
    let my = ys.iter().copied().collect::<CompensatedSum>().value() / n;
    let (mut sxy, mut sxx, mut syy) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy.add((x - mx) * (y - my));
        sxx.add((x - mx) * (x - mx));
        syy.add((y - my) * (y - my));
    }
    Ok(sxy.value() / (sxx.value() * syy.value()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand::Rng;

    #[test]
    fn geometric_atoms_match_until_the_truncated_tail() {
        // masses 1/2, 1/4, 1/8 agree with Geometric(1/2); the last atom absorbs the tail
        let mut e = EmpiricalDistribution::new();
        e.record_many(1, 4);
        e.record_many(2, 2);
        e.record_many(3, 1);
        e.record_many(4, 1);
        let r = ks_to_geometric(&e, 0.5).unwrap();
        assert_eq!(r.ks, 0.0625);
        let e: EmpiricalDistribution = std::iter::repeat_n(1, 3).collect();
        let r = ks_to_geometric(&e, 1.0).unwrap();
        assert_eq!(r.ks, 0.0);
        assert_eq!(r.tv, 0.0);
    }

    #[test]
    fn point_mass_against_half() {
        let e: EmpiricalDistribution = std::iter::repeat_n(1, 10).collect();
        let r = ks_to_geometric(&e, 0.5).unwrap();
        assert_eq!(r.ks, 0.5);
        assert!((r.tv - 0.5).abs() < 1e-15);
        assert_eq!(r.n_effective, 10);
    }

    #[test]
    fn empty_sample_is_rejected() {
        let e = EmpiricalDistribution::new();
        assert!(matches!(ks_to_geometric(&e, 0.5), Err(SpacingError::SampleSize { .. })));
        assert!(scaled_mean_exponential_check(&[1.0; 99]).is_err());
    }

    #[test]
    fn constant_spacings_against_exponential() {
        let r = scaled_mean_exponential_check(&[0.25; 500]).unwrap();
        assert!((r.ks - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn exponential_draws_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let xs: Vec<f64> = (0..100_000).map(|_| -(1.0 - rng.random::<f64>()).ln() * 3.0).collect();
        let r = scaled_mean_exponential_check(&xs).unwrap();
        assert!(r.ks < 0.01, "{r:?}");
        assert!(r.tv < 0.03, "{r:?}");
    }

    #[test]
    fn sweep_examples() {
        let rows = convergence_sweep(0.1, 1, &[400, 50, 200, 100], 50).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![50, 100, 200, 400]);
        assert!(rows.windows(2).all(|w| w[1].sup_distance < w[0].sup_distance));
        assert!(rows[2].sup_distance < 1e-6);
        for r in convergence_sweep(1.0, 1, &[3, 9, 27], 3).unwrap() {
            assert_eq!(r.sup_distance, 0.0);
        }
        assert!(convergence_sweep(0.1, 5, &[4, 10], 2).is_err());
        assert!(convergence_sweep(0.1, 1, &[40, 100], 50).is_err());
        assert!(convergence_sweep(0.1, 1, &[], 1).is_err());
    }

    #[test]
    fn closed_and_summed_sweeps_agree() {
        let ns = [50, 100, 200, 400, 1000];
        let a = convergence_sweep(0.1, 1, &ns, 50).unwrap();
        let b = convergence_sweep_closed_i1(0.1, &ns, 50).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.sup_distance - y.sup_distance).abs() < 1e-12);
        }
    }

    #[test]
    fn pmf_distances_are_symmetric() {
        let a = [0.2, 0.5, 0.3];
        let b = [0.6, 0.1, 0.3];
        assert_eq!(ks_distance(&a, &b), ks_distance(&b, &a));
        assert_eq!(tv_distance(&a, &b), tv_distance(&b, &a));
        assert!((tv_distance(&a, &b) - 0.4).abs() < 1e-15);
        assert!((ks_distance(&a, &b) - 0.4).abs() < 1e-15);
        assert_eq!(compare_masses(&a, &a).ks, 0.0);
    }

    #[test]
    fn correlation_of_linear_data() {
        let xs: Vec<f64> = (0..100).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        assert!((sample_correlation(&xs, &ys).unwrap() + 1.0).abs() < 1e-12);
        assert!(sample_correlation(&xs, &ys[..5]).is_err());
    }
}
