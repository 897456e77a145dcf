//! Seeded Monte Carlo: Bernoulli thinning, spacing extraction and the
//! inter-arrival view of the infinite Bernoulli process.
//!
//! Every generator is ChaCha8 seeded with [`RngSeed`]. Parallel work is cut
//! into fixed-size blocks and block `b` draws from ChaCha stream `b` of the
//! same key, so results do not depend on how many threads run the blocks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_probability, Result, SpacingError};
use crate::sequences::{grid, Descriptor, PointSet};

/// Trials handled by one generator stream.
pub const TRIALS_PER_BLOCK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Generator for block `block`; block 0 is the plain seeded generator.
    pub fn rng(self, block: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(block);
        rng
    }
}

/// One thinning of a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRun {
    pub descriptor: Descriptor,
    pub p: f64,
    pub seed: RngSeed,
    /// Indices into the point set, increasing.
    pub survivors: Vec<usize>,
    /// Gaps between consecutive surviving points.
    pub spacings: Vec<f64>,
}

impl SampleRun {
    /// Builds a run from an explicit survivor list.
    pub fn from_survivors(
        points: &PointSet,
        p: f64,
        seed: RngSeed,
        survivors: Vec<usize>,
    ) -> Result<Self> {
        if survivors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpacingError::domain("survivors", format!("{survivors:?}"), "indices must increase"));
        }
        if survivors.last().is_some_and(|&k| k >= points.len()) {
            return Err(SpacingError::domain("survivors", format!("{survivors:?}"), "index past the point set"));
        }
        let xs = points.points();
        let spacings = survivors.windows(2).map(|w| xs[w[1]] - xs[w[0]]).collect();
        Ok(SampleRun {
            descriptor: points.descriptor(),
            p,
            seed,
            survivors,
            spacings,
        })
    }
}

/// Keeps each point independently with probability `p`.
pub fn sample_subset(points: &PointSet, p: f64, seed: RngSeed) -> Result<SampleRun> {
    check_probability(p)?;
    let mut rng = seed.rng(0);
    let survivors = (0..points.len()).filter(|_| rng.random_bool(p)).collect();
    SampleRun::from_survivors(points, p, seed, survivors)
}

/// The i-th spacing of a grid run in grid steps, or `None` when the run has
/// at most `i` survivors.
pub fn ith_scaled_spacing(run: &SampleRun, i: usize, n: usize) -> Option<u64> {
    if i < 1 {
        return None;
    }
    run.spacings
        .get(i - 1)
        .map(|&gap| (gap * n as f64).round() as u64)
}

/// Counts of observed integer spacings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl EmpiricalDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, value: u64) {
        self.record_many(value, 1);
    }

    pub fn record_many(&mut self, value: u64, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(value).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(&mut self, other: &EmpiricalDistribution) {
        for (&v, &c) in &other.counts {
            self.record_many(v, c);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn mass(&self, value: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(value) as f64 / self.total as f64
        }
    }

    /// Fraction of observations `<= value`.
    pub fn cdf(&self, value: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let below: u64 = self.counts.range(..=value).map(|(_, &c)| c).sum();
        below as f64 / self.total as f64
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// `(value, count)` in increasing value.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn mean(&self) -> f64 {
        let s: f64 = self.iter().map(|(v, c)| v as f64 * c as f64).sum();
        s / self.total as f64
    }
}

impl FromIterator<u64> for EmpiricalDistribution {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        let mut e = EmpiricalDistribution::new();
        for v in iter {
            e.record(v);
        }
        e
    }
}

/// Monte Carlo result: retained spacings and the trials whose conditioning
/// event failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collected {
    pub empirical: EmpiricalDistribution,
    pub discarded: u64,
}

impl Collected {
    pub fn trials(&self) -> u64 {
        self.empirical.total() + self.discarded
    }
}

// Scans grid indices 0..=n, stopping at survivor i+1. Same law as a full
// thinning restricted to its first i+1 survivors.
fn scan_ith_gap(rng: &mut ChaCha8Rng, n: usize, p: f64, i: usize) -> Option<u64> {
    let mut seen = 0;
    let mut left = 0;
    for k in 0..=n {
        if rng.random_bool(p) {
            seen += 1;
            if seen == i {
                left = k;
            } else if seen == i + 1 {
                return Some((k - left) as u64);
            }
        }
    }
    None
}

/// Repeats the thinning of `grid(n)` and records the i-th scaled spacing of
/// every trial that has more than `i` survivors.
pub fn collect_empirical(n: usize, p: f64, i: usize, trials: u64, seed: RngSeed) -> Result<Collected> {
    grid(n)?;
    check_probability(p)?;
    if i < 1 || i > n {
        return Err(SpacingError::domain("i", i, "spacing index must lie in 1..=n"));
    }
    if trials < 1 {
        return Err(SpacingError::domain("trials", trials, "need at least one trial"));
    }
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK);
    let merged = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = seed.rng(b);
            let todo = TRIALS_PER_BLOCK.min(trials - b * TRIALS_PER_BLOCK);
            let mut out = Collected {
                empirical: EmpiricalDistribution::new(),
                discarded: 0,
            };
            for _ in 0..todo {
                match scan_ith_gap(&mut rng, n, p, i) {
                    Some(d) => out.empirical.record(d),
                    None => out.discarded += 1,
                }
            }
            out
        })
        .reduce(
            || Collected {
                empirical: EmpiricalDistribution::new(),
                discarded: 0,
            },
            |mut a, b| {
                a.empirical.merge(&b.empirical);
                a.discarded += b.discarded;
                a
            },
        );
    Ok(merged)
}

/// Inter-arrival times `M_1, M_2, ...` of an unbounded Bernoulli(p) process,
/// each counted trial by trial up to and including the next success.
pub fn inter_arrival_stream(p: f64, seed: RngSeed, count: usize) -> Result<Vec<u64>> {
    check_probability(p)?;
    if count < 1 {
        return Err(SpacingError::domain("count", count, "need at least one arrival"));
    }
    let mut rng = seed.rng(0);
    Ok((0..count)
        .map(|_| {
            let mut m = 1;
            while !rng.random_bool(p) {
                m += 1;
            }
            m
        })
        .collect())
}

/// Spacings pooled over `runs` independent thinnings of `points`; run `r`
/// uses stream `r`.
pub fn pooled_spacings(points: &PointSet, p: f64, seed: RngSeed, runs: u64) -> Result<Vec<f64>> {
    check_probability(p)?;
    if runs < 1 {
        return Err(SpacingError::domain("runs", runs, "need at least one run"));
    }
    let per_run: Vec<Vec<f64>> = (0..runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = seed.rng(r);
            let kept: Vec<f64> = points
                .points()
                .iter()
                .copied()
                .filter(|_| rng.random_bool(p))
                .collect();
            kept.windows(2).map(|w| w[1] - w[0]).collect()
        })
        .collect();
    Ok(per_run.concat())
}
