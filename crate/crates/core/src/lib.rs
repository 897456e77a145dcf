//! Spacing statistics of Bernoulli-thinned point sets.
//!
//! Thin the grid `{0, 1/n, ..., 1}` by keeping each point with probability
//! `p`; the gap between the i-th and (i+1)-th survivors, in grid steps, has
//! an exact law computed in [`dist`] and checked against exhaustive rational
//! enumeration in [`oracle`]. As `n` grows the law approaches the geometric
//! distribution with parameter `p`, which [`sampler`] and [`diagnostics`]
//! witness by simulation and by exact distance sweeps.

pub mod cli;
pub mod diagnostics;
pub mod dist;
pub mod error;
pub mod logprob;
pub mod oracle;
pub mod sampler;
pub mod sequences;

pub use diagnostics::{
    convergence_sweep, convergence_sweep_closed_i1, ks_to_geometric, scaled_mean_exponential_check,
    DistanceReport, SweepRow,
};
pub use dist::{
    binomial_cdf_tail_check, binomial_sum_partial, cdf_scaled, cdf_scaled_closed_i1, limit_cdf,
    limit_pmf, pmf_delta, pmf_scaled, size_tail, survivor_index_pmf, unconditional_spacing_prob,
    BinomialSum, DistributionTable, ModelParams,
};
pub use error::{Result, SpacingError};
pub use logprob::LogProb;
pub use oracle::{enumerate_conditional_pmf, exact_closed_form_pmf, ExactTable, Rational};
pub use sampler::{
    collect_empirical, inter_arrival_stream, ith_scaled_spacing, sample_subset, Collected,
    EmpiricalDistribution, RngSeed, SampleRun,
};
pub use sequences::{farey, grid, rotation, Descriptor, PointSet};
