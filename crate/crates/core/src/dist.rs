//! Exact law of the i-th scaled spacing of a Bernoulli-thinned uniform grid.
//!
//! The grid `{0, 1/n, ..., 1}` has `n + 1` points; each survives independently
//! with probability `p`. Conditioned on more than `i` survivors, the gap between
//! survivors `i` and `i + 1`, measured in grid steps, is `d` in `1..=n`. Its
//! mass is
//!
//! ```text
//!            p^(i+1) (1-p)^(d-1) sum_{j=i-1}^{n-d} C(j, i-1) (1-p)^(j-i+1)
//! f(d) = -------------------------------------------------------------
//!                 1 - sum_{k=0}^{i} C(n+1, k) p^k (1-p)^(n+1-k)
//! ```
//!
//! and tends to the geometric law `p (1-p)^(d-1)` as `n` grows, for every `i`.
//! All sums run in the log domain.

use crate::error::{check_probability, Result, SpacingError};
use crate::logprob::{
    ln_binomial, ln_binomial_pmf, ln_pow, log_add_exp, CompensatedSum, LogProb, LogSumExp,
};

/// Terms this far below the running maximum no longer move a double.
pub const CUTOFF_NATS: f64 = 60.0;

/// Largest grid for which tables may be built in plain arithmetic.
pub const DIRECT_MAX_N: usize = 512;

// Plain arithmetic also needs the conditioning tail well clear of underflow.
const DIRECT_MIN_LN_TAIL: f64 = -200.0;

/// Grid size `n`, survival probability `p` and spacing index `i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: usize,
    p: f64,
    i: usize,
}

impl ModelParams {
    pub fn new(n: usize, p: f64, i: usize) -> Result<Self> {
        if n < 1 {
            return Err(SpacingError::domain("n", n, "grid needs at least one interval"));
        }
        check_probability(p)?;
        if i < 1 || i > n {
            return Err(SpacingError::domain("i", i, "spacing index must lie in 1..=n"));
        }
        Ok(ModelParams { n, p, i })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn i(&self) -> usize {
        self.i
    }

    /// Largest scaled spacing with nonzero mass.
    pub fn max_support(&self) -> usize {
        self.n - self.i + 1
    }

    fn check_d(&self, d: usize) -> Result<()> {
        if d < 1 || d > self.n {
            Err(SpacingError::domain("d", d, "scaled spacing must lie in 1..=n"))
        } else {
            Ok(())
        }
    }

    fn ln_p(&self) -> f64 {
        self.p.ln()
    }

    fn ln_q(&self) -> f64 {
        (-self.p).ln_1p()
    }
}

/// Unconditional probability that the i-th spacing equals `d` grid steps
/// (and that it exists at all).
pub fn unconditional_spacing_prob(params: &ModelParams, d: usize) -> Result<LogProb> {
    params.check_d(d)?;
    let (n, i) = (params.n, params.i);
    if i - 1 > n - d {
        return Ok(LogProb::ZERO);
    }
    let mut acc = LogSumExp::new();
    let mut prev = f64::NEG_INFINITY;
    for j in (i - 1)..=(n - d) {
        let w = ln_survivor_weight(params.p, i, j);
        acc.push(w);
        if w < prev && w < acc.max() - CUTOFF_NATS {
            break;
        }
        prev = w;
    }
    let ln = params.ln_p() + ln_pow(params.ln_q(), (d - 1) as u64) + acc.ln();
    Ok(LogProb::from_ln(ln))
}

/// Probability that the i-th survivor sits at grid index `j`.
pub fn survivor_index_pmf(n: usize, p: f64, i: usize, j: usize) -> Result<LogProb> {
    check_probability(p)?;
    if i < 1 {
        return Err(SpacingError::domain("i", i, "survivor rank starts at 1"));
    }
    if j > n {
        return Err(SpacingError::domain("j", j, "grid index must lie in 0..=n"));
    }
    Ok(LogProb::from_ln(ln_survivor_weight(p, i, j)))
}

// ln[C(j, i-1) p^i (1-p)^(j-i+1)] = ln p + ln Binomial(j, p)(i-1)
fn ln_survivor_weight(p: f64, i: usize, j: usize) -> f64 {
    p.ln() + ln_binomial_pmf((i - 1) as u64, j as u64, p, 1.0 - p)
}

fn check_tail_args(n: usize, p: f64, i: usize) -> Result<()> {
    if n < 1 {
        return Err(SpacingError::domain("n", n, "grid needs at least one interval"));
    }
    check_probability(p)?;
    if i > n {
        return Err(SpacingError::domain("i", i, "size threshold must lie in 0..=n"));
    }
    Ok(())
}

/// `P(|S'| > i)` for `|S'| ~ Binomial(n + 1, p)`, summed over the upper tail
/// directly so that a tiny tail keeps its relative precision.
pub fn size_tail(n: usize, p: f64, i: usize) -> Result<LogProb> {
    check_tail_args(n, p, i)?;
    let m = (n + 1) as u64;
    let q = 1.0 - p;
    let lo = (i + 1) as u64;
    let mode = (((m + 1) as f64) * p).floor() as u64;
    let start = mode.clamp(lo, m);

    let mut acc = LogSumExp::new();
    let mut k = start;
    loop {
        let t = ln_binomial_pmf(k, m, p, q);
        acc.push(t);
        if k == m || (k > start && t < acc.max() - CUTOFF_NATS) {
            break;
        }
        k += 1;
    }
    let mut k = start;
    while k > lo {
        k -= 1;
        let t = ln_binomial_pmf(k, m, p, q);
        acc.push(t);
        if t < acc.max() - CUTOFF_NATS {
            break;
        }
    }
    Ok(LogProb::from_ln(acc.ln()))
}

/// `P(|S'| <= i)`, the binomial lower tail that vanishes as `n` grows at fixed `i`.
pub fn binomial_cdf_tail_check(n: usize, p: f64, i: usize) -> Result<LogProb> {
    check_tail_args(n, p, i)?;
    let m = (n + 1) as u64;
    let q = 1.0 - p;
    let ln = (0..=i as u64).fold(f64::NEG_INFINITY, |acc, k| {
        log_add_exp(acc, ln_binomial_pmf(k, m, p, q))
    });
    Ok(LogProb::from_ln(ln))
}

fn conditioning_tail(params: &ModelParams) -> Result<LogProb> {
    let tail = size_tail(params.n, params.p, params.i)?;
    if tail.is_zero() {
        return Err(SpacingError::Conditioning { i: params.i });
    }
    Ok(tail)
}

/// Conditional mass of the scaled spacing at `d`.
pub fn pmf_scaled(params: &ModelParams, d: usize) -> Result<f64> {
    let tail = conditioning_tail(params)?;
    Ok(unconditional_spacing_prob(params, d)?.ratio(tail))
}

/// Mass of the unscaled spacing at `delta`, which must be a multiple of `1/n`.
pub fn pmf_delta(params: &ModelParams, delta: f64) -> Result<f64> {
    pmf_scaled(params, delta_to_steps(params.n, delta)?)
}

/// Converts `delta` to whole grid steps, rejecting off-grid values.
pub fn delta_to_steps(n: usize, delta: f64) -> Result<usize> {
    let x = delta * n as f64;
    let r = x.round();
    if !x.is_finite() || (x - r).abs() > 1e-9 * r.max(1.0) || r < 1.0 || r > n as f64 {
        return Err(SpacingError::domain("delta", delta, "n * delta must be an integer in 1..=n"));
    }
    Ok(r as usize)
}

pub fn cdf_scaled(params: &ModelParams, d: usize) -> Result<f64> {
    params.check_d(d)?;
    Ok(DistributionTable::new(*params)?.cdf(d))
}

/// Closed-form CDF of the first scaled spacing,
/// `[1 - q^d - d p q^n] / [1 - q^(n+1) - (n+1) p q^n]` with `q = 1 - p`.
pub fn cdf_scaled_closed_i1(n: usize, p: f64, d: usize) -> Result<f64> {
    ModelParams::new(n, p, 1)?.check_d(d)?;
    if p == 1.0 {
        return Ok(1.0);
    }
    let lq = (-p).ln_1p();
    let q_n = (n as f64 * lq).exp();
    let num = -(d as f64 * lq).exp_m1() - d as f64 * p * q_n;
    let den = -((n + 1) as f64 * lq).exp_m1() - (n + 1) as f64 * p * q_n;
    Ok(num / den)
}

fn check_limit_args(p: f64, d: usize) -> Result<()> {
    check_probability(p)?;
    if d < 1 {
        return Err(SpacingError::domain("d", d, "geometric support starts at 1"));
    }
    Ok(())
}

/// Geometric limit CDF `1 - (1-p)^d`.
pub fn limit_cdf(p: f64, d: usize) -> Result<f64> {
    check_limit_args(p, d)?;
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok(-(d as f64 * (-p).ln_1p()).exp_m1())
}

/// Geometric limit mass `p (1-p)^(d-1)`.
pub fn limit_pmf(p: f64, d: usize) -> Result<f64> {
    check_limit_args(p, d)?;
    if p == 1.0 {
        return Ok(if d == 1 { 1.0 } else { 0.0 });
    }
    Ok(p * ((d - 1) as f64 * (-p).ln_1p()).exp())
}

/// A truncated negative-binomial series next to its infinite sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinomialSum {
    /// `sum_{j=0}^{J} C(j, i-1) (1-p)^j`
    pub partial: f64,
    /// `(1-p)^(i-1) / p^i`
    pub closed: f64,
}

impl BinomialSum {
    pub fn relative_gap(&self) -> f64 {
        if self.closed == 0.0 {
            self.partial.abs()
        } else {
            (self.closed - self.partial).abs() / self.closed
        }
    }
}

pub fn binomial_sum_partial(p: f64, i: usize, upto: usize) -> Result<BinomialSum> {
    check_probability(p)?;
    if i < 1 {
        return Err(SpacingError::domain("i", i, "series index starts at 1"));
    }
    let lq = (-p).ln_1p();
    let k = (i - 1) as u64;
    let partial: CompensatedSum = ((i - 1)..=upto)
        .map(|j| (ln_binomial(j as u64, k) + ln_pow(lq, j as u64)).exp())
        .collect();
    let closed = (ln_pow(lq, k) - i as f64 * p.ln()).exp();
    Ok(BinomialSum {
        partial: partial.value(),
        closed,
    })
}

/// Truncation point after which the series tail is below double precision:
/// `i + ceil(60 / -ln(1-p))`.
pub fn identity_stopping_index(p: f64, i: usize) -> Result<usize> {
    check_probability(p)?;
    let rate = -(-p).ln_1p();
    Ok(i + (CUTOFF_NATS / rate).ceil() as usize)
}

/// Masses of the scaled spacing over `d = 1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    params: ModelParams,
    masses: Vec<f64>,
}

impl DistributionTable {
    /// Builds the whole table: in plain arithmetic for small grids with a
    /// comfortably large conditioning tail, otherwise in `O(n)` from prefix
    /// log-sums of the survivor law.
    pub fn new(params: ModelParams) -> Result<Self> {
        let tail = conditioning_tail(&params)?;
        if params.n <= DIRECT_MAX_N && tail.ln() > DIRECT_MIN_LN_TAIL {
            return Ok(DistributionTable {
                params,
                masses: direct_masses(&params),
            });
        }
        Self::in_log_domain(params, tail)
    }

    fn in_log_domain(params: ModelParams, tail: LogProb) -> Result<Self> {
        let (n, i, p) = (params.n, params.i, params.p);
        let (ln_p, ln_q) = (params.ln_p(), params.ln_q());

        // prefix[m] = ln sum_{j=i-1}^{m} survivor weight, for m = 0..n-1
        let mut prefix = vec![f64::NEG_INFINITY; n];
        let mut acc = LogSumExp::new();
        let mut prev = f64::NEG_INFINITY;
        let mut saturated = false;
        for (m, slot) in prefix.iter_mut().enumerate() {
            if m + 1 >= i && !saturated {
                let w = ln_survivor_weight(p, i, m);
                acc.push(w);
                saturated = w < prev && w < acc.max() - CUTOFF_NATS;
                prev = w;
            }
            *slot = acc.ln();
        }

        let masses = (1..=n)
            .map(|d| {
                let ln = ln_p + ln_pow(ln_q, (d - 1) as u64) + prefix[n - d];
                LogProb::from_ln(ln).ratio(tail)
            })
            .collect();
        Ok(DistributionTable { params, masses })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Mass at `d`; zero outside `1..=n`.
    pub fn mass(&self, d: usize) -> f64 {
        if d < 1 || d > self.masses.len() {
            0.0
        } else {
            self.masses[d - 1]
        }
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `(d, mass)` pairs in increasing `d`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.masses.iter().enumerate().map(|(k, &m)| (k + 1, m))
    }

    pub fn cdf(&self, d: usize) -> f64 {
        let upto = d.min(self.masses.len());
        self.masses[..upto].iter().copied().collect::<CompensatedSum>().value()
    }

    /// Cumulative masses for every `d`, compensated.
    pub fn cdf_values(&self) -> Vec<f64> {
        let mut acc = CompensatedSum::new();
        self.masses
            .iter()
            .map(|&m| {
                acc.add(m);
                acc.value()
            })
            .collect()
    }

    pub fn total(&self) -> f64 {
        self.cdf(self.masses.len())
    }
}

fn choose_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |c, t| c * (n - t) as f64 / (t + 1) as f64)
}

// Evaluates the closed form term by term in doubles. Callers guarantee
// n <= DIRECT_MAX_N, so every binomial coefficient stays below 2^512.
fn direct_masses(params: &ModelParams) -> Vec<f64> {
    let (n, p, i) = (params.n, params.p, params.i);
    let q = 1.0 - p;
    let qpow = |k: usize| if k == 0 { 1.0 } else { q.powi(k as i32) };

    let term = |k: usize| choose_f64(n + 1, k) * p.powi(k as i32) * qpow(n + 1 - k);
    // 1 - lower is cancellation-free while the lower tail is small, and its
    // few coefficients are exact; otherwise sum the upper tail
    let lower = (0..=i).map(term).collect::<CompensatedSum>().value();
    let tail = if lower < 0.5 {
        1.0 - lower
    } else {
        ((i + 1)..=(n + 1)).map(term).collect::<CompensatedSum>().value()
    };

    let head = p.powi(i as i32 + 1);
    let mut inner = CompensatedSum::new();
    // inner sums grow as d shrinks, so fill from the right
    let mut masses = vec![0.0; n];
    for d in (1..=n).rev() {
        let j = n - d;
        if j + 1 >= i {
            inner.add(choose_f64(j, i - 1) * qpow(j + 1 - i));
        }
        masses[d - 1] = head * qpow(d - 1) * inner.value() / tail;
    }
    masses
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, p: f64, i: usize) -> ModelParams {
        ModelParams::new(n, p, i).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0, 0.5, 1).is_err());
        assert!(ModelParams::new(3, 0.0, 1).is_err());
        assert!(ModelParams::new(3, 1.5, 1).is_err());
        assert!(ModelParams::new(3, f64::NAN, 1).is_err());
        assert!(ModelParams::new(3, 0.5, 0).is_err());
        assert!(ModelParams::new(3, 0.5, 4).is_err());
        assert!(unconditional_spacing_prob(&params(2, 0.5, 1), 0).is_err());
        assert!(unconditional_spacing_prob(&params(2, 0.5, 1), 3).is_err());
        assert!(size_tail(2, 0.5, 3).is_err());
        assert!(survivor_index_pmf(5, 0.5, 1, 6).is_err());
        assert!(limit_cdf(0.0, 1).is_err());
        assert!(limit_cdf(0.5, 0).is_err());
    }

    #[test]
    fn unconditional_examples() {
        let v = unconditional_spacing_prob(&params(2, 0.5, 1), 1).unwrap();
        assert!((v.prob() - 0.375).abs() < 1e-15);
        assert!(unconditional_spacing_prob(&params(2, 0.5, 2), 2).unwrap().is_zero());
        let v = unconditional_spacing_prob(&params(2, 1.0, 1), 1).unwrap();
        assert_eq!(v.prob(), 1.0);
    }

    #[test]
    fn size_tail_examples() {
        assert!((size_tail(2, 0.5, 1).unwrap().prob() - 0.5).abs() < 1e-15);
        assert!((size_tail(2, 0.5, 2).unwrap().prob() - 0.125).abs() < 1e-15);
        assert_eq!(size_tail(5, 1.0, 3).unwrap().prob(), 1.0);
        assert!((size_tail(2, 0.5, 0).unwrap().prob() - 0.875).abs() < 1e-15);
    }

    #[test]
    fn size_tail_tiny_tail_keeps_relative_precision() {
        // P(Bin(11, 0.01) > 10) = 0.01^11 exactly
        let t = size_tail(10, 0.01, 10).unwrap();
        assert!((t.ln() - 11.0 * 0.01f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn pmf_examples() {
        let p = params(2, 0.5, 1);
        assert!((pmf_scaled(&p, 1).unwrap() - 0.75).abs() < 1e-15);
        assert!((pmf_scaled(&p, 2).unwrap() - 0.25).abs() < 1e-15);
        assert!((pmf_scaled(&params(2, 0.5, 2), 1).unwrap() - 1.0).abs() < 1e-15);
        assert!((pmf_delta(&p, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(pmf_delta(&p, 0.3).is_err());
        assert!(pmf_delta(&p, 0.0).is_err());
    }

    #[test]
    fn cdf_examples() {
        let p = params(2, 0.5, 1);
        assert!((cdf_scaled(&p, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((cdf_scaled(&p, 1).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(cdf_scaled(&params(10, 1.0, 1), 1).unwrap(), 1.0);
    }

    #[test]
    fn closed_form_examples() {
        assert!((cdf_scaled_closed_i1(2, 0.5, 1).unwrap() - 0.75).abs() < 1e-15);
        assert!((cdf_scaled_closed_i1(2, 0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        let v = cdf_scaled_closed_i1(50_000, 0.1, 1).unwrap();
        assert!((v - 0.1).abs() < 1e-12);
        assert!((v - limit_cdf(0.1, 1).unwrap()).abs() < 1e-12);
        assert_eq!(cdf_scaled_closed_i1(7, 1.0, 3).unwrap(), 1.0);
        let v = cdf_scaled_closed_i1(1_000_000, 0.1, 20).unwrap();
        assert!(v.is_finite() && (v - limit_cdf(0.1, 20).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn limit_examples() {
        assert_eq!(limit_cdf(0.5, 1).unwrap(), 0.5);
        assert!((limit_cdf(0.1, 10).unwrap() - (1.0 - 0.9f64.powi(10))).abs() < 1e-15);
        assert_eq!(limit_cdf(1.0, 3).unwrap(), 1.0);
        assert_eq!(limit_pmf(1.0, 1).unwrap(), 1.0);
        assert_eq!(limit_pmf(1.0, 2).unwrap(), 0.0);
        assert!((limit_pmf(0.5, 3).unwrap() - 0.125).abs() < 1e-16);
    }

    #[test]
    fn survivor_examples() {
        assert!((survivor_index_pmf(5, 0.5, 1, 0).unwrap().prob() - 0.5).abs() < 1e-15);
        assert!((survivor_index_pmf(5, 0.5, 1, 2).unwrap().prob() - 0.125).abs() < 1e-15);
        assert!(survivor_index_pmf(5, 0.5, 2, 0).unwrap().is_zero());
    }

    #[test]
    fn binomial_sum_examples() {
        let s = binomial_sum_partial(0.5, 1, 200).unwrap();
        assert_eq!(s.closed, 2.0);
        assert!((s.partial - 2.0).abs() < 1e-15);
        let s = binomial_sum_partial(0.5, 2, 200).unwrap();
        assert!((s.closed - 2.0).abs() < 1e-15);
        assert!((s.partial - 2.0).abs() < 1e-13);
        for upto in 0..6 {
            let s = binomial_sum_partial(1.0, 3, upto).unwrap();
            assert_eq!((s.partial, s.closed), (0.0, 0.0));
        }
        let s = binomial_sum_partial(1.0, 1, 4).unwrap();
        assert_eq!((s.partial, s.closed), (1.0, 1.0));
        // J below i-1: empty sum
        assert_eq!(binomial_sum_partial(0.5, 4, 1).unwrap().partial, 0.0);
    }

    #[test]
    fn lower_tail_examples() {
        let v = binomial_cdf_tail_check(10_000, 0.1, 5).unwrap();
        assert!(v.ln() < -200.0, "{}", v.ln());
        let v = binomial_cdf_tail_check(2, 0.5, 2).unwrap();
        assert!((v.ln() - (7.0f64 / 8.0).ln()).abs() < 1e-15);
        assert!(binomial_cdf_tail_check(5, 1.0, 3).unwrap().is_zero());
    }

    #[test]
    fn lower_and_upper_tails_complement() {
        for &(n, p, i) in &[(7, 0.3, 2), (100, 0.05, 4), (1000, 0.5, 480)] {
            let lo = binomial_cdf_tail_check(n, p, i).unwrap().prob();
            let hi = size_tail(n, p, i).unwrap().prob();
            assert!((lo + hi - 1.0).abs() < 1e-13, "n={n} p={p} i={i}");
        }
    }

    #[test]
    fn table_support_cutoff_is_exact_zero() {
        let t = DistributionTable::new(params(12, 0.3, 4)).unwrap();
        for (d, m) in t.iter() {
            if d > 12 - 4 + 1 {
                assert_eq!(m, 0.0, "d={d}");
            } else {
                assert!(m > 0.0, "d={d}");
            }
        }
        assert!((t.total() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn table_agrees_with_pointwise_pmf() {
        let pr = params(40, 0.2, 3);
        let t = DistributionTable::new(pr).unwrap();
        for d in 1..=40 {
            let m = pmf_scaled(&pr, d).unwrap();
            assert!((t.mass(d) - m).abs() < 1e-15, "d={d}");
        }
        assert_eq!(t.mass(0), 0.0);
        assert_eq!(t.mass(41), 0.0);
    }

    #[test]
    fn direct_and_log_paths_agree() {
        for &(n, p, i) in &[(2, 0.5, 1), (37, 0.1, 3), (200, 0.02, 2), (512, 0.6, 40), (90, 0.99, 90)] {
            let pr = params(n, p, i);
            let tail = size_tail(n, p, i).unwrap();
            let direct = DistributionTable::new(pr).unwrap();
            let logged = DistributionTable::in_log_domain(pr, tail).unwrap();
            for d in 1..=n {
                let (a, b) = (direct.mass(d), logged.mass(d));
                assert!((a - b).abs() <= 1e-13 * a.max(1e-300) + 1e-300, "n={n} p={p} i={i} d={d}: {a} vs {b}");
            }
        }
        let t = DistributionTable::new(params(2, 0.5, 1)).unwrap();
        assert_eq!(t.masses(), &[0.75, 0.25]);
    }

    #[test]
    fn stopping_index() {
        assert_eq!(identity_stopping_index(1.0, 3).unwrap(), 3);
        assert_eq!(identity_stopping_index(0.5, 1).unwrap(), 1 + 87);
    }
}
