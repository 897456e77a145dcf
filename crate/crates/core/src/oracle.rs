//! Exact ground truth for small grids.
//!
//! [`enumerate_conditional_pmf`] walks every survival pattern of the
//! `n + 1` grid points and adds up pattern probabilities by definition;
//! [`exact_closed_form_pmf`] evaluates the closed-form law in the same exact
//! arithmetic. The two must agree as rationals, term by term.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, SpacingError};

pub type Rational = num_rational::BigRational;

/// Largest grid the enumerator accepts (`2^17` patterns).
pub const MAX_ENUMERATION_N: usize = 16;

/// Parses `a/b` or a plain integer into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || SpacingError::domain("p", s, "expected a fraction a/b");
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Conditional law of the scaled spacing with exact rational masses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTable {
    n: usize,
    p: Rational,
    i: usize,
    masses: BTreeMap<usize, Rational>,
}

impl ExactTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn mass(&self, d: usize) -> Rational {
        self.masses.get(&d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.masses.iter().map(|(&d, m)| (d, m))
    }

    pub fn total(&self) -> Rational {
        self.masses.values().fold(Rational::zero(), |acc, m| acc + m)
    }

    /// Masses rounded to the nearest double, indexed by `d - 1`.
    pub fn to_f64(&self) -> Vec<f64> {
        self.masses
            .values()
            .map(|m| m.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for ExactTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, m) in self.iter() {
            writeln!(f, "{d}: {m}")?;
        }
        Ok(())
    }
}

fn check_args(n: usize, p: &Rational, i: usize) -> Result<()> {
    if n < 1 {
        return Err(SpacingError::domain("n", n, "grid needs at least one interval"));
    }
    if n > MAX_ENUMERATION_N {
        return Err(SpacingError::Size {
            n,
            max: MAX_ENUMERATION_N,
        });
    }
    if !p.is_positive() || p > &Rational::one() {
        return Err(SpacingError::domain("p", p, "survival probability must lie in (0, 1]"));
    }
    if i < 1 || i > n {
        return Err(SpacingError::domain("i", i, "spacing index must lie in 1..=n"));
    }
    Ok(())
}

fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

/// Conditional law computed from its definition: every survival pattern with
/// more than `i` survivors contributes its probability to the gap it shows.
pub fn enumerate_conditional_pmf(n: usize, p: &Rational, i: usize) -> Result<ExactTable> {
    check_args(n, p, i)?;
    let points = n + 1;
    let q = Rational::one() - p;

    // Pattern probability depends only on the survivor count, so tally
    // patterns by (survivors, gap) and weight once at the end.
    let mut tally = vec![vec![0u64; n + 1]; points + 1];
    for pattern in 0u32..(1u32 << points) {
        let survivors = pattern.count_ones() as usize;
        if survivors <= i {
            continue;
        }
        let mut rest = pattern;
        for _ in 1..i {
            rest &= rest - 1;
        }
        let left = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let right = rest.trailing_zeros() as usize;
        tally[survivors][right - left] += 1;
    }

    let weights: Vec<Rational> = (0..=points)
        .map(|k| pow(p, k) * pow(&q, points - k))
        .collect();
    let mut masses = BTreeMap::new();
    for d in 1..=n {
        let m = (0..=points).fold(Rational::zero(), |acc, k| {
            acc + &weights[k] * Rational::from_integer(BigInt::from(tally[k][d]))
        });
        masses.insert(d, m);
    }
    let total = masses.values().fold(Rational::zero(), |acc, m| acc + m);
    for m in masses.values_mut() {
        *m = &*m / &total;
    }
    Ok(ExactTable {
        n,
        p: p.clone(),
        i,
        masses,
    })
}

/// The closed-form law evaluated in exact arithmetic.
pub fn exact_closed_form_pmf(n: usize, p: &Rational, i: usize) -> Result<ExactTable> {
    check_args(n, p, i)?;
    let q = Rational::one() - p;
    let choose = |a: usize, b: usize| Rational::from_integer(binomial(BigInt::from(a), BigInt::from(b)));

    let lower = (0..=i).fold(Rational::zero(), |acc, k| {
        acc + choose(n + 1, k) * pow(p, k) * pow(&q, n + 1 - k)
    });
    let denominator = Rational::one() - lower;
    if denominator.is_zero() {
        return Err(SpacingError::Conditioning { i });
    }

    let head = pow(p, i + 1);
    let mut masses = BTreeMap::new();
    for d in 1..=n {
        let inner = if i - 1 > n - d {
            Rational::zero()
        } else {
            ((i - 1)..=(n - d)).fold(Rational::zero(), |acc, j| {
                acc + choose(j, i - 1) * pow(&q, j + 1 - i)
            })
        };
        let m = &head * pow(&q, d - 1) * inner / &denominator;
        masses.insert(d, m);
    }
    Ok(ExactTable {
        n,
        p: p.clone(),
        i,
        masses,
    })
}

/// Both exact routes for one parameter triple.
#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub enumerated: ExactTable,
    pub closed_form: ExactTable,
}

impl OracleCheck {
    pub fn run(n: usize, p: &Rational, i: usize) -> Result<Self> {
        Ok(OracleCheck {
            enumerated: enumerate_conditional_pmf(n, p, i)?,
            closed_form: exact_closed_form_pmf(n, p, i)?,
        })
    }

    pub fn matches(&self) -> bool {
        self.enumerated == self.closed_form
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(r("2/4"), r("1/2"));
        assert_eq!(r(" 3 / 9 "), r("1/3"));
        assert_eq!(r("1"), Rational::one());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn enumeration_examples() {
        let t = enumerate_conditional_pmf(2, &r("1/2"), 1).unwrap();
        assert_eq!(t.mass(1), r("3/4"));
        assert_eq!(t.mass(2), r("1/4"));
        let t = enumerate_conditional_pmf(2, &r("1/2"), 2).unwrap();
        assert_eq!(t.mass(1), Rational::one());
        assert_eq!(t.mass(2), Rational::zero());
        let t = enumerate_conditional_pmf(1, &r("1/2"), 1).unwrap();
        assert_eq!(t.mass(1), Rational::one());
        assert_eq!(t.iter().count(), 1);
    }

    #[test]
    fn closed_form_examples() {
        let t = exact_closed_form_pmf(2, &r("1/2"), 1).unwrap();
        assert_eq!(t.mass(1), r("3/4"));
        assert_eq!(t.mass(2), r("1/4"));
        for (n, p, i) in [(2, "1/3", 1), (3, "1/2", 2)] {
            assert_eq!(
                exact_closed_form_pmf(n, &r(p), i).unwrap(),
                enumerate_conditional_pmf(n, &r(p), i).unwrap()
            );
        }
    }

    #[test]
    fn tables_sum_to_one_exactly() {
        for n in 1..=6 {
            for i in 1..=n {
                let e = enumerate_conditional_pmf(n, &r("2/7"), i).unwrap();
                let c = exact_closed_form_pmf(n, &r("2/7"), i).unwrap();
                assert_eq!(e.total(), Rational::one());
                assert_eq!(c.total(), Rational::one());
            }
        }
    }

    #[test]
    fn p_one_is_degenerate() {
        let t = enumerate_conditional_pmf(5, &Rational::one(), 3).unwrap();
        assert_eq!(t.mass(1), Rational::one());
        assert!(OracleCheck::run(5, &Rational::one(), 3).unwrap().matches());
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            enumerate_conditional_pmf(17, &r("1/2"), 1).unwrap_err(),
            SpacingError::Size { n: 17, max: 16 }
        );
        assert!(enumerate_conditional_pmf(3, &r("0"), 1).is_err());
        assert!(enumerate_conditional_pmf(3, &r("3/2"), 1).is_err());
        assert!(enumerate_conditional_pmf(3, &r("-1/2"), 1).is_err());
        assert!(exact_closed_form_pmf(3, &r("1/2"), 4).is_err());
        assert!(exact_closed_form_pmf(0, &r("1/2"), 1).is_err());
    }

    #[test]
    fn largest_grid_enumerates() {
        let t = enumerate_conditional_pmf(16, &r("1/3"), 2).unwrap();
        assert_eq!(t.total(), Rational::one());
        assert_eq!(t, exact_closed_form_pmf(16, &r("1/3"), 2).unwrap());
    }
}
