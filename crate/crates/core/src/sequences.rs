//! Point sets on `[0, 1]` that get thinned: the uniform grid, Farey
//! fractions and irrational rotations.

use std::fmt;

use crate::error::{Result, SpacingError};

/// Which generator produced a [`PointSet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Descriptor {
    Grid { n: usize },
    Farey { order: u64 },
    Rotation { alpha: f64, count: usize },
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Grid { n } => write!(f, "grid({n})"),
            Descriptor::Farey { order } => write!(f, "farey({order})"),
            Descriptor::Rotation { alpha, count } => write!(f, "rotation({alpha},{count})"),
        }
    }
}

/// Strictly increasing points in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<f64>,
    descriptor: Descriptor,
}

impl PointSet {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn descriptor(&self) -> Descriptor {
        self.descriptor
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid size when this is a uniform grid.
    pub fn grid_n(&self) -> Option<usize> {
        match self.descriptor {
            Descriptor::Grid { n } => Some(n),
            _ => None,
        }
    }
}

/// `{0, 1/n, ..., 1}`.
pub fn grid(n: usize) -> Result<PointSet> {
    if n < 1 {
        return Err(SpacingError::domain("n", n, "grid needs at least one interval"));
    }
    let points = (0..=n).map(|k| k as f64 / n as f64).collect();
    Ok(PointSet {
        points,
        descriptor: Descriptor::Grid { n },
    })
}

/// Reduced fraction `num/den` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Farey sequence of order `order` as exact fractions, via the next-term
/// recurrence `c/d -> (k c - a)/(k d - b)` with `k = (order + b) / d`.
pub fn farey_fractions(order: u64) -> Result<Vec<Fraction>> {
    if order < 1 {
        return Err(SpacingError::domain("Q", order, "Farey order must be at least 1"));
    }
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, order);
    let mut out = vec![Fraction { num: 0, den: 1 }];
    while c <= order {
        out.push(Fraction { num: c, den: d });
        let k = (order + b) / d;
        let next = (k * c - a, k * d - b);
        a = c;
        b = d;
        c = next.0;
        d = next.1;
    }
    Ok(out)
}

pub fn farey(order: u64) -> Result<PointSet> {
    let points = farey_fractions(order)?.into_iter().map(Fraction::value).collect();
    Ok(PointSet {
        points,
        descriptor: Descriptor::Farey { order },
    })
}

/// Sorted distinct values of `k alpha mod 1` for `k = 1..=count`.
/// A value landing exactly on 0 (rational `alpha` only) is kept.
pub fn rotation(alpha: f64, count: usize) -> Result<PointSet> {
    if count < 1 {
        return Err(SpacingError::domain("count", count, "need at least one point"));
    }
    if !alpha.is_finite() {
        return Err(SpacingError::domain("alpha", alpha, "rotation angle must be finite"));
    }
    let mut points: Vec<f64> = (1..=count)
        .map(|k| {
            let x = (k as f64 * alpha).rem_euclid(1.0);
            // rem_euclid can round up to exactly 1.0 for tiny negative products
            if x >= 1.0 { 0.0 } else { x }
        })
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    Ok(PointSet {
        points,
        descriptor: Descriptor::Rotation { alpha, count },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strictly_increasing_in_unit(ps: &PointSet) -> bool {
        ps.points().windows(2).all(|w| w[0] < w[1])
            && ps.points().iter().all(|&x| (0.0..=1.0).contains(&x))
    }

    fn totient(q: u64) -> u64 {
        (1..=q).filter(|&a| num_integer::gcd(a, q) == 1).count() as u64
    }

    #[test]
    fn grid_points() {
        assert_eq!(grid(2).unwrap().points(), &[0.0, 0.5, 1.0]);
        assert_eq!(grid(1).unwrap().points(), &[0.0, 1.0]);
        assert_eq!(grid(4).unwrap().points(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = grid(1000).unwrap();
        assert_eq!(g.len(), 1001);
        assert_eq!(g.grid_n(), Some(1000));
        assert!(strictly_increasing_in_unit(&g));
        assert!(grid(0).is_err());
    }

    #[test]
    fn farey_small_orders() {
        assert_eq!(farey(1).unwrap().points(), &[0.0, 1.0]);
        assert_eq!(
            farey(3).unwrap().points(),
            &[0.0, 1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0]
        );
        assert_eq!(farey(5).unwrap().len(), 11);
        assert!(farey(0).is_err());
    }

    #[test]
    fn farey_counts_and_neighbors() {
        for order in 1..=60u64 {
            let fr = farey_fractions(order).unwrap();
            let expected = 1 + (1..=order).map(totient).sum::<u64>();
            assert_eq!(fr.len() as u64, expected, "order {order}");
            for w in fr.windows(2) {
                let (l, r) = (w[0], w[1]);
                assert_eq!(r.num * l.den - l.num * r.den, 1, "{l} {r}");
                assert!(l.den <= order && r.den <= order);
            }
            assert!(strictly_increasing_in_unit(&farey(order).unwrap()));
        }
    }

    #[test]
    fn rotation_examples() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let r = rotation(golden, 3).unwrap();
        let expected = [(2.0 * golden).fract(), golden, (3.0 * golden).fract()];
        assert_eq!(r.points(), &expected);
        assert!((r.points()[0] - 0.236).abs() < 1e-3);
        assert!((r.points()[2] - 0.854).abs() < 1e-3);

        assert_eq!(rotation(0.5, 4).unwrap().points(), &[0.0, 0.5]);
        assert_eq!(rotation(0.3, 1).unwrap().points(), &[0.3]);
        assert_eq!(rotation(2.25, 1).unwrap().points(), &[0.25]);
        assert_eq!(rotation(-0.25, 1).unwrap().points(), &[0.75]);
        assert!(rotation(0.3, 0).is_err());
        assert!(rotation(f64::NAN, 3).is_err());
    }

    #[test]
    fn rotation_is_strictly_increasing() {
        let r = rotation(2f64.sqrt(), 10_000).unwrap();
        assert_eq!(r.len(), 10_000);
        assert!(strictly_increasing_in_unit(&r));
    }
}
