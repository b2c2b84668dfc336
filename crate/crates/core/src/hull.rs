//! The ordered simplex and exact convex-hull queries inside it.

use crate::error::{Error, Result};
use crate::lp::feasible_point;
use crate::rational::{display_vec, sum, Rational};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A point of the ordered simplex: `0 <= x_1 <= ... <= x_n`, `sum x_i = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexPoint(Vec<Rational>);

impl SimplexPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::NotInSimplex("empty vector".into()));
        }
        let ordered = !coords[0].is_negative() && coords.windows(2).all(|w| w[0] <= w[1]);
        if !ordered || !sum(&coords).is_one() {
            return Err(Error::NotInSimplex(display_vec(&coords)));
        }
        Ok(SimplexPoint(coords))
    }

    /// The vertex `E_i` (1-based): zeros in the first `i - 1` coordinates,
    /// then `1 / (n - i + 1)`.
    pub fn vertex(n: usize, i: usize) -> Self {
        assert!(1 <= i && i <= n, "vertex index {i} out of range 1..={n}");
        let w = Rational::one() / Rational::from_integer((n - i + 1).into());
        SimplexPoint((0..n).map(|j| if j + 1 < i { Rational::zero() } else { w.clone() }).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

impl fmt::Display for SimplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_vec(&self.0))
    }
}

/// `x / sum(x)`.
pub fn normalize(x: &[Rational]) -> Result<SimplexPoint> {
    if x.iter().any(Signed::is_negative) || x.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotSorted);
    }
    let s = sum(x);
    if s.is_zero() {
        return Err(Error::ZeroSum);
    }
    Ok(SimplexPoint(x.iter().map(|v| v / &s).collect()))
}

/// Convex weights expressing `x` over `generators`, if `x` lies in their hull.
pub fn convex_weights(generators: &[SimplexPoint], x: &SimplexPoint) -> Option<Vec<Rational>> {
    assert!(!generators.is_empty(), "hull of no points");
    let n = x.dim();
    if generators.iter().any(|g| g.dim() != n) {
        return None;
    }
    // One row per coordinate; the simplex sum row is implied by the others
    // together with sum x = 1, but keeping it explicit is harmless.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|j| generators.iter().map(|g| g.0[j].clone()).collect())
        .collect();
    let mut b: Vec<Rational> = x.0.clone();
    a.push(vec![Rational::one(); generators.len()]);
    b.push(Rational::one());
    feasible_point(a, b)
}

pub fn hull_contains(generators: &[SimplexPoint], x: &SimplexPoint) -> bool {
    convex_weights(generators, x).is_some()
}

/// Points that are not convex combinations of the others, in input order.
/// Exact duplicates keep their first occurrence only.
pub fn extreme_points(points: &[SimplexPoint]) -> Vec<SimplexPoint> {
    let mut unique: Vec<SimplexPoint> = Vec::with_capacity(points.len());
    for p in points {
        if !unique.contains(p) {
            unique.push(p.clone());
        }
    }
    if unique.len() == 1 {
        return unique;
    }
    (0..unique.len())
        .filter(|&i| {
            let others: Vec<SimplexPoint> = unique
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            !hull_contains(&others, &unique[i])
        })
        .map(|i| unique[i].clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn normalize_examples() {
        let a3 = normalize(&v(&[1, 1, 2, 4])).unwrap();
        assert_eq!(a3.coords(), &[frac(1, 8), frac(1, 8), frac(1, 4), frac(1, 2)]);
        assert_eq!(normalize(&v(&[0, 0, 0, 1])).unwrap(), SimplexPoint::vertex(4, 4));
        assert_eq!(normalize(&v(&[3, 3, 3, 3])).unwrap(), SimplexPoint::vertex(4, 1));
        assert_eq!(normalize(&v(&[0, 0])), Err(Error::ZeroSum));
        assert_eq!(normalize(&v(&[2, 1])), Err(Error::NotSorted));
    }

    #[test]
    fn vertices() {
        assert_eq!(SimplexPoint::vertex(4, 3).coords(), &[int(0), int(0), frac(1, 2), frac(1, 2)]);
        assert!(SimplexPoint::new(v(&[1, 0])).is_err());
    }

    #[test]
    fn collinear_points() {
        let p = |xs: &[i64]| normalize(&v(xs)).unwrap();
        let a = p(&[1, 1, 1, 1]);
        let b = p(&[0, 0, 0, 1]);
        // Midpoint of a and b.
        let mid = SimplexPoint::new(vec![frac(1, 8), frac(1, 8), frac(1, 8), frac(5, 8)]).unwrap();
        assert_eq!(extreme_points(&[a.clone(), mid.clone(), b.clone()]), vec![a.clone(), b.clone()]);
        assert_eq!(extreme_points(std::slice::from_ref(&mid)), vec![mid.clone()]);
        assert!(hull_contains(&[a.clone(), b.clone()], &mid));
        assert!(!hull_contains(&[a.clone(), mid], &b));
        let w = convex_weights(&[a.clone(), b.clone()], &a).unwrap();
        assert_eq!(w, vec![int(1), int(0)]);
    }
}
