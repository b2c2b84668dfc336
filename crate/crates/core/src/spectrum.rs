//! Self-similar systems, limit sets and the spectrum functional.

use crate::error::{Error, Result};
use crate::hull::{normalize, SimplexPoint};
use crate::path::{PlPath, Trajectory};
use crate::rational::{display_vec, Rational};
use crate::validate::{validate, SystemClass};
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A linear map `R^n -> R^m` given by its rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearMap {
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl LinearMap {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::InvalidMap("map has no rows".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidMap("rows have no coefficients".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMap(format!(
                    "row {} has {} coefficients, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            if row.iter().all(Zero::is_zero) {
                return Err(Error::InvalidMap(format!("row {} is zero", i + 1)));
            }
        }
        Ok(LinearMap { n, rows })
    }

    /// The single-row map `x_1 + ... + x_n`.
    pub fn coordinate_sum(n: usize) -> Self {
        LinearMap::new(vec![vec![Rational::one(); n]]).expect("nonzero row")
    }

    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.n, "vector length differs from map input dimension");
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        LinearMap::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|a| a * c).collect())
                .collect(),
        )
    }
}

/// A system on `[q_0, infinity)` with `P(rho q) = rho P(q)`, stored as one
/// period `[q_0, rho q_0]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelfSimilarSystem {
    base: PlPath,
    ratio: Rational,
    class: SystemClass,
}

impl SelfSimilarSystem {
    /// Checks the period shape and validates two consecutive periods against
    /// `class`. For rigid systems this checks the grid conditions on those two
    /// periods only.
    pub fn new(base: PlPath, ratio: Rational, class: SystemClass) -> Result<Self> {
        if ratio <= Rational::one() {
            return Err(Error::BadParameters(format!("ratio must exceed 1, got {ratio}")));
        }
        if !base.start().is_positive() {
            return Err(Error::BadParameters(format!("q_0 must be positive, got {}", base.start())));
        }
        if *base.end() != base.start() * &ratio {
            return Err(Error::MalformedPath(format!(
                "period ends at {} but rho q_0 = {}",
                base.end(),
                base.start() * &ratio
            )));
        }
        let expected: Vec<Rational> = base.start_value().iter().map(|x| x * &ratio).collect();
        if base.end_value() != expected.as_slice() {
            return Err(Error::MalformedPath(format!(
                "P(rho q_0) = {} differs from rho P(q_0) = {}",
                display_vec(base.end_value()),
                display_vec(&expected)
            )));
        }
        let sys = SelfSimilarSystem { base, ratio, class };
        let report = validate(&sys.unroll(2), &sys.class)?;
        if !report.valid() {
            return Err(Error::InvalidSystem(report.to_string().trim().to_string()));
        }
        Ok(sys)
    }

    pub fn base(&self) -> &PlPath {
        &self.base
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn class(&self) -> &SystemClass {
        &self.class
    }

    pub fn q0(&self) -> &Rational {
        self.base.start()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn is_proper(&self) -> bool {
        self.base.end_value()[0].is_positive()
    }

    /// `rho^k` and `q / rho^k` for the unique `k >= 0` putting the latter in
    /// `[q_0, rho q_0)`.
    fn reduce(&self, q: &Rational) -> Result<(Rational, Rational)> {
        if q < self.q0() {
            return Err(Error::OutOfDomain {
                q: q.clone(),
                start: self.q0().clone(),
                end: "infinity".into(),
            });
        }
        let mut scale = Rational::one();
        let mut r = q.clone();
        let top = self.base.end();
        while r >= *top {
            r /= &self.ratio;
            scale *= &self.ratio;
        }
        Ok((scale, r))
    }

    pub fn eval(&self, q: &Rational) -> Result<Vec<Rational>> {
        let (scale, r) = self.reduce(q)?;
        Ok(self.base.eval(&r)?.into_iter().map(|x| x * &scale).collect())
    }

    /// The first `periods` periods as a single path on `[q_0, rho^periods q_0]`.
    pub fn unroll(&self, periods: usize) -> PlPath {
        assert!(periods >= 1, "at least one period");
        let mut path = self.base.clone();
        let mut piece = self.base.clone();
        for _ in 1..periods {
            piece = piece.scaled(&self.ratio);
            path = path.concat(&piece).expect("consecutive periods meet");
        }
        path
    }

    /// The same system with its period taken as `[q, rho q]`, `q_0 <= q`.
    pub fn rebase(&self, q: &Rational) -> Result<SelfSimilarSystem> {
        let (scale, r) = self.reduce(q)?;
        let tail = if r == *self.q0() {
            self.base.clone()
        } else {
            let head = self.base.restrict(&r, self.base.end())?;
            let next = self.base.scaled(&self.ratio).restrict(self.base.end(), &(&r * &self.ratio))?;
            head.concat(&next)?
        };
        SelfSimilarSystem::new(tail.scaled(&scale), self.ratio.clone(), self.class.clone())
    }

    /// True iff the slope changes across the period junction `rho q_0`.
    pub fn junction_is_division(&self) -> bool {
        let last = self.base.segment(self.base.num_segments() - 1).slope();
        let first = self.base.segment(0).slope();
        last != first
    }
}

impl Trajectory for SelfSimilarSystem {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn domain_start(&self) -> &Rational {
        self.q0()
    }

    fn domain_end(&self) -> Option<Rational> {
        None
    }

    fn eval(&self, q: &Rational) -> Result<Vec<Rational>> {
        SelfSimilarSystem::eval(self, q)
    }

    fn division_numbers_in(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let lo = lo.max(self.q0()).clone();
        if *hi < lo {
            return Vec::new();
        }
        let junction = self.junction_is_division();
        let (mut scale, _) = self.reduce(&lo).expect("lo >= q_0");
        let mut out = Vec::new();
        loop {
            let period_start = self.q0() * &scale;
            if period_start > *hi {
                break;
            }
            for (i, q) in self.base.breakpoints().iter().enumerate() {
                if i + 1 == self.base.breakpoints().len() {
                    continue;
                }
                if i == 0 && !(junction || scale.is_one()) {
                    continue;
                }
                let x = q * &scale;
                if x >= lo && x <= *hi {
                    out.push(x);
                }
            }
            scale *= &self.ratio;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpectrumMode {
    Exact,
    /// Minimum over the abscissa window `[lo, hi]`.
    Estimate { lo: Rational, hi: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpectrumPoint {
    pub values: Vec<Rational>,
    pub mode: SpectrumMode,
}

impl SpectrumPoint {
    pub fn exact(values: Vec<Rational>) -> Self {
        SpectrumPoint { values, mode: SpectrumMode::Exact }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == SpectrumMode::Exact
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

impl fmt::Display for SpectrumPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display_vec(&self.values))?;
        match &self.mode {
            SpectrumMode::Exact => f.write_str(" [exact]"),
            SpectrumMode::Estimate { lo, hi } => write!(f, " [estimate on [{lo}, {hi}]]"),
        }
    }
}

/// Normalized division points of one period, deduplicated in order. Their
/// convex hull is `K(P)`.
pub fn limit_set_vertices(sys: &SelfSimilarSystem) -> Result<Vec<SimplexPoint>> {
    if !sys.is_proper() {
        return Err(Error::NotProper);
    }
    let base = sys.base();
    let qs = base.breakpoints();
    let values = base.values();
    let include_start = sys.junction_is_division();
    let mut out: Vec<SimplexPoint> = Vec::new();
    let skip = usize::from(!include_start);
    for v in values.iter().take(qs.len() - 1).skip(skip) {
        let p = normalize(v)?;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    if out.is_empty() {
        out.push(normalize(base.start_value())?);
    }
    Ok(out)
}

fn check_dim(t: &LinearMap, n: usize) -> Result<()> {
    if t.n() != n {
        return Err(Error::DimensionMismatch { expected: t.n(), found: n });
    }
    Ok(())
}

fn row_minima<'a>(t: &LinearMap, points: impl Iterator<Item = Vec<Rational>> + 'a) -> Vec<Rational> {
    let mut mins: Option<Vec<Rational>> = None;
    for p in points {
        let img = t.apply(&p);
        mins = Some(match mins {
            None => img,
            Some(m) => m.into_iter().zip(img).map(|(a, b)| a.min(b)).collect(),
        });
    }
    mins.expect("at least one point")
}

/// `mu_T(P)` for a proper self-similar system.
pub fn mu_exact(t: &LinearMap, sys: &SelfSimilarSystem) -> Result<SpectrumPoint> {
    check_dim(t, sys.dim())?;
    let vertices = limit_set_vertices(sys)?;
    let values = row_minima(t, vertices.into_iter().map(SimplexPoint::into_inner));
    Ok(SpectrumPoint::exact(values))
}

/// Minimum of `q^-1 T(P(q))` over division numbers in `[lo, hi]` and the
/// two endpoints.
pub fn mu_over_window<P: Trajectory + ?Sized>(
    t: &LinearMap,
    path: &P,
    lo: &Rational,
    hi: &Rational,
) -> Result<SpectrumPoint> {
    check_dim(t, path.dim())?;
    if lo > hi || !lo.is_positive() {
        return Err(Error::EmptyWindow(format!("[{lo}, {hi}]")));
    }
    if !path.in_domain(lo) || !path.in_domain(hi) {
        return Err(Error::EmptyWindow(format!(
            "[{lo}, {hi}] is not inside the domain of the path"
        )));
    }
    let mut qs = vec![lo.clone()];
    qs.extend(path.division_numbers_in(lo, hi));
    qs.push(hi.clone());
    let points = qs
        .into_iter()
        .map(|q| {
            let v = path.eval(&q)?;
            Ok(v.into_iter().map(|x| x / &q).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let values = row_minima(t, points.into_iter());
    Ok(SpectrumPoint {
        values,
        mode: SpectrumMode::Estimate { lo: lo.clone(), hi: hi.clone() },
    })
}

/// Finite-horizon estimate of `mu_T(P)` on the window
/// `[max(tail_fraction * Q, q_0), Q]` of a path on `[q_0, Q]`.
pub fn mu_estimate(t: &LinearMap, path: &PlPath, tail_fraction: &Rational) -> Result<SpectrumPoint> {
    if !tail_fraction.is_positive() || *tail_fraction >= Rational::one() {
        return Err(Error::EmptyWindow(format!(
            "tail fraction {tail_fraction} must lie strictly between 0 and 1"
        )));
    }
    let hi = path.end().clone();
    let lo = (tail_fraction * &hi).max(path.start().clone());
    mu_over_window(t, path, &lo, &hi)
}

/// Coordinate-wise minimum. Exact only when both inputs are exact; otherwise
/// the result carries the window of the first estimate.
pub fn coordinatewise_min(x: &SpectrumPoint, y: &SpectrumPoint) -> Result<SpectrumPoint> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), found: y.dim() });
    }
    let values = x.values.iter().zip(&y.values).map(|(a, b)| a.min(b).clone()).collect();
    let mode = match (&x.mode, &y.mode) {
        (SpectrumMode::Exact, SpectrumMode::Exact) => SpectrumMode::Exact,
        (m @ SpectrumMode::Estimate { .. }, _) | (_, m @ SpectrumMode::Estimate { .. }) => m.clone(),
    };
    Ok(SpectrumPoint { values, mode })
}

/// Integer `k` with `rho^k q_0 <= q < rho^(k+1) q_0`, for diagnostics.
pub fn period_index(sys: &SelfSimilarSystem, q: &Rational) -> Result<u64> {
    let (scale, _) = sys.reduce(q)?;
    let mut k = 0u64;
    let mut s = scale;
    while !s.is_one() {
        s /= sys.ratio();
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn r2() -> SelfSimilarSystem {
        let base = PlPath::from_points(vec![
            (int(5), v(&[1, 1, 1, 2])),
            (int(6), v(&[1, 1, 2, 2])),
            (int(8), v(&[1, 1, 2, 4])),
            (int(10), v(&[2, 2, 2, 4])),
        ])
        .unwrap();
        SelfSimilarSystem::new(base, int(2), SystemClass::GeneralizedNSystem).unwrap()
    }

    fn diagonal() -> SelfSimilarSystem {
        let base = PlPath::from_points(vec![(int(4), v(&[1, 1, 1, 1])), (int(8), v(&[2, 2, 2, 2]))]).unwrap();
        SelfSimilarSystem::new(base, int(2), SystemClass::GeneralizedNSystem).unwrap()
    }

    #[test]
    fn self_similar_eval() {
        let r = r2();
        assert_eq!(r.eval(&int(10)).unwrap(), v(&[2, 2, 2, 4]));
        assert_eq!(r.eval(&int(20)).unwrap(), v(&[4, 4, 4, 8]));
        assert_eq!(r.eval(&int(5)).unwrap(), v(&[1, 1, 1, 2]));
        assert_eq!(r.eval(&int(11)).unwrap(), v(&[2, 2, 3, 4]));
        assert!(matches!(r.eval(&int(4)), Err(Error::OutOfDomain { .. })));
        assert_eq!(period_index(&r, &int(20)).unwrap(), 2);
    }

    #[test]
    fn r_vertices_and_mu() {
        let r = r2();
        let verts = limit_set_vertices(&r).unwrap();
        assert_eq!(
            verts,
            vec![
                normalize(&v(&[1, 1, 1, 2])).unwrap(),
                normalize(&v(&[1, 1, 2, 2])).unwrap(),
                normalize(&v(&[1, 1, 2, 4])).unwrap()
            ]
        );
        let sum = LinearMap::coordinate_sum(4);
        assert_eq!(mu_exact(&sum, &r).unwrap().values, vec![int(1)]);
        let est = mu_estimate(&sum, r.base(), &frac(1, 2)).unwrap();
        assert_eq!(est.values, vec![int(1)]);
    }

    #[test]
    fn diagonal_vertex() {
        let d = diagonal();
        assert_eq!(limit_set_vertices(&d).unwrap(), vec![SimplexPoint::vertex(4, 1)]);
        assert!(d.division_numbers_in(&int(4), &int(32)) == vec![int(4)]);
    }

    #[test]
    fn one_period_estimate_matches_exact() {
        let r = r2();
        let t = LinearMap::new(vec![v(&[-3, -1, 0, 2]), v(&[0, 0, 1, -1])]).unwrap();
        let exact = mu_exact(&t, &r).unwrap();
        let est = mu_estimate(&t, r.base(), &frac(1, 2)).unwrap();
        assert_eq!(est.values, exact.values);
        let est2 = mu_over_window(&t, &r, &int(13), &int(40)).unwrap();
        assert_eq!(est2.values, exact.values);
    }

    #[test]
    fn rebase_keeps_vertices() {
        let r = r2();
        let shifted = r.rebase(&int(7)).unwrap();
        assert_eq!(shifted.q0(), &int(7));
        let mut a = limit_set_vertices(&r).unwrap();
        let mut b = limit_set_vertices(&shifted).unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let next = r.rebase(&int(10)).unwrap();
        assert_eq!(next.base(), &r.base().scaled(&int(2)));
    }

    #[test]
    fn estimate_windows() {
        let r = r2();
        let sum = LinearMap::coordinate_sum(4);
        assert!(matches!(mu_estimate(&sum, r.base(), &int(1)), Err(Error::EmptyWindow(_))));
        assert!(matches!(mu_estimate(&sum, r.base(), &int(0)), Err(Error::EmptyWindow(_))));
        let bad = LinearMap::coordinate_sum(3);
        assert!(matches!(mu_exact(&bad, &r), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn min_modes() {
        let a = SpectrumPoint::exact(v(&[1, -2]));
        let b = SpectrumPoint::exact(v(&[0, 3]));
        let m = coordinatewise_min(&a, &b).unwrap();
        assert_eq!(m, SpectrumPoint::exact(v(&[0, -2])));
        assert_eq!(coordinatewise_min(&a, &a).unwrap(), a);
        let e = SpectrumPoint {
            values: v(&[5, 5]),
            mode: SpectrumMode::Estimate { lo: int(1), hi: int(2) },
        };
        assert!(!coordinatewise_min(&a, &e).unwrap().is_exact());
        assert!(coordinatewise_min(&a, &SpectrumPoint::exact(v(&[1]))).is_err());
    }

    #[test]
    fn rejects_bad_periods() {
        let base = PlPath::from_points(vec![(int(5), v(&[1, 1, 1, 2])), (int(6), v(&[1, 1, 2, 2]))]).unwrap();
        assert!(SelfSimilarSystem::new(base.clone(), int(2), SystemClass::GeneralizedNSystem).is_err());
        assert!(SelfSimilarSystem::new(base, int(1), SystemClass::GeneralizedNSystem).is_err());
        assert!(LinearMap::new(vec![v(&[0, 0])]).is_err());
        assert!(LinearMap::new(vec![v(&[1, 0]), v(&[1])]).is_err());
    }
}
