//! Piecewise-linear maps `[q_0, q_N] -> Q^n` given by breakpoints.

use crate::error::{Error, Result};
use crate::rational::{display_vec, Rational};
use num_traits::Zero;

/// A continuous piecewise-linear path, affine between consecutive
/// breakpoints.
///
/// Construction canonicalizes the breakpoint list: interior breakpoints at
/// which the slope vector does not change are dropped, so every interior
/// breakpoint of a `PlPath` is a point of non-differentiability.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlPath {
    n: usize,
    breakpoints: Vec<Rational>,
    values: Vec<Vec<Rational>>,
}

/// One affine piece of a path.
#[derive(Debug, Clone, Copy)]
pub struct Segment<'a> {
    pub start: &'a Rational,
    pub end: &'a Rational,
    pub from: &'a [Rational],
    pub to: &'a [Rational],
}

impl Segment<'_> {
    pub fn slope(&self) -> Vec<Rational> {
        slope_between(self.start, self.from, self.end, self.to)
    }

    pub fn length(&self) -> Rational {
        self.end - self.start
    }
}

fn slope_between(q0: &Rational, v0: &[Rational], q1: &Rational, v1: &[Rational]) -> Vec<Rational> {
    let dq = q1 - q0;
    v0.iter().zip(v1).map(|(a, b)| (b - a) / &dq).collect()
}

impl PlPath {
    /// Builds a path from parallel lists of abscissae and values.
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Vec<Rational>>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::MalformedPath(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.len() < 2 {
            return Err(Error::MalformedPath("at least two breakpoints are required".into()));
        }
        let n = values[0].len();
        if n < 2 {
            return Err(Error::MalformedPath(format!("dimension must be at least 2, got {n}")));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.len() != n) {
            return Err(Error::MalformedPath(format!(
                "value {i} has length {} but the path has dimension {n}",
                v.len()
            )));
        }
        if let Some(i) = (1..breakpoints.len()).find(|&i| breakpoints[i - 1] >= breakpoints[i]) {
            return Err(Error::MalformedPath(format!(
                "breakpoints must be strictly increasing ({} then {})",
                breakpoints[i - 1],
                breakpoints[i]
            )));
        }
        Ok(Self::canonical(n, breakpoints, values))
    }

    pub fn from_points(points: Vec<(Rational, Vec<Rational>)>) -> Result<Self> {
        let (qs, vs) = points.into_iter().unzip();
        Self::new(qs, vs)
    }

    fn canonical(n: usize, breakpoints: Vec<Rational>, values: Vec<Vec<Rational>>) -> Self {
        let mut qs: Vec<Rational> = Vec::with_capacity(breakpoints.len());
        let mut vs: Vec<Vec<Rational>> = Vec::with_capacity(values.len());
        for (q, v) in breakpoints.into_iter().zip(values) {
            if qs.len() >= 2 {
                let k = qs.len();
                let left = slope_between(&qs[k - 2], &vs[k - 2], &qs[k - 1], &vs[k - 1]);
                let right = slope_between(&qs[k - 1], &vs[k - 1], &q, &v);
                if left == right {
                    qs.pop();
                    vs.pop();
                }
            }
            qs.push(q);
            vs.push(v);
        }
        PlPath { n, breakpoints: qs, values: vs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().expect("at least two breakpoints")
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn start_value(&self) -> &[Rational] {
        &self.values[0]
    }

    pub fn end_value(&self) -> &[Rational] {
        self.values.last().expect("at least two breakpoints")
    }

    pub fn num_segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment<'_>> + '_ {
        (0..self.num_segments()).map(move |i| self.segment(i))
    }

    pub fn segment(&self, i: usize) -> Segment<'_> {
        Segment {
            start: &self.breakpoints[i],
            end: &self.breakpoints[i + 1],
            from: &self.values[i],
            to: &self.values[i + 1],
        }
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.start() <= q && q <= self.end()
    }

    fn out_of_domain(&self, q: &Rational) -> Error {
        Error::OutOfDomain {
            q: q.clone(),
            start: self.start().clone(),
            end: self.end().to_string(),
        }
    }

    /// Affine interpolation at `q`; a breakpoint returns its stored value.
    pub fn eval(&self, q: &Rational) -> Result<Vec<Rational>> {
        if !self.contains(q) {
            return Err(self.out_of_domain(q));
        }
        match self.breakpoints.binary_search(q) {
            Ok(i) => Ok(self.values[i].clone()),
            Err(i) => {
                let seg = self.segment(i - 1);
                let t = (q - seg.start) / seg.length();
                Ok(seg
                    .from
                    .iter()
                    .zip(seg.to)
                    .map(|(a, b)| a + (b - a) * &t)
                    .collect())
            }
        }
    }

    /// Index of the segment used to the right of `q` (or the last one at the
    /// end of the domain).
    pub fn segment_index_at(&self, q: &Rational) -> Option<usize> {
        if !self.contains(q) {
            return None;
        }
        Some(match self.breakpoints.binary_search(q) {
            Ok(i) => i.min(self.num_segments() - 1),
            Err(i) => i - 1,
        })
    }

    /// Breakpoints lying in `[lo, hi]`.
    pub fn breakpoints_in(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        self.breakpoints
            .iter()
            .filter(|q| *q >= lo && *q <= hi)
            .cloned()
            .collect()
    }

    /// The map `q -> rho * P(q / rho)` on `[rho q_0, rho q_N]`.
    pub fn scaled(&self, rho: &Rational) -> Self {
        assert!(*rho > Rational::zero(), "scale factor must be positive");
        PlPath {
            n: self.n,
            breakpoints: self.breakpoints.iter().map(|q| q * rho).collect(),
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| x * rho).collect())
                .collect(),
        }
    }

    /// Joins `next` onto the end of `self`; the paths must meet exactly.
    pub fn concat(&self, next: &PlPath) -> Result<Self> {
        if self.n != next.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: next.n });
        }
        if self.end() != next.start() || self.end_value() != next.start_value() {
            return Err(Error::MalformedPath(format!(
                "paths do not meet: {} at {} vs {} at {}",
                display_vec(self.end_value()),
                self.end(),
                display_vec(next.start_value()),
                next.start()
            )));
        }
        let mut qs = self.breakpoints.clone();
        let mut vs = self.values.clone();
        qs.extend(next.breakpoints.iter().skip(1).cloned());
        vs.extend(next.values.iter().skip(1).cloned());
        Ok(Self::canonical(self.n, qs, vs))
    }

    /// Restriction to `[lo, hi]` with `lo < hi` inside the domain.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::MalformedPath(format!("empty restriction range [{lo}, {hi}]")));
        }
        let first = self.eval(lo)?;
        let last = self.eval(hi)?;
        let mut qs = vec![lo.clone()];
        let mut vs = vec![first];
        for (q, v) in self.breakpoints.iter().zip(&self.values) {
            if q > lo && q < hi {
                qs.push(q.clone());
                vs.push(v.clone());
            }
        }
        qs.push(hi.clone());
        vs.push(last);
        Ok(Self::canonical(self.n, qs, vs))
    }
}

/// Anything that can be evaluated as a map `q -> R^n` on `[q_0, end]`.
pub trait Trajectory {
    fn dim(&self) -> usize;

    fn domain_start(&self) -> &Rational;

    /// `None` for maps defined on `[q_0, infinity)`.
    fn domain_end(&self) -> Option<Rational>;

    fn eval(&self, q: &Rational) -> Result<Vec<Rational>>;

    /// Division numbers of the map lying in `[lo, hi]`, ascending. Boundary
    /// points of the domain count as division numbers.
    fn division_numbers_in(&self, lo: &Rational, hi: &Rational) -> Vec<Rational>;

    fn in_domain(&self, q: &Rational) -> bool {
        q >= self.domain_start() && self.domain_end().is_none_or(|e| *q <= e)
    }
}

impl Trajectory for PlPath {
    fn dim(&self) -> usize {
        self.n
    }

    fn domain_start(&self) -> &Rational {
        self.start()
    }

    fn domain_end(&self) -> Option<Rational> {
        Some(self.end().clone())
    }

    fn eval(&self, q: &Rational) -> Result<Vec<Rational>> {
        PlPath::eval(self, q)
    }

    fn division_numbers_in(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        self.breakpoints_in(lo, hi)
    }
}
