//! Validators for n-systems, generalized n-systems and rigid n-systems.
//!
//! A path's sorted coordinates are the players' positions. Because paths are
//! canonical and affine between breakpoints, every axiom reduces to exact
//! tests on breakpoint values and segment slope vectors.

use crate::error::{Error, Result};
use crate::path::PlPath;
use crate::rational::{display_vec, is_multiple_of, sum, Rational};
use num_traits::{One, Zero};
use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    S1,
    S2,
    S3,
    G1,
    G2,
    G3,
    #[serde(rename = "RIGID")]
    Rigid,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::S1 => "S1",
            Axiom::S2 => "S2",
            Axiom::S3 => "S3",
            Axiom::G1 => "G1",
            Axiom::G2 => "G2",
            Axiom::G3 => "G3",
            Axiom::Rigid => "RIGID",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    #[serde(serialize_with = "crate::io::ser_rational")]
    pub q: Rational,
    pub detail: String,
}

/// Outcome of a validator. Lists every violation found, not just the first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: Axiom, q: &Rational, detail: impl Into<String>) {
        self.violations.push(Violation {
            axiom,
            q: q.clone(),
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid() {
            return writeln!(f, "valid");
        }
        writeln!(f, "invalid ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  [{}] q = {}: {}", v.axiom, v.q, v.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SystemClass {
    ExactNSystem,
    GeneralizedNSystem,
    RigidNSystem { mesh: Rational },
}

impl SystemClass {
    pub fn rigid(mesh: Rational) -> Result<Self> {
        if mesh <= Rational::zero() {
            return Err(Error::BadParameters(format!("mesh must be positive, got {mesh}")));
        }
        Ok(SystemClass::RigidNSystem { mesh })
    }
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemClass::ExactNSystem => f.write_str("exact"),
            SystemClass::GeneralizedNSystem => f.write_str("generalized"),
            SystemClass::RigidNSystem { mesh } => write!(f, "rigid:{mesh}"),
        }
    }
}

/// Runs the validator matching `class`.
pub fn validate(path: &PlPath, class: &SystemClass) -> Result<ValidationReport> {
    match class {
        SystemClass::ExactNSystem => Ok(validate_exact_nsystem(path)),
        SystemClass::GeneralizedNSystem => Ok(validate_generalized(path)),
        SystemClass::RigidNSystem { mesh } => validate_rigid(path, mesh),
    }
}

/// Contiguous run of players `lo..=hi` (0-based) moving together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block {
    pub lo: usize,
    pub hi: usize,
}

impl Block {
    pub fn single(i: usize) -> Self {
        Block { lo: i, hi: i }
    }

    pub fn size(&self) -> usize {
        self.hi - self.lo + 1
    }
}

/// The moving block of a slope vector, if the slope has the shape of a
/// generalized move: one contiguous run of equal slopes `1/size`, all other
/// slopes zero.
pub fn moving_block(slope: &[Rational]) -> Option<Block> {
    let lo = slope.iter().position(|s| !s.is_zero())?;
    let hi = slope.iter().rposition(|s| !s.is_zero())?;
    let block = Block { lo, hi };
    let expected = Rational::one() / Rational::from_integer(block.size().into());
    slope[lo..=hi]
        .iter()
        .all(|s| *s == expected)
        .then_some(block)
}

fn check_ordering_and_sum(path: &PlPath, axiom: Axiom, report: &mut ValidationReport) {
    for (q, v) in path.breakpoints().iter().zip(path.values()) {
        if v[0] < Rational::zero() {
            report.push(axiom, q, format!("negative first coordinate in {}", display_vec(v)));
        }
        if let Some(j) = (1..v.len()).find(|&j| v[j - 1] > v[j]) {
            report.push(
                axiom,
                q,
                format!("coordinates {} and {} out of order in {}", j, j + 1, display_vec(v)),
            );
        }
        let s = sum(v);
        if s != *q {
            report.push(axiom, q, format!("coordinate sum {s} differs from q"));
        }
    }
}

/// Checks (G1), (G2), (G3).
pub fn validate_generalized(path: &PlPath) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = path.dim();
    check_ordering_and_sum(path, Axiom::G1, &mut report);

    let slopes: Vec<Vec<Rational>> = path.segments().map(|s| s.slope()).collect();
    for (seg, slope) in path.segments().zip(&slopes) {
        for (j, s) in slope.iter().enumerate() {
            if *s < Rational::zero() || *s > Rational::one() {
                report.push(
                    Axiom::G2,
                    seg.start,
                    format!("component {} has slope {s} outside [0, 1]", j + 1),
                );
            }
        }
    }

    // (G3): on every segment whose interior has P_j < P_{j+1}, the partial sum
    // M_j has slope 0 or 1; across every breakpoint with P_j < P_{j+1} the
    // slope of M_j does not decrease.
    let partial_slopes: Vec<Vec<Rational>> = slopes
        .iter()
        .map(|s| {
            s.iter()
                .scan(Rational::zero(), |acc, x| {
                    *acc += x;
                    Some(acc.clone())
                })
                .collect()
        })
        .collect();
    for (seg, slopes) in path.segments().zip(&partial_slopes) {
        for (j, m) in slopes.iter().enumerate().take(n - 1) {
            let separated = seg.from[j] < seg.from[j + 1] || seg.to[j] < seg.to[j + 1];
            if separated && !m.is_zero() && !m.is_one() {
                report.push(
                    Axiom::G3,
                    seg.start,
                    format!(
                        "P_1+...+P_{} has slope {m} on [{}, {}] while P_{} < P_{}",
                        j + 1,
                        seg.start,
                        seg.end,
                        j + 1,
                        j + 2
                    ),
                );
            }
        }
    }
    for i in 1..path.num_segments() {
        let q = &path.breakpoints()[i];
        let v = &path.values()[i];
        for j in 0..n - 1 {
            if v[j] < v[j + 1] && partial_slopes[i - 1][j] > partial_slopes[i][j] {
                report.push(
                    Axiom::G3,
                    q,
                    format!(
                        "P_1+...+P_{} is not convex: slope {} then {} while P_{} < P_{}",
                        j + 1,
                        partial_slopes[i - 1][j],
                        partial_slopes[i][j],
                        j + 1,
                        j + 2
                    ),
                );
            }
        }
    }
    report
}

/// Index of the single unit-slope component of an exact n-system segment.
fn single_mover(slope: &[Rational]) -> Option<usize> {
    let movers: Vec<usize> = (0..slope.len()).filter(|&j| !slope[j].is_zero()).collect();
    match movers.as_slice() {
        [k] if slope[*k].is_one() => Some(*k),
        _ => None,
    }
}

/// Checks (S1), (S2), (S3).
pub fn validate_exact_nsystem(path: &PlPath) -> ValidationReport {
    let mut report = ValidationReport::default();
    check_ordering_and_sum(path, Axiom::S1, &mut report);

    let movers: Vec<Option<usize>> = path
        .segments()
        .map(|seg| {
            let slope = seg.slope();
            let k = single_mover(&slope);
            if k.is_none() {
                report.push(
                    Axiom::S2,
                    seg.start,
                    format!(
                        "on [{}, {}] the slope vector {} does not move exactly one component at speed 1",
                        seg.start,
                        seg.end,
                        display_vec(&slope)
                    ),
                );
            }
            k
        })
        .collect();

    for i in 1..path.num_segments() {
        let (Some(l), Some(k)) = (movers[i - 1], movers[i]) else {
            continue;
        };
        let v = &path.values()[i];
        if k > l && v[l..=k].iter().any(|x| *x != v[l]) {
            report.push(
                Axiom::S3,
                &path.breakpoints()[i],
                format!(
                    "ball passes forward from P_{} to P_{} but {} does not have P_{} = ... = P_{}",
                    l + 1,
                    k + 1,
                    display_vec(v),
                    l + 1,
                    k + 1
                ),
            );
        }
    }
    report
}

fn pairwise_distinct(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[0] != w[1])
}

/// Checks rigidity of mesh `mesh`: `q_0` on the grid, grid abscissae map to
/// grid points, and `P(q)` has distinct coordinates at `q_0` and at every
/// off-grid abscissa.
pub fn validate_rigid(path: &PlPath, mesh: &Rational) -> Result<ValidationReport> {
    if *mesh <= Rational::zero() {
        return Err(Error::BadParameters(format!("mesh must be positive, got {mesh}")));
    }
    let exact = validate_exact_nsystem(path);
    if !exact.valid() {
        return Err(Error::NotAnNSystem(exact.to_string().trim().to_string()));
    }
    let mut report = ValidationReport::default();
    let q0 = path.start();
    if !is_multiple_of(q0, mesh) {
        report.push(Axiom::Rigid, q0, format!("q_0 is not a multiple of {mesh}"));
    }
    if !pairwise_distinct(path.start_value()) {
        report.push(
            Axiom::Rigid,
            q0,
            format!(
                "P(q_0) = {} does not have distinct coordinates",
                display_vec(path.start_value())
            ),
        );
    }
    for seg in path.segments() {
        let k = single_mover(&seg.slope()).expect("exact n-system segment");
        // First grid abscissa in the segment.
        let first_grid = {
            let m = crate::rational::floor(&(seg.start / mesh)) * mesh;
            if m < *seg.start {
                m + mesh
            } else {
                m
            }
        };
        if first_grid <= *seg.end {
            let off_grid: Vec<usize> = (0..seg.from.len())
                .filter(|&j| {
                    if j == k {
                        !is_multiple_of(&(&seg.from[j] - seg.start), mesh)
                    } else {
                        !is_multiple_of(&seg.from[j], mesh)
                    }
                })
                .collect();
            if !off_grid.is_empty() {
                let at = path_value_on(seg.start, seg.from, k, &first_grid);
                report.push(
                    Axiom::Rigid,
                    &first_grid,
                    format!(
                        "P(q) = {} is not in the {mesh}-grid (components {:?})",
                        display_vec(&at),
                        off_grid.iter().map(|j| j + 1).collect::<Vec<_>>()
                    ),
                );
            }
        }
        // Coordinates must be distinct off the grid. Fixed components must
        // differ pairwise; the mover meets a fixed component at most once.
        let fixed: Vec<&Rational> = (0..seg.from.len()).filter(|&j| j != k).map(|j| &seg.from[j]).collect();
        if fixed.windows(2).any(|w| w[0] == w[1]) {
            let mid = (seg.start + seg.end) / Rational::from_integer(2.into());
            let off = off_grid_point(seg.start, seg.end, mesh).unwrap_or(mid);
            report.push(
                Axiom::Rigid,
                &off,
                format!(
                    "two resting components coincide on [{}, {}] at an off-grid abscissa",
                    seg.start, seg.end
                ),
            );
        }
        for (j, other) in seg.from.iter().enumerate() {
            if j == k {
                continue;
            }
            let meet = seg.start + (other - &seg.from[k]);
            let inside = meet >= *seg.start && meet <= *seg.end;
            // Equality at q_0 is reported by the start check above.
            if inside && meet != *q0 && !is_multiple_of(&meet, mesh) {
                report.push(
                    Axiom::Rigid,
                    &meet,
                    format!("P_{} meets P_{} at an off-grid abscissa", k + 1, j + 1),
                );
            }
        }
    }
    Ok(report)
}

fn path_value_on(start: &Rational, from: &[Rational], k: usize, q: &Rational) -> Vec<Rational> {
    let mut v = from.to_vec();
    v[k] += q - start;
    v
}

fn off_grid_point(start: &Rational, end: &Rational, mesh: &Rational) -> Option<Rational> {
    let two = Rational::from_integer(2.into());
    let mut candidate = (start + end) / &two;
    for _ in 0..64 {
        if !is_multiple_of(&candidate, mesh) {
            return Some(candidate);
        }
        candidate = (start + &candidate) / &two;
    }
    None
}

fn require_generalized(path: &PlPath) -> Result<()> {
    let report = validate_generalized(path);
    if report.valid() {
        Ok(())
    } else {
        Err(Error::InvalidSystem(report.to_string().trim().to_string()))
    }
}

/// Boundary abscissae plus every interior breakpoint where the slope
/// changes (all interior breakpoints of a canonical path).
pub fn division_numbers(path: &PlPath) -> Result<Vec<Rational>> {
    require_generalized(path)?;
    Ok(path.breakpoints().to_vec())
}

/// Boundary abscissae plus interior breakpoints where the ball passes
/// strictly backward: the lowest index of the new moving block is below the
/// lowest index of the previous one.
pub fn switch_numbers(path: &PlPath) -> Result<Vec<Rational>> {
    require_generalized(path)?;
    let blocks: Vec<Block> = path
        .segments()
        .map(|s| moving_block(&s.slope()).expect("generalized segment has a moving block"))
        .collect();
    let mut out = vec![path.start().clone()];
    for i in 1..path.num_segments() {
        if blocks[i].lo < blocks[i - 1].lo {
            out.push(path.breakpoints()[i].clone());
        }
    }
    out.push(path.end().clone());
    Ok(out)
}
