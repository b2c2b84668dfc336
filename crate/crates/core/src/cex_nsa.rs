//! An `(n+1)`-component map whose spectrum has a slice with infinitely many
//! isolated points, and the exact n-systems `f_m` realizing them.

use crate::error::{Error, Result};
use crate::path::PlPath;
use crate::rational::{display_vec, pow, sum, Rational};
use crate::report::Report;
use crate::spectrum::{mu_exact, LinearMap, SelfSimilarSystem};
use crate::validate::{switch_numbers, validate_exact_nsystem, SystemClass};
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct NsaInstance {
    pub n: usize,
    pub alpha: Rational,
    /// `1 + alpha + ... + alpha^(n-2)`.
    pub beta: Rational,
    pub t: LinearMap,
}

pub fn build_nsa_instance(n: usize, alpha: &Rational) -> Result<NsaInstance> {
    if n < 4 {
        return Err(Error::BadParameters(format!("need n >= 4, got {n}")));
    }
    if *alpha <= Rational::one() {
        return Err(Error::BadParameters(format!("need alpha > 1, got {alpha}")));
    }
    let beta = (0..=(n - 2) as u32).map(|k| pow(alpha, k)).sum();
    let zero_row = || vec![Rational::zero(); n];
    let mut rows = Vec::with_capacity(n + 1);
    let mut t1 = zero_row();
    t1[0] = Rational::one();
    rows.push(t1);
    for j in 1..n - 1 {
        let mut row = zero_row();
        row[j] = alpha.clone();
        row[j + 1] = -Rational::one();
        rows.push(row);
    }
    let mut tn = zero_row();
    tn[n - 1] = Rational::one();
    tn[1] = -pow(alpha, (n - 3) as u32);
    rows.push(tn);
    let mut tn1 = zero_row();
    tn1[n - 1] = Rational::one();
    tn1[0] = -pow(alpha, (n - 2) as u32);
    rows.push(tn1);
    Ok(NsaInstance {
        n,
        alpha: alpha.clone(),
        beta,
        t: LinearMap::new(rows)?,
    })
}

impl NsaInstance {
    /// `1 + alpha^m beta`, the last switch number of `f_m`.
    pub fn switch_c(&self, m: u32) -> Rational {
        Rational::one() + pow(&self.alpha, m) * &self.beta
    }

    /// `f(a) = (1, 1, alpha, ..., alpha^(n-2))`.
    pub fn start_point(&self) -> Vec<Rational> {
        let mut v = vec![Rational::one()];
        v.extend((0..=(self.n - 2) as u32).map(|k| pow(&self.alpha, k)));
        v
    }
}

/// Division points of `f_m` over one period `[a, alpha^m a]`, in order.
pub fn f_points(inst: &NsaInstance, m: u32) -> Vec<Vec<Rational>> {
    let n = inst.n;
    let alpha = &inst.alpha;
    let start = inst.start_point();
    let mut pts = vec![start.clone()];
    for l in 1..=m {
        // Exponent of coordinate i (1-based, i >= 2) is l + i - 2 up to
        // index j and l + i - 3 beyond it.
        for j in 2..n {
            let mut x = vec![Rational::one()];
            for i in 2..=n {
                let e = if i <= j { l + i as u32 - 2 } else { l + i as u32 - 3 };
                x.push(pow(alpha, e));
            }
            pts.push(x);
        }
        let mut switch = vec![Rational::one()];
        switch.extend((2..=n).map(|i| pow(alpha, l + i as u32 - 2)));
        pts.push(switch);
    }
    let am = pow(alpha, m);
    pts.push(start.iter().map(|x| x * &am).collect());
    pts
}

pub fn build_f(inst: &NsaInstance, m: u32) -> Result<SelfSimilarSystem> {
    if m < 1 {
        return Err(Error::BadParameters("need m >= 1".into()));
    }
    let pts: Vec<(Rational, Vec<Rational>)> = f_points(inst, m).into_iter().map(|v| (sum(&v), v)).collect();
    let base = PlPath::from_points(pts)?;
    SelfSimilarSystem::new(base, pow(&inst.alpha, m), SystemClass::ExactNSystem)
}

/// The same system as [`build_f`] with its period starting at the last
/// switch number `c`, where every coordinate is distinct.
pub fn build_f_from_switch(inst: &NsaInstance, m: u32) -> Result<SelfSimilarSystem> {
    build_f(inst, m)?.rebase(&inst.switch_c(m))
}

/// `T_j(f(q)) >= 0` for `j = 2, ..., n+1` at every breakpoint of `path`.
/// Each `T_j` is linear and the path is affine between breakpoints, so this
/// covers the whole path; segment midpoints are checked as well.
pub fn verify_main_inequalities(inst: &NsaInstance, path: &PlPath) -> Result<Report> {
    if path.dim() != inst.n {
        return Err(Error::DimensionMismatch { expected: inst.n, found: path.dim() });
    }
    let mut report = Report::new(format!(
        "main inequalities (n = {}, alpha = {})",
        inst.n, inst.alpha
    ));
    let two = Rational::from_integer(2.into());
    let mut probes: Vec<(Rational, Vec<Rational>)> = path
        .breakpoints()
        .iter()
        .cloned()
        .zip(path.values().iter().cloned())
        .collect();
    for seg in path.segments() {
        let mid = (seg.start + seg.end) / &two;
        let value = path.eval(&mid)?;
        probes.push((mid, value));
    }
    for (q, x) in probes {
        let img = inst.t.apply(&x);
        let bad: Vec<usize> = (1..=inst.n).filter(|&j| img[j].is_negative()).collect();
        report.check(
            format!("T_2..T_{} >= 0 at q = {q}", inst.n + 1),
            bad.is_empty(),
            if bad.is_empty() {
                format!("T = {}", display_vec(&img))
            } else {
                format!(
                    "negative at {} for f = {}: T = {}",
                    bad.iter().map(|j| format!("T_{}", j + 1)).collect::<Vec<_>>().join(", "),
                    display_vec(&x),
                    display_vec(&img)
                )
            },
        );
    }
    Ok(report)
}

/// `[(1 + alpha^m beta)^-1 for m in 1..=m_max]`.
pub fn enumerate_e(inst: &NsaInstance, m_max: u32) -> Result<Vec<Rational>> {
    if m_max < 1 {
        return Err(Error::BadParameters("need m_max >= 1".into()));
    }
    Ok((1..=m_max).map(|m| Rational::one() / inst.switch_c(m)).collect())
}

/// Passes iff the values are positive and strictly decreasing.
pub fn check_isolation(values: &[Rational]) -> Report {
    let mut report = Report::new("isolation of E");
    for (i, v) in values.iter().enumerate() {
        report.check(
            format!("value {} is positive", i + 1),
            v.is_positive(),
            format!("{v}"),
        );
    }
    for (i, w) in values.windows(2).enumerate() {
        let gap = &w[0] - &w[1];
        report.check(
            format!("gap between values {} and {} is positive", i + 1, i + 2),
            gap.is_positive(),
            format!("gap = {gap}"),
        );
    }
    if let Some(min_gap) = values.windows(2).map(|w| &w[0] - &w[1]).min() {
        report.check("minimum gap", min_gap.is_positive(), format!("{min_gap}"));
    }
    report
}

/// Spectrum values `mu_T(f_m) = (1 / c, 0, ..., 0)` for `m = 1..=m_max`.
pub fn verify_spectrum_values(inst: &NsaInstance, m_max: u32) -> Result<Report> {
    let mut report = Report::new(format!(
        "spectrum of f_m (n = {}, alpha = {})",
        inst.n, inst.alpha
    ));
    for (m, e) in (1..=m_max).zip(enumerate_e(inst, m_max)?) {
        let f = build_f(inst, m)?;
        let mu = mu_exact(&inst.t, &f)?;
        let mut want = vec![Rational::zero(); inst.n + 1];
        want[0] = e.clone();
        report.check(
            format!("m = {m}: mu_T(f_m) = (1/c, 0, ..., 0)"),
            mu.values == want,
            format!("c = {}, got {}", inst.switch_c(m), display_vec(&mu.values)),
        );
    }
    Ok(report)
}

/// Structural checks on `f_m`: validity, ratio, properness, the last switch
/// number, and the shape of the first component.
pub fn verify_f_structure(inst: &NsaInstance, m: u32) -> Result<Report> {
    let f = build_f(inst, m)?;
    let base = f.base();
    let c = inst.switch_c(m);
    let mut report = Report::new(format!("structure of f_{m}"));
    let exact = validate_exact_nsystem(base);
    report.check("exact n-system", exact.valid(), exact.to_string().trim().to_string());
    report.check(
        "ratio is alpha^m",
        *f.ratio() == pow(&inst.alpha, m),
        format!("{}", f.ratio()),
    );
    report.check("proper", f.is_proper(), "");
    let switches = switch_numbers(base)?;
    let last_interior = switches[switches.len() - 2].clone();
    report.check(
        "last switch number is 1 + alpha^m beta",
        last_interior == c,
        format!("got {last_interior}, expected {c}"),
    );
    let one = Rational::one();
    let constant = base
        .breakpoints()
        .iter()
        .zip(base.values())
        .filter(|(q, _)| **q <= c)
        .all(|(_, v)| v[0] == one);
    let last = base.segment(base.num_segments() - 1);
    let tail_ok = *last.start == c && last.slope()[0].is_one();
    report.check("f_1 constant on [a, c] and slope 1 on [c, d]", constant && tail_ok, "");
    Ok(report)
}

/// Everything the CLI `verify-nsa` subcommand reports.
pub fn verify_nsa(inst: &NsaInstance, m_max: u32) -> Result<Report> {
    let mut report = Report::new(format!(
        "non-semi-algebraic spectrum (n = {}, alpha = {}, beta = {}, m = 1..{m_max})",
        inst.n, inst.alpha, inst.beta
    ));
    for m in 1..=m_max {
        report.merge(verify_f_structure(inst, m)?);
        let f = build_f(inst, m)?;
        let ineq = verify_main_inequalities(inst, f.base())?;
        report.check(
            format!("m = {m}: main inequalities at all division points"),
            ineq.passed(),
            ineq.failures().map(|c| c.detail.clone()).collect::<Vec<_>>().join("; "),
        );
    }
    report.merge(verify_spectrum_values(inst, m_max)?);
    report.merge(check_isolation(&enumerate_e(inst, m_max)?));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::validate::validate_rigid;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn instance_rows() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        assert_eq!(inst.beta, int(7));
        assert_eq!(
            inst.t.rows(),
            &[
                v(&[1, 0, 0, 0]),
                v(&[0, 2, -1, 0]),
                v(&[0, 0, 2, -1]),
                v(&[0, -2, 0, 1]),
                v(&[-4, 0, 0, 1])
            ]
        );
        let five = build_nsa_instance(5, &int(2)).unwrap();
        assert_eq!(five.beta, int(15));
        assert_eq!((five.t.m(), five.t.n()), (6, 5));
        assert!(build_nsa_instance(3, &int(2)).is_err());
        assert!(build_nsa_instance(4, &int(1)).is_err());
    }

    #[test]
    fn f_breakpoints() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        let f1 = build_f(&inst, 1).unwrap();
        assert_eq!(f1.base().breakpoints(), &v(&[8, 9, 11, 15, 16])[..]);
        assert_eq!(f1.base().values()[3], v(&[1, 2, 4, 8]));
        let f2 = build_f(&inst, 2).unwrap();
        assert_eq!(f2.base().breakpoints(), &v(&[8, 9, 11, 15, 17, 21, 29, 32])[..]);
        assert_eq!(f2.base().values()[6], v(&[1, 4, 8, 16]));
        assert_eq!(inst.switch_c(2), int(29));
        let five = build_nsa_instance(5, &int(2)).unwrap();
        let f = build_f(&five, 1).unwrap();
        assert_eq!(f.q0(), &int(16));
        assert_eq!(f.base().start_value(), &v(&[1, 1, 2, 4, 8])[..]);
        assert_eq!(five.switch_c(1), int(31));
    }

    #[test]
    fn rigid_from_switch() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        for m in 1..=3 {
            let f = build_f_from_switch(&inst, m).unwrap();
            assert_eq!(f.q0(), &inst.switch_c(m));
            assert!(validate_rigid(&f.unroll(2), &int(1)).unwrap().valid());
        }
    }

    #[test]
    fn inequalities() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        for m in 1..=2 {
            let f = build_f(&inst, m).unwrap();
            assert!(verify_main_inequalities(&inst, f.base()).unwrap().passed());
        }
        let mutated = PlPath::from_points(vec![
            (int(8), v(&[1, 1, 2, 4])),
            (int(9), v(&[1, 2, 2, 4])),
            (int(11), v(&[1, 2, 4, 4])),
            (int(15), v(&[1, 2, 3, 9])),
            (int(16), v(&[2, 2, 4, 8])),
        ])
        .unwrap();
        let r = verify_main_inequalities(&inst, &mutated).unwrap();
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.detail.contains("T_3")));
    }

    #[test]
    fn e_values() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        assert_eq!(enumerate_e(&inst, 3).unwrap(), vec![frac(1, 15), frac(1, 29), frac(1, 57)]);
        let inst = build_nsa_instance(4, &frac(3, 2)).unwrap();
        assert_eq!(enumerate_e(&inst, 1).unwrap(), vec![frac(8, 65)]);
        let inst = build_nsa_instance(5, &int(2)).unwrap();
        assert_eq!(enumerate_e(&inst, 1).unwrap(), vec![frac(1, 31)]);
        assert!(enumerate_e(&inst, 0).is_err());
    }

    #[test]
    fn isolation() {
        let r = check_isolation(&[frac(1, 15), frac(1, 29), frac(1, 57)]);
        assert!(r.passed());
        assert!(r.checks.iter().any(|c| c.detail == "gap = 14/435"));
        assert!(r.checks.iter().any(|c| c.name == "minimum gap" && c.detail == "28/1653"));
        assert!(check_isolation(&[frac(1, 15)]).passed());
        assert!(!check_isolation(&[frac(1, 15), frac(1, 15)]).passed());
    }

    #[test]
    fn full_verification() {
        let inst = build_nsa_instance(4, &int(2)).unwrap();
        let r = verify_nsa(&inst, 3).unwrap();
        assert!(r.passed(), "{r}");
    }
}
