//! A 5-component map whose spectrum is not closed under coordinate-wise
//! minimum, together with the two 4-systems `R` and `S` that witness it.

use crate::error::{Error, Result};
use crate::hull::{hull_contains, normalize, SimplexPoint};
use crate::path::{PlPath, Trajectory};
use crate::rational::{display_vec, int, sum, Rational};
use crate::report::Report;
use crate::spectrum::{
    coordinatewise_min, limit_set_vertices, mu_exact, LinearMap, SelfSimilarSystem, SpectrumPoint,
};
use crate::validate::SystemClass;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct MinCexInstance {
    pub alpha: Rational,
    pub beta: Rational,
    pub r: SelfSimilarSystem,
    pub s: SelfSimilarSystem,
    pub t: LinearMap,
    /// `[B1, A1, A2, A3, E3]`, normalized.
    pub k_generators: Vec<SimplexPoint>,
    pub target: SpectrumPoint,
}

/// Division points `A1, A2, A3` of `R`.
pub fn a_points(alpha: &Rational) -> [Vec<Rational>; 3] {
    let one = Rational::one();
    let a2 = alpha * alpha;
    [
        vec![one.clone(), one.clone(), one.clone(), alpha.clone()],
        vec![one.clone(), one.clone(), alpha.clone(), alpha.clone()],
        vec![one.clone(), one, alpha.clone(), a2],
    ]
}

/// Division points `B1, B2, B3` of `S`.
pub fn b_points(beta: &Rational) -> [Vec<Rational>; 3] {
    let one = Rational::one();
    let b2 = beta * beta;
    [
        vec![one.clone(), beta.clone(), beta.clone(), beta.clone()],
        vec![one, beta.clone(), b2.clone(), b2.clone()],
        vec![beta.clone(), beta.clone(), b2.clone(), b2],
    ]
}

fn periodic_system(points: &[Vec<Rational>], ratio: &Rational) -> Result<SelfSimilarSystem> {
    let mut pts: Vec<(Rational, Vec<Rational>)> = points.iter().map(|v| (sum(v), v.clone())).collect();
    let closing: Vec<Rational> = points[0].iter().map(|x| x * ratio).collect();
    pts.push((sum(&closing), closing));
    let base = PlPath::from_points(pts)?;
    SelfSimilarSystem::new(base, ratio.clone(), SystemClass::GeneralizedNSystem)
}

pub fn system_r(alpha: &Rational) -> Result<SelfSimilarSystem> {
    periodic_system(&a_points(alpha), alpha)
}

pub fn system_s(beta: &Rational) -> Result<SelfSimilarSystem> {
    periodic_system(&b_points(beta), beta)
}

pub fn min_map(alpha: &Rational, beta: &Rational) -> LinearMap {
    let one = Rational::one();
    let z = Rational::zero();
    let am1 = alpha - &one;
    let bm1 = beta - &one;
    let rows = vec![
        vec![-(&am1 * beta), -(beta - alpha), z.clone(), bm1.clone()],
        vec![&am1 * beta, -(&am1 * beta), alpha * &bm1, -bm1.clone()],
        vec![alpha * beta * &am1, -(alpha * &am1), bm1.clone(), -bm1.clone()],
        vec![z.clone(), z.clone(), one.clone(), -one.clone()],
        vec![z.clone(), -one.clone(), z, one],
    ];
    LinearMap::new(rows).expect("rows are nonzero for 1 < alpha < beta")
}

pub fn build_min_instance(alpha: &Rational, beta: &Rational) -> Result<MinCexInstance> {
    if *alpha <= Rational::one() || beta <= alpha {
        return Err(Error::BadParameters(format!(
            "need 1 < alpha < beta, got alpha = {alpha}, beta = {beta}"
        )));
    }
    let r = system_r(alpha)?;
    let s = system_s(beta)?;
    let [a1, a2, a3] = a_points(alpha);
    let [b1, _, _] = b_points(beta);
    let k_generators = vec![
        normalize(&b1)?,
        normalize(&a1)?,
        normalize(&a2)?,
        normalize(&a3)?,
        SimplexPoint::vertex(4, 3),
    ];
    let target = SpectrumPoint::exact(vec![
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        corollary_c(alpha),
        Rational::zero(),
    ]);
    Ok(MinCexInstance {
        alpha: alpha.clone(),
        beta: beta.clone(),
        r,
        s,
        t: min_map(alpha, beta),
        k_generators,
        target,
    })
}

/// `alpha (1 - alpha) / |A3|`.
pub fn corollary_c(alpha: &Rational) -> Rational {
    let one = Rational::one();
    alpha * (&one - alpha) / (int(2) + alpha + alpha * alpha)
}

/// Closed form of `mu_T(R)`.
pub fn expected_mu_r(alpha: &Rational) -> Vec<Rational> {
    let one = Rational::one();
    vec![
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        corollary_c(alpha),
        (alpha - &one) / (int(2) + int(2) * alpha),
    ]
}

/// The deterministic simplex sample: normalized `(a, b, c, d)` with
/// `0 <= a <= b <= c <= d <= 6`, `d >= 1`.
pub fn simplex_sample() -> Vec<SimplexPoint> {
    let mut out = Vec::new();
    for a in 0..=6 {
        for b in a..=6 {
            for c in b..=6 {
                for d in c.max(1)..=6 {
                    out.push(normalize(&[int(a), int(b), int(c), int(d)]).expect("sorted, positive sum"));
                }
            }
        }
    }
    out
}

const GENERATOR_NAMES: [&str; 5] = ["B1", "A1", "A2", "A3", "E3"];

pub fn verify_halfspace_rep(inst: &MinCexInstance) -> Report {
    let mut report = Report::new(format!(
        "halfspace representation of K (alpha = {}, beta = {})",
        inst.alpha, inst.beta
    ));
    let images: Vec<Vec<Rational>> = inst.k_generators.iter().map(|g| inst.t.apply(g.coords())).collect();
    for (name, img) in GENERATOR_NAMES.iter().zip(&images) {
        let ok = img[..3].iter().all(|v| !v.is_negative());
        report.check(
            format!("T_1, T_2, T_3 >= 0 at {name}"),
            ok,
            format!("T = {}", display_vec(img)),
        );
    }
    // Faces B1 A1 A2, B1 A1 A3 and B1 A3 E3.
    let faces: [(usize, [usize; 3]); 3] = [(0, [0, 1, 2]), (1, [0, 1, 3]), (2, [0, 3, 4])];
    for (row, face) in faces {
        let zero = face.iter().all(|&g| images[g][row].is_zero());
        let names: Vec<&str> = face.iter().map(|&g| GENERATOR_NAMES[g]).collect();
        report.check(
            format!("T_{} vanishes on {}", row + 1, names.join(" ")),
            zero,
            face.iter()
                .map(|&g| format!("{}: {}", GENERATOR_NAMES[g], images[g][row]))
                .collect::<Vec<_>>()
                .join(", "),
        );
    }
    let sample = simplex_sample();
    let mut disagreements = Vec::new();
    for x in &sample {
        let img = inst.t.apply(x.coords());
        let by_halfspaces = img[..3].iter().all(|v| !v.is_negative());
        let by_lp = hull_contains(&inst.k_generators, x);
        if by_halfspaces != by_lp {
            disagreements.push(x.to_string());
        }
    }
    report.check(
        "LP membership agrees with T_1, T_2, T_3 >= 0 on the simplex sample",
        disagreements.is_empty(),
        if disagreements.is_empty() {
            format!("{} points", sample.len())
        } else {
            format!("disagree at {}", disagreements.join(", "))
        },
    );
    report
}

pub fn verify_corollary_values(inst: &MinCexInstance) -> Result<Report> {
    let mut report = Report::new(format!(
        "spectrum values of R and S (alpha = {}, beta = {})",
        inst.alpha, inst.beta
    ));
    let mu_r = mu_exact(&inst.t, &inst.r)?;
    let mu_s = mu_exact(&inst.t, &inst.s)?;
    let want_r = expected_mu_r(&inst.alpha);
    report.check(
        "mu_T(R) matches closed form",
        mu_r.values == want_r,
        format!("got {}, expected {}", display_vec(&mu_r.values), display_vec(&want_r)),
    );
    report.check(
        "mu_T(S) = 0",
        mu_s.values.iter().all(Zero::is_zero),
        format!("got {}", display_vec(&mu_s.values)),
    );
    let min = coordinatewise_min(&mu_r, &mu_s)?;
    report.check(
        "min(mu_T(R), mu_T(S)) = (0, 0, 0, c, 0)",
        min == inst.target,
        format!("got {}", display_vec(&min.values)),
    );
    report.check(
        "c < 0",
        inst.target.values[3].is_negative(),
        format!("c = {}", inst.target.values[3]),
    );
    let t5: Vec<Rational> = inst.k_generators.iter().map(|g| inst.t.apply(g.coords())[4].clone()).collect();
    let t5_ok = t5[0].is_zero() && t5[1..].iter().all(Signed::is_positive);
    report.check(
        "T_5 vanishes at B1 only among the vertices of K",
        t5_ok,
        format!("T_5 = {}", display_vec(&t5)),
    );
    Ok(report)
}

/// `((beta P1 - P2) / q, (P4 - P2) / q, (P4 - P3) / q)`.
pub fn kappa<P: Trajectory + ?Sized>(
    path: &P,
    beta: &Rational,
    q: &Rational,
) -> Result<(Rational, Rational, Rational)> {
    if path.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: path.dim() });
    }
    if !q.is_positive() {
        return Err(Error::BadParameters(format!("q must be positive, got {q}")));
    }
    let p = path.eval(q)?;
    Ok((
        (beta * &p[0] - &p[1]) / q,
        (&p[3] - &p[1]) / q,
        (&p[3] - &p[2]) / q,
    ))
}

/// `q - [(1 + 3 beta) P1(q) + (2 kappa_2 - kappa_3 - 3 kappa_1) q]`.
pub fn check_identity_lemma_q<P: Trajectory + ?Sized>(
    path: &P,
    beta: &Rational,
    q: &Rational,
) -> Result<Rational> {
    let (k1, k2, k3) = kappa(path, beta, q)?;
    let p1 = path.eval(q)?[0].clone();
    let rhs = (int(1) + int(3) * beta) * p1 + (int(2) * k2 - k3 - int(3) * k1) * q;
    Ok(q - rhs)
}

pub fn check_kappa_generator_bounds(inst: &MinCexInstance) -> Report {
    let mut report = Report::new(format!(
        "kappa generator bounds (alpha = {}, beta = {})",
        inst.alpha, inst.beta
    ));
    let (alpha, beta) = (&inst.alpha, &inst.beta);
    let one = Rational::one();
    let c12 = (beta - &one) / (alpha - &one);
    let c31 = (alpha * alpha - alpha) / (beta - &one);
    let [a1, a2, a3] = a_points(alpha);
    let [b1, _, _] = b_points(beta);
    let e3 = SimplexPoint::vertex(4, 3).into_inner();
    for (name, x) in GENERATOR_NAMES.iter().zip([b1, a1, a2, a3, e3]) {
        let f1 = beta * &x[0] - &x[1];
        let f2 = &x[3] - &x[1];
        let f3 = &x[3] - &x[2];
        let ok = !f1.is_negative() && f1 <= &c12 * &f2 && f3 <= &c31 * &f1;
        report.check(
            format!("bounds at {name}"),
            ok,
            format!(
                "f1 = {f1}, f2 = {f2}, f3 = {f3}; need 0 <= f1 <= {} and f3 <= {}",
                &c12 * &f2,
                &c31 * &f1
            ),
        );
    }
    report
}

/// Input to [`kappa3_decay_probe`].
#[derive(Debug, Clone, Copy)]
pub enum ProbeInput<'a> {
    SelfSimilar(&'a SelfSimilarSystem),
    Path(&'a PlPath),
}

/// Supremum of `kappa_3` over each window. Division numbers and the window
/// endpoints suffice since `kappa_3` is monotone on every segment.
pub fn kappa3_decay_probe(
    input: ProbeInput<'_>,
    inst: &MinCexInstance,
    windows: &[(Rational, Rational)],
) -> Result<Vec<Rational>> {
    let traj: &dyn Trajectory = match input {
        ProbeInput::SelfSimilar(sys) => sys,
        ProbeInput::Path(p) => p,
    };
    if traj.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: traj.dim() });
    }
    let b1 = &inst.k_generators[0];
    match input {
        ProbeInput::SelfSimilar(sys) => {
            let verts = limit_set_vertices(sys)?;
            if let Some(v) = verts.iter().find(|v| !hull_contains(&inst.k_generators, v)) {
                return Err(Error::PreconditionViolated(format!("limit point {v} lies outside K")));
            }
            if !hull_contains(&verts, b1) {
                return Err(Error::PreconditionViolated(format!(
                    "B1 = {b1} is not in the hull of the limit set"
                )));
            }
        }
        ProbeInput::Path(p) => {
            for (lo, hi) in windows {
                for q in p.division_numbers_in(lo, hi) {
                    let x = normalize(&p.eval(&q)?)?;
                    if !hull_contains(&inst.k_generators, &x) {
                        return Err(Error::PreconditionViolated(format!(
                            "normalized point {x} at q = {q} lies outside K"
                        )));
                    }
                }
            }
        }
    }
    windows
        .iter()
        .map(|(lo, hi)| {
            if lo > hi || !traj.in_domain(lo) || !traj.in_domain(hi) {
                return Err(Error::EmptyWindow(format!("[{lo}, {hi}]")));
            }
            let mut qs = vec![lo.clone(), hi.clone()];
            qs.extend(traj.division_numbers_in(lo, hi));
            let mut sup: Option<Rational> = None;
            for q in qs {
                let (_, _, k3) = kappa(traj, &inst.beta, &q)?;
                sup = Some(match sup {
                    Some(s) if s >= k3 => s,
                    _ => k3,
                });
            }
            Ok(sup.expect("window has endpoints"))
        })
        .collect()
}
