use nsystems::cex_min::{self, build_min_instance};
use nsystems::io::{emit_system, parse_system};
use nsystems::rational::{frac, int};
use nsystems::sim::{
    random_generalized_system, random_rigid_system, BlockChoice, GenerationPolicy, StartLayout,
};
use nsystems::{
    division_numbers, extreme_points, hull_contains, limit_set_vertices, mu_estimate, mu_exact,
    switch_numbers, validate_exact_nsystem, validate_generalized, validate_rigid, LinearMap,
    PlPath, Rational, SelfSimilarSystem, SimplexPoint, System, SystemClass,
};
use proptest::prelude::*;

fn rigid(seed: u64, n: usize, delta: Rational, steps: usize) -> PlPath {
    let policy = GenerationPolicy::new(n, delta, steps, seed).unwrap();
    random_rigid_system(&policy).unwrap()
}

fn generalized(seed: u64, widest: bool) -> PlPath {
    let choice = if widest { BlockChoice::Widest } else { BlockChoice::Uniform };
    let policy = GenerationPolicy::new(4, int(1), 60, seed)
        .unwrap()
        .with_block_choice(choice);
    random_generalized_system(&policy).unwrap()
}

fn simplex_point() -> impl Strategy<Value = SimplexPoint> {
    prop::collection::vec(0i64..6, 4).prop_filter_map("zero sum", |mut xs| {
        xs.sort();
        let v: Vec<Rational> = xs.into_iter().map(int).collect();
        nsystems::normalize(&v).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rigid_systems_pass_every_validator(seed in any::<u64>(), n in 2usize..6, d in 1i64..4) {
        let delta = int(d);
        let path = rigid(seed, n, delta.clone(), 40);
        prop_assert!(validate_exact_nsystem(&path).valid());
        prop_assert!(validate_generalized(&path).valid());
        prop_assert!(validate_rigid(&path, &delta).unwrap().valid());
    }

    #[test]
    fn coordinates_sum_to_q(seed in any::<u64>(), widest in any::<bool>()) {
        let path = generalized(seed, widest);
        for (q, v) in path.breakpoints().iter().zip(path.values()) {
            let s: Rational = v.iter().sum();
            prop_assert_eq!(&s, q);
            prop_assert_eq!(&path.eval(q).unwrap(), v);
        }
    }

    #[test]
    fn switch_numbers_are_division_numbers(seed in any::<u64>(), widest in any::<bool>()) {
        let path = generalized(seed, widest);
        prop_assert!(validate_generalized(&path).valid());
        let div = division_numbers(&path).unwrap();
        for s in switch_numbers(&path).unwrap() {
            prop_assert!(div.contains(&s), "switch number {} is not a division number", s);
        }
    }

    #[test]
    fn rigid_division_numbers_on_grid(seed in any::<u64>(), d in 1i64..4) {
        let delta = int(d);
        let path = rigid(seed, 4, delta.clone(), 40);
        for q in division_numbers(&path).unwrap() {
            prop_assert!((q / &delta).is_integer());
        }
    }

    #[test]
    fn identity_residual_vanishes(seed in any::<u64>(), beta in 2i64..6) {
        let path = generalized(seed, false);
        let beta = int(beta);
        for q in division_numbers(&path).unwrap() {
            let r = cex_min::check_identity_lemma_q(&path, &beta, &q).unwrap();
            prop_assert_eq!(r, int(0));
        }
    }

    #[test]
    fn extreme_points_idempotent(points in prop::collection::vec(simplex_point(), 1..9)) {
        let ext = extreme_points(&points);
        prop_assert_eq!(&extreme_points(&ext), &ext);
        for p in &points {
            prop_assert!(hull_contains(&ext, p));
        }
    }

    #[test]
    fn io_round_trip(seed in any::<u64>(), widest in any::<bool>()) {
        let sys = System::Path(generalized(seed, widest));
        let text = emit_system(&sys);
        let back = parse_system(&text).unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(emit_system(&back), text);
    }

    #[test]
    fn min_verification_over_grid(a in 1i64..5, b in 1i64..5) {
        // 1 < alpha <= 2 and alpha < beta.
        let alpha = int(1) + frac(a, 4);
        let beta = &alpha + frac(b, 2);
        let inst = build_min_instance(&alpha, &beta).unwrap();
        prop_assert!(cex_min::verify_corollary_values(&inst).unwrap().passed());
        prop_assert!(cex_min::verify_halfspace_rep(&inst).passed());
        prop_assert!(cex_min::check_kappa_generator_bounds(&inst).passed());
    }
}

fn self_similar_suite() -> Vec<SelfSimilarSystem> {
    let mut out = Vec::new();
    for (a, b) in [(int(2), int(3)), (frac(3, 2), int(2))] {
        let inst = build_min_instance(&a, &b).unwrap();
        out.push(inst.r);
        out.push(inst.s);
    }
    let inst = nsystems::cex_nsa::build_nsa_instance(4, &int(2)).unwrap();
    for m in 1..=3 {
        out.push(nsystems::cex_nsa::build_f(&inst, m).unwrap());
    }
    out
}

#[test]
fn limit_set_is_shift_invariant() {
    for sys in self_similar_suite() {
        let verts = limit_set_vertices(&sys).unwrap();
        let mid = &sys.base().breakpoints()[1];
        let shifted = sys.rebase(mid).unwrap();
        let mut a = verts.clone();
        let mut b = limit_set_vertices(&shifted).unwrap();
        a.sort();
        a.dedup();
        b.sort();
        b.dedup();
        assert_eq!(extreme_points(&a), extreme_points(&b));
    }
}

#[test]
fn mu_is_positively_homogeneous() {
    let t = cex_min::min_map(&int(2), &int(3));
    let c = frac(7, 3);
    for sys in self_similar_suite().into_iter().filter(|s| s.dim() == 4) {
        let base = mu_exact(&t, &sys).unwrap();
        let scaled = mu_exact(&t.scaled(&c).unwrap(), &sys).unwrap();
        let want: Vec<Rational> = base.values.iter().map(|v| v * &c).collect();
        assert_eq!(scaled.values, want);
    }
}

#[test]
fn one_period_estimate_is_exact() {
    for sys in self_similar_suite() {
        let t = LinearMap::coordinate_sum(sys.dim());
        let tail = sys.q0() / sys.base().end();
        let est = mu_estimate(&t, &sys.unroll(1), &tail).unwrap();
        assert_eq!(est.values, mu_exact(&t, &sys).unwrap().values);
    }
}

#[test]
fn coincident_start_is_diagonal() {
    let policy = GenerationPolicy::new(3, int(1), 10, 7)
        .unwrap()
        .with_start(StartLayout::Coincident)
        .with_block_choice(BlockChoice::Widest);
    let path = random_generalized_system(&policy).unwrap();
    for v in path.values() {
        assert!(v.iter().all(|x| *x == v[0]));
    }
}

#[test]
fn self_similar_round_trip() {
    for sys in self_similar_suite() {
        let sys = System::SelfSimilar(sys);
        assert_eq!(parse_system(&emit_system(&sys)).unwrap(), sys);
    }
}

#[test]
fn class_tag_round_trip() {
    for tag in ["exact", "generalized", "rigid:1", "rigid:1/2"] {
        let class = nsystems::io::parse_class(tag).unwrap();
        assert_eq!(class.to_string(), tag);
    }
    assert!(nsystems::io::parse_class("rigid:0").is_err());
    assert!(matches!(nsystems::io::parse_class("rigid:1").unwrap(), SystemClass::RigidNSystem { .. }));
}
