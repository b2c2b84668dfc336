use nsystems::cex_min::{self, build_min_instance};
use nsystems::cex_nsa::{self, build_nsa_instance};
use nsystems::rational::{frac, int};
use nsystems::{
    division_numbers, extreme_points, limit_set_vertices, mu_estimate, mu_exact, normalize,
    validate_exact_nsystem, validate_generalized, validate_rigid, Axiom, Rational, SimplexPoint,
};

fn grid() -> Vec<(Rational, Rational)> {
    vec![(int(2), int(3)), (frac(3, 2), int(2)), (int(2), int(5))]
}

#[test]
fn min_instance_values_on_grid() {
    for (alpha, beta) in grid() {
        let inst = build_min_instance(&alpha, &beta).unwrap();
        let mu_r = mu_exact(&inst.t, &inst.r).unwrap();
        assert_eq!(mu_r.values, cex_min::expected_mu_r(&alpha), "alpha = {alpha}");
        let mu_s = mu_exact(&inst.t, &inst.s).unwrap();
        assert!(mu_s.values.iter().all(|v| *v == int(0)));
        assert!(cex_min::verify_corollary_values(&inst).unwrap().passed());
        assert!(cex_min::verify_halfspace_rep(&inst).passed());
        assert!(cex_min::check_kappa_generator_bounds(&inst).passed());
    }
}

#[test]
fn min_target_at_two_three() {
    let inst = build_min_instance(&int(2), &int(3)).unwrap();
    let want: Vec<Rational> = vec![int(0), int(0), int(0), frac(-1, 4), int(0)];
    assert_eq!(inst.target.values, want);
    assert_eq!(cex_min::corollary_c(&int(2)), frac(-1, 4));
}

#[test]
fn r_and_s_are_generalized_not_exact() {
    let inst = build_min_instance(&int(2), &int(3)).unwrap();
    for sys in [&inst.r, &inst.s] {
        let path = sys.unroll(2);
        assert!(validate_generalized(&path).valid());
        let exact = validate_exact_nsystem(&path);
        assert!(!exact.valid());
        assert!(exact.has(Axiom::S2));
    }
}

#[test]
fn hull_vertex_set() {
    let inst = build_min_instance(&int(2), &int(3)).unwrap();
    let a = cex_min::a_points(&int(2));
    let b = cex_min::b_points(&int(3));
    let mut input: Vec<SimplexPoint> = a.iter().chain(b.iter()).map(|x| normalize(x).unwrap()).collect();
    input.push(SimplexPoint::vertex(4, 3));
    let mut ext = extreme_points(&input);
    ext.sort();
    let mut want = inst.k_generators.clone();
    want.sort();
    assert_eq!(ext, want);
    for bi in &b[1..] {
        assert!(!ext.contains(&normalize(bi).unwrap()));
    }
}

#[test]
fn nsa_values_and_isolation() {
    let inst = build_nsa_instance(4, &int(2)).unwrap();
    let e = cex_nsa::enumerate_e(&inst, 3).unwrap();
    assert_eq!(e, vec![frac(1, 15), frac(1, 29), frac(1, 57)]);
    let iso = cex_nsa::check_isolation(&e);
    assert!(iso.passed());
    let gap = iso.checks.iter().find(|c| c.name == "minimum gap").unwrap();
    assert!(gap.detail.contains("28/1653"), "{}", gap.detail);
}

#[test]
fn nsa_grid_passes() {
    for n in [4, 5] {
        for alpha in [int(2), frac(3, 2)] {
            let inst = build_nsa_instance(n, &alpha).unwrap();
            let report = cex_nsa::verify_nsa(&inst, 8).unwrap();
            assert!(report.passed(), "{report}");
        }
    }
}

#[test]
fn f_switch_rebase_is_rigid() {
    let inst = build_nsa_instance(4, &int(2)).unwrap();
    for m in 1..=4 {
        let f = cex_nsa::build_f_from_switch(&inst, m).unwrap();
        let path = f.unroll(2);
        assert!(validate_rigid(&path, &int(1)).unwrap().valid(), "m = {m}");
        for q in division_numbers(&path).unwrap() {
            assert!(q.is_integer(), "m = {m}: division number {q}");
        }
    }
}

#[test]
fn rigid_mesh_two_fails_for_unit_grid() {
    let inst = build_nsa_instance(4, &int(2)).unwrap();
    let f = cex_nsa::build_f_from_switch(&inst, 1).unwrap();
    let report = validate_rigid(&f.unroll(2), &int(2)).unwrap();
    assert!(report.has(Axiom::Rigid));
}

#[test]
fn f_division_count_on_eight_to_sixty_four() {
    let inst = build_nsa_instance(4, &int(2)).unwrap();
    let f = cex_nsa::build_f(&inst, 3).unwrap();
    let path = f.unroll(8).restrict(&int(8), &int(64)).unwrap();
    assert_eq!(path.breakpoints().len() - 2, 9);
}

#[test]
fn mutated_f_fails_main_inequalities() {
    let inst = build_nsa_instance(4, &int(2)).unwrap();
    let f = cex_nsa::build_f(&inst, 2).unwrap();
    assert!(cex_nsa::verify_main_inequalities(&inst, f.base()).unwrap().passed());
    let mut values = f.base().values().to_vec();
    let target: Vec<Rational> = [1, 2, 4, 8].map(int).to_vec();
    let k = values.iter().position(|x| *x == target).expect("(1,2,4,8) is a division point");
    values[k] = [1, 2, 3, 9].map(int).to_vec();
    let bent = nsystems::PlPath::new(f.base().breakpoints().to_vec(), values).unwrap();
    assert!(!cex_nsa::verify_main_inequalities(&inst, &bent).unwrap().passed());
}

#[test]
fn one_period_estimate_matches_exact() {
    let inst = build_min_instance(&int(2), &int(3)).unwrap();
    for sys in [&inst.r, &inst.s] {
        let exact = mu_exact(&inst.t, sys).unwrap();
        let q1 = sys.base().end().clone();
        let path = sys.unroll(1);
        let tail = sys.q0() / &q1;
        let est = mu_estimate(&inst.t, &path, &tail).unwrap();
        assert_eq!(est.values, exact.values);
    }
}

#[test]
fn limit_set_of_r_spans_k() {
    let inst = build_min_instance(&int(2), &int(3)).unwrap();
    let verts = limit_set_vertices(&inst.r).unwrap();
    for v in &verts {
        assert!(nsystems::hull_contains(&inst.k_generators, v));
    }
}
