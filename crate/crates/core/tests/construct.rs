use oidforge::brackets::*;
use oidforge::construct::*;
use oidforge::modres::*;
use oidforge::poly::*;
use oidforge::symalg::*;
use proptest::prelude::*;

fn p(r: &Ring, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

fn vf(r: &Ring, comps: &[&str]) -> VectorField {
    VectorField::new(r, comps.iter().map(|c| p(r, c)).collect())
}

fn resolve(vars: &[&str], ideal: &[&str], tangent: bool) -> FreeResolution {
    let r = Ring::grevlex(vars);
    let ps: Vec<Poly> = ideal.iter().map(|s| p(&r, s)).collect();
    let g = if tangent { tangent_generators(&r, &ps) } else { vanishing_generators(&r, &ps) };
    free_resolution(&r, &g).unwrap()
}

fn i0_res() -> FreeResolution {
    resolve(&["x", "y"], &["x", "y"], false)
}

// fields vanishing to order two at the origin: ℓ3 is forced to be nonzero
fn m2_res() -> FreeResolution {
    resolve(&["x", "y"], &["x^2", "x*y", "y^2"], false)
}

fn koszul_res(phi: &str) -> FreeResolution {
    let r = Ring::grevlex(&["x", "y", "z"]);
    let phi = p(&r, phi);
    let g: Vec<Poly> = (0..3).map(|i| phi.derivative(i)).collect();
    let z = Poly::zero(&r);
    let f = vec![
        VectorField::new(&r, vec![g[1].clone(), -&g[0], z.clone()]),
        VectorField::new(&r, vec![g[2].clone(), z.clone(), -&g[0]]),
        VectorField::new(&r, vec![z.clone(), g[2].clone(), -&g[1]]),
    ];
    free_resolution(&r, &f).unwrap()
}

fn assert_valid(alg: &LieInftyAlgebroid) {
    let rep = check_algebroid(alg, None);
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn examples_pass_all_axioms() {
    let cases = [
        i0_res(),
        m2_res(),
        koszul_res("x^3+y^3+z^3"),
        koszul_res("x*y*z + x^3"),
        resolve(&["x", "y", "z"], &["x", "y", "z"], false),
        resolve(&["x", "y", "z"], &["x*y", "y*z"], true),
        resolve(&["x", "y", "z"], &["x^2+y^2+z^2"], false),
        resolve(&["x", "y"], &["y^2-x^3"], true),
    ];
    for res in &cases {
        let alg = build_all(res, BuildOptions::default()).unwrap();
        assert_valid(&alg);
        assert!(!alg.is_partial());
        assert!(alg.bracket_arities().iter().all(|&k| k <= res.length() + 1));
    }
}

#[test]
fn m2_has_a_ternary_bracket() {
    let alg = build_all(&m2_res(), BuildOptions::default()).unwrap();
    assert!(alg.bracket(3).is_some());
}

#[test]
fn corrector_kills_the_defect() {
    for res in [i0_res(), m2_res()] {
        let naive = naive_binary(&res).unwrap();
        assert!(!differential_defect(&res, &naive).is_zero());
        let l2 = build_binary(&res).unwrap();
        assert!(differential_defect(&res, &l2).is_zero());
    }
}

#[test]
fn dropping_the_corrector_breaks_jacobi() {
    let res = i0_res();
    let naive = naive_binary(&res).unwrap();
    let mut alg = LieInftyAlgebroid::new(res.clone());
    alg.set_bracket(2, naive.clone()).unwrap();
    let rep = check_algebroid(&alg, None);
    assert!(!rep.passed());
    assert_eq!(rep.first_failure().unwrap().name, "higher Jacobi identity n = 2");
    // and the recursion cannot repair it
    match complete_from_binary(&res, naive, BuildOptions::default()) {
        Err(_) => {}
        Ok(a) => assert!(!check_algebroid(&a, None).passed()),
    }
}

#[test]
fn ternary_bracket_solves_the_jacobiator() {
    let res = m2_res();
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    let jac = jacobiator(&alg).unwrap();
    let l3 = PageElement::new(alg.bracket_or_zero(3));
    assert_eq!(page_d(&res, &l3), jac.neg());
    assert_eq!(maurer_obstruction(&alg, 2), jac.neg().into_map());
}

#[test]
fn length_one_gives_a_lie_algebroid() {
    let r = Ring::grevlex(&["x", "y"]);
    let res = free_resolution(&r, &[vf(&r, &["1", "0"]), vf(&r, &["0", "1"])]).unwrap();
    assert_eq!(res.length(), 1);
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    assert_eq!(alg.bracket_arities(), Vec::<usize>::new());
    assert_valid(&alg);
    let res = resolve(&["x", "y"], &["y"], true);
    assert_eq!(res.length(), 1);
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    assert_eq!(alg.bracket(2).map(|t| t.len()).unwrap_or(0), naive_binary(&res).unwrap().len());
    assert!(alg.bracket(3).is_none());
    assert_valid(&alg);
}

#[test]
fn seeds_change_lifts_only_up_to_exact_terms() {
    let res = m2_res();
    let a = build_all(&res, BuildOptions { seed: Some(1), ..Default::default() }).unwrap();
    let b = build_all(&res, BuildOptions { seed: Some(7), ..Default::default() }).unwrap();
    assert_valid(&a);
    assert_valid(&b);
    assert_eq!(a.bracket(2), b.bracket(2));
    let diff = PageElement::new(a.bracket_or_zero(3)).sub(&PageElement::new(b.bracket_or_zero(3)));
    assert!(page_d(&res, &diff).is_zero());
    let pre = page_solve(&res, &diff).unwrap();
    assert_eq!(page_d(&res, &pre), diff);
}

#[test]
fn truncated_build_is_partial() {
    let alg = build_all(&m2_res(), BuildOptions { max_arity: Some(2), ..Default::default() }).unwrap();
    assert!(alg.is_partial());
    assert!(alg.bracket(3).is_none());
}

#[test]
fn optional_vanishing_on_degree_one() {
    let res = resolve(&["x", "y", "z"], &["x", "y", "z"], false);
    let alg = build_all(&res, BuildOptions { vanish_on_degree_one: true, ..Default::default() }).unwrap();
    assert_valid(&alg);
    for k in alg.bracket_arities().into_iter().filter(|&k| k >= 3) {
        for (w, _) in alg.bracket(k).unwrap().entries() {
            assert!(w.iter().any(|g| g.level >= 2), "ℓ{} nonzero on {}", k, format_word(w));
        }
    }
}

#[test]
fn lie2_of_vanishing_at_origin() {
    let data = build_lie2(&i0_res(), None).unwrap();
    assert!(data.axioms.passed(), "{}", data.axioms.to_text());
    assert_eq!(data.axioms.checks.len(), 3);
    assert!(!data.nabla.is_zero());
    assert!(data.axioms.checks.iter().any(|c| c.cases > 0));
    assert!(build_lie2(&koszul_res("x^3+y^3+z^3").truncate(1), None).is_err());
}

#[test]
fn lie2_of_split_free_resolution() {
    // the same field listed twice: ℓ1 is injective with a split image
    let r = Ring::grevlex(&["x"]);
    let res = free_resolution(&r, &[vf(&r, &["1"]), vf(&r, &["1"])]).unwrap();
    assert_eq!(res.ranks(), vec![2, 1]);
    let data = build_lie2(&res, None).unwrap();
    assert!(data.axioms.passed());
    assert!(data.ternary.is_zero());
    assert!(data.alg.bracket(3).is_none());
}

fn sl2_resolution() -> FreeResolution {
    let r = Ring::grevlex(&["x", "y"]);
    let fields = [vf(&r, &["0", "x"]), vf(&r, &["y", "0"]), vf(&r, &["x", "-y"])];
    let cols: Vec<Vec<Poly>> = fields.iter().map(|f| f.comps().to_vec()).collect();
    let anchor = FreeModuleMap::from_columns(&r, 2, &cols, -1, 0);
    // y²e − x²f + xyh is the relation among the three fields
    let mu = vec![p(&r, "y^2"), p(&r, "-x^2"), p(&r, "x*y")];
    let d2 = FreeModuleMap::from_columns(&r, 3, &[mu], -2, -1);
    FreeResolution::new(&r, anchor, vec![d2])
        .unwrap()
        .with_names(vec![vec!["e".into(), "f".into(), "h".into()], vec!["mu".into()]])
}

#[test]
fn sl2_constant_brackets_are_reproduced() {
    let res = sl2_resolution();
    assert!(certify_exactness(&res).is_ok());
    let r = res.ring().clone();
    let g = |i| Gen::new(1, i);
    let c = |n| Poly::int(&r, n);
    let mut table = TaylorMap::new(2, 1);
    table.set(&[g(0), g(1)], Elem::single(g(2), c(1)));
    table.set(&[g(0), g(2)], Elem::single(g(0), c(-2)));
    table.set(&[g(1), g(2)], Elem::single(g(1), c(2)));
    let mut reference = LieInftyAlgebroid::new(res.clone());
    reference.set_bracket(2, table.clone()).unwrap();
    assert_valid(&reference);

    let built = build_all(&res, BuildOptions::default()).unwrap();
    assert_valid(&built);
    assert_eq!(built.bracket_or_zero(2), table);
    assert!(built.bracket(3).is_none());
}

#[test]
fn rescale_by_one_is_identity() {
    let alg = build_all(&i0_res(), BuildOptions::default()).unwrap();
    let one = Poly::one(alg.ring());
    let out = rescale(&alg, &one);
    for k in 1..=3 {
        assert_eq!(out.bracket(k), alg.bracket(k));
    }
    assert_eq!(out.res(), alg.res());
}

#[test]
fn rescale_by_zero_collapses() {
    let alg = build_all(&m2_res(), BuildOptions::default()).unwrap();
    let out = rescale(&alg, &Poly::zero(alg.ring()));
    assert!(out.bracket(2).is_none());
    assert!(out.bracket(3).is_none());
    assert_eq!(out.bracket(1), alg.bracket(1));
    assert_valid(&out);
}

#[test]
fn rescaled_structures_stay_valid() {
    let r = Ring::grevlex(&["x", "y"]);
    let res = free_resolution(&r, &[vf(&r, &["1", "0"]), vf(&r, &["0", "1"])]).unwrap();
    let tangent = build_all(&res, BuildOptions::default()).unwrap();
    let chi = p(&r, "x^2+y^2");
    let out = rescale(&tangent, &chi);
    assert_valid(&out);
    assert!(certify_exactness(out.res()).is_ok());
    // [χ∂x, χ∂y] = χ(2x ∂y − 2y ∂x) by hand
    let v = out.bracket(2).unwrap().eval(&[Gen::new(1, 0), Gen::new(1, 1)]);
    assert_eq!(v.coeff(&Gen::new(1, 1)), Some(&p(&r, "2*x")));
    assert_eq!(v.coeff(&Gen::new(1, 0)), Some(&p(&r, "-2*y")));

    for res in [i0_res(), m2_res()] {
        let alg = build_all(&res, BuildOptions::default()).unwrap();
        let chi = p(res.ring(), "x + y^2 - 3");
        assert_valid(&rescale(&alg, &chi));
    }
}

#[test]
fn restrict_to_invariant_ideals() {
    let res = koszul_res("x^3+y^3+z^3");
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    let phi = p(res.ring(), "x^3+y^3+z^3");
    let q = restrict(&alg, std::slice::from_ref(&phi)).unwrap();
    assert!(q.ring().is_quotient());
    assert_valid(&q);
    assert!(certify_exactness(q.res()).is_ok());

    let one = Poly::one(res.ring());
    let z = restrict(&alg, &[one]).unwrap();
    assert_eq!(z.length(), 0);
    assert!(z.ring().is_zero_ring());
}

#[test]
fn restrict_rejects_non_invariant_ideals() {
    let r = Ring::grevlex(&["x", "y"]);
    let res = free_resolution(&r, &[vf(&r, &["1", "0"]), vf(&r, &["0", "1"])]).unwrap();
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    let x = p(&r, "x");
    match restrict(&alg, &[x.clone()]) {
        Err(ConstructError::NotLieRinehartIdeal { anchor_index, generator, value }) => {
            assert_eq!(anchor_index, 0);
            assert_eq!(generator, x);
            assert_eq!(value, Poly::one(&r));
        }
        other => panic!("expected a violation, got {:?}", other.map(|_| ())),
    }
}

// homogeneous components keep the module Gröbner computations graded
fn homogeneous_field() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
    (1u32..3).prop_flat_map(|deg| (Just(deg), prop::collection::vec(prop::collection::vec(-2i64..3, deg as usize + 1), 2)))
}

fn build_field(r: &Ring, (deg, comps): &(u32, Vec<Vec<i64>>)) -> VectorField {
    let comp = |cs: &Vec<i64>| {
        Poly::from_terms(r, cs.iter().enumerate().map(|(a, k)| (vec![a as u32, deg - a as u32], q(*k))).collect())
    };
    VectorField::new(r, comps.iter().map(comp).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn built_structures_always_pass(fields in prop::collection::vec(homogeneous_field(), 1..4)) {
        let r = Ring::grevlex(&["x", "y"]);
        let gens: Vec<VectorField> = fields.iter().map(|f| build_field(&r, f)).collect();
        prop_assume!(gens.iter().all(|g| !g.is_zero()));
        // close up under brackets once so that the input is involutive
        let mut all = gens.clone();
        for i in 0..gens.len() {
            for j in (i + 1)..gens.len() {
                let b = gens[i].bracket(&gens[j]);
                if !b.is_zero() && !module_contains(&r, &all, &b) {
                    all.push(b);
                }
            }
        }
        let closed = (0..all.len()).all(|i| (0..all.len()).all(|j| module_contains(&r, &all, &all[i].bracket(&all[j]))));
        prop_assume!(closed);
        let res = free_resolution(&r, &all).unwrap();
        let alg = build_all(&res, BuildOptions::default()).unwrap();
        let rep = check_algebroid(&alg, None);
        prop_assert!(rep.passed(), "{}", rep.to_text());
    }
}
