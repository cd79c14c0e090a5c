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

fn i0_fields(r: &Ring) -> Vec<VectorField> {
    vec![vf(r, &["x", "0"]), vf(r, &["0", "x"]), vf(r, &["y", "0"]), vf(r, &["0", "y"])]
}

fn i0() -> LieInftyAlgebroid {
    let r = Ring::grevlex(&["x", "y"]);
    build_all(&free_resolution(&r, &i0_fields(&r)).unwrap(), BuildOptions::default()).unwrap()
}

fn m2() -> LieInftyAlgebroid {
    let r = Ring::grevlex(&["x", "y"]);
    let g = vanishing_generators(&r, &[p(&r, "x^2"), p(&r, "x*y"), p(&r, "y^2")]);
    build_all(&free_resolution(&r, &g).unwrap(), BuildOptions::default()).unwrap()
}

fn one(alg: &LieInftyAlgebroid, g: Gen) -> Elem {
    Elem::single(g, Poly::one(alg.ring()))
}

#[test]
fn l1_is_the_differential_and_degrees_match() {
    let alg = m2();
    let res = alg.res();
    for level in 2..=res.length() {
        for j in 0..res.rank(level) {
            let g = Gen::new(level as u32, j as u32);
            assert_eq!(alg.d(&one(&alg, g)), Elem::from_column(level as u32 - 1, &res.d_column(level, j)));
        }
    }
    for k in alg.bracket_arities() {
        assert!(alg.bracket(k).unwrap().check_degrees());
        assert!(k <= alg.max_arity());
    }
}

#[test]
fn odd_square_vanishes_but_leibniz_survives() {
    let alg = i0();
    let r = alg.ring().clone();
    let e = Gen::new(1, 0);
    let f = p(&r, "x^2*y + 3*y");
    let v = eval_bracket(&alg, 2, &[one(&alg, e), Elem::single(e, f.clone())]).unwrap();
    assert_eq!(v, Elem::single(e, alg.anchor_of(0).apply(&f)));
}

#[test]
fn bracket_is_graded_antisymmetric_on_generators() {
    let alg = m2();
    let ranks = alg.ranks();
    for m in -4..=-2 {
        for w in enumerate_words_ranks(&ranks, 2, m) {
            if w[0] == w[1] {
                continue;
            }
            let a = eval_bracket(&alg, 2, &[one(&alg, w[0]), one(&alg, w[1])]).unwrap();
            let b = eval_bracket(&alg, 2, &[one(&alg, w[1]), one(&alg, w[0])]).unwrap();
            let s = if w[0].is_odd() && w[1].is_odd() { -1 } else { 1 };
            assert_eq!(a, b.scale_sign(s), "{}", format_word(&w));
        }
    }
}

#[test]
fn bracket_errors() {
    let alg = i0();
    assert!(matches!(
        eval_bracket(&alg, 5, &[]),
        Err(BracketError::ArityOutOfRange { arity: 5, .. })
    ));
    let mut a = alg.clone();
    assert!(matches!(a.set_bracket(4, TaylorMap::new(4, 1)), Err(BracketError::ArityOutOfRange { .. })));
    let mixed = one(&alg, Gen::new(1, 0)).add(&one(&alg, Gen::new(2, 0)));
    assert!(matches!(
        eval_bracket(&alg, 2, &[mixed, one(&alg, Gen::new(1, 1))]),
        Err(BracketError::DegreeMismatch(_))
    ));
}

#[test]
fn rn_square_of_l1_vanishes() {
    let alg = m2();
    let t = rn_bracket(&Op::Bracket(&alg, 1), &Op::Bracket(&alg, 1), &alg.ranks());
    assert!(t.is_zero());
}

#[test]
fn rn_square_of_l2_is_twice_the_jacobiator() {
    for alg in [i0(), m2()] {
        let mut bare = alg.clone();
        bare.set_bracket(3, TaylorMap::new(3, 1)).unwrap();
        let jac = jacobiator(&bare).unwrap();
        let op = Op::Bracket(&bare, 2);
        for (w, v) in jac.map().entries() {
            assert_eq!(rn_bracket_on(&op, &op, w), v.add(v));
        }
        assert!(!jac.is_zero() || alg.bracket(3).is_none());
    }
}

#[test]
fn lie_algebroid_has_zero_jacobiator() {
    let r = Ring::grevlex(&["x", "y"]);
    let res = free_resolution(&r, &[vf(&r, &["1", "0"]), vf(&r, &["x", "y"])]).unwrap();
    let alg = build_all(&res, BuildOptions::default()).unwrap();
    assert!(jacobiator(&alg).unwrap().is_zero());
}

#[test]
fn jacobiator_needs_the_anchor_morphism() {
    let alg = i0();
    let mut bad = alg.clone();
    bad.set_bracket(2, alg.bracket_or_zero(2).neg()).unwrap();
    assert!(matches!(jacobiator(&bad), Err(BracketError::AnchorNotMorphism { .. })));
}

#[test]
fn jacobiator_is_closed_and_lifted_by_l3() {
    let alg = m2();
    let jac = jacobiator(&alg).unwrap();
    assert!(!jac.is_zero());
    assert!(page_d(alg.res(), &jac).is_zero());
    let r = page_solve(alg.res(), &jac.neg()).unwrap();
    assert_eq!(page_d(alg.res(), &r), jac.neg());
    let l3 = PageElement::new(alg.bracket_or_zero(3));
    assert_eq!(page_d(alg.res(), &l3), jac.neg());
}

#[test]
fn page_d_single_column_expansion() {
    // R supported on level 1 only: D(R) = ρ∘R + R∘ℓ1 with R of degree +1
    let alg = i0();
    let res = alg.res();
    let r = alg.ring().clone();
    let mut t = TaylorMap::new(2, 1);
    t.set(&[Gen::new(1, 0), Gen::new(2, 1)], Elem::single(Gen::new(2, 0), p(&r, "y")));
    let pe = PageElement::new(t.clone());
    let dp = page_d(res, &pe);
    let words = enumerate_words_ranks(&alg.ranks(), 2, -3);
    for w in &words {
        let mut expect = alg.d_hat(&t.eval(w));
        let op = Op::Map(&t);
        expect.add_assign(&compose(&op, &Op::Bracket(&alg, 1), w));
        assert_eq!(dp.eval(w), expect, "{}", format_word(w));
    }
}

#[test]
fn page_solve_of_zero_is_zero() {
    let alg = i0();
    let z = PageElement::zero(3, 2);
    assert!(page_solve(alg.res(), &z).unwrap().is_zero());
}

#[test]
fn non_closed_input_is_rejected() {
    let alg = i0();
    let r = alg.ring().clone();
    let mut t = TaylorMap::new(1, 1);
    t.set(&[Gen::new(1, 0)], Elem::single(Gen::new(0, 0), Poly::one(&r)));
    let err = page_solve(alg.res(), &PageElement::new(t)).unwrap_err();
    assert!(matches!(err, BracketError::LiftFailed { .. } | BracketError::NotClosed { .. }));
}

#[test]
fn check_algebroid_reports_witness() {
    let alg = m2();
    let mut bad = alg.clone();
    bad.set_bracket(3, TaylorMap::new(3, 1)).unwrap();
    let rep = check_algebroid(&bad, None);
    let fail = rep.first_failure().unwrap();
    assert_eq!(fail.name, "higher Jacobi identity n = 3");
    assert!(fail.witness.as_ref().unwrap().contains('↦'));
    assert!(check_algebroid(&alg, None).passed());
}

#[test]
fn identity_morphism_passes() {
    let alg = m2();
    for cap in [0, 1, 2] {
        let rep = check_morphism(&MorphismTaylor::identity(&alg), Some(cap));
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn rescaled_inclusion_fails_the_anchor_check() {
    let alg = i0();
    let chi = p(alg.ring(), "x + 1");
    let scaled = rescale(&alg, &chi);
    let id = MorphismTaylor::identity(&alg).coeffs()[0].clone();
    let phi = MorphismTaylor::new(&scaled, &alg, vec![id]);
    let rep = check_morphism(&phi, Some(0));
    assert!(!rep.passed());
}

#[test]
fn chain_map_between_two_resolutions() {
    let r = Ring::grevlex(&["x", "y"]);
    let mut other = i0_fields(&r);
    other.reverse();
    other.push(vf(&r, &["x", "y"]));
    let a = build_all(&free_resolution(&r, &i0_fields(&r)).unwrap(), BuildOptions::default()).unwrap();
    let b = build_all(&free_resolution(&r, &other).unwrap(), BuildOptions::default()).unwrap();
    assert_ne!(a.ranks(), b.ranks());
    for (s, t) in [(&a, &b), (&b, &a)] {
        let phi0 = chain_map(s, t).unwrap();
        let phi1 = solve_phi1(s, t, &phi0).unwrap();
        let only0 = MorphismTaylor::new(s, t, vec![phi0.clone()]);
        let rep0 = check_morphism(&only0, Some(0));
        assert!(rep0.passed(), "{}", rep0.to_text());
        let phi = MorphismTaylor::new(s, t, vec![phi0, phi1]);
        let rep = check_morphism(&phi, Some(1));
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

// a two-level space with one generator in each degree: ρ(a) = x∂x, d(b) = 0
fn tiny_space() -> FreeResolution {
    let r = Ring::grevlex(&["x"]);
    let anchor = FreeModuleMap::from_columns(&r, 1, &[vec![p(&r, "x")]], -1, 0);
    let d2 = FreeModuleMap::from_columns(&r, 1, &[vec![Poly::zero(&r)]], -2, -1);
    FreeResolution::new(&r, anchor, vec![d2]).unwrap()
}

fn random_map(r: &Ring, arity: usize, shift: i32, coeffs: &[i64]) -> TaylorMap {
    let mut t = TaylorMap::new(arity, shift);
    let mut k = 0;
    for m in -2 * arity as i32..=-(arity as i32) {
        for w in enumerate_words_ranks(&[1, 1], arity, m) {
            let level = -(m + shift);
            if !(1..=2).contains(&level) {
                continue;
            }
            let c = coeffs[k % coeffs.len()];
            k += 1;
            let f = Poly::from_terms(r, vec![(vec![(k % 3) as u32], q(c))]);
            t.set(&w, Elem::single(Gen::new(level as u32, 0), f));
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rn_graded_jacobi(
        shapes in prop::collection::vec((1usize..3, 0i32..2), 3),
        coeffs in prop::collection::vec(-3i64..4, 1..6),
    ) {
        let res = tiny_space();
        let r = res.ring().clone();
        let ranks = res.ranks();
        let maps: Vec<TaylorMap> = shapes
            .iter()
            .enumerate()
            .map(|(i, &(a, s))| random_map(&r, a, s, &coeffs[i % coeffs.len()..]))
            .collect();
        let (p1, p2, p3) = (Op::Map(&maps[0]), Op::Map(&maps[1]), Op::Map(&maps[2]));
        let (dp, dq) = (p1.degree(), p2.degree());
        let qr = rn_bracket(&p2, &p3, &ranks);
        let pq = rn_bracket(&p1, &p2, &ranks);
        let pr = rn_bracket(&p1, &p3, &ranks);
        let lhs = rn_bracket(&p1, &Op::Map(&qr), &ranks);
        let a = rn_bracket(&Op::Map(&pq), &p3, &ranks);
        let b = rn_bracket(&p2, &Op::Map(&pr), &ranks);
        let rhs = if (dp * dq) % 2 == 0 { a.add(&b) } else { a.sub(&b) };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn page_d_squares_to_zero(coeffs in prop::collection::vec(-3i64..4, 1..8), arity in 1usize..4) {
        let alg = i0();
        let res = alg.res();
        let r = alg.ring().clone();
        let mut t = TaylorMap::new(arity, 1);
        let mut k = 0;
        for level in 0..=2i32 {
            let m = -level - 1;
            for w in enumerate_words_ranks(&res.ranks(), arity, m) {
                let c = coeffs[k % coeffs.len()];
                k += 1;
                let f = Poly::from_terms(&r, vec![(vec![(k % 2) as u32, 0], q(c))]);
                let rank = if level == 0 { 2 } else { res.rank(level as usize) };
                t.set(&w, Elem::single(Gen::new(level as u32, (k % rank) as u32), f));
            }
        }
        let pe = PageElement::new(t);
        let d1 = page_d(res, &pe);
        prop_assert!(page_d(res, &d1).is_zero());
        // round trip: D(solve(D(R))) = D(R)
        let back = page_solve(res, &d1).unwrap();
        prop_assert_eq!(page_d(res, &back), d1);
    }
}
