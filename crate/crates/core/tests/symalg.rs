use oidforge::poly::*;
use oidforge::symalg::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn g(l: u32, i: u32) -> Gen {
    Gen::new(l, i)
}

#[test]
fn koszul_sign_examples() {
    assert_eq!(koszul_sign(&[0, 1, 2], &[-1, -1, -2]), 1);
    assert_eq!(koszul_sign(&[1, 0], &[-1, -1]), -1);
    assert_eq!(koszul_sign(&[1, 0], &[-1, -2]), 1);
    assert_eq!(koszul_sign(&[2, 1, 0], &[-1, -1, -1]), -1);
}

#[test]
fn odd_repeat_vanishes() {
    assert!(GradedWord::new(vec![g(1, 0), g(1, 0)]).canonicalize().is_none());
    let w = GradedWord::new(vec![g(2, 0), g(2, 0)]).canonicalize().unwrap();
    assert_eq!(w.sign(), 1);
}

#[test]
fn word_printing() {
    let w = GradedWord::new(vec![g(2, 0), g(1, 1)]).canonicalize().unwrap();
    assert_eq!(w.to_string(), "+e[1,2]⊙e[2,1]");
    let w = GradedWord::new(vec![g(1, 1), g(1, 0)]).canonicalize().unwrap();
    assert_eq!(w.to_string(), "-e[1,1]⊙e[1,2]");
}

#[test]
fn enumeration_examples() {
    assert_eq!(enumerate_words_ranks(&[2], 2, -2), vec![vec![g(1, 0), g(1, 1)]]);
    assert_eq!(enumerate_words_ranks(&[0, 1], 2, -4), vec![vec![g(2, 0), g(2, 0)]]);
    assert_eq!(enumerate_words_ranks(&[3, 1], 3, -3), vec![vec![g(1, 0), g(1, 1), g(1, 2)]]);
    assert!(enumerate_words_ranks(&[3, 1], 4, -4).is_empty());
}

/// Number of words of length k and degree m from the generating function
/// Π_even (1 - s t^l)^{-1} Π_odd (1 + s t^l), truncated.
fn gf_count(ranks: &[usize], k: usize, m: i32) -> u64 {
    let dmax = (-m) as usize;
    let mut c = vec![vec![0u64; dmax + 1]; k + 1];
    c[0][0] = 1;
    for (li, &r) in ranks.iter().enumerate() {
        let l = li + 1;
        for _ in 0..r {
            let mut n = vec![vec![0u64; dmax + 1]; k + 1];
            for a in 0..=k {
                for d in 0..=dmax {
                    if c[a][d] == 0 {
                        continue;
                    }
                    let maxrep = if l % 2 == 1 { 1 } else { k };
                    for rep in 0..=maxrep {
                        let (a2, d2) = (a + rep, d + rep * l);
                        if a2 > k || d2 > dmax {
                            break;
                        }
                        n[a2][d2] += c[a][d];
                    }
                }
            }
            c = n;
        }
    }
    c[k][dmax]
}

#[test]
fn identity_comorphism() {
    let r = Ring::grevlex(&["x"]);
    let mut id = TaylorMap::new(1, 0);
    for gen in [g(1, 0), g(1, 1), g(2, 0)] {
        id.set(&[gen], Elem::single(gen, Poly::one(&r)));
    }
    let w = GradedWord::new(vec![g(1, 0), g(1, 1), g(2, 0)]);
    let t = extend_comorphism(std::slice::from_ref(&id), &w, 3);
    assert_eq!(t.len(), 1);
    assert_eq!(t.coeff(&[g(1, 0), g(1, 1), g(2, 0)]), Some(&Poly::one(&r)));
    assert!(extend_comorphism(std::slice::from_ref(&id), &w, 2).is_zero());
}

#[test]
fn comorphism_on_pair() {
    let r = Ring::grevlex(&["x"]);
    let x = Poly::var(&r, 0);
    let mut f0 = TaylorMap::new(1, 0);
    f0.set(&[g(1, 0)], Elem::single(g(1, 1), x.clone()));
    f0.set(&[g(1, 1)], Elem::single(g(1, 0), Poly::one(&r)));
    let mut f1 = TaylorMap::new(2, 0);
    f1.set(&[g(1, 0), g(1, 1)], Elem::single(g(2, 0), x.clone()));
    let w = GradedWord::new(vec![g(1, 0), g(1, 1)]);
    let maps = [f0, f1];
    let t1 = extend_comorphism(&maps, &w, 1);
    assert_eq!(t1.coeff(&[g(2, 0)]), Some(&x));
    // F0(x)⊙F0(y) = x e[1,2]⊙e[1,1] = -x e[1,1]⊙e[1,2]
    let t2 = extend_comorphism(&maps, &w, 2);
    assert_eq!(t2.len(), 1);
    assert_eq!(t2.coeff(&[g(1, 0), g(1, 1)]), Some(&-&x));
}

#[test]
fn coderivation_of_linear_map() {
    let r = Ring::grevlex(&["x"]);
    let x = Poly::var(&r, 0);
    // odd H: e[1,1] -> x·d[1] (level 0), e[1,2] -> e[1,1]... keep degree +1:
    let mut h = TaylorMap::new(1, 1);
    h.set(&[g(2, 0)], Elem::single(g(1, 0), x.clone()));
    h.set(&[g(2, 1)], Elem::single(g(1, 1), Poly::one(&r)));
    let w = GradedWord::new(vec![g(2, 0), g(2, 1)]);
    let t = extend_coderivation(std::slice::from_ref(&h), &Base::Identity(&r), &w, 2);
    // H(a)⊙b + H(b)⊙a with a, b even
    let mut expect = SymTensor::zero();
    expect.add_word(&[g(1, 0), g(2, 1)], &x);
    expect.add_word(&[g(1, 1), g(2, 0)], &Poly::one(&r));
    assert_eq!(t, expect);

    let zero = TaylorMap::new(1, 1);
    assert!(coderivation_full(&[zero], &Base::Identity(&r), &w).is_zero());
}

#[test]
fn coderivation_arity_two_on_three_letters() {
    let r = Ring::grevlex(&["x"]);
    let x = Poly::var(&r, 0);
    let one = Poly::one(&r);
    let mut h = TaylorMap::new(2, 1);
    h.set(&[g(1, 0), g(1, 1)], Elem::single(g(1, 0), x.clone()));
    h.set(&[g(1, 0), g(1, 2)], Elem::single(g(1, 1), one.clone()));
    h.set(&[g(1, 1), g(1, 2)], Elem::single(g(1, 2), x.clone()));
    let (a, b, c) = (g(1, 0), g(1, 1), g(1, 2));
    let w = GradedWord::new(vec![a, b, c]);
    let t = extend_coderivation(std::slice::from_ref(&h), &Base::Identity(&r), &w, 2);
    // direct: H(ab)c + ε H(ac) b + ε H(bc) a, ε from the three (2,1)-shuffles
    let mut expect = SymTensor::zero();
    let hs = [(vec![a, b], c, 1), (vec![a, c], b, -1), (vec![b, c], a, 1)];
    for (pair, rest, eps) in hs {
        let v = h.eval(&pair);
        for (gen, coef) in v.iter() {
            let cc = if eps < 0 { -coef } else { coef.clone() };
            expect.add_word(&[*gen, rest], &cc);
        }
    }
    assert_eq!(t, expect);
}

const SRC: [usize; 3] = [3, 2, 1];

fn random_poly(rng: &mut ChaCha8Rng, r: &Ring) -> Poly {
    if rng.gen_bool(0.3) {
        return Poly::zero(r);
    }
    let a: i64 = rng.gen_range(-2..3);
    let b: i64 = rng.gen_range(-2..3);
    Poly::from_terms(r, vec![(vec![1], q(a)), (vec![0], q(b))])
}

fn random_maps(rng: &mut ChaCha8Rng, r: &Ring, shift: i32, max_arity: usize) -> Vec<TaylorMap> {
    let mut out = Vec::new();
    for k in 1..=max_arity {
        let mut t = TaylorMap::new(k, shift);
        for m in -4..=-1 {
            let lvl = -(m + shift);
            if !(1..=3).contains(&lvl) {
                continue;
            }
            for w in enumerate_words_ranks(&SRC, k, m) {
                let mut v = Elem::zero();
                for j in 0..SRC[lvl as usize - 1] {
                    v.add_term(g(lvl as u32, j as u32), &random_poly(rng, r));
                }
                t.set(&w, v);
            }
        }
        out.push(t);
    }
    out
}

fn all_words(max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    for k in 1..=max_len {
        out.extend(enumerate_words_window(&SRC, k, -5, -1));
    }
    out
}

fn apply_full_tensor2(map: impl Fn(&GradedWord) -> SymTensor, map2: impl Fn(&GradedWord) -> SymTensor, t: &Tensor2, sign_of: impl Fn(&[Gen]) -> i32) -> Tensor2 {
    let mut out = Tensor2::zero();
    for ((a, b), c) in t.iter() {
        let fa = map(&GradedWord::new(a.clone()));
        let fb = map2(&GradedWord::new(b.clone()));
        let mut fa_c = SymTensor::zero();
        for (w, cw) in fa.iter() {
            fa_c.add_word(w, &(cw * c));
        }
        out.add_product(sign_of(a), &fa_c, &fb);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonicalization_is_consistent(letters in prop::collection::vec((1u32..3, 0u32..3), 1..5), seed in any::<u64>()) {
        let w: Vec<Gen> = letters.iter().map(|(l, i)| g(*l, *i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut shuffled = w.clone();
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut rng);
        let a = GradedWord::new(w.clone()).canonicalize();
        match a {
            None => prop_assert!(GradedWord::new(shuffled).canonicalize().is_none()),
            Some(a) => {
                prop_assert_eq!(a.canonicalize().unwrap(), a.clone());
                // going through the shuffled order must agree: w = s_w·c and shuffled = s_s·c
                let b = GradedWord::new(shuffled.clone()).canonicalize().unwrap();
                prop_assert_eq!(a.letters(), b.letters());
                let perm: Vec<usize> = {
                    let mut used = vec![false; w.len()];
                    shuffled.iter().map(|x| {
                        let p = (0..w.len()).find(|&p| !used[p] && w[p] == *x).unwrap();
                        used[p] = true;
                        p
                    }).collect()
                };
                let degs: Vec<i32> = w.iter().map(|x| x.degree()).collect();
                prop_assert_eq!(b.sign(), koszul_sign(&perm, &degs) * a.sign());
            }
        }
    }

    #[test]
    fn enumeration_matches_generating_function(r1 in 0usize..4, r2 in 0usize..3, r3 in 0usize..2, k in 1usize..5, m in -7i32..0) {
        let ranks = [r1, r2, r3];
        let words = enumerate_words_ranks(&ranks, k, m);
        prop_assert_eq!(words.len() as u64, gf_count(&ranks, k, m));
        let mut sorted = words.clone();
        sorted.sort();
        prop_assert_eq!(sorted, words);
    }

    #[test]
    fn comorphism_respects_deconcatenation(seed in any::<u64>()) {
        let r = Ring::grevlex(&["x"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let maps = random_maps(&mut rng, &r, 0, 3);
        for w in all_words(3) {
            let gw = GradedWord::new(w.clone());
            let lhs = coproduct(&comorphism_full(&maps, &gw));
            let rhs = apply_full_tensor2(|a| comorphism_full(&maps, a), |b| comorphism_full(&maps, b), &coproduct(&{
                let mut t = SymTensor::zero();
                t.add_word(&w, &Poly::one(&r));
                t
            }), |_| 1);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn factored_form_expands_to_the_same(seed in any::<u64>()) {
        let r = Ring::grevlex(&["x"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let maps = random_maps(&mut rng, &r, 0, 3);
        for w in all_words(4) {
            let gw = GradedWord::new(w.clone());
            for k in 1..=w.len() {
                let mut t = SymTensor::zero();
                for (c, f) in comorphism_factored(&maps, &gw, k) {
                    t.add_product(&c, &f);
                }
                prop_assert_eq!(t, extend_comorphism(&maps, &gw, k));
            }
        }
    }

    #[test]
    fn co_leibniz(seed in any::<u64>(), shift in 0i32..2) {
        let r = Ring::grevlex(&["x"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_maps(&mut rng, &r, 0, 3);
        let h = random_maps(&mut rng, &r, shift, 3);
        let base = Base::Maps(&phi);
        for w in all_words(3) {
            let gw = GradedWord::new(w.clone());
            let lhs = coproduct(&coderivation_full(&h, &base, &gw));
            let mut unit = SymTensor::zero();
            unit.add_word(&w, &Poly::one(&r));
            let d = coproduct(&unit);
            let hp = apply_full_tensor2(|a| coderivation_full(&h, &base, a), |b| comorphism_full(&phi, b), &d, |_| 1);
            let ph = apply_full_tensor2(|a| comorphism_full(&phi, a), |b| coderivation_full(&h, &base, b), &d, |a| {
                if shift % 2 != 0 && word_degree(a) % 2 != 0 { -1 } else { 1 }
            });
            let mut rhs = hp;
            for ((a, b), c) in ph.iter() {
                rhs.add_term(a, b, c);
            }
            prop_assert_eq!(lhs, rhs);
        }
    }
}
