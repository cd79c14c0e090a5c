//! Closed-form structures: Koszul-function foliations, fields vanishing on
//! an ideal, and vector fields on hyperelliptic curves.

use crate::brackets::{subsets, LieInftyAlgebroid};
use crate::construct::naive_binary;
use crate::modres::{certify_exactness, ExactnessCertificate, FreeModuleMap, FreeResolution, ModresError};
use crate::poly::{univariate_gcd, Poly, Ring, VectorField};
use crate::symalg::{enumerate_words_ranks, Elem, Gen, TaylorMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Modres(#[from] ModresError),
    #[error("{0}")]
    Input(String),
}

/// Position of a sorted index set in the lexicographic list of k-subsets.
fn subset_index(all: &[Vec<usize>], s: &[usize]) -> usize {
    all.binary_search_by(|t| t.as_slice().cmp(s)).expect("index set present")
}

/// Sorts a list of distinct-or-not indices as anticommuting letters.
/// `None` if an index repeats.
fn sort_indices(mut v: Vec<usize>) -> Option<(Vec<usize>, i32)> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

fn partial(phi: &Poly, idx: &[usize]) -> Poly {
    idx.iter().fold(phi.clone(), |f, &i| f.derivative(i))
}

fn var_names(ring: &Ring, set: &[usize]) -> String {
    set.iter().map(|&i| format!("∂{}", ring.vars()[i])).collect::<Vec<_>>().join("∧")
}

/// Koszul resolution 𝔛^{•+1}(V) of F_φ = {X : X[φ] = 0} with d = ι_{dφ} and
/// ρ(∂_i∧∂_j) = φ_j∂_i − φ_i∂_j.
pub fn koszul_resolution(phi: &Poly) -> Result<FreeResolution, CatalogError> {
    let ring = phi.ring().clone();
    let dim = ring.nvars();
    if dim < 2 {
        return Err(CatalogError::Input("the Koszul foliation needs at least two variables".into()));
    }
    let grad: Vec<Poly> = (0..dim).map(|i| phi.derivative(i)).collect();
    let sets: Vec<Vec<Vec<usize>>> = (0..=dim).map(|k| subsets(dim, k)).collect();
    let zero = Poly::zero(&ring);
    let anchor_cols: Vec<Vec<Poly>> = sets[2]
        .iter()
        .map(|s| {
            let mut c = vec![zero.clone(); dim];
            c[s[0]] = grad[s[1]].clone();
            c[s[1]] = -&grad[s[0]];
            c
        })
        .collect();
    let anchor = FreeModuleMap::from_columns(&ring, dim, &anchor_cols, -1, 0);
    let mut diffs = Vec::new();
    for k in 3..=dim {
        let level = k - 1;
        let cols: Vec<Vec<Poly>> = sets[k]
            .iter()
            .map(|s| {
                let mut c = vec![zero.clone(); sets[k - 1].len()];
                for (j, &i) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&t| t != i).collect();
                    let pos = subset_index(&sets[k - 1], &rest);
                    c[pos] = if j % 2 == 0 { grad[i].clone() } else { -&grad[i] };
                }
                c
            })
            .collect();
        diffs.push(FreeModuleMap::from_columns(&ring, sets[k - 1].len(), &cols, -(level as i32), -(level as i32) + 1));
    }
    let names = (2..=dim).map(|k| sets[k].iter().map(|s| var_names(&ring, s)).collect()).collect();
    Ok(FreeResolution::new(&ring, anchor, diffs)?.with_names(names))
}

/// Value of ℓ_n on ∂_{I_1}, …, ∂_{I_n}: Σ ε φ_{i_1…i_n} ∂_{I_1^{i_1}•…•I_n^{i_n}}
/// with ε the signature bringing i_1, …, i_n to the front of the
/// concatenation, times (−1)^{Σ_{s<t}(|I_s|−1)}.
pub fn koszul_bracket_on(phi: &Poly, sets: &[&[usize]]) -> Vec<(Vec<usize>, Poly)> {
    let n = sets.len();
    let mut out: Vec<(Vec<usize>, Poly)> = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        // slots of the chosen indices inside the concatenation
        let mut offset = 0;
        let mut chosen_slots = Vec::with_capacity(n);
        for (s, set) in sets.iter().enumerate() {
            chosen_slots.push(offset + choice[s]);
            offset += set.len();
        }
        let concat: Vec<usize> = sets.iter().flat_map(|s| s.iter().copied()).collect();
        let mut order: Vec<usize> = chosen_slots.clone();
        order.extend((0..concat.len()).filter(|p| !chosen_slots.contains(p)));
        let eps = permutation_sign(&order);
        let picked: Vec<usize> = chosen_slots.iter().map(|&p| concat[p]).collect();
        let rest: Vec<usize> = order[n..].iter().map(|&p| concat[p]).collect();
        if let Some((sorted, s)) = sort_indices(rest) {
            let coeff = partial(phi, &picked);
            if !coeff.is_zero() {
                // ε corrected by (−1)^{Σ_{s<t}(|I_s|−1)}; equivalently each slot
                // contracts its own picked index from the left
                let g: usize = sets.iter().enumerate().map(|(t, set)| (n - 1 - t) * (set.len() - 1)).sum();
                let sign = eps * s * if g % 2 == 1 { -1 } else { 1 };
                let c = if sign < 0 { -&coeff } else { coeff };
                match out.iter_mut().find(|(k, _)| *k == sorted) {
                    Some((_, v)) => *v = &*v + &c,
                    None => out.push((sorted, c)),
                }
            }
        }
        // next choice
        let mut s = n;
        loop {
            if s == 0 {
                out.retain(|(_, v)| !v.is_zero());
                return out;
            }
            s -= 1;
            choice[s] += 1;
            if choice[s] < sets[s].len() {
                break;
            }
            choice[s] = 0;
        }
    }
}

/// Sign of the permutation `order` (order[k] = old position placed at k).
fn permutation_sign(order: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..order.len() {
        for j in (i + 1)..order.len() {
            if order[i] > order[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// The universal Lie ∞-algebroid of F_φ with the closed-form brackets.
pub fn koszul_foliation(phi: &Poly) -> Result<LieInftyAlgebroid, CatalogError> {
    let res = koszul_resolution(phi)?;
    certify_exactness(&res)?;
    let dim = res.ring().nvars();
    let sets: Vec<Vec<Vec<usize>>> = (0..=dim).map(|k| subsets(dim, k)).collect();
    let ranks = res.ranks();
    let l = res.length() as i32;
    let mut alg = LieInftyAlgebroid::new(res);
    for n in 2..=alg.max_arity() {
        let mut t = TaylorMap::new(n, 1);
        for level in 1..=l {
            let m = -level - 1;
            if m > -(n as i32) {
                continue;
            }
            for w in enumerate_words_ranks(&ranks, n, m) {
                let args: Vec<&[usize]> = w.iter().map(|g| sets[g.level as usize + 1][g.index as usize].as_slice()).collect();
                let mut v = Elem::zero();
                for (set, c) in koszul_bracket_on(phi, &args) {
                    let lv = set.len() - 1;
                    v.add_term(Gen::new(lv as u32, subset_index(&sets[set.len()], &set) as u32), &c);
                }
                if !v.is_zero() {
                    t.set(&w, v);
                }
            }
        }
        alg.set_bracket(n, t).map_err(|e| CatalogError::Input(e.to_string()))?;
    }
    Ok(alg)
}

/// A catalog structure with the outcome of the exactness check.
#[derive(Debug, Clone)]
pub struct CatalogAlgebroid {
    pub alg: LieInftyAlgebroid,
    pub exactness: Result<ExactnessCertificate, ModresError>,
}

/// μ-words of length j as sorted index sets, each paired with ∂_a,
/// ordered word-major.
fn mu_generators(r: usize, dim: usize, j: usize) -> Vec<(Vec<usize>, usize)> {
    subsets(r, j).into_iter().flat_map(|s| (0..dim).map(move |a| (s.clone(), a))).collect()
}

/// Koszul-type complex K(φ) ⊗ Der(O) with anchor μ_i∂_a ↦ φ_i∂_a and the
/// brackets of the Poisson ∞-structure {μ_i, ∂_{a_1}, …, ∂_{a_r}} = ∂^rφ_i.
pub fn vanishing_ideal(ring: &Ring, phis: &[Poly]) -> Result<CatalogAlgebroid, CatalogError> {
    let r = phis.len();
    if r == 0 {
        return Err(CatalogError::Input("at least one generator is needed".into()));
    }
    let dim = ring.nvars();
    let zero = Poly::zero(ring);
    let gens: Vec<Vec<(Vec<usize>, usize)>> = (0..=r).map(|j| mu_generators(r, dim, j)).collect();
    let find = |j: usize, set: &[usize], a: usize| gens[j].iter().position(|(s, b)| s == set && *b == a).unwrap();

    let anchor_cols: Vec<Vec<Poly>> = gens[1]
        .iter()
        .map(|(s, a)| {
            let mut c = vec![zero.clone(); dim];
            c[*a] = phis[s[0]].clone();
            c
        })
        .collect();
    let anchor = FreeModuleMap::from_columns(ring, dim, &anchor_cols, -1, 0);
    let mut diffs = Vec::new();
    for j in 2..=r {
        let cols: Vec<Vec<Poly>> = gens[j]
            .iter()
            .map(|(s, a)| {
                let mut c = vec![zero.clone(); gens[j - 1].len()];
                for (t, &i) in s.iter().enumerate() {
                    let rest: Vec<usize> = s.iter().copied().filter(|&u| u != i).collect();
                    // the selected μ is contracted from the front
                    let sign = if t % 2 == 0 { 1 } else { -1 };
                    let pos = find(j - 1, &rest, *a);
                    c[pos] = if sign > 0 { phis[i].clone() } else { -&phis[i] };
                }
                c
            })
            .collect();
        diffs.push(FreeModuleMap::from_columns(ring, gens[j - 1].len(), &cols, -(j as i32), -(j as i32) + 1));
    }
    let names = (1..=r)
        .map(|j| {
            gens[j]
                .iter()
                .map(|(s, a)| {
                    let mu: String = s.iter().map(|i| format!("μ{}", i + 1)).collect();
                    format!("{}∂{}", mu, ring.vars()[*a])
                })
                .collect()
        })
        .collect();
    let res = FreeResolution::new(ring, anchor, diffs)?.with_names(names);
    let exactness = certify_exactness(&res);
    let ranks = res.ranks();
    let l = res.length() as i32;
    let mut alg = LieInftyAlgebroid::new(res);
    for n in 2..=alg.max_arity() {
        let mut t = TaylorMap::new(n, 1);
        for level in 1..=l {
            let m = -level - 1;
            if m > -(n as i32) {
                continue;
            }
            for w in enumerate_words_ranks(&ranks, n, m) {
                let args: Vec<&(Vec<usize>, usize)> = w.iter().map(|g| &gens[g.level as usize][g.index as usize]).collect();
                let mut v = Elem::zero();
                for (set, a, c) in vanishing_bracket_on(phis, &args) {
                    v.add_term(Gen::new(set.len() as u32, find(set.len(), &set, a) as u32), &c);
                }
                if !v.is_zero() {
                    t.set(&w, v);
                }
            }
        }
        alg.set_bracket(n, t).map_err(|e| CatalogError::Input(e.to_string()))?;
    }
    Ok(CatalogAlgebroid { alg, exactness })
}

/// ℓ_n(μ_{I_1}∂_{a_1}, …, μ_{I_n}∂_{a_n}) = Σ_j Σ_{i ∈ I_j} ε ∂^{n−1}φ_i/∂x_{a_{≠j}}
/// μ_{I_1}⋯μ_{I_j∖i}⋯μ_{I_n} ∂_{a_j}, ε = (−1)^{n−1+p} with p the number of
/// μ's before μ_i in the concatenation.
pub fn vanishing_bracket_on(phis: &[Poly], args: &[&(Vec<usize>, usize)]) -> Vec<(Vec<usize>, usize, Poly)> {
    let mut out: Vec<(Vec<usize>, usize, Poly)> = Vec::new();
    let concat: Vec<usize> = args.iter().flat_map(|(s, _)| s.iter().copied()).collect();
    let mut offset = 0;
    for (j, (set, a)) in args.iter().enumerate() {
        let others: Vec<usize> = args.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, g)| g.1).collect();
        for (t, &i) in set.iter().enumerate() {
            let slot = offset + t;
            let mut rest = concat.clone();
            rest.remove(slot);
            // μ's passed by the contraction, and (−1)^{n−1} from the anchor sign
            let g = slot + args.len() - 1;
            let move_sign = if g % 2 == 0 { 1 } else { -1 };
            let Some((sorted, s)) = sort_indices(rest) else { continue };
            let coeff = partial(&phis[i], &others);
            if coeff.is_zero() {
                continue;
            }
            let c = if move_sign * s < 0 { -&coeff } else { coeff };
            match out.iter_mut().find(|(k, b, _)| *k == sorted && *b == *a) {
                Some((_, _, v)) => *v = &*v + &c,
                None => out.push((sorted, *a, c)),
            }
        }
        offset += set.len();
    }
    out.retain(|(_, _, v)| !v.is_zero());
    out
}

/// Hyperelliptic data: the structure and the displayed closed-form 2-bracket
/// ℓ_2(τ, μ) = (h′τ − y d′μ)/d, kept as numerator and denominator because
/// it need not be polynomial.
#[derive(Debug, Clone)]
pub struct Hyperelliptic {
    pub alg: LieInftyAlgebroid,
    /// d(x) = gcd(h, h′).
    pub d: Poly,
    pub bracket_numerator: Elem,
}

/// Der(O_H) for H: y² = 2h(x), over ℚ[x,y]/⟨y² − 2h⟩. Singular case: τ, μ with
/// ρ(τ) = X = y∂x + h′∂y, ρ(μ) = Y = (2h/d)∂x + y(h′/d)∂y, and η with
/// dη = yτ − dμ. ℓ_2(τ, μ) is the polynomial lift of [X, Y]; ℓ_2 vanishes
/// on η and ℓ_{≥3} = 0.
pub fn hyperelliptic(h_src: &Poly) -> Result<Hyperelliptic, CatalogError> {
    let amb = Ring::grevlex(&["x", "y"]);
    let h = h_src.substitute(&[Poly::var(&amb, 0), Poly::zero(&amb)], &amb);
    if h.terms().any(|(e, _)| e[1] != 0) || h.total_degree().unwrap_or(0) < 1 {
        return Err(CatalogError::Input("h must be a non-constant polynomial in x".into()));
    }
    let y = Poly::var(&amb, 1);
    let rel = &(&y * &y) - &h.scale_int(2);
    let ring = amb.quotient(&[rel]);
    let hp = h.derivative(0);
    let d = univariate_gcd(&h, &hp, 0);
    let yq = y.to_ring(&ring);
    let x_field = VectorField::new(&ring, vec![yq.clone(), hp.to_ring(&ring)]);
    if d.is_one() {
        let anchor = FreeModuleMap::from_columns(&ring, 2, &[x_field.comps().to_vec()], -1, 0);
        let res = FreeResolution::new(&ring, anchor, vec![])?.with_names(vec![vec!["X".into()]]);
        return Ok(Hyperelliptic { alg: LieInftyAlgebroid::new(res), d: d.to_ring(&ring), bracket_numerator: Elem::zero() });
    }
    let exact_div = |a: &Poly| -> Poly {
        let (r, q) = crate::poly::normal_form_with_cofactors(a, std::slice::from_ref(&d), &crate::poly::MonomialOrder::lex(2));
        assert!(r.is_zero(), "d divides h and h′");
        q[0].clone()
    };
    let g = exact_div(&h);
    let hpd = exact_div(&hp);
    let y_field = VectorField::new(&ring, vec![g.scale_int(2).to_ring(&ring), (&yq * &hpd.to_ring(&ring))]);
    let anchor = FreeModuleMap::from_columns(&ring, 2, &[x_field.comps().to_vec(), y_field.comps().to_vec()], -1, 0);
    let deta = vec![yq.clone(), -&d.to_ring(&ring)];
    let d2 = FreeModuleMap::from_columns(&ring, 2, &[deta], -2, -1);
    let res = FreeResolution::new(&ring, anchor, vec![d2])?
        .with_names(vec![vec!["tau".into(), "mu".into()], vec!["eta".into()]]);
    let l2 = naive_binary(&res).map_err(|e| CatalogError::Input(e.to_string()))?;
    let mut alg = LieInftyAlgebroid::new(res);
    alg.set_bracket(2, l2).map_err(|e| CatalogError::Input(e.to_string()))?;
    let (tau, mu) = (Gen::new(1, 0), Gen::new(1, 1));
    let mut num = Elem::single(tau, hp.to_ring(&ring));
    num.add_term(mu, &-&(&yq * &d.derivative(0).to_ring(&ring)));
    Ok(Hyperelliptic { alg, d: d.to_ring(&ring), bracket_numerator: num })
}
