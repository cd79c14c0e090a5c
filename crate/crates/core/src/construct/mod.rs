//! The existence algorithm and the operations that transform algebroids.

use rayon::prelude::*;

use crate::brackets::{
    check_jacobi_words, compose, jacobi_words, page_solve, BracketError, LieInftyAlgebroid, Op, PageElement, PageSpace, Report,
};
use crate::modres::{ColumnBasis, FreeModuleMap, FreeResolution, ModresError};
use crate::poly::{ideal_contains, Poly};
use crate::symalg::{enumerate_words_ranks, Elem, Gen, TaylorMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstructError {
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Modres(#[from] ModresError),
    #[error("obstruction for ℓ{0} is not D-closed")]
    ClosednessViolated(usize),
    #[error("ρ(e[1,{}])[{generator}] = {value} is not in the ideal", .anchor_index + 1)]
    NotLieRinehartIdeal { anchor_index: usize, generator: Poly, value: Poly },
}

/// Evaluates `f` on every canonical word of `arity` letters whose value of
/// degree `degree` lands in levels lo..=hi, collecting a table.
fn tabulate(ranks: &[usize], arity: usize, degree: i32, lo: i32, hi: i32, f: impl Fn(&[Gen]) -> Elem + Sync) -> TaylorMap {
    let mut t = TaylorMap::new(arity, degree);
    for level in lo..=hi {
        let m = -level - degree;
        if m > -(arity as i32) {
            continue;
        }
        let words = enumerate_words_ranks(ranks, arity, m);
        let vals: Vec<(Vec<Gen>, Elem)> = words.par_iter().map(|w| (w.clone(), f(w))).collect();
        for (w, v) in vals {
            if !v.is_zero() {
                t.set(&w, v);
            }
        }
    }
    t
}

/// ℓ̃_2 on E_{-1}: [ρe_i, ρe_j] = Σ_k u^k_{ij} ρe_k by division against the
/// anchor columns, then ½(u_ij − u_ji). Zero on deeper generators.
pub fn naive_binary(res: &FreeResolution) -> Result<TaylorMap, ConstructError> {
    let ring = res.ring();
    let r1 = res.rank(1);
    let basis = ColumnBasis::new(ring, ring.nvars(), &res.anchor().columns());
    let fields = res.anchor_fields();
    let half = crate::poly::qf(1, 2);
    let mut t = TaylorMap::new(2, 1);
    for i in 0..r1 {
        for j in (i + 1)..r1 {
            let v = fields[i].bracket(&fields[j]);
            let w = fields[j].bracket(&fields[i]);
            let lift = |x: &crate::poly::VectorField, a: usize, b: usize| {
                basis.lift(x.comps()).map_err(|_| {
                    BracketError::LiftFailed {
                        level: 1,
                        word: vec![Gen::new(1, a as u32), Gen::new(1, b as u32)],
                        witness: Elem::from_column(0, x.comps()),
                    }
                })
            };
            let uij = lift(&v, i, j)?;
            let uji = lift(&w, j, i)?;
            let u: Vec<Poly> = uij.iter().zip(&uji).map(|(a, b)| (a - b).scale(&half)).collect();
            let e = Elem::from_column(1, &u);
            if !e.is_zero() {
                t.set(&[Gen::new(1, i as u32), Gen::new(1, j as u32)], e);
            }
        }
    }
    Ok(t)
}

/// [ℓ_1, B]_RN = ℓ_1∘B + B∘ℓ_1 for a binary bracket B (Leibniz applied),
/// on every pair with values in E.
pub fn differential_defect(res: &FreeResolution, l2: &TaylorMap) -> TaylorMap {
    let mut alg = LieInftyAlgebroid::new(res.clone());
    alg.set_bracket(2, l2.clone()).expect("binary table has degree +1");
    let l = res.length() as i32;
    let a = &alg;
    tabulate(&res.ranks(), 2, 2, 1, l, |w| {
        let mut v = compose(&Op::Bracket(a, 1), &Op::Bracket(a, 2), w);
        v.add_assign(&compose(&Op::Bracket(a, 2), &Op::Bracket(a, 1), w));
        v
    })
}

/// ℓ_2 = ℓ̃_2 + τ_2 with D(τ_2) = −[d, ℓ̃_2]_RN.
pub fn build_binary(res: &FreeResolution) -> Result<TaylorMap, ConstructError> {
    let naive = naive_binary(res)?;
    let c = differential_defect(res, &naive);
    if c.is_zero() {
        return Ok(naive);
    }
    let tau = page_solve(res, &PageElement::new(c.neg()))?;
    Ok(naive.add(tau.map()))
}

/// −Σ_{i,j ≥ 2, i+j = n+2} ℓ_i∘ℓ_j on words of n+1 letters.
pub fn maurer_obstruction(alg: &LieInftyAlgebroid, n: usize) -> TaylorMap {
    let l = alg.length() as i32;
    tabulate(&alg.ranks(), n + 1, 2, 1, l, |w| {
        let mut v = Elem::zero();
        for i in 2..=n {
            let j = n + 2 - i;
            if alg.bracket(j).is_none() || (alg.bracket(i).is_none() && i != 2) {
                continue;
            }
            v.add_assign(&compose(&Op::Bracket(alg, i), &Op::Bracket(alg, j), w));
        }
        v.neg()
    })
}

/// Options for the higher-bracket recursion.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Stop after this arity (defaults to K = L + 1).
    pub max_arity: Option<usize>,
    /// Shuffles Gröbner tie-breaks for lifts of arity ≥ 3.
    pub seed: Option<u64>,
    /// Sets ℓ_k = 0 on ⊙^k E_{-1} for k ≥ 3 and checks that this is allowed.
    pub vanish_on_degree_one: bool,
}

/// Lie ∞-algebroid on `res` with the given binary bracket: ℓ_{n+1} solves
/// D(ℓ_{n+1}) = −Σ ℓ_i∘ℓ_j for n = 2..K−1.
pub fn complete_from_binary(res: &FreeResolution, l2: TaylorMap, opts: BuildOptions) -> Result<LieInftyAlgebroid, ConstructError> {
    let mut alg = LieInftyAlgebroid::new(res.clone());
    alg.set_bracket(2, l2)?;
    let k_max = res.length() + 1;
    let cap = opts.max_arity.unwrap_or(k_max).min(k_max);
    let space = PageSpace::endo(res).with_seed(opts.seed);
    for n in 2..cap {
        let p = PageElement::new(maurer_obstruction(&alg, n));
        if !space.page_d(&p).is_zero() {
            return Err(ConstructError::ClosednessViolated(n + 1));
        }
        let mut next = space.solve(&p)?.into_map();
        if opts.vanish_on_degree_one {
            // kept only when the trimmed table still solves the equation
            let trimmed = drop_degree_one_words(&next);
            if space.page_d(&PageElement::new(trimmed.clone())) == p {
                next = trimmed;
            }
        }
        alg.set_bracket(n + 1, next)?;
    }
    if cap < k_max {
        alg.mark_partial();
    }
    Ok(alg)
}

fn drop_degree_one_words(t: &TaylorMap) -> TaylorMap {
    let mut out = TaylorMap::new(t.arity(), t.shift());
    for (w, v) in t.entries() {
        if w.iter().any(|g| g.level >= 2) {
            out.set(w, v.clone());
        }
    }
    out
}

/// The full existence construction.
pub fn build_all(res: &FreeResolution, opts: BuildOptions) -> Result<LieInftyAlgebroid, ConstructError> {
    let l2 = build_binary(res)?;
    complete_from_binary(res, l2, opts)
}

/// Lie 2-algebroid pieces of a length-2 structure.
#[derive(Clone, Debug)]
pub struct Lie2Data {
    pub alg: LieInftyAlgebroid,
    /// ℓ_2 on E_{-1} ⊙ E_{-1}.
    pub bracket: TaylorMap,
    /// ∇_x y = ℓ_2(x, y) for x ∈ E_{-1}, y ∈ E_{-2}.
    pub nabla: TaylorMap,
    /// ℓ_3 on E_{-1}^{⊙3}.
    pub ternary: TaylorMap,
    /// The three compatibility axioms, as restrictions of the Jacobi identities.
    pub axioms: Report,
}

fn restrict_words(t: &TaylorMap, pred: impl Fn(&[Gen]) -> bool) -> TaylorMap {
    let mut out = TaylorMap::new(t.arity(), t.shift());
    for (w, v) in t.entries() {
        if pred(w) {
            out.set(w, v.clone());
        }
    }
    out
}

pub fn build_lie2(res: &FreeResolution, seed: Option<u64>) -> Result<Lie2Data, ConstructError> {
    if res.length() != 2 {
        return Err(ConstructError::Modres(ModresError::Malformed(format!(
            "a Lie 2-algebroid needs a resolution of length 2, got {}",
            res.length()
        ))));
    }
    let alg = build_all(res, BuildOptions { seed, ..Default::default() })?;
    let l2 = alg.bracket_or_zero(2);
    let l3 = alg.bracket_or_zero(3);
    let levels = |w: &[Gen]| w.iter().map(|g| g.level).collect::<Vec<_>>();
    let bracket = restrict_words(&l2, |w| levels(w) == [1, 1]);
    let nabla = restrict_words(&l2, |w| levels(w) == [1, 2]);
    let ternary = restrict_words(&l3, |w| levels(w) == [1, 1, 1]);
    let mut axioms = Report::default();
    let pattern_check = |name: &str, n: usize, pat: &[u32]| {
        let words: Vec<Vec<Gen>> = jacobi_words(&alg, n).into_iter().filter(|w| levels(w) == pat).collect();
        check_jacobi_words(name, &alg, &words)
    };
    axioms.push(pattern_check("(a) ℓ1∘∇ + ∇∘ℓ1 = 0 on E_{-1}⊙E_{-2}", 2, &[1, 2]));
    axioms.push(pattern_check("(b) ℓ1∘ℓ3 + Jacobiator = 0 on E_{-1}^3", 3, &[1, 1, 1]));
    axioms.push(pattern_check("(c) ℓ3∘ℓ1 + Jacobiator = 0 on E_{-1}^2⊙E_{-2}", 3, &[1, 1, 2]));
    Ok(Lie2Data { alg, bracket, nabla, ternary, axioms })
}

/// χ-rescaled structure on the submodule χA: ρ′ = χρ,
/// ℓ′_2(x,y) = χℓ_2(x,y) + ρ(x)[χ]y + (−1)^{|x||y|}ρ(y)[χ]x, ℓ′_k = χ^{k−1}ℓ_k.
pub fn rescale(alg: &LieInftyAlgebroid, chi: &Poly) -> LieInftyAlgebroid {
    let res = alg.res();
    let ring = res.ring();
    let cols: Vec<Vec<Poly>> = res.anchor().columns().iter().map(|c| c.iter().map(|p| p * chi).collect()).collect();
    let anchor = FreeModuleMap::from_columns(ring, ring.nvars(), &cols, -1, 0);
    let new_res = FreeResolution::new(ring, anchor, res.diffs().to_vec())
        .expect("same shapes")
        .with_names(res.names().to_vec());
    let mut out = LieInftyAlgebroid::new(new_res);
    // ρ(x)[χ]y for x of degree −1 and any generator y; the symmetric term
    // appears only when y has degree −1 too
    let r1 = res.rank(1) as u32;
    let mut l2 = alg.bracket_or_zero(2).map_values(|v| v.scale(chi));
    for i in 0..r1 {
        let x = Gen::new(1, i);
        let dchi = alg.anchor_of(i).apply(chi);
        for level in 1..=res.length() as u32 {
            for j in 0..res.rank(level as usize) as u32 {
                let y = Gen::new(level, j);
                if level == 1 && j <= i {
                    continue;
                }
                let mut extra = Elem::single(y, dchi.clone());
                if level == 1 {
                    extra.add_assign(&Elem::single(x, -&alg.anchor_of(j).apply(chi)));
                }
                l2.add_to(&[x, y], &extra);
            }
        }
    }
    out.set_bracket(2, l2).expect("degrees preserved");
    for k in alg.bracket_arities().into_iter().filter(|&k| k >= 3) {
        let factor = chi.pow(k as u32 - 1);
        out.set_bracket(k, alg.bracket(k).unwrap().map_values(|v| v.scale(&factor))).expect("degrees preserved");
    }
    out
}

/// The structure over O/I, after checking ρ(e_j)[g] ∈ I for every anchor
/// image and every generator g of I.
pub fn restrict(alg: &LieInftyAlgebroid, ideal: &[Poly]) -> Result<LieInftyAlgebroid, ConstructError> {
    let res = alg.res();
    for j in 0..res.rank(1) {
        let x = alg.anchor_of(j as u32);
        for g in ideal {
            let v = x.apply(g);
            if !ideal_contains(ideal, &v) {
                return Err(ConstructError::NotLieRinehartIdeal { anchor_index: j, generator: g.clone(), value: v });
            }
        }
    }
    let q = alg.ring().quotient(ideal);
    if q.is_zero_ring() {
        return Ok(LieInftyAlgebroid::new(FreeResolution::empty(&q)));
    }
    Ok(alg.map_ring(&q))
}
