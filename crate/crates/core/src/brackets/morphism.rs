use crate::modres::ColumnBasis;
use crate::poly::Poly;
use crate::symalg::{comorphism_factored, enumerate_words_ranks, format_word, koszul_sign, Elem, Gen, GradedWord, TaylorMap};

use super::algebroid::{eval_bracket_unchecked, eval_multilinear, subsets, LieInftyAlgebroid};
use super::page::{PageElement, PageSpace};
use super::verify::{check_all, Report};
use super::BracketError;

/// Taylor coefficients Φ_r: ⊙^{r+1}E′ → E of degree 0, r = 0..=cap.
#[derive(Clone, Debug)]
pub struct MorphismTaylor<'a> {
    pub source: &'a LieInftyAlgebroid,
    pub target: &'a LieInftyAlgebroid,
    coeffs: Vec<TaylorMap>,
}

impl<'a> MorphismTaylor<'a> {
    pub fn new(source: &'a LieInftyAlgebroid, target: &'a LieInftyAlgebroid, coeffs: Vec<TaylorMap>) -> Self {
        for (r, c) in coeffs.iter().enumerate() {
            assert_eq!(c.arity(), r + 1, "Φ_r has r+1 arguments");
            assert_eq!(c.shift(), 0, "Taylor coefficients have degree 0");
        }
        MorphismTaylor { source, target, coeffs }
    }

    /// Φ_0 = id and no higher coefficients.
    pub fn identity(alg: &'a LieInftyAlgebroid) -> Self {
        let mut id = TaylorMap::new(1, 0);
        let one = Poly::one(alg.ring());
        for (li, &r) in alg.ranks().iter().enumerate() {
            for j in 0..r {
                let g = Gen::new(li as u32 + 1, j as u32);
                id.set(&[g], Elem::single(g, one.clone()));
            }
        }
        MorphismTaylor { source: alg, target: alg, coeffs: vec![id] }
    }

    pub fn coeffs(&self) -> &[TaylorMap] {
        &self.coeffs
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn phi(&self, r: usize) -> Option<&TaylorMap> {
        self.coeffs.get(r)
    }

    /// Σ_i (Φ_{n−i}∘ℓ′_i)(letters).
    pub fn lhs(&self, letters: &[Gen]) -> Elem {
        let n = letters.len();
        let degrees: Vec<i32> = letters.iter().map(|g| g.degree()).collect();
        let mut out = Elem::zero();
        for i in 1..=n {
            let (Some(li), Some(ph)) = (self.source.bracket(i), self.phi(n - i)) else { continue };
            for s in subsets(n, i) {
                let sub: Vec<Gen> = s.iter().map(|&p| letters[p]).collect();
                let v = li.eval(&sub);
                if v.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = (0..n).filter(|p| !s.contains(p)).collect();
                let perm: Vec<usize> = s.iter().chain(&rest).copied().collect();
                let eps = koszul_sign(&perm, &degrees);
                let one = Poly::one(self.source.ring());
                let mut args = vec![v];
                args.extend(rest.iter().map(|&p| Elem::single(letters[p], one.clone())));
                out.add_assign(&eval_multilinear(ph, &args).scale_sign(eps));
            }
        }
        out
    }

    /// Σ_k ℓ_k(Φ̄^{(k)}(letters)), with Φ̄ kept factored so that ℓ_2 sees
    /// its arguments with their coefficients.
    pub fn rhs(&self, letters: &[Gen]) -> Elem {
        let w = GradedWord::new(letters.to_vec());
        let mut out = Elem::zero();
        for k in 1..=letters.len() {
            if self.target.bracket(k).is_none() && k != 2 {
                continue;
            }
            for (c, factors) in comorphism_factored(&self.coeffs, &w, k) {
                let v = eval_bracket_unchecked(self.target, k, &factors);
                out.add_assign(&v.scale_q(&c));
            }
        }
        out
    }
}

/// Chain-map, anchor and arity-n morphism identities for n = 1..=cap+1 on
/// every source word whose value lies in E.
pub fn check_morphism(phi: &MorphismTaylor<'_>, cap: Option<usize>) -> Report {
    let cap = cap.unwrap_or(phi.cap());
    let mut rep = Report::default();
    let src = phi.source;
    let tgt = phi.target;
    let r1 = src.res().rank(1) as u32;
    let gens: Vec<u32> = (0..r1).collect();
    let zero_phi0 = TaylorMap::new(1, 0);
    let phi0 = phi.phi(0).unwrap_or(&zero_phi0);
    rep.push(check_all("anchor compatibility ρ∘Φ_0 = ρ′", &gens, |&j| {
        let g = Gen::new(1, j);
        if tgt.rho(&phi0.eval(&[g])) == src.anchor_of(j) {
            None
        } else {
            Some(format_word(&[g]))
        }
    }));
    let ranks = src.ranks();
    let l = tgt.length() as i32;
    for n in 1..=cap + 1 {
        let mut words = Vec::new();
        for level in 1..=l {
            let m = -level - 1;
            if m <= -(n as i32) {
                words.extend(enumerate_words_ranks(&ranks, n, m));
            }
        }
        let name = if n == 1 { "chain map Φ_0∘ℓ′_1 = ℓ_1∘Φ_0".to_string() } else { format!("morphism identity arity {}", n) };
        rep.push(check_all(name, &words, |w| {
            let d = phi.lhs(w).sub(&phi.rhs(w));
            if d.is_zero() {
                None
            } else {
                Some(format!("{} ↦ {}", format_word(w), d))
            }
        }));
    }
    rep
}

/// A chain map Φ_0 between two resolutions of the same module: level-1
/// images lift ρ′ through ρ, deeper levels lift Φ_0∘d′ through d.
pub fn chain_map(source: &LieInftyAlgebroid, target: &LieInftyAlgebroid) -> Result<TaylorMap, BracketError> {
    let ring = target.ring().clone();
    let zero = Poly::zero(&ring);
    let mut phi0 = TaylorMap::new(1, 0);
    let tres = target.res();
    let sres = source.res();
    for level in 1..=sres.length() {
        if level > tres.length() {
            // everything deeper must map to zero, which needs Φ_0∘d′ = 0 here
            for j in 0..sres.rank(level) {
                let g = Gen::new(level as u32, j as u32);
                let img = super::algebroid::apply_linear(&phi0, &source.d(&Elem::single(g, Poly::one(&ring))));
                if !img.is_zero() {
                    return Err(BracketError::LiftFailed { level, word: vec![g], witness: img });
                }
            }
            continue;
        }
        let (rows, cols) = if level == 1 {
            (ring.nvars(), tres.anchor().columns())
        } else {
            let d = tres.diff(level).unwrap();
            (d.target_rank(), d.columns())
        };
        let basis = ColumnBasis::new(&ring, rows, &cols);
        for j in 0..sres.rank(level) {
            let g = Gen::new(level as u32, j as u32);
            let want: Vec<Poly> = if level == 1 {
                sres.anchor().column(j)
            } else {
                let dv = source.d(&Elem::single(g, Poly::one(&ring)));
                super::algebroid::apply_linear(&phi0, &dv).to_column(level as u32 - 1, rows, &zero)
            };
            match basis.lift(&want) {
                Ok(c) => phi0.set(&[g], Elem::from_column(level as u32, &c)),
                Err(_) => {
                    return Err(BracketError::LiftFailed { level, word: vec![g], witness: Elem::from_column(level as u32 - 1, &want) })
                }
            }
        }
    }
    Ok(phi0)
}

/// Φ_1 with D(Φ_1) = Φ_0∘ℓ′_2 − ℓ_2(Φ_0, Φ_0) in Page(E′, E).
pub fn solve_phi1(source: &LieInftyAlgebroid, target: &LieInftyAlgebroid, phi0: &TaylorMap) -> Result<TaylorMap, BracketError> {
    let space = PageSpace::new(source.res(), target.res());
    let ranks = source.ranks();
    let l = target.length() as i32;
    let mut p = TaylorMap::new(2, 1);
    let one = Poly::one(source.ring());
    let l2 = source.bracket_or_zero(2);
    for level in 1..=l {
        let m = -level - 1;
        for w in enumerate_words_ranks(&ranks, 2, m) {
            let mut v = super::algebroid::apply_linear(phi0, &l2.eval(&w));
            let a = super::algebroid::apply_linear(phi0, &Elem::single(w[0], one.clone()));
            let b = super::algebroid::apply_linear(phi0, &Elem::single(w[1], one.clone()));
            v = v.sub(&eval_bracket_unchecked(target, 2, &[a, b]));
            if !v.is_zero() {
                p.set(&w, v);
            }
        }
    }
    Ok(space.solve(&PageElement::new(p))?.into_map())
}
