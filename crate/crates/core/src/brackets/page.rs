use std::sync::OnceLock;

use rayon::prelude::*;

use crate::modres::{ColumnBasis, FreeResolution};
use crate::poly::{Poly, Ring};
use crate::symalg::{enumerate_words_ranks, koszul_sign, Elem, Gen, TaylorMap};

use super::algebroid::{apply_linear, differential_table};
use super::BracketError;

/// O-multilinear map ⊙^{k+1}E′ → E of total degree j. Values on level 0
/// form the last column (vector fields).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PageElement {
    map: TaylorMap,
}

impl PageElement {
    pub fn new(map: TaylorMap) -> Self {
        PageElement { map }
    }

    pub fn zero(arity: usize, degree: i32) -> Self {
        PageElement { map: TaylorMap::new(arity, degree) }
    }

    /// Number of arguments (k+1 on page k).
    pub fn arity(&self) -> usize {
        self.map.arity()
    }

    pub fn page(&self) -> usize {
        self.map.arity() - 1
    }

    pub fn degree(&self) -> i32 {
        self.map.shift()
    }

    pub fn map(&self) -> &TaylorMap {
        &self.map
    }

    pub fn into_map(self) -> TaylorMap {
        self.map
    }

    pub fn is_zero(&self) -> bool {
        self.map.is_zero()
    }

    /// Part with values in E_{-i} (i = 0 for the last column).
    pub fn column(&self, i: u32) -> PageElement {
        PageElement { map: self.map.map_values(|v| v.level_part(i)) }
    }

    pub fn add(&self, other: &PageElement) -> PageElement {
        PageElement { map: self.map.add(&other.map) }
    }

    pub fn sub(&self, other: &PageElement) -> PageElement {
        PageElement { map: self.map.sub(&other.map) }
    }

    pub fn neg(&self) -> PageElement {
        PageElement { map: self.map.neg() }
    }

    pub fn eval(&self, letters: &[Gen]) -> Elem {
        self.map.eval(letters)
    }
}

/// The bicomplex Hom_O(⊙E′, E) with its total differential.
pub struct PageSpace {
    source: FreeResolution,
    target: FreeResolution,
    source_d: TaylorMap,
    target_d: TaylorMap,
    seed: Option<u64>,
    lifters: Vec<OnceLock<ColumnBasis>>,
}

impl PageSpace {
    pub fn new(source: &FreeResolution, target: &FreeResolution) -> Self {
        let lifters = (0..=target.length() + 1).map(|_| OnceLock::new()).collect();
        PageSpace {
            source_d: differential_table(source),
            target_d: differential_table(target),
            source: source.clone(),
            target: target.clone(),
            seed: None,
            lifters,
        }
    }

    /// Maps from ⊙E to E.
    pub fn endo(res: &FreeResolution) -> Self {
        Self::new(res, res)
    }

    /// Varies the Gröbner tie-breaks used by `solve`.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn source(&self) -> &FreeResolution {
        &self.source
    }

    pub fn target(&self) -> &FreeResolution {
        &self.target
    }

    fn ring(&self) -> &Ring {
        self.target.ring()
    }

    /// d on levels ≥ 2, ρ on level 1, zero on level 0.
    pub fn d_hat(&self, e: &Elem) -> Elem {
        let mut out = apply_linear(&self.target_d, e);
        for (g, c) in e.iter() {
            if g.level == 1 {
                let col = self.target.anchor().column(g.index as usize);
                for (a, f) in col.iter().enumerate() {
                    if !f.is_zero() {
                        out.add_term(Gen::new(0, a as u32), &(c * f));
                    }
                }
            }
        }
        out
    }

    /// (P∘ℓ′_1)(letters).
    pub fn compose_source_d(&self, p: &TaylorMap, letters: &[Gen]) -> Elem {
        let degrees: Vec<i32> = letters.iter().map(|g| g.degree()).collect();
        let mut out = Elem::zero();
        for s in 0..letters.len() {
            let dv = self.source_d.eval(&[letters[s]]);
            if dv.is_zero() {
                continue;
            }
            let mut perm = vec![s];
            perm.extend((0..letters.len()).filter(|&t| t != s));
            let eps = koszul_sign(&perm, &degrees);
            let rest: Vec<Gen> = perm[1..].iter().map(|&t| letters[t]).collect();
            let mut acc = Elem::zero();
            for (g, c) in dv.iter() {
                let mut w = vec![*g];
                w.extend_from_slice(&rest);
                acc.add_scaled_assign(c, &p.eval(&w));
            }
            out.add_assign(&acc.scale_sign(eps));
        }
        out
    }

    /// Source words of `arity` letters and degree m, for every m whose value
    /// level −(m + degree) lies in lo..=hi.
    fn words_by_degree(&self, arity: usize, degree: i32, lo: i32, hi: i32) -> Vec<(i32, Vec<Vec<Gen>>)> {
        let ranks = self.source.ranks();
        let mut out = Vec::new();
        for level in lo..=hi {
            let m = -level - degree;
            if m > -(arity as i32) {
                continue;
            }
            out.push((level, enumerate_words_ranks(&ranks, arity, m)));
        }
        out
    }

    /// D(P) = d̂∘P − (−1)^{|P|} P∘ℓ′_1.
    pub fn page_d(&self, p: &PageElement) -> PageElement {
        let deg = p.degree() + 1;
        let l = self.target.length() as i32;
        let sign = if p.degree() % 2 == 0 { -1 } else { 1 };
        let mut out = TaylorMap::new(p.arity(), deg);
        for (_, words) in self.words_by_degree(p.arity(), deg, 0, l) {
            let vals: Vec<(Vec<Gen>, Elem)> = words
                .par_iter()
                .map(|w| {
                    let mut v = self.d_hat(&p.eval(w));
                    v.add_assign(&self.compose_source_d(p.map(), w).scale_sign(sign));
                    (w.clone(), v)
                })
                .collect();
            for (w, v) in vals {
                if !v.is_zero() {
                    out.set(&w, v);
                }
            }
        }
        PageElement::new(out)
    }

    fn lifter(&self, level: usize) -> &ColumnBasis {
        self.lifters[level].get_or_init(|| {
            let (rows, cols) = if level == 1 {
                (self.target.ring().nvars(), self.target.anchor().columns())
            } else {
                let d = self.target.diff(level).expect("level within the resolution");
                (d.target_rank(), d.columns())
            };
            match self.seed {
                Some(s) => ColumnBasis::with_seed(self.ring(), rows, &cols, s.wrapping_add(level as u64)),
                None => ColumnBasis::new(self.ring(), rows, &cols),
            }
        })
    }

    /// Preimage of a level-(t−1) element under d̂ restricted to level t.
    fn lift(&self, t: usize, v: &Elem) -> Result<Elem, Vec<Poly>> {
        if v.is_zero() {
            return Ok(Elem::zero());
        }
        let zero = Poly::zero(self.ring());
        let rows = if t == 1 { self.ring().nvars() } else { self.target.rank(t - 1) };
        let col = v.to_column(t as u32 - 1, rows, &zero);
        self.lifter(t).lift(&col).map(|c| Elem::from_column(t as u32, &c))
    }

    /// R with D(R) = P, found word by word from the last column outwards.
    /// Zero values of P give zero values of R.
    pub fn solve(&self, p: &PageElement) -> Result<PageElement, BracketError> {
        let s = p.degree();
        let rdeg = s - 1;
        let l = self.target.length() as i32;
        let sign = if rdeg % 2 == 0 { 1 } else { -1 };
        let mut r = TaylorMap::new(p.arity(), rdeg);
        for (t, words) in self.words_by_degree(p.arity(), rdeg, 1, l + 1) {
            let results: Vec<Result<Option<(Vec<Gen>, Elem)>, BracketError>> = words
                .par_iter()
                .map(|w| {
                    let mut target = p.eval(w);
                    target.add_assign(&self.compose_source_d(&r, w).scale_sign(sign));
                    if target.is_zero() {
                        return Ok(None);
                    }
                    if t > l {
                        return Err(BracketError::LiftFailed { level: t as usize, word: w.clone(), witness: target });
                    }
                    match self.lift(t as usize, &target) {
                        Ok(v) => Ok(Some((w.clone(), v))),
                        Err(_) => Err(BracketError::LiftFailed { level: t as usize, word: w.clone(), witness: target }),
                    }
                })
                .collect();
            for res in results {
                if let Some((w, v)) = res? {
                    r.set(&w, v);
                }
            }
        }
        let r = PageElement::new(r);
        let back = self.page_d(&r);
        if back != *p {
            let diff = back.sub(p);
            let (w, v) = diff.map().entries().next().map(|(w, v)| (w.clone(), v.clone())).unwrap();
            return Err(BracketError::NotClosed { word: w, witness: v });
        }
        Ok(r)
    }
}

/// D(P) on Page(E, E).
pub fn page_d(res: &FreeResolution, p: &PageElement) -> PageElement {
    PageSpace::endo(res).page_d(p)
}

/// R with D(R) = P on Page(E, E).
pub fn page_solve(res: &FreeResolution, p: &PageElement) -> Result<PageElement, BracketError> {
    PageSpace::endo(res).solve(p)
}
