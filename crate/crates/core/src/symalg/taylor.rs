use std::collections::BTreeMap;

use num_traits::One;

use crate::poly::{Poly, Ring, Q};

use super::elem::{Elem, SymTensor};
use super::word::{koszul_sign, sort_with_sign, word_degree, Gen, GradedWord};

/// O-multilinear map ⊙^arity E → E of degree `shift`, stored on canonical
/// words. Missing keys are zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TaylorMap {
    arity: usize,
    shift: i32,
    table: BTreeMap<Vec<Gen>, Elem>,
}

impl TaylorMap {
    pub fn new(arity: usize, shift: i32) -> Self {
        TaylorMap { arity, shift, table: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Sets the value on `letters` (any order; stored on the canonical word).
    pub fn set(&mut self, letters: &[Gen], value: Elem) {
        assert_eq!(letters.len(), self.arity, "word length must equal the arity");
        let mut l = letters.to_vec();
        let s = sort_with_sign(&mut l);
        assert!(s != 0, "word vanishes");
        let v = value.scale_sign(s);
        if v.is_zero() {
            self.table.remove(&l);
        } else {
            self.table.insert(l, v);
        }
    }

    /// Adds to the value on `letters`.
    pub fn add_to(&mut self, letters: &[Gen], value: &Elem) {
        let mut l = letters.to_vec();
        let s = sort_with_sign(&mut l);
        if s == 0 || value.is_zero() {
            return;
        }
        let entry = self.table.entry(l.clone()).or_default();
        entry.add_assign(&value.scale_sign(s));
        if entry.is_zero() {
            self.table.remove(&l);
        }
    }

    /// Value on the product of `letters` taken in the given order.
    pub fn eval(&self, letters: &[Gen]) -> Elem {
        if letters.len() != self.arity {
            return Elem::zero();
        }
        let mut l = letters.to_vec();
        let s = sort_with_sign(&mut l);
        if s == 0 {
            return Elem::zero();
        }
        match self.table.get(&l) {
            Some(v) => v.scale_sign(s),
            None => Elem::zero(),
        }
    }

    pub fn eval_word(&self, w: &GradedWord) -> Elem {
        self.eval(w.letters()).scale_sign(w.sign())
    }

    pub fn get(&self, canonical: &[Gen]) -> Option<&Elem> {
        self.table.get(canonical)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<Gen>, &Elem)> {
        self.table.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn add(&self, other: &TaylorMap) -> TaylorMap {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (w, v) in &other.table {
            out.add_to(w, v);
        }
        out
    }

    pub fn neg(&self) -> TaylorMap {
        self.map_values(|v| v.neg())
    }

    pub fn sub(&self, other: &TaylorMap) -> TaylorMap {
        self.add(&other.neg())
    }

    pub fn map_values(&self, f: impl Fn(&Elem) -> Elem) -> TaylorMap {
        let mut out = TaylorMap::new(self.arity, self.shift);
        for (w, v) in &self.table {
            let nv = f(v);
            if !nv.is_zero() {
                out.table.insert(w.clone(), nv);
            }
        }
        out
    }

    /// Every value has degree key degree + shift (level 0 counts as degree 0).
    pub fn check_degrees(&self) -> bool {
        self.table.iter().all(|(w, v)| {
            let want = word_degree(w) + self.shift;
            v.iter().all(|(g, _)| g.degree() == want)
        })
    }
}

/// Labelings of positions 0..n by k blocks, each block nonempty.
/// `ordered` keeps all k! orderings of the blocks; otherwise blocks are
/// ordered by their first position.
fn block_splits(n: usize, k: usize, ordered: bool) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut labels = vec![0usize; n];
    fn rec(pos: usize, n: usize, k: usize, ordered: bool, used: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if pos == n {
            let mut blocks = vec![Vec::new(); k];
            for (p, &b) in labels.iter().enumerate() {
                blocks[b].push(p);
            }
            if blocks.iter().all(|b| !b.is_empty()) {
                out.push(blocks);
            }
            return;
        }
        let limit = if ordered { k } else { (used + 1).min(k) };
        for b in 0..limit {
            labels[pos] = b;
            rec(pos + 1, n, k, ordered, used.max(b + 1), labels, out);
        }
    }
    rec(0, n, k, ordered, 0, &mut labels, &mut out);
    out
}

fn split_sign(blocks: &[Vec<usize>], degrees: &[i32]) -> i32 {
    let perm: Vec<usize> = blocks.iter().flatten().copied().collect();
    koszul_sign(&perm, degrees)
}

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * Q::from_integer((i as i64).into()))
}

fn taylor_at<'a>(taylor: &'a [TaylorMap], arity: usize) -> Option<&'a TaylorMap> {
    taylor.iter().find(|t| t.arity() == arity)
}

/// Component of length `target_length` of the co-morphism extending the
/// Taylor coefficients, on the word `w`: a sum over shuffles into ordered
/// blocks, weighted by 1/k!.
pub fn extend_comorphism(taylor: &[TaylorMap], w: &GradedWord, target_length: usize) -> SymTensor {
    let mut out = SymTensor::zero();
    for (coef, factors) in comorphism_terms(taylor, w, target_length, true) {
        out.add_product(&coef, &factors);
    }
    out
}

/// The same component kept in factored form: each term is a coefficient
/// and the list of k factors Φ(block).
pub fn comorphism_factored(taylor: &[TaylorMap], w: &GradedWord, target_length: usize) -> Vec<(Q, Vec<Elem>)> {
    comorphism_terms(taylor, w, target_length, false)
}

fn comorphism_terms(taylor: &[TaylorMap], w: &GradedWord, k: usize, ordered: bool) -> Vec<(Q, Vec<Elem>)> {
    let letters = w.letters();
    let degrees: Vec<i32> = letters.iter().map(|g| g.degree()).collect();
    let norm = if ordered { Q::one() / factorial(k) } else { Q::one() };
    let mut out = Vec::new();
    'split: for blocks in block_splits(letters.len(), k, ordered) {
        let mut factors = Vec::with_capacity(k);
        for b in &blocks {
            let Some(t) = taylor_at(taylor, b.len()) else { continue 'split };
            let sub: Vec<Gen> = b.iter().map(|&p| letters[p]).collect();
            let v = t.eval(&sub);
            if v.is_zero() {
                continue 'split;
            }
            factors.push(v);
        }
        let s = split_sign(&blocks, &degrees) * w.sign();
        out.push((norm.clone() * Q::from_integer(s.into()), factors));
    }
    out
}

/// Sum of all components of the co-morphism on `w`.
pub fn comorphism_full(taylor: &[TaylorMap], w: &GradedWord) -> SymTensor {
    let mut out = SymTensor::zero();
    for k in 1..=w.len() {
        out.add_assign(&extend_comorphism(taylor, w, k));
    }
    out
}

/// Co-morphism underlying a co-derivation.
pub enum Base<'a> {
    Identity(&'a Ring),
    Maps(&'a [TaylorMap]),
}

/// Component of length `target_length` of the Φ-co-derivation with Taylor
/// coefficients `h` on the word `w`: the first block goes through H, the
/// remaining k-1 through Φ, weighted by 1/(k-1)!.
pub fn extend_coderivation(h: &[TaylorMap], base: &Base<'_>, w: &GradedWord, target_length: usize) -> SymTensor {
    let letters = w.letters();
    let degrees: Vec<i32> = letters.iter().map(|g| g.degree()).collect();
    let k = target_length;
    let mut out = SymTensor::zero();
    if k == 0 {
        return out;
    }
    let norm = Q::one() / factorial(k - 1);
    'split: for blocks in block_splits(letters.len(), k, true) {
        let mut factors = Vec::with_capacity(k);
        let Some(hm) = taylor_at(h, blocks[0].len()) else { continue };
        let sub: Vec<Gen> = blocks[0].iter().map(|&p| letters[p]).collect();
        let hv = hm.eval(&sub);
        if hv.is_zero() {
            continue;
        }
        factors.push(hv);
        for b in &blocks[1..] {
            let v = match base {
                Base::Identity(ring) => {
                    if b.len() != 1 {
                        continue 'split;
                    }
                    Elem::single(letters[b[0]], Poly::one(ring))
                }
                Base::Maps(maps) => {
                    let Some(t) = taylor_at(maps, b.len()) else { continue 'split };
                    let sub: Vec<Gen> = b.iter().map(|&p| letters[p]).collect();
                    t.eval(&sub)
                }
            };
            if v.is_zero() {
                continue 'split;
            }
            factors.push(v);
        }
        let s = split_sign(&blocks, &degrees) * w.sign();
        out.add_product(&(norm.clone() * Q::from_integer(s.into())), &factors);
    }
    out
}

pub fn coderivation_full(h: &[TaylorMap], base: &Base<'_>, w: &GradedWord) -> SymTensor {
    let mut out = SymTensor::zero();
    for k in 1..=w.len() {
        out.add_assign(&extend_coderivation(h, base, w, k));
    }
    out
}

/// Element of ⊙E ⊗ ⊙E.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Tensor2 {
    terms: BTreeMap<(Vec<Gen>, Vec<Gen>), Poly>,
}

impl Tensor2 {
    pub fn zero() -> Self {
        Tensor2::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Vec<Gen>, Vec<Gen>), &Poly)> {
        self.terms.iter()
    }

    /// Adds c·(a ⊗ b) for canonical words a, b.
    pub fn add_term(&mut self, a: &[Gen], b: &[Gen], c: &Poly) {
        if c.is_zero() {
            return;
        }
        let key = (a.to_vec(), b.to_vec());
        let entry = self.terms.remove(&key);
        let v = match entry {
            Some(old) => &old + c,
            None => c.clone(),
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Adds sign·(s ⊗ t).
    pub fn add_product(&mut self, sign: i32, s: &SymTensor, t: &SymTensor) {
        for (a, ca) in s.iter() {
            for (b, cb) in t.iter() {
                let c = ca * cb;
                self.add_term(a, b, &if sign < 0 { -c } else { c });
            }
        }
    }
}

/// Deconcatenation coproduct Δ on a tensor: unshuffles into two nonempty
/// parts with their Koszul signs.
pub fn coproduct(t: &SymTensor) -> Tensor2 {
    let mut out = Tensor2::zero();
    for (w, c) in t.iter() {
        for (sign, a, b) in coproduct_word(w) {
            out.add_term(&a, &b, &if sign < 0 { -c } else { c.clone() });
        }
    }
    out
}

/// Δ on a single canonical word: (sign, left, right) triples.
pub fn coproduct_word(w: &[Gen]) -> Vec<(i32, Vec<Gen>, Vec<Gen>)> {
    let n = w.len();
    let degrees: Vec<i32> = w.iter().map(|g| g.degree()).collect();
    let mut out = Vec::new();
    for mask in 1..(1u64 << n) - 1 {
        let left: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 1).collect();
        let right: Vec<usize> = (0..n).filter(|p| mask >> p & 1 == 0).collect();
        let perm: Vec<usize> = left.iter().chain(&right).copied().collect();
        let s = koszul_sign(&perm, &degrees);
        out.push((s, left.iter().map(|&p| w[p]).collect(), right.iter().map(|&p| w[p]).collect()));
    }
    out
}
