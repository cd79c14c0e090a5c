use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Poly, Q};

use super::word::{format_word, sort_with_sign, Gen};

/// Σ c_g·g, an element of the free module with polynomial coefficients.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Elem {
    terms: BTreeMap<Gen, Poly>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem::default()
    }

    pub fn single(g: Gen, c: Poly) -> Self {
        let mut e = Elem::zero();
        e.add_term(g, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Gen) -> Option<&Poly> {
        self.terms.get(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gen, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, g: Gen, c: &Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(old) => {
                let s = &*old + c;
                if s.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(g, c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Elem) {
        for (g, c) in &other.terms {
            self.add_term(*g, c);
        }
    }

    pub fn add_scaled_assign(&mut self, f: &Poly, other: &Elem) {
        if f.is_zero() {
            return;
        }
        for (g, c) in &other.terms {
            self.add_term(*g, &(f * c));
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Elem {
        Elem { terms: self.terms.iter().map(|(g, c)| (*g, -c)).collect() }
    }

    pub fn scale(&self, f: &Poly) -> Elem {
        let mut e = Elem::zero();
        e.add_scaled_assign(f, self);
        e
    }

    pub fn scale_q(&self, q: &Q) -> Elem {
        let mut e = Elem::zero();
        for (g, c) in &self.terms {
            e.add_term(*g, &c.scale(q));
        }
        e
    }

    pub fn scale_sign(&self, s: i32) -> Elem {
        if s < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Part supported on one level.
    pub fn level_part(&self, level: u32) -> Elem {
        Elem { terms: self.terms.iter().filter(|(g, _)| g.level == level).map(|(g, c)| (*g, c.clone())).collect() }
    }

    /// Coefficients on level `level`, as a dense vector of length `rank`.
    pub fn to_column(&self, level: u32, rank: usize, zero: &Poly) -> Vec<Poly> {
        let mut v = vec![zero.clone(); rank];
        for (g, c) in &self.terms {
            if g.level == level {
                v[g.index as usize] = c.clone();
            }
        }
        v
    }

    pub fn from_column(level: u32, col: &[Poly]) -> Elem {
        let mut e = Elem::zero();
        for (j, c) in col.iter().enumerate() {
            e.add_term(Gen::new(level, j as u32), c);
        }
        e
    }

    /// Applies `f` to every coefficient (e.g. moving to another ring).
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Elem {
        let mut e = Elem::zero();
        for (g, c) in &self.terms {
            e.add_term(*g, &f(c));
        }
        e
    }

    /// Homogeneous degree, if all generators share one level.
    pub fn level(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|g| g.level);
        let first = it.next()?;
        if it.all(|l| l == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("({})*{}", c, g)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem({})", self)
    }
}

/// Element of ⊙^•E: canonical words with polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymTensor {
    terms: BTreeMap<Vec<Gen>, Poly>,
}

impl SymTensor {
    pub fn zero() -> Self {
        SymTensor::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Gen>, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, word: &[Gen]) -> Option<&Poly> {
        self.terms.get(word)
    }

    /// Adds c·(letters), canonicalizing the word.
    pub fn add_word(&mut self, letters: &[Gen], c: &Poly) {
        if c.is_zero() {
            return;
        }
        let mut l = letters.to_vec();
        let s = sort_with_sign(&mut l);
        if s == 0 {
            return;
        }
        let c = if s < 0 { -c } else { c.clone() };
        match self.terms.get_mut(&l) {
            Some(old) => {
                let t = &*old + &c;
                if t.is_zero() {
                    self.terms.remove(&l);
                } else {
                    *old = t;
                }
            }
            None => {
                self.terms.insert(l, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &SymTensor) {
        for (w, c) in &other.terms {
            self.add_word(w, c);
        }
    }

    pub fn scale_q(&self, q: &Q) -> SymTensor {
        let mut t = SymTensor::zero();
        for (w, c) in &self.terms {
            t.add_word(w, &c.scale(q));
        }
        t
    }

    /// q·e_1⊙…⊙e_k expanded into canonical words.
    pub fn add_product(&mut self, q: &Q, factors: &[Elem]) {
        fn rec(out: &mut SymTensor, acc: &mut Vec<Gen>, c: Option<Poly>, q: &Q, factors: &[Elem]) {
            match factors.split_first() {
                None => {
                    if let Some(c) = c {
                        out.add_word(acc, &c.scale(q));
                    }
                }
                Some((first, rest)) => {
                    for (g, fc) in first.iter() {
                        acc.push(*g);
                        let next = match &c {
                            None => fc.clone(),
                            Some(c) => c * fc,
                        };
                        rec(out, acc, Some(next), q, rest);
                        acc.pop();
                    }
                }
            }
        }
        if factors.is_empty() || num_traits::Zero::is_zero(q) {
            return;
        }
        rec(self, &mut Vec::new(), None, q, factors);
    }

    /// Component on words of a given length.
    pub fn length_part(&self, k: usize) -> SymTensor {
        SymTensor { terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }
}

impl fmt::Display for SymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({})*{}", c, format_word(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for SymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymTensor({})", self)
    }
}
