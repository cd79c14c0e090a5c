use std::collections::BTreeMap;

use crate::modres::FreeResolution;
use crate::poly::{Poly, Ring, VectorField};
use crate::symalg::{koszul_sign, Elem, Gen, TaylorMap};

use super::BracketError;

/// Brackets ℓ_k stored on canonical generator words, together with the
/// resolution that supplies ℓ_1 and the anchor.
#[derive(Clone, Debug)]
pub struct LieInftyAlgebroid {
    res: FreeResolution,
    l1: TaylorMap,
    tables: BTreeMap<usize, TaylorMap>,
    max_arity: usize,
    partial: bool,
}

/// ℓ_1 as a table: a level-(i+1) generator goes to its d^{(i+1)} column.
pub fn differential_table(res: &FreeResolution) -> TaylorMap {
    let mut t = TaylorMap::new(1, 1);
    for level in 2..=res.length() {
        for j in 0..res.rank(level) {
            let v = Elem::from_column(level as u32 - 1, &res.d_column(level, j));
            if !v.is_zero() {
                t.set(&[Gen::new(level as u32, j as u32)], v);
            }
        }
    }
    t
}

impl LieInftyAlgebroid {
    /// Algebroid with ℓ_1 = d and no higher brackets yet.
    pub fn new(res: FreeResolution) -> Self {
        let l1 = differential_table(&res);
        let max_arity = res.length() + 1;
        LieInftyAlgebroid { res, l1, tables: BTreeMap::new(), max_arity, partial: false }
    }

    pub fn res(&self) -> &FreeResolution {
        &self.res
    }

    pub fn ring(&self) -> &Ring {
        self.res.ring()
    }

    pub fn length(&self) -> usize {
        self.res.length()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.res.ranks()
    }

    /// K = L + 1.
    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn set_bracket(&mut self, k: usize, table: TaylorMap) -> Result<(), BracketError> {
        if k < 2 || k > self.max_arity.max(2) {
            return Err(BracketError::ArityOutOfRange { arity: k, max: self.max_arity });
        }
        if table.arity() != k || table.shift() != 1 {
            return Err(BracketError::DegreeMismatch(format!("table for ℓ{} has arity {} and degree {}", k, table.arity(), table.shift())));
        }
        if !table.check_degrees() {
            return Err(BracketError::DegreeMismatch(format!("ℓ{} has a value of the wrong degree", k)));
        }
        if table.is_zero() {
            self.tables.remove(&k);
        } else {
            self.tables.insert(k, table);
        }
        Ok(())
    }

    /// ℓ_k as a table (ℓ_1 from the resolution); `None` when zero.
    pub fn bracket(&self, k: usize) -> Option<&TaylorMap> {
        if k == 1 {
            Some(&self.l1)
        } else {
            self.tables.get(&k)
        }
    }

    /// Flags a structure whose recursion stopped below K.
    pub fn mark_partial(&mut self) {
        self.partial = true;
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    /// Table of ℓ_k, empty if unset.
    pub fn bracket_or_zero(&self, k: usize) -> TaylorMap {
        self.bracket(k).cloned().unwrap_or_else(|| TaylorMap::new(k, 1))
    }

    pub fn bracket_arities(&self) -> Vec<usize> {
        self.tables.keys().copied().collect()
    }

    /// Replaces the resolution data by the same data over another ring.
    pub fn map_ring(&self, ring: &Ring) -> LieInftyAlgebroid {
        let conv = |t: &TaylorMap| t.map_values(|v| v.map_coeffs(|c| c.to_ring(ring)));
        LieInftyAlgebroid {
            res: self.res.to_ring(ring),
            l1: conv(&self.l1),
            tables: self.tables.iter().map(|(k, t)| (*k, conv(t))).collect(),
            max_arity: self.max_arity,
            partial: self.partial,
        }
    }

    /// ρ(e_{1,j}) as a vector field.
    pub fn anchor_of(&self, j: u32) -> VectorField {
        self.res.anchor_of(j as usize)
    }

    /// ρ extended by zero to levels ≥ 2.
    pub fn rho(&self, e: &Elem) -> VectorField {
        let mut v = VectorField::zero(self.ring());
        for (g, c) in e.iter() {
            if g.level == 1 {
                v = v.add(&self.anchor_of(g.index).scale(c));
            }
        }
        v
    }

    /// ρ as an element supported on level 0.
    pub fn rho_elem(&self, e: &Elem) -> Elem {
        Elem::from_column(0, self.rho(e).comps())
    }

    /// ℓ_1 (no anchor part).
    pub fn d(&self, e: &Elem) -> Elem {
        apply_linear(&self.l1, e)
    }

    /// ℓ_1 on levels ≥ 2 and ρ on level 1.
    pub fn d_hat(&self, e: &Elem) -> Elem {
        let mut out = self.d(e);
        out.add_assign(&self.rho_elem(e));
        out
    }
}

/// Σ c_g·T(g) for an arity-1 table.
pub fn apply_linear(t: &TaylorMap, e: &Elem) -> Elem {
    let mut out = Elem::zero();
    for (g, c) in e.iter() {
        out.add_scaled_assign(c, &t.eval(&[*g]));
    }
    out
}

/// O-multilinear extension of a table to arbitrary arguments.
pub fn eval_multilinear(t: &TaylorMap, args: &[Elem]) -> Elem {
    fn rec(t: &TaylorMap, args: &[Elem], letters: &mut Vec<Gen>, coef: Option<Poly>, out: &mut Elem) {
        match args.split_first() {
            None => {
                let v = t.eval(letters);
                match coef {
                    None => out.add_assign(&v),
                    Some(c) => out.add_scaled_assign(&c, &v),
                }
            }
            Some((first, rest)) => {
                for (g, c) in first.iter() {
                    letters.push(*g);
                    let nc = match &coef {
                        None => c.clone(),
                        Some(k) => k * c,
                    };
                    rec(t, rest, letters, Some(nc), out);
                    letters.pop();
                }
            }
        }
    }
    let mut out = Elem::zero();
    if args.len() != t.arity() {
        return out;
    }
    rec(t, args, &mut Vec::with_capacity(args.len()), None, &mut out);
    out
}

fn homogeneous_degree(e: &Elem) -> Result<Option<i32>, BracketError> {
    if e.is_zero() {
        return Ok(None);
    }
    match e.level() {
        Some(l) if l >= 1 => Ok(Some(-(l as i32))),
        _ => Err(BracketError::DegreeMismatch(format!("argument {} is not homogeneous in E", e))),
    }
}

/// ℓ_k(args) extended by O-multilinearity, plus the anchor terms of the
/// Leibniz rule when k = 2.
pub fn eval_bracket(alg: &LieInftyAlgebroid, k: usize, args: &[Elem]) -> Result<Elem, BracketError> {
    if k == 0 || k > alg.max_arity().max(2) {
        return Err(BracketError::ArityOutOfRange { arity: k, max: alg.max_arity() });
    }
    if args.len() != k {
        return Err(BracketError::ArityOutOfRange { arity: args.len(), max: k });
    }
    for a in args {
        homogeneous_degree(a)?;
    }
    Ok(eval_bracket_unchecked(alg, k, args))
}

pub(crate) fn eval_bracket_unchecked(alg: &LieInftyAlgebroid, k: usize, args: &[Elem]) -> Elem {
    let mut out = match alg.bracket(k) {
        Some(t) => eval_multilinear(t, args),
        None => Elem::zero(),
    };
    if k == 2 {
        out.add_assign(&leibniz_terms(alg, &args[0], &args[1]));
    }
    out
}

/// Σ a_g ρ(g)[b_h] h + (−1)^{|g||h|} b_h ρ(h)[a_g] g.
pub fn leibniz_terms(alg: &LieInftyAlgebroid, a: &Elem, b: &Elem) -> Elem {
    let mut out = Elem::zero();
    for (g, ag) in a.iter() {
        for (h, bh) in b.iter() {
            if g.level == 1 {
                let f = alg.anchor_of(g.index).apply(bh);
                if !f.is_zero() {
                    out.add_term(*h, &(ag * &f));
                }
            }
            if h.level == 1 {
                let f = alg.anchor_of(h.index).apply(ag);
                if !f.is_zero() {
                    let s = if g.is_odd() && h.is_odd() { -(bh * &f) } else { bh * &f };
                    out.add_term(*g, &s);
                }
            }
        }
    }
    out
}

/// Either a bracket of the algebroid (anchor-aware in arity 2) or an
/// O-multilinear map.
#[derive(Clone, Copy)]
pub enum Op<'a> {
    Bracket(&'a LieInftyAlgebroid, usize),
    Map(&'a TaylorMap),
}

impl<'a> Op<'a> {
    pub fn arity(&self) -> usize {
        match self {
            Op::Bracket(_, k) => *k,
            Op::Map(t) => t.arity(),
        }
    }

    pub fn degree(&self) -> i32 {
        match self {
            Op::Bracket(_, _) => 1,
            Op::Map(t) => t.shift(),
        }
    }

    /// Value on generators.
    pub fn on_letters(&self, letters: &[Gen]) -> Elem {
        match self {
            Op::Bracket(alg, k) => alg.bracket(*k).map(|t| t.eval(letters)).unwrap_or_default(),
            Op::Map(t) => t.eval(letters),
        }
    }

    /// Value on arbitrary elements.
    pub fn on_elems(&self, args: &[Elem]) -> Elem {
        match self {
            Op::Bracket(alg, k) => eval_bracket_unchecked(alg, *k, args),
            Op::Map(t) => eval_multilinear(t, args),
        }
    }
}

/// (P∘R)(x_1..x_n) = Σ_S ε P(R(x_S), x_rest) over subsets S with |S| = arity(R),
/// ε the Koszul sign of moving x_S to the front.
pub fn compose(outer: &Op<'_>, inner: &Op<'_>, letters: &[Gen]) -> Elem {
    let n = letters.len();
    let q = inner.arity();
    let mut out = Elem::zero();
    if q == 0 || q > n || n - q + 1 != outer.arity() {
        return out;
    }
    let degrees: Vec<i32> = letters.iter().map(|g| g.degree()).collect();
    for s in subsets(n, q) {
        let sub: Vec<Gen> = s.iter().map(|&p| letters[p]).collect();
        let inner_val = inner.on_letters(&sub);
        if inner_val.is_zero() {
            continue;
        }
        let rest: Vec<usize> = (0..n).filter(|p| !s.contains(p)).collect();
        let perm: Vec<usize> = s.iter().chain(&rest).copied().collect();
        let eps = koszul_sign(&perm, &degrees);
        let ring = inner_val.iter().next().unwrap().1.ring().clone();
        let mut args = vec![inner_val];
        for &p in &rest {
            args.push(Elem::single(letters[p], Poly::one(&ring)));
        }
        out.add_assign(&outer.on_elems(&args).scale_sign(eps));
    }
    out
}

/// All increasing index lists of size k in 0..n.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// [P, R]_RN = P∘R − (−1)^{|P||R|} R∘P on one word.
pub fn rn_bracket_on(p: &Op<'_>, r: &Op<'_>, letters: &[Gen]) -> Elem {
    let mut out = compose(p, r, letters);
    let s = if (p.degree() * r.degree()) % 2 == 0 { -1 } else { 1 };
    out.add_assign(&compose(r, p, letters).scale_sign(s));
    out
}

/// [P, R]_RN tabulated on every canonical word of length
/// arity(P)+arity(R)−1 whose value lands in levels 0..=L.
pub fn rn_bracket(p: &Op<'_>, r: &Op<'_>, ranks: &[usize]) -> TaylorMap {
    let n = p.arity() + r.arity() - 1;
    let shift = p.degree() + r.degree();
    let mut out = TaylorMap::new(n, shift);
    let l = ranks.len() as i32;
    for m in (-(l + shift)..=-shift).rev() {
        for w in crate::symalg::enumerate_words_ranks(ranks, n, m) {
            let v = rn_bracket_on(p, r, &w);
            if !v.is_zero() {
                out.set(&w, v);
            }
        }
    }
    out
}

/// Σ_{i} Σ_{σ ∈ Sh(i, n−i)} ε ℓ_{n−i+1}(ℓ_i(x_σ(1..i)), x_σ(i+1..n)) on
/// homogeneous elements (Leibniz applied wherever an arity-2 bracket meets
/// a coefficient).
pub fn jacobi_on_elems(alg: &LieInftyAlgebroid, n: usize, args: &[Elem]) -> Elem {
    assert_eq!(args.len(), n);
    let degrees: Vec<i32> = args.iter().map(|a| a.level().map(|l| -(l as i32)).unwrap_or(0)).collect();
    let mut out = Elem::zero();
    for i in 1..=n {
        let j = n - i + 1;
        if alg.bracket(i).is_none() && i != 2 {
            continue;
        }
        for s in subsets(n, i) {
            let rest: Vec<usize> = (0..n).filter(|p| !s.contains(p)).collect();
            let perm: Vec<usize> = s.iter().chain(&rest).copied().collect();
            let eps = koszul_sign(&perm, &degrees);
            let inner_args: Vec<Elem> = s.iter().map(|&p| args[p].clone()).collect();
            let inner = eval_bracket_unchecked(alg, i, &inner_args);
            if inner.is_zero() {
                continue;
            }
            let mut outer_args = vec![inner];
            outer_args.extend(rest.iter().map(|&p| args[p].clone()));
            out.add_assign(&eval_bracket_unchecked(alg, j, &outer_args).scale_sign(eps));
        }
    }
    out
}
