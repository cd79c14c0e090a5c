//! Buchberger engine on component-tagged term vectors. Ideals are the
//! rank-one case. Module order is position-over-term, lower component first.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};

use super::monomial::{coprime, divides, lcm, mono_div, mono_mul, Exps, MonomialOrder};
use super::Q;

pub type Term = (usize, Exps, Q);

pub fn term_cmp(ord: &MonomialOrder, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
    if a.0 != b.0 {
        return b.0.cmp(&a.0);
    }
    ord.cmp(a.1, b.1)
}

/// Sparse vector in a free module, terms sorted descending, no zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MVec {
    pub terms: Vec<Term>,
}

impl MVec {
    pub fn zero() -> Self {
        MVec { terms: Vec::new() }
    }

    pub fn unit(comp: usize, nvars: usize) -> Self {
        MVec { terms: vec![(comp, vec![0; nvars], Q::one())] }
    }

    pub fn from_unsorted(mut terms: Vec<Term>, ord: &MonomialOrder) -> Self {
        let mut acc: HashMap<(usize, Exps), Q> = HashMap::with_capacity(terms.len());
        for (c, e, q) in terms.drain(..) {
            if q.is_zero() {
                continue;
            }
            *acc.entry((c, e)).or_insert_with(Q::zero) += q;
        }
        let mut out: Vec<Term> =
            acc.into_iter().filter(|(_, q)| !q.is_zero()).map(|((c, e), q)| (c, e, q)).collect();
        out.sort_by(|a, b| term_cmp(ord, (b.0, &b.1), (a.0, &a.1)));
        MVec { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Q) -> MVec {
        if c.is_zero() {
            return MVec::zero();
        }
        MVec { terms: self.terms.iter().map(|(k, e, q)| (*k, e.clone(), q * c)).collect() }
    }

    pub fn neg(&self) -> MVec {
        MVec { terms: self.terms.iter().map(|(k, e, q)| (*k, e.clone(), -q)).collect() }
    }

    pub fn mul_term(&self, m: &[u32], c: &Q) -> MVec {
        if c.is_zero() {
            return MVec::zero();
        }
        MVec { terms: self.terms.iter().map(|(k, e, q)| (*k, mono_mul(e, m), q * c)).collect() }
    }

    /// `self + c * m * other`.
    pub fn add_scaled(&self, c: &Q, m: &[u32], other: &MVec, ord: &MonomialOrder) -> MVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let a = &self.terms;
        let b = &other.terms;
        let mut bj: Option<(usize, Exps)> = None;
        while i < a.len() || j < b.len() {
            if j < b.len() && bj.is_none() {
                bj = Some((b[j].0, mono_mul(&b[j].1, m)));
            }
            let take = match (i < a.len(), j < b.len()) {
                (true, false) => Ordering::Greater,
                (false, true) => Ordering::Less,
                _ => {
                    let (bc, be) = bj.as_ref().unwrap();
                    term_cmp(ord, (a[i].0, &a[i].1), (*bc, be))
                }
            };
            match take {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (bc, be) = bj.take().unwrap();
                    out.push((bc, be, &b[j].2 * c));
                    j += 1;
                }
                Ordering::Equal => {
                    let (bc, be) = bj.take().unwrap();
                    let q = &a[i].2 + &b[j].2 * c;
                    if !q.is_zero() {
                        out.push((bc, be, q));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MVec { terms: out }
    }

    pub fn add(&self, other: &MVec, ord: &MonomialOrder) -> MVec {
        let nv = ord.nvars();
        self.add_scaled(&Q::one(), &vec![0; nv], other, ord)
    }

    pub fn sub(&self, other: &MVec, ord: &MonomialOrder) -> MVec {
        let nv = ord.nvars();
        self.add_scaled(&-Q::one(), &vec![0; nv], other, ord)
    }

    /// Extracts the polynomial in one component as plain terms.
    pub fn component(&self, k: usize) -> Vec<(Exps, Q)> {
        self.terms.iter().filter(|t| t.0 == k).map(|t| (t.1.clone(), t.2.clone())).collect()
    }
}

/// Division with cofactors. The cofactor vector uses component `k` for
/// basis element `k`. Among eligible reducers the lowest index wins.
pub fn divide(f: &MVec, basis: &[MVec], ord: &MonomialOrder) -> (MVec, MVec) {
    let nv = ord.nvars();
    let leads: Vec<Option<&Term>> = basis.iter().map(|b| b.lead()).collect();
    let mut p = f.clone();
    let mut rem: Vec<Term> = Vec::new();
    let mut cof: Vec<Term> = Vec::new();
    while let Some((c, e, q)) = p.terms.first().cloned() {
        let mut hit = None;
        for (k, l) in leads.iter().enumerate() {
            if let Some((lc, le, _)) = l {
                if *lc == c && divides(le, &e) {
                    hit = Some(k);
                    break;
                }
            }
        }
        match hit {
            Some(k) => {
                let (_, le, lq) = leads[k].unwrap();
                let m = mono_div(&e, le);
                let s = &q / lq;
                p = p.add_scaled(&-s.clone(), &m, &basis[k], ord);
                cof.push((k, m, s));
            }
            None => {
                rem.push((c, e, q));
                p.terms.remove(0);
            }
        }
    }
    let _ = nv;
    (MVec::from_unsorted(cof, ord), MVec { terms: rem })
}

/// Reduced Gröbner basis with optional tracking of each element as a
/// combination of the inputs (component `i` for input `i`).
#[derive(Clone, Debug)]
pub struct Gb {
    pub elems: Vec<MVec>,
    pub reps: Vec<MVec>,
}

pub fn buchberger(gens: &[MVec], ord: &MonomialOrder, track: bool) -> Gb {
    let nv = ord.nvars();
    let mut g: Vec<MVec> = Vec::new();
    let mut reps: Vec<MVec> = Vec::new();
    let rank_one = gens.iter().all(|v| v.terms.iter().all(|t| t.0 == 0));
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |v: MVec,
                r: MVec,
                g: &mut Vec<MVec>,
                reps: &mut Vec<MVec>,
                pending: &mut BTreeSet<(usize, usize)>| {
        let k = g.len();
        let lc = v.lead().unwrap().0;
        for (i, gi) in g.iter().enumerate() {
            if gi.lead().unwrap().0 == lc {
                pending.insert((i, k));
            }
        }
        g.push(v);
        reps.push(r);
    };

    for (i, v) in gens.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let r = if track { MVec::unit(i, nv) } else { MVec::zero() };
        // reduce against the current basis first to keep it small
        let (q, rem) = divide(v, &g, ord);
        if rem.is_zero() {
            continue;
        }
        let r = if track { sub_combination(&r, &q, &reps, ord) } else { r };
        push(rem, r, &mut g, &mut reps, &mut pending);
    }

    while let Some(&(i, j)) = pick_pair(&pending, &g, ord) {
        pending.remove(&(i, j));
        done.insert((i, j));
        let (ci, ei, qi) = g[i].lead().unwrap().clone();
        let (_, ej, qj) = g[j].lead().unwrap().clone();
        let _ = ci;
        if rank_one && coprime(&ei, &ej) {
            continue;
        }
        let l = lcm(&ei, &ej);
        if chain_skip(i, j, &l, ci, &g, &pending) {
            continue;
        }
        let mi = mono_div(&l, &ei);
        let mj = mono_div(&l, &ej);
        let ai = Q::one() / &qi;
        let aj = -(Q::one() / &qj);
        let s = g[i].mul_term(&mi, &ai).add_scaled(&aj, &mj, &g[j], ord);
        let (q, rem) = divide(&s, &g, ord);
        if rem.is_zero() {
            continue;
        }
        let r = if track {
            let rs = reps[i].mul_term(&mi, &ai).add_scaled(&aj, &mj, &reps[j], ord);
            sub_combination(&rs, &q, &reps, ord)
        } else {
            MVec::zero()
        };
        push(rem, r, &mut g, &mut reps, &mut pending);
    }

    // minimalize
    let n = g.len();
    let mut keep = vec![true; n];
    for k in 0..n {
        let (ck, ek, _) = g[k].lead().unwrap();
        for l in 0..n {
            if l == k || !keep[l] {
                continue;
            }
            let (cl, el, _) = g[l].lead().unwrap();
            if cl == ck && divides(el, ek) && (el != ek || l < k) {
                keep[k] = false;
                break;
            }
        }
    }
    let mut elems: Vec<MVec> = Vec::new();
    let mut rs: Vec<MVec> = Vec::new();
    for k in 0..n {
        if keep[k] {
            elems.push(g[k].clone());
            rs.push(reps[k].clone());
        }
    }
    // interreduce
    for k in 0..elems.len() {
        let others: Vec<MVec> =
            elems.iter().enumerate().map(|(l, v)| if l == k { MVec::zero() } else { v.clone() }).collect();
        let (q, rem) = divide(&elems[k], &others, ord);
        let lc = rem.lead().unwrap().2.clone();
        let inv = Q::one() / lc;
        if track {
            let r = sub_combination(&rs[k], &q, &rs, ord);
            rs[k] = r.scale(&inv);
        }
        elems[k] = rem.scale(&inv);
    }
    let mut idx: Vec<usize> = (0..elems.len()).collect();
    idx.sort_by(|&a, &b| {
        let ta = elems[a].lead().unwrap();
        let tb = elems[b].lead().unwrap();
        term_cmp(ord, (tb.0, &tb.1), (ta.0, &ta.1))
    });
    Gb {
        elems: idx.iter().map(|&k| elems[k].clone()).collect(),
        reps: if track { idx.iter().map(|&k| rs[k].clone()).collect() } else { Vec::new() },
    }
}

/// `r - Σ_k q_k · reps_k`.
pub fn sub_combination(r: &MVec, q: &MVec, reps: &[MVec], ord: &MonomialOrder) -> MVec {
    let mut out = r.clone();
    for (k, e, c) in &q.terms {
        out = out.add_scaled(&-c.clone(), e, &reps[*k], ord);
    }
    out
}

/// `Σ_k q_k · vecs_k`.
pub fn combination(q: &MVec, vecs: &[MVec], ord: &MonomialOrder) -> MVec {
    let mut out = MVec::zero();
    for (k, e, c) in &q.terms {
        out = out.add_scaled(c, e, &vecs[*k], ord);
    }
    out
}

fn pick_pair<'a>(
    pending: &'a BTreeSet<(usize, usize)>,
    g: &[MVec],
    ord: &MonomialOrder,
) -> Option<&'a (usize, usize)> {
    let mut best: Option<(&(usize, usize), Exps)> = None;
    for p in pending.iter() {
        let l = lcm(&g[p.0].lead().unwrap().1, &g[p.1].lead().unwrap().1);
        let better = match &best {
            None => true,
            Some((_, bl)) => ord.cmp(&l, bl) == Ordering::Less,
        };
        if better {
            best = Some((p, l));
        }
    }
    best.map(|b| b.0)
}

fn chain_skip(
    i: usize,
    j: usize,
    l: &[u32],
    comp: usize,
    g: &[MVec],
    pending: &BTreeSet<(usize, usize)>,
) -> bool {
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    for (k, gk) in g.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let (ck, ek, _) = gk.lead().unwrap();
        if *ck != comp || !divides(ek, l) {
            continue;
        }
        if !pending.contains(&key(i, k)) && !pending.contains(&key(j, k)) {
            return true;
        }
    }
    false
}
