
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::poly::{buchberger, combination, divide, Gb, MVec, Poly, Ring, Q};

use num_traits::One;

pub(crate) fn column_to_mvec(col: &[Poly], ring: &Ring) -> MVec {
    let mut terms = Vec::new();
    for (k, p) in col.iter().enumerate() {
        for (e, c) in p.terms() {
            terms.push((k, e.clone(), c.clone()));
        }
    }
    MVec::from_unsorted(terms, ring.order())
}

pub(crate) fn mvec_to_column(v: &MVec, rows: usize, ring: &Ring) -> Vec<Poly> {
    (0..rows).map(|k| Poly::from_terms(ring, v.component(k))).collect()
}

/// Module Gröbner basis of a set of columns in O^rows, tracking each basis
/// element as a combination of the columns. Over a quotient ring the
/// submodule I·O^rows is adjoined as untracked extra generators.
pub struct ColumnBasis {
    ring: Ring,
    rows: usize,
    ncols: usize,
    /// input slot -> original column index (identity unless seeded)
    slot_to_col: Vec<usize>,
    gens: Vec<MVec>,
    gb: Gb,
}

impl ColumnBasis {
    pub fn new(ring: &Ring, rows: usize, cols: &[Vec<Poly>]) -> Self {
        Self::build(ring, rows, cols, None)
    }

    /// Same module, with the column order shuffled by `seed` before the
    /// Gröbner computation. The reduced basis does not depend on the order,
    /// so lifts come out the same for every seed.
    pub fn with_seed(ring: &Ring, rows: usize, cols: &[Vec<Poly>], seed: u64) -> Self {
        Self::build(ring, rows, cols, Some(seed))
    }

    fn build(ring: &Ring, rows: usize, cols: &[Vec<Poly>], seed: Option<u64>) -> Self {
        let ncols = cols.len();
        let mut slot_to_col: Vec<usize> = (0..ncols).collect();
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            slot_to_col.shuffle(&mut rng);
        }
        let mut gens: Vec<MVec> = slot_to_col.iter().map(|&c| column_to_mvec(&cols[c], ring)).collect();
        let nv = ring.nvars();
        for qg in ring.quotient_mvecs() {
            for k in 0..rows {
                let mut v = qg.clone();
                for t in v.terms.iter_mut() {
                    t.0 = k;
                }
                gens.push(v);
            }
        }
        let _ = nv;
        let gb = buchberger(&gens, ring.order(), true);
        ColumnBasis { ring: ring.clone(), rows, ncols, slot_to_col, gens, gb }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Converts a combination over input slots into coefficients on the
    /// original columns (extras dropped).
    fn slots_to_coeffs(&self, v: &MVec) -> Vec<Poly> {
        let mut out = vec![Poly::zero(&self.ring); self.ncols];
        for (slot, e, c) in &v.terms {
            if *slot < self.ncols {
                let col = self.slot_to_col[*slot];
                out[col] = &out[col] + &Poly::monomial(&self.ring, e.clone(), c.clone());
            }
        }
        out
    }

    /// Coefficients `c` with Σ c_j col_j = v, or the nonzero remainder.
    pub fn lift(&self, v: &[Poly]) -> Result<Vec<Poly>, Vec<Poly>> {
        assert_eq!(v.len(), self.rows);
        let mv = column_to_mvec(v, &self.ring);
        let (q, rem) = divide(&mv, &self.gb.elems, self.ring.order());
        let rem_col = mvec_to_column(&rem, self.rows, &self.ring);
        if rem_col.iter().any(|p| !p.is_zero()) {
            return Err(rem_col);
        }
        let comb = combination(&q, &self.gb.reps, self.ring.order());
        Ok(self.slots_to_coeffs(&comb))
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        let mv = column_to_mvec(v, &self.ring);
        let (_, rem) = divide(&mv, &self.gb.elems, self.ring.order());
        mvec_to_column(&rem, self.rows, &self.ring).iter().all(|p| p.is_zero())
    }

    /// Generators of the module of relations among the columns.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        let ord = self.ring.order();
        let g = &self.gb.elems;
        let reps = &self.gb.reps;
        let mut raw: Vec<MVec> = Vec::new();
        for i in 0..g.len() {
            for j in (i + 1)..g.len() {
                let (ci, ei, qi) = g[i].lead().unwrap();
                let (cj, ej, qj) = g[j].lead().unwrap();
                if ci != cj {
                    continue;
                }
                let l = crate::poly::lcm(ei, ej);
                let mi = crate::poly::mono_div(&l, ei);
                let mj = crate::poly::mono_div(&l, ej);
                let ai = Q::one() / qi;
                let aj = -(Q::one() / qj);
                let s = g[i].mul_term(&mi, &ai).add_scaled(&aj, &mj, &g[j], ord);
                let (q, rem) = divide(&s, g, ord);
                debug_assert!(rem.is_zero());
                // relation among basis elements, then pulled back to inputs
                let mut rel = reps[i].mul_term(&mi, &ai).add_scaled(&aj, &mj, &reps[j], ord);
                rel = crate::poly::sub_combination(&rel, &q, reps, ord);
                raw.push(rel);
            }
        }
        let nv = self.ring.nvars();
        for (slot, f) in self.gens.iter().enumerate() {
            let (q, rem) = divide(f, g, ord);
            debug_assert!(rem.is_zero());
            let rel = crate::poly::sub_combination(&MVec::unit(slot, nv), &q, reps, ord);
            raw.push(rel);
        }
        let mut out: Vec<Vec<Poly>> = Vec::new();
        for r in raw {
            let c = self.slots_to_coeffs(&r);
            if c.iter().all(|p| p.is_zero()) {
                continue;
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }
}

/// Keeps a subset of `cols` generating the same module, scanning in order of
/// increasing degree (`degree_of`) and dropping members of the span of the
/// columns kept so far. For graded input the result is minimal.
pub fn prune_generators(
    ring: &Ring,
    rows: usize,
    cols: Vec<Vec<Poly>>,
    degree_of: impl Fn(&[Poly]) -> i64,
) -> Vec<Vec<Poly>> {
    let mut idx: Vec<usize> = (0..cols.len()).filter(|&k| cols[k].iter().any(|p| !p.is_zero())).collect();
    idx.sort_by_key(|&k| (degree_of(&cols[k]), k));
    let mut kept: Vec<Vec<Poly>> = Vec::new();
    let mut basis: Option<ColumnBasis> = None;
    for k in idx {
        let member = match &basis {
            None => false,
            Some(b) => b.contains(&cols[k]),
        };
        if !member {
            kept.push(cols[k].clone());
            basis = Some(ColumnBasis::new(ring, rows, &kept));
        }
    }
    kept
}
