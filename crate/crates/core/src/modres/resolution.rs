use rayon::prelude::*;

use crate::poly::{Poly, Ring, VectorField};

use super::map::FreeModuleMap;
use super::module_gb::{prune_generators, ColumnBasis};
use super::ModresError;

/// Free resolution E_{-L} → … → E_{-1} → A with the hook E_{-1} → O^d.
///
/// Level i (1-based) holds r_i generators. `diffs[k]` is d^{(k+2)}.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeResolution {
    ring: Ring,
    anchor: FreeModuleMap,
    diffs: Vec<FreeModuleMap>,
    names: Vec<Vec<String>>,
}

pub fn default_name(level: usize, index: usize) -> String {
    format!("e[{},{}]", level, index + 1)
}

impl FreeResolution {
    /// Assembles a resolution from explicit matrices, checking shapes only.
    pub fn new(ring: &Ring, anchor: FreeModuleMap, diffs: Vec<FreeModuleMap>) -> Result<Self, ModresError> {
        let mut prev = anchor.source_rank();
        for (k, d) in diffs.iter().enumerate() {
            if d.target_rank() != prev {
                return Err(ModresError::Malformed(format!(
                    "d^({}) has target rank {} but level {} has rank {}",
                    k + 2,
                    d.target_rank(),
                    k + 1,
                    prev
                )));
            }
            prev = d.source_rank();
        }
        // trailing rank-0 levels carry no information
        let mut diffs = diffs;
        while diffs.last().is_some_and(|d| d.source_rank() == 0) {
            diffs.pop();
        }
        let mut names = vec![(0..anchor.source_rank()).map(|j| default_name(1, j)).collect::<Vec<_>>()];
        for (k, d) in diffs.iter().enumerate() {
            names.push((0..d.source_rank()).map(|j| default_name(k + 2, j)).collect());
        }
        if anchor.source_rank() == 0 {
            names.clear();
        }
        Ok(FreeResolution { ring: ring.clone(), anchor, diffs, names })
    }

    /// The zero foliation: no generators at all.
    pub fn empty(ring: &Ring) -> Self {
        let anchor = FreeModuleMap::zero(ring, ring.nvars(), 0, -1, 0);
        FreeResolution { ring: ring.clone(), anchor, diffs: Vec::new(), names: Vec::new() }
    }

    pub fn with_names(mut self, names: Vec<Vec<String>>) -> Self {
        assert_eq!(names.len(), self.length(), "one name list per level");
        for (i, n) in names.iter().enumerate() {
            assert_eq!(n.len(), self.rank(i + 1), "one name per generator");
        }
        self.names = names;
        self
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Number of nonzero levels.
    pub fn length(&self) -> usize {
        if self.anchor.source_rank() == 0 {
            0
        } else {
            1 + self.diffs.len()
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        (1..=self.length()).map(|i| self.rank(i)).collect()
    }

    /// r_i for i ≥ 1; zero beyond the length.
    pub fn rank(&self, level: usize) -> usize {
        match level {
            0 => self.ring.nvars(),
            1 => self.anchor.source_rank(),
            i if i - 2 < self.diffs.len() => self.diffs[i - 2].source_rank(),
            _ => 0,
        }
    }

    pub fn anchor(&self) -> &FreeModuleMap {
        &self.anchor
    }

    pub fn anchor_fields(&self) -> Vec<VectorField> {
        self.anchor.vector_fields()
    }

    /// ρ(e_{1,j}).
    pub fn anchor_of(&self, j: usize) -> VectorField {
        VectorField::new(&self.ring, self.anchor.column(j))
    }

    /// d^{(i)}: E_{-i} → E_{-i+1} for 2 ≤ i ≤ L.
    pub fn diff(&self, level: usize) -> Option<&FreeModuleMap> {
        if level < 2 {
            return None;
        }
        self.diffs.get(level - 2)
    }

    pub fn diffs(&self) -> &[FreeModuleMap] {
        &self.diffs
    }

    /// The map leaving level i: ρ for i = 1, d^{(i)} otherwise.
    pub fn outgoing(&self, level: usize) -> Option<&FreeModuleMap> {
        if level == 1 {
            Some(&self.anchor)
        } else {
            self.diff(level)
        }
    }

    /// Column j of d^{(level)} (image of generator j at that level).
    pub fn d_column(&self, level: usize, j: usize) -> Vec<Poly> {
        match self.diff(level) {
            Some(d) => d.column(j),
            None => Vec::new(),
        }
    }

    pub fn names(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn name(&self, level: usize, index: usize) -> &str {
        &self.names[level - 1][index]
    }

    /// Keeps only levels 1..=levels.
    pub fn truncate(&self, levels: usize) -> FreeResolution {
        let mut out = self.clone();
        out.diffs.truncate(levels.saturating_sub(1));
        out.names.truncate(levels.max(if self.length() == 0 { 0 } else { 1 }));
        out
    }

    /// Checks ρ∘d^{(2)} = 0 and d^{(i)}∘d^{(i+1)} = 0.
    pub fn check_complex(&self) -> Result<(), ModresError> {
        let mut prev = &self.anchor;
        for (k, d) in self.diffs.iter().enumerate() {
            if !prev.compose(d).is_zero() {
                return Err(ModresError::NotAComplex { level: k + 2 });
            }
            prev = d;
        }
        Ok(())
    }

    /// Same data over another ring (e.g. after passing to a quotient).
    pub fn to_ring(&self, ring: &Ring) -> FreeResolution {
        let conv = |m: &FreeModuleMap| {
            let rows = m.rows().iter().map(|r| r.iter().map(|p| p.to_ring(ring)).collect()).collect();
            FreeModuleMap::from_rows(ring, m.source_rank(), rows, m.source_degree(), m.target_degree())
        };
        FreeResolution {
            ring: ring.clone(),
            anchor: conv(&self.anchor),
            diffs: self.diffs.iter().map(conv).collect(),
            names: self.names.clone(),
        }
    }
}

impl std::fmt::Debug for FreeResolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FreeResolution(ranks {:?})", self.ranks())
    }
}

fn column_degree(col: &[Poly], shifts: &[i64]) -> i64 {
    col.iter()
        .zip(shifts)
        .filter(|(p, _)| !p.is_zero())
        .map(|(p, s)| p.total_degree().unwrap_or(0) as i64 + s)
        .max()
        .unwrap_or(0)
}

/// Resolution of the module generated by vector fields.
pub fn free_resolution(ring: &Ring, gens: &[VectorField]) -> Result<FreeResolution, ModresError> {
    let cols: Vec<Vec<Poly>> = gens.iter().map(|g| g.comps().to_vec()).collect();
    free_resolution_of_columns(ring, ring.nvars(), &cols)
}

/// Resolution of the submodule of O^rows generated by `gens`. Level 1 is
/// free on exactly the given generators; deeper levels drop redundant
/// syzygy generators (scanned by increasing degree).
pub fn free_resolution_of_columns(ring: &Ring, rows: usize, gens: &[Vec<Poly>]) -> Result<FreeResolution, ModresError> {
    if gens.is_empty() {
        let anchor = FreeModuleMap::zero(ring, rows, 0, -1, 0);
        return Ok(FreeResolution { ring: ring.clone(), anchor, diffs: Vec::new(), names: Vec::new() });
    }
    let cap = ring.nvars() + 1;
    let anchor = FreeModuleMap::from_columns(ring, rows, gens, -1, 0);
    let zero_shifts = vec![0i64; rows];
    let mut shifts: Vec<i64> = gens.iter().map(|c| column_degree(c, &zero_shifts)).collect();
    let mut diffs: Vec<FreeModuleMap> = Vec::new();
    let mut current = anchor.clone();
    let mut level = 1usize;
    loop {
        let basis = ColumnBasis::new(ring, current.target_rank(), &current.columns());
        let raw = basis.syzygies();
        let src_rank = current.source_rank();
        let sh = shifts.clone();
        let kept = prune_generators(ring, src_rank, raw, |c| column_degree(c, &sh));
        if kept.is_empty() {
            break;
        }
        if level >= cap {
            return Err(ModresError::CapExceeded { levels: cap });
        }
        level += 1;
        let d = FreeModuleMap::from_columns(ring, src_rank, &kept, -(level as i32), -(level as i32) + 1);
        shifts = kept.iter().map(|c| column_degree(c, &sh)).collect();
        diffs.push(d.clone());
        current = d;
    }
    FreeResolution::new(ring, anchor, diffs)
}

/// Per-level lifting data: `d^{(i+1)} ∘ lifting = syzygies`.
#[derive(Clone, Debug)]
pub struct LevelCertificate {
    pub level: usize,
    pub syzygies: FreeModuleMap,
    pub lifting: FreeModuleMap,
}

#[derive(Clone, Debug)]
pub struct ExactnessCertificate {
    pub levels: Vec<LevelCertificate>,
}

impl ExactnessCertificate {
    /// Recomputes every recorded product and compares symbolically.
    pub fn verify(&self, res: &FreeResolution) -> bool {
        self.levels.iter().all(|lc| {
            let Some(map) = res.outgoing(lc.level) else { return false };
            if !map.compose(&lc.syzygies).is_zero() {
                return false;
            }
            match res.diff(lc.level + 1) {
                Some(next) => next.compose(&lc.lifting) == lc.syzygies,
                None => lc.syzygies.source_rank() == 0,
            }
        })
    }
}

/// Proves ker(outgoing map at level i) = im d^{(i+1)} for every level, and
/// injectivity at the last level.
pub fn certify_exactness(res: &FreeResolution) -> Result<ExactnessCertificate, ModresError> {
    let ring = res.ring();
    let mut levels = Vec::new();
    for i in 1..=res.length() {
        let map = res.outgoing(i).unwrap();
        let syz = map.syzygies();
        let lifting = match res.diff(i + 1) {
            None => {
                if let Some(w) = syz.columns().into_iter().next() {
                    return Err(ModresError::NotExact { level: i, witness: w });
                }
                FreeModuleMap::zero(ring, 0, 0, -(i as i32) - 1, -(i as i32) - 1)
            }
            Some(next) => {
                let basis = ColumnBasis::new(ring, next.target_rank(), &next.columns());
                let cols = syz.columns();
                let lifted: Vec<Result<Vec<Poly>, Vec<Poly>>> =
                    cols.par_iter().map(|c| basis.lift(c).map_err(|_| c.clone())).collect();
                let mut out = Vec::with_capacity(lifted.len());
                for l in lifted {
                    match l {
                        Ok(c) => out.push(c),
                        Err(w) => return Err(ModresError::NotExact { level: i, witness: w }),
                    }
                }
                FreeModuleMap::from_columns(ring, next.source_rank(), &out, -(i as i32) - 1, -(i as i32) - 1)
            }
        };
        levels.push(LevelCertificate { level: i, syzygies: syz, lifting });
    }
    Ok(ExactnessCertificate { levels })
}
