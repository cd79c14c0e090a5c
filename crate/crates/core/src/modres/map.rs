use std::fmt;

use crate::poly::{Poly, Ring, VectorField};

use super::module_gb::ColumnBasis;

/// O-linear map between free modules, stored as a target-rank × source-rank
/// matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct FreeModuleMap {
    ring: Ring,
    source_rank: usize,
    target_rank: usize,
    entries: Vec<Vec<Poly>>,
    source_degree: i32,
    target_degree: i32,
    degree: i32,
}

impl FreeModuleMap {
    /// Builds the map from its columns (images of the source basis).
    pub fn from_columns(ring: &Ring, target_rank: usize, cols: &[Vec<Poly>], source_degree: i32, target_degree: i32) -> Self {
        let mut entries = vec![Vec::with_capacity(cols.len()); target_rank];
        for c in cols {
            assert_eq!(c.len(), target_rank, "column length must equal the target rank");
            for (k, p) in c.iter().enumerate() {
                entries[k].push(p.clone());
            }
        }
        FreeModuleMap {
            ring: ring.clone(),
            source_rank: cols.len(),
            target_rank,
            entries,
            source_degree,
            target_degree,
            degree: target_degree - source_degree,
        }
    }

    pub fn from_rows(ring: &Ring, source_rank: usize, rows: Vec<Vec<Poly>>, source_degree: i32, target_degree: i32) -> Self {
        for r in &rows {
            assert_eq!(r.len(), source_rank, "row length must equal the source rank");
        }
        FreeModuleMap {
            ring: ring.clone(),
            source_rank,
            target_rank: rows.len(),
            entries: rows,
            source_degree,
            target_degree,
            degree: target_degree - source_degree,
        }
    }

    pub fn identity(ring: &Ring, n: usize, degree_label: i32) -> Self {
        let cols: Vec<Vec<Poly>> = (0..n)
            .map(|j| (0..n).map(|k| if j == k { Poly::one(ring) } else { Poly::zero(ring) }).collect())
            .collect();
        Self::from_columns(ring, n, &cols, degree_label, degree_label)
    }

    pub fn zero(ring: &Ring, target_rank: usize, source_rank: usize, source_degree: i32, target_degree: i32) -> Self {
        Self::from_rows(ring, source_rank, vec![vec![Poly::zero(ring); source_rank]; target_rank], source_degree, target_degree)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn source_degree(&self) -> i32 {
        self.source_degree
    }

    pub fn target_degree(&self) -> i32 {
        self.target_degree
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn entry(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row][col]
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        self.entries.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.source_rank).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|p| p.is_zero()))
    }

    /// M·v for a vector in the source.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.source_rank);
        self.entries
            .iter()
            .map(|row| {
                let mut acc = Poly::zero(&self.ring);
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &FreeModuleMap) -> FreeModuleMap {
        assert_eq!(self.source_rank, other.target_rank, "composition rank mismatch");
        let cols: Vec<Vec<Poly>> = other.columns().iter().map(|c| self.apply(c)).collect();
        FreeModuleMap::from_columns(&self.ring, self.target_rank, &cols, other.source_degree, self.target_degree)
    }

    /// Columns read as vector fields (requires target rank = number of variables).
    pub fn vector_fields(&self) -> Vec<VectorField> {
        self.columns().into_iter().map(|c| VectorField::new(&self.ring, c)).collect()
    }

    /// Generators of ker(self), as the columns of a map into the source.
    pub fn syzygies(&self) -> FreeModuleMap {
        let basis = ColumnBasis::new(&self.ring, self.target_rank, &self.columns());
        let cols = basis.syzygies();
        FreeModuleMap::from_columns(&self.ring, self.source_rank, &cols, self.source_degree - 1, self.source_degree)
    }
}

/// Generators of the kernel of `m`; `m ∘ syzygies(m) = 0`.
pub fn syzygies(m: &FreeModuleMap) -> FreeModuleMap {
    m.syzygies()
}

impl fmt::Debug for FreeModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FreeModuleMap {}x{} ({} -> {})", self.target_rank, self.source_rank, self.source_degree, self.target_degree)?;
        for r in &self.entries {
            let cells: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
