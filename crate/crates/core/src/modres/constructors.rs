use crate::poly::{Poly, Ring, VectorField};

use super::module_gb::{prune_generators, ColumnBasis};

/// Vector fields X with X[φ_i] ∈ ⟨φ⟩ for all i.
///
/// Syzygies of the block matrix [∂φ_i/∂x_j | φ_k e_i], projected to the
/// first d entries, then pruned to a generating subset.
pub fn tangent_generators(ring: &Ring, ideal_gens: &[Poly]) -> Vec<VectorField> {
    let d = ring.nvars();
    let r = ideal_gens.len();
    if r == 0 {
        return (0..d).map(|a| VectorField::coordinate(ring, a, Poly::one(ring))).collect();
    }
    let mut cols: Vec<Vec<Poly>> = Vec::new();
    for j in 0..d {
        cols.push(ideal_gens.iter().map(|f| f.derivative(j)).collect());
    }
    for i in 0..r {
        for phi in ideal_gens {
            let mut c = vec![Poly::zero(ring); r];
            c[i] = phi.clone();
            cols.push(c);
        }
    }
    let syz = ColumnBasis::new(ring, r, &cols).syzygies();
    let mut proj: Vec<Vec<Poly>> = Vec::new();
    for s in syz {
        let p: Vec<Poly> = s[..d].to_vec();
        if p.iter().any(|x| !x.is_zero()) && !proj.contains(&p) {
            proj.push(p);
        }
    }
    let kept = prune_generators(ring, d, proj, |c| {
        c.iter().filter(|p| !p.is_zero()).map(|p| p.total_degree().unwrap_or(0) as i64).max().unwrap_or(0)
    });
    kept.into_iter().map(|c| VectorField::new(ring, c)).collect()
}

/// φ_i ∂/∂x_a for all i (outer) and a (inner).
pub fn vanishing_generators(ring: &Ring, ideal_gens: &[Poly]) -> Vec<VectorField> {
    let mut out = Vec::new();
    for phi in ideal_gens {
        for a in 0..ring.nvars() {
            out.push(VectorField::coordinate(ring, a, phi.clone()));
        }
    }
    out
}

/// Whether `v` lies in the submodule of O^d generated by `gens`.
pub fn module_contains(ring: &Ring, gens: &[VectorField], v: &VectorField) -> bool {
    let cols: Vec<Vec<Poly>> = gens.iter().map(|g| g.comps().to_vec()).collect();
    ColumnBasis::new(ring, ring.nvars(), &cols).contains(v.comps())
}
