//! Evaluation of an algebroid at a rational point: the ∞-algebra on
//! ev(E, m), the isotropy Lie algebra ker ρ_m / im d^{(2)}_m and the
//! regularity and minimality tests.

mod linalg;

pub use linalg::{complement, independent_subset, QMatrix};

use num_traits::Zero;

use crate::brackets::{check_algebroid, eval_multilinear, LieInftyAlgebroid, Report};
use crate::modres::{FreeModuleMap, FreeResolution};
use crate::poly::{Poly, Ring, Q};
use crate::symalg::{enumerate_words_ranks, Elem, Gen, TaylorMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsotropyError {
    #[error("point has {got} coordinates, ring has {want} variables")]
    Dimension { got: usize, want: usize },
    #[error("point is not on the variety of the quotient ring")]
    OffVariety,
    #[error("ℓ2 of kernel elements leaves ker ρ_m on {0}")]
    NotClosed(String),
}

/// ρ and the d^{(i)} evaluated at m.
#[derive(Clone, Debug)]
pub struct PointData {
    pub point: Vec<Q>,
    /// d × r_1.
    pub anchor: QMatrix,
    /// `diffs[k]` is d^{(k+2)}|_m, r_{k+1} × r_{k+2}.
    pub diffs: Vec<QMatrix>,
}

fn eval_map(m: &FreeModuleMap, point: &[Q]) -> QMatrix {
    let rows = m.rows().iter().map(|r| r.iter().map(|p| p.eval(point)).collect()).collect();
    QMatrix::from_rows(rows, m.source_rank())
}

impl PointData {
    pub fn evaluate(res: &FreeResolution, point: &[Q]) -> Result<Self, IsotropyError> {
        let ring = res.ring();
        if point.len() != ring.nvars() {
            return Err(IsotropyError::Dimension { got: point.len(), want: ring.nvars() });
        }
        if ring.quotient_basis().iter().any(|g| !g.eval(point).is_zero()) {
            return Err(IsotropyError::OffVariety);
        }
        Ok(PointData {
            point: point.to_vec(),
            anchor: eval_map(res.anchor(), point),
            diffs: res.diffs().iter().map(|d| eval_map(d, point)).collect(),
        })
    }

    /// ρ_m∘d^{(2)}_m = 0 and d^{(i)}_m∘d^{(i+1)}_m = 0.
    pub fn is_complex(&self) -> bool {
        let mut prev = &self.anchor;
        for d in &self.diffs {
            if !prev.mul(d).is_zero() {
                return false;
            }
            prev = d;
        }
        true
    }

    pub fn kernel_of_anchor(&self) -> Vec<Vec<Q>> {
        self.anchor.kernel()
    }

    /// rk d^{(2)}_m (0 for a length-1 resolution).
    pub fn rank_d2(&self) -> usize {
        self.diffs.first().map_or(0, |d| d.rank())
    }
}

/// The ∞-algebra on (⊕_{i≥2} E_{-i}|_m) ⊕ ker ρ_m, stored as an algebroid over
/// ℚ (a ring without variables). Level-1 generators are the basis `kernel`
/// of ker ρ_m; deeper levels keep the original generators.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub data: PointData,
    pub kernel: Vec<Vec<Q>>,
    /// dim ker ρ_m, r_2, r_3, …
    pub dims: Vec<usize>,
    pub alg: LieInftyAlgebroid,
}

impl Specialization {
    pub fn check(&self) -> Report {
        check_algebroid(&self.alg, None)
    }
}

struct Frame<'a> {
    ring: &'a Ring,
    point_ring: Ring,
    kernel: &'a [Vec<Q>],
    kmat: QMatrix,
    point: &'a [Q],
}

impl Frame<'_> {
    /// New generator ↦ element of E over the original ring.
    fn lift(&self, g: Gen) -> Elem {
        if g.level == 1 {
            let mut e = Elem::zero();
            for (t, c) in self.kernel[g.index as usize].iter().enumerate() {
                if !c.is_zero() {
                    e.add_term(Gen::new(1, t as u32), &Poly::constant(self.ring, c.clone()));
                }
            }
            e
        } else {
            Elem::single(g, Poly::one(self.ring))
        }
    }

    /// Evaluates at m and rewrites level-1 parts in kernel coordinates.
    fn lower(&self, v: &Elem, r1: usize) -> Result<Elem, IsotropyError> {
        let mut out = Elem::zero();
        let mut level1 = vec![Q::zero(); r1];
        for (g, c) in v.iter() {
            let x = c.eval(self.point);
            if x.is_zero() {
                continue;
            }
            if g.level == 1 {
                level1[g.index as usize] += x;
            } else {
                out.add_term(*g, &Poly::constant(&self.point_ring, x));
            }
        }
        if level1.iter().any(|x| !x.is_zero()) {
            let coords = self.kmat.solve(&level1).ok_or_else(|| IsotropyError::NotClosed(v.to_string()))?;
            for (j, x) in coords.into_iter().enumerate() {
                if !x.is_zero() {
                    out.add_term(Gen::new(1, j as u32), &Poly::constant(&self.point_ring, x));
                }
            }
        }
        Ok(out)
    }
}

/// Evaluates every table of `alg` at m.
pub fn specialize(alg: &LieInftyAlgebroid, point: &[Q]) -> Result<Specialization, IsotropyError> {
    let res = alg.res();
    let data = PointData::evaluate(res, point)?;
    let kernel = data.kernel_of_anchor();
    let mut dims = vec![kernel.len()];
    dims.extend((2..=res.length()).map(|i| res.rank(i)));
    let point_ring = Ring::grevlex(&[]);
    let r1 = res.rank(1);
    let frame = Frame {
        ring: res.ring(),
        point_ring: point_ring.clone(),
        kernel: &kernel,
        kmat: QMatrix::from_columns(&kernel, r1),
        point,
    };
    if kernel.is_empty() {
        // nothing left in degree −1; the evaluated data is kept in `data`
        let alg = LieInftyAlgebroid::new(FreeResolution::empty(&point_ring));
        return Ok(Specialization { data, kernel, dims, alg });
    }
    let constant = |x: &Q| Poly::constant(&point_ring, x.clone());
    let anchor = FreeModuleMap::zero(&point_ring, 0, kernel.len(), -1, 0);
    let mut diffs = Vec::new();
    for (k, d) in data.diffs.iter().enumerate() {
        let level = k as i32 + 2;
        let cols: Vec<Vec<Poly>> = if k == 0 {
            d.columns()
                .iter()
                .map(|c| {
                    let coords = frame.kmat.solve(c).expect("im d^(2)_m lies in ker ρ_m");
                    coords.iter().map(constant).collect()
                })
                .collect()
        } else {
            d.columns().iter().map(|c| c.iter().map(constant).collect()).collect()
        };
        let target = if k == 0 { kernel.len() } else { d.nrows() };
        diffs.push(FreeModuleMap::from_columns(&point_ring, target, &cols, -level, -level + 1));
    }
    let names = (1..=res.length())
        .map(|i| {
            if i == 1 {
                (0..kernel.len()).map(|j| format!("k{}", j + 1)).collect()
            } else {
                res.names()[i - 1].clone()
            }
        })
        .collect();
    let new_res = FreeResolution::new(&point_ring, anchor, diffs)
        .map_err(|e| IsotropyError::NotClosed(e.to_string()))?
        .with_names(names);
    let mut out = LieInftyAlgebroid::new(new_res);
    let l = res.length() as i32;
    for k in alg.bracket_arities() {
        let table = alg.bracket(k).unwrap();
        let mut t = TaylorMap::new(k, 1);
        for level in 1..=l {
            let m = -level - 1;
            if m > -(k as i32) {
                continue;
            }
            for w in enumerate_words_ranks(&dims, k, m) {
                let args: Vec<Elem> = w.iter().map(|g| frame.lift(*g)).collect();
                let v = frame.lower(&eval_multilinear(table, &args), r1)?;
                if !v.is_zero() {
                    t.set(&w, v);
                }
            }
        }
        out.set_bracket(k, t).map_err(|e| IsotropyError::NotClosed(e.to_string()))?;
    }
    Ok(Specialization { data, kernel, dims, alg: out })
}

/// ker ρ_m / im d^{(2)}_m with the bracket induced by ℓ_2.
#[derive(Clone, Debug)]
pub struct IsotropyAlgebra {
    pub point: Vec<Q>,
    /// Representatives in ℚ^{r_1} (coefficients on the level-1 generators).
    pub basis: Vec<Vec<Q>>,
    /// Basis of im d^{(2)}_m.
    pub image: Vec<Vec<Q>>,
    /// [b_i, b_j] = Σ_k structure[i][j][k] b_k.
    pub structure: Vec<Vec<Vec<Q>>>,
    l2_at_m: Vec<Vec<Vec<Q>>>,
}

impl IsotropyAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a kernel vector modulo the image, or None if the vector
    /// is not in ker ρ_m.
    pub fn project(&self, v: &[Q]) -> Option<Vec<Q>> {
        let r1 = v.len();
        let mut cols = self.image.clone();
        cols.extend(self.basis.iter().cloned());
        let x = QMatrix::from_columns(&cols, r1).solve(v)?;
        Some(x[self.image.len()..].to_vec())
    }

    /// ℓ_2(u, v) at m for vectors in ℚ^{r_1}.
    pub fn bracket_vectors(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let r1 = u.len();
        let mut out = vec![Q::zero(); r1];
        for (a, ua) in u.iter().enumerate() {
            for (b, vb) in v.iter().enumerate() {
                if ua.is_zero() || vb.is_zero() {
                    continue;
                }
                let f = ua * vb;
                for (k, c) in self.l2_at_m[a][b].iter().enumerate() {
                    out[k] += &f * c;
                }
            }
        }
        out
    }

    /// Bracket in basis coordinates.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let f = xi * yj;
                for (k, c) in self.structure[i][j].iter().enumerate() {
                    out[k] += &f * c;
                }
            }
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| (&self.structure[i][j][k] + &self.structure[j][i][k]).is_zero())))
    }

    /// [[a,b],c] + [[b,c],a] + [[c,a],b] = 0 on all basis triples.
    pub fn satisfies_jacobi(&self) -> bool {
        let n = self.dim();
        let e = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = Q::from_integer(1.into());
            v
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t1 = self.bracket(&self.bracket(&e(a), &e(b)), &e(c));
                    let t2 = self.bracket(&self.bracket(&e(b), &e(c)), &e(a));
                    let t3 = self.bracket(&self.bracket(&e(c), &e(a)), &e(b));
                    if (0..n).any(|k| !(&t1[k] + &t2[k] + &t3[k]).is_zero()) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Isotropy Lie algebra at m. The basis is completed from ker ρ_m by
/// row-reduction pivots after a basis of im d^{(2)}_m.
pub fn isotropy_lie_algebra(alg: &LieInftyAlgebroid, point: &[Q]) -> Result<IsotropyAlgebra, IsotropyError> {
    let res = alg.res();
    let data = PointData::evaluate(res, point)?;
    let r1 = res.rank(1);
    let kernel = data.kernel_of_anchor();
    let img_all = data.diffs.first().map(|d| d.columns()).unwrap_or_default();
    let (keep_img, keep_ker) = complement(&img_all, &kernel, r1);
    let image: Vec<Vec<Q>> = keep_img.iter().map(|&i| img_all[i].clone()).collect();
    let basis: Vec<Vec<Q>> = keep_ker.iter().map(|&i| kernel[i].clone()).collect();
    let ring = res.ring();
    let table = alg.bracket_or_zero(2);
    let mut l2_at_m = vec![vec![vec![Q::zero(); r1]; r1]; r1];
    for a in 0..r1 {
        for b in 0..r1 {
            let v = eval_multilinear(
                &table,
                &[Elem::single(Gen::new(1, a as u32), Poly::one(ring)), Elem::single(Gen::new(1, b as u32), Poly::one(ring))],
            );
            for (g, c) in v.iter() {
                if g.level == 1 {
                    l2_at_m[a][b][g.index as usize] = c.eval(point);
                }
            }
        }
    }
    let mut alg_out = IsotropyAlgebra { point: point.to_vec(), basis, image, structure: Vec::new(), l2_at_m };
    let n = alg_out.dim();
    let mut structure = vec![vec![vec![Q::zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = alg_out.bracket_vectors(&alg_out.basis[i], &alg_out.basis[j]);
            structure[i][j] = alg_out.project(&v).ok_or_else(|| IsotropyError::NotClosed(format!("basis pair ({}, {})", i, j)))?;
        }
    }
    alg_out.structure = structure;
    Ok(alg_out)
}

/// rk d^{(2)}_m = dim ker ρ_m.
pub fn is_regular(alg: &LieInftyAlgebroid, point: &[Q]) -> Result<bool, IsotropyError> {
    let data = PointData::evaluate(alg.res(), point)?;
    Ok(data.rank_d2() == data.kernel_of_anchor().len())
}

/// d^{(i)}|_m = 0 for all i ≥ 2; then the specialization is the isotropy
/// Lie ∞-algebra on H = ker ρ_m ⊕ E_{-2}|_m ⊕ ….
pub fn minimality_at(alg: &LieInftyAlgebroid, point: &[Q]) -> Result<Option<Specialization>, IsotropyError> {
    let data = PointData::evaluate(alg.res(), point)?;
    if data.diffs.iter().any(|d| !d.is_zero()) {
        return Ok(None);
    }
    specialize(alg, point).map(Some)
}

/// Parses "1,0,-1/2".
pub fn parse_point(s: &str) -> Result<Vec<Q>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| crate::poly::parse_rational(t.trim()).map_err(|e| e.to_string())).collect()
}
