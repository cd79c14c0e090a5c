//! JSON formats: session files (input) and algebroid / isotropy artifacts
//! (output). Polynomials and rationals are strings, e.g. "1/2*x^2 - y".

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::brackets::LieInftyAlgebroid;
use crate::isotropy::IsotropyAlgebra;
use crate::modres::{tangent_generators, vanishing_generators, FreeModuleMap, FreeResolution};
use crate::poly::{format_rational, parse_poly, MonomialOrder, Poly, Ring, VectorField};
use crate::symalg::{Elem, Gen, TaylorMap};

pub const ALGEBROID_FORMAT: &str = "oidforge-algebroid/1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Json(e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> IoError {
    IoError::Invalid(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: String,
    #[serde(default)]
    pub quotient: Vec<String>,
}

fn default_order() -> String {
    "grevlex".into()
}

pub fn order_from_name(name: &str, n: usize) -> Result<MonomialOrder, IoError> {
    match name {
        "grevlex" => Ok(MonomialOrder::grevlex(n)),
        "lex" => Ok(MonomialOrder::lex(n)),
        other => Err(invalid(format!("unknown monomial order '{}' (expected grevlex or lex)", other))),
    }
}

pub fn parse_in(ring: &Ring, s: &str) -> Result<Poly, IoError> {
    parse_poly(ring, s).map_err(|e| invalid(format!("'{}': {}", s, e)))
}

impl RingJson {
    pub fn of(ring: &Ring) -> Self {
        let order = match ring.order().kind {
            crate::poly::OrderKind::Lex => "lex",
            crate::poly::OrderKind::Grevlex => "grevlex",
        };
        RingJson {
            vars: ring.vars().to_vec(),
            order: order.into(),
            quotient: ring.quotient_basis().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<Ring, IoError> {
        let order = order_from_name(&self.order, self.vars.len())?;
        let amb = Ring::with_names(self.vars.clone(), order);
        if self.quotient.is_empty() {
            return Ok(amb);
        }
        let gens = self.quotient.iter().map(|s| parse_in(&amb, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(amb.quotient(&gens))
    }
}

/// (level, index, coefficient).
pub type TermJson = (u32, u32, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub word: Vec<(u32, u32)>,
    pub value: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebroidJson {
    pub format: String,
    pub ring: RingJson,
    pub names: Vec<Vec<String>>,
    /// One column per level-1 generator: ρ(e) as components.
    pub anchor: Vec<Vec<String>>,
    /// Per level i ≥ 2, the columns of d^{(i)}.
    pub differentials: Vec<Vec<Vec<String>>>,
    /// Arity ↦ table entries on canonical words.
    pub brackets: BTreeMap<usize, Vec<EntryJson>>,
    #[serde(default)]
    pub partial: bool,
}

fn columns_json(m: &FreeModuleMap) -> Vec<Vec<String>> {
    m.columns().iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect()
}

fn elem_json(e: &Elem) -> Vec<TermJson> {
    e.iter().map(|(g, c)| (g.level, g.index, c.to_string())).collect()
}

pub fn algebroid_json(alg: &LieInftyAlgebroid) -> AlgebroidJson {
    let res = alg.res();
    let brackets = alg
        .bracket_arities()
        .into_iter()
        .map(|k| {
            let t = alg.bracket(k).unwrap();
            let entries = t
                .entries()
                .map(|(w, v)| EntryJson { word: w.iter().map(|g| (g.level, g.index)).collect(), value: elem_json(v) })
                .collect();
            (k, entries)
        })
        .collect();
    AlgebroidJson {
        format: ALGEBROID_FORMAT.into(),
        ring: RingJson::of(res.ring()),
        names: res.names().to_vec(),
        anchor: columns_json(res.anchor()),
        differentials: res.diffs().iter().map(columns_json).collect(),
        brackets,
        partial: alg.is_partial(),
    }
}

pub fn algebroid_to_string(alg: &LieInftyAlgebroid) -> String {
    serde_json::to_string_pretty(&algebroid_json(alg)).expect("plain data serializes")
}

fn parse_columns(ring: &Ring, cols: &[Vec<String>], rows: usize, what: &str) -> Result<Vec<Vec<Poly>>, IoError> {
    cols.iter()
        .map(|c| {
            if c.len() != rows {
                return Err(invalid(format!("{}: column of length {} where {} was expected", what, c.len(), rows)));
            }
            c.iter().map(|s| parse_in(ring, s)).collect()
        })
        .collect()
}

impl AlgebroidJson {
    pub fn build(&self) -> Result<LieInftyAlgebroid, IoError> {
        if self.format != ALGEBROID_FORMAT {
            return Err(invalid(format!("unsupported format '{}'", self.format)));
        }
        let ring = self.ring.build()?;
        let d = ring.nvars();
        let anchor_cols = parse_columns(&ring, &self.anchor, d, "anchor")?;
        let anchor = FreeModuleMap::from_columns(&ring, d, &anchor_cols, -1, 0);
        let mut diffs = Vec::new();
        let mut prev = anchor_cols.len();
        for (k, cols) in self.differentials.iter().enumerate() {
            let level = k as i32 + 2;
            let parsed = parse_columns(&ring, cols, prev, &format!("d^({})", level))?;
            diffs.push(FreeModuleMap::from_columns(&ring, prev, &parsed, -level, -level + 1));
            prev = cols.len();
        }
        let mut res = FreeResolution::new(&ring, anchor, diffs).map_err(|e| invalid(e.to_string()))?;
        if !self.names.is_empty() {
            let shape_ok = self.names.len() == res.length()
                && self.names.iter().enumerate().all(|(i, n)| n.len() == res.rank(i + 1));
            if !shape_ok {
                return Err(invalid("generator names do not match the ranks"));
            }
            res = res.with_names(self.names.clone());
        }
        let ranks = res.ranks();
        let mut alg = LieInftyAlgebroid::new(res);
        for (&k, entries) in &self.brackets {
            let mut t = TaylorMap::new(k, 1);
            for e in entries {
                let word: Vec<Gen> = e.word.iter().map(|&(l, i)| Gen::new(l, i)).collect();
                check_gens(&word, &ranks)?;
                let mut v = Elem::zero();
                for (l, i, c) in &e.value {
                    let g = Gen::new(*l, *i);
                    check_gens(&[g], &ranks)?;
                    v.add_term(g, &parse_in(&ring, c)?);
                }
                if word.len() != k {
                    return Err(invalid(format!("ℓ{} entry with a word of length {}", k, word.len())));
                }
                t.add_to(&word, &v);
            }
            alg.set_bracket(k, t).map_err(|e| invalid(e.to_string()))?;
        }
        if self.partial {
            alg.mark_partial();
        }
        Ok(alg)
    }
}

fn check_gens(word: &[Gen], ranks: &[usize]) -> Result<(), IoError> {
    for g in word {
        let ok = g.level >= 1 && (g.level as usize) <= ranks.len() && (g.index as usize) < ranks[g.level as usize - 1];
        if !ok {
            return Err(invalid(format!("generator e[{},{}] does not exist", g.level, g.index + 1)));
        }
    }
    Ok(())
}

pub fn algebroid_from_str(s: &str) -> Result<LieInftyAlgebroid, IoError> {
    let j: AlgebroidJson = serde_json::from_str(s)?;
    j.build()
}

/// Input session: a ring and exactly one way of producing generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Session {
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: String,
    #[serde(default)]
    pub quotient: Vec<String>,
    /// Vector fields, each as its list of components.
    #[serde(default)]
    pub generators: Option<Vec<Vec<String>>>,
    /// Vector fields tangent to the zero set of these functions.
    #[serde(default)]
    pub tangent: Option<Vec<String>>,
    /// I·𝔛 for the ideal I generated by these functions.
    #[serde(default)]
    pub vanishing: Option<Vec<String>>,
    #[serde(default)]
    pub max_arity: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
}

impl Session {
    pub fn from_str(s: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn ring(&self) -> Result<Ring, IoError> {
        RingJson { vars: self.vars.clone(), order: self.order.clone(), quotient: self.quotient.clone() }.build()
    }

    pub fn fields(&self, ring: &Ring) -> Result<Vec<VectorField>, IoError> {
        let polys = |v: &[String]| v.iter().map(|s| parse_in(ring, s)).collect::<Result<Vec<_>, _>>();
        match (&self.generators, &self.tangent, &self.vanishing) {
            (Some(g), None, None) => g
                .iter()
                .map(|c| {
                    if c.len() != ring.nvars() {
                        return Err(invalid(format!("vector field with {} components in {} variables", c.len(), ring.nvars())));
                    }
                    Ok(VectorField::new(ring, polys(c)?))
                })
                .collect(),
            (None, Some(t), None) => Ok(tangent_generators(ring, &polys(t)?)),
            (None, None, Some(v)) => Ok(vanishing_generators(ring, &polys(v)?)),
            _ => Err(invalid("a session needs exactly one of 'generators', 'tangent', 'vanishing'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotropyJson {
    pub point: Vec<String>,
    pub dim: usize,
    pub basis: Vec<Vec<String>>,
    /// structure[i][j] = coordinates of [b_i, b_j].
    pub structure: Vec<Vec<Vec<String>>>,
    pub jacobi: bool,
    pub regular: bool,
    pub minimal: bool,
}

pub fn isotropy_json(g: &IsotropyAlgebra, regular: bool, minimal: bool) -> IsotropyJson {
    let qs = |v: &[crate::poly::Q]| v.iter().map(format_rational).collect::<Vec<_>>();
    IsotropyJson {
        point: qs(&g.point),
        dim: g.dim(),
        basis: g.basis.iter().map(|b| qs(b)).collect(),
        structure: g.structure.iter().map(|row| row.iter().map(|v| qs(v)).collect()).collect(),
        jacobi: g.satisfies_jacobi(),
        regular,
        minimal,
    }
}
