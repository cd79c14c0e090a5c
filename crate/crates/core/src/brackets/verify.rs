use rayon::prelude::*;
use serde::Serialize;

use crate::symalg::{enumerate_words_ranks, format_word, Elem, Gen, TaylorMap};

use super::algebroid::{compose, LieInftyAlgebroid, Op};
use super::page::PageElement;
use super::BracketError;

/// Outcome of one identity checked on every word in its range.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckOutcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn push(&mut self, c: CheckOutcome) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            s.push_str(&format!("{} {} ({} cases)", status, c.name, c.cases));
            if let Some(w) = &c.witness {
                s.push_str(&format!("\n     witness: {}", w));
            }
            s.push('\n');
        }
        s.push_str(if self.passed() { "all checks passed\n" } else { "verification failed\n" });
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "passed": self.passed(), "checks": self.checks })
    }
}

/// Runs `f` on every case in parallel and keeps the first failure in order.
pub(crate) fn check_all<T: Sync>(name: impl Into<String>, cases: &[T], f: impl Fn(&T) -> Option<String> + Sync) -> CheckOutcome {
    let fails: Vec<Option<String>> = cases.par_iter().map(&f).collect();
    let witness = fails.into_iter().flatten().next();
    CheckOutcome { name: name.into(), passed: witness.is_none(), cases: cases.len(), witness }
}

fn word_str(w: &[Gen]) -> String {
    format_word(w)
}

/// ρ(ℓ_2(e_i, e_j)) = [ρ e_i, ρ e_j] on level-1 generators; first failure.
pub fn anchor_morphism_witness(alg: &LieInftyAlgebroid) -> Option<(u32, u32)> {
    let r1 = alg.res().rank(1) as u32;
    let pairs: Vec<(u32, u32)> = (0..r1).flat_map(|i| ((i + 1)..r1).map(move |j| (i, j))).collect();
    let bad: Vec<Option<(u32, u32)>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let v = alg.bracket(2).map(|t| t.eval(&[Gen::new(1, i), Gen::new(1, j)])).unwrap_or_default();
            let lhs = alg.rho(&v);
            let rhs = alg.anchor_of(i).bracket(&alg.anchor_of(j));
            if lhs == rhs {
                None
            } else {
                Some((i, j))
            }
        })
        .collect();
    bad.into_iter().flatten().next()
}

/// Σ_{i+j=n+1} ℓ_i∘ℓ_j on one word.
pub fn higher_jacobi_on(alg: &LieInftyAlgebroid, letters: &[Gen]) -> Elem {
    let n = letters.len();
    let mut out = Elem::zero();
    for i in 1..=n {
        let j = n + 1 - i;
        if alg.bracket(i).is_none() {
            continue;
        }
        if alg.bracket(j).is_none() && j != 2 {
            continue;
        }
        out.add_assign(&compose(&Op::Bracket(alg, j), &Op::Bracket(alg, i), letters));
    }
    out
}

/// Words of length n on which the n-th Jacobi identity has values in E.
pub fn jacobi_words(alg: &LieInftyAlgebroid, n: usize) -> Vec<Vec<Gen>> {
    let l = alg.length() as i32;
    let ranks = alg.ranks();
    let mut out = Vec::new();
    for level in 1..=l {
        let m = -level - 2;
        if m <= -(n as i32) {
            out.extend(enumerate_words_ranks(&ranks, n, m));
        }
    }
    out
}

/// Higher Jacobi identity on the given words (all of the same length).
pub fn check_jacobi_words(name: impl Into<String>, alg: &LieInftyAlgebroid, words: &[Vec<Gen>]) -> CheckOutcome {
    check_all(name, words, |w| {
        let v = higher_jacobi_on(alg, w);
        if v.is_zero() {
            None
        } else {
            Some(format!("{} ↦ {}", word_str(w), v))
        }
    })
}

/// Jac = ℓ_2∘ℓ_2 (the Jacobiator of the proof), on all triples with values in E.
pub fn jacobiator(alg: &LieInftyAlgebroid) -> Result<PageElement, BracketError> {
    if let Some((i, j)) = anchor_morphism_witness(alg) {
        return Err(BracketError::AnchorNotMorphism { i, j });
    }
    let words = jacobi_words(alg, 3);
    let op = Op::Bracket(alg, 2);
    let vals: Vec<(Vec<Gen>, Elem)> = words.par_iter().map(|w| (w.clone(), compose(&op, &op, w))).collect();
    let mut t = TaylorMap::new(3, 2);
    for (w, v) in vals {
        if !v.is_zero() {
            t.set(&w, v);
        }
    }
    Ok(PageElement::new(t))
}

/// Axioms of a Lie ∞-algebroid, checked exhaustively on generator words:
/// complex property, ρ∘ℓ_1 = 0, anchor morphism, table degrees and arity
/// bound, and the n-th higher Jacobi identity for n = 1..=max_arity.
pub fn check_algebroid(alg: &LieInftyAlgebroid, max_arity: Option<usize>) -> Report {
    let mut rep = Report::default();
    let res = alg.res();
    let l = alg.length();
    let nmax = max_arity.unwrap_or(l + 2);

    let complex = res.check_complex();
    rep.push(CheckOutcome {
        name: "d∘d = 0 and ρ∘d = 0".into(),
        passed: complex.is_ok(),
        cases: l,
        witness: complex.err().map(|e| e.to_string()),
    });

    let r1 = res.rank(1) as u32;
    let pairs: Vec<(u32, u32)> = (0..r1).flat_map(|i| ((i + 1)..r1).map(move |j| (i, j))).collect();
    rep.push(check_all("anchor is a bracket morphism", &pairs, |&(i, j)| {
        let v = alg.bracket(2).map(|t| t.eval(&[Gen::new(1, i), Gen::new(1, j)])).unwrap_or_default();
        if alg.rho(&v) == alg.anchor_of(i).bracket(&alg.anchor_of(j)) {
            None
        } else {
            Some(format!("{}", word_str(&[Gen::new(1, i), Gen::new(1, j)])))
        }
    }));

    let arities = alg.bracket_arities();
    let bad_degree = arities.iter().find(|&&k| {
        let t = alg.bracket(k).unwrap();
        !t.check_degrees() || t.shift() != 1 || k > alg.max_arity()
    });
    rep.push(CheckOutcome {
        name: format!("bracket degrees and arity bound K = {}", alg.max_arity()),
        passed: bad_degree.is_none(),
        cases: arities.len(),
        witness: bad_degree.map(|k| format!("ℓ{}", k)),
    });

    for n in 1..=nmax {
        let words = jacobi_words(alg, n);
        rep.push(check_jacobi_words(format!("higher Jacobi identity n = {}", n), alg, &words));
    }
    rep
}
