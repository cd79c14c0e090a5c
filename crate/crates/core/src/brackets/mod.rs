//! Brackets with anchor-aware evaluation, the Richardson–Nijenhuis bracket,
//! the page bicomplex and the axiom and morphism verifiers.

mod algebroid;
mod morphism;
mod page;
mod verify;

pub use algebroid::{
    apply_linear, compose, differential_table, eval_bracket, eval_multilinear, jacobi_on_elems, leibniz_terms, rn_bracket,
    rn_bracket_on, subsets, LieInftyAlgebroid, Op,
};
pub use morphism::{chain_map, check_morphism, solve_phi1, MorphismTaylor};
pub use page::{page_d, page_solve, PageElement, PageSpace};
pub use verify::{
    anchor_morphism_witness, check_algebroid, check_jacobi_words, higher_jacobi_on, jacobi_words, jacobiator, CheckOutcome, Report,
};

use crate::symalg::{format_word, Elem, Gen};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("arity {arity} out of range (max {max})")]
    ArityOutOfRange { arity: usize, max: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("anchor is not a bracket morphism on e[1,{}], e[1,{}]", .i + 1, .j + 1)]
    AnchorNotMorphism { i: u32, j: u32 },
    #[error("lift failed at level {level} on {}: {witness}", format_word(.word))]
    LiftFailed { level: usize, word: Vec<Gen>, witness: Elem },
    #[error("input is not D-closed; residue on {}: {witness}", format_word(.word))]
    NotClosed { word: Vec<Gen>, witness: Elem },
}
