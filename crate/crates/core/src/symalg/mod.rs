//! Graded symmetric words, Koszul signs and co-algebra extensions.

mod elem;
mod enumerate;
mod taylor;
mod word;

pub use elem::{Elem, SymTensor};
pub use enumerate::{enumerate_words, enumerate_words_ranks, enumerate_words_window};
pub use taylor::{
    coderivation_full, comorphism_factored, comorphism_full, coproduct, coproduct_word, extend_coderivation,
    extend_comorphism, Base, TaylorMap, Tensor2,
};
pub use word::{format_word, koszul_sign, sort_with_sign, word_degree, Gen, GradedWord};
