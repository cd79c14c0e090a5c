//! Universal Lie ∞-algebroids of polynomial singular foliations, built and
//! verified in exact arithmetic.

pub mod brackets;
pub mod catalog;
pub mod construct;
pub mod io;
pub mod isotropy;
pub mod modres;
pub mod poly;
pub mod symalg;
