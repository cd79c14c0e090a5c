//! Free modules, syzygies and free resolutions.

mod constructors;
mod map;
mod module_gb;
mod resolution;

pub use constructors::{module_contains, tangent_generators, vanishing_generators};
pub use map::{syzygies, FreeModuleMap};
pub use module_gb::{prune_generators, ColumnBasis};
pub use resolution::{
    certify_exactness, default_name, free_resolution, free_resolution_of_columns, ExactnessCertificate, FreeResolution,
    LevelCertificate,
};

use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModresError {
    #[error("resolution did not terminate within {levels} levels")]
    CapExceeded { levels: usize },
    #[error("not exact at level {level}")]
    NotExact { level: usize, witness: Vec<Poly> },
    #[error("composition of consecutive maps is nonzero at level {level}")]
    NotAComplex { level: usize },
    #[error("malformed resolution: {0}")]
    Malformed(String),
}
