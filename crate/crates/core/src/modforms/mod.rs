//! Half-integral weight modular forms in the Kohnen plus space of level 4,
//! and level one eigenforms used to certify them.

pub mod assembly;
pub mod eigen;
pub mod generators;
pub mod level1;
pub mod plus_space;

pub use eigen::{extract_eigenforms, extract_eigenforms_with, EigenOrbit, HalfIntegralForm};
pub use generators::{GeneratorKind, GeneratorSeries};
pub use level1::{level1_eigenform, Level1Eigenform};
pub use plus_space::{hecke_matrix, hecke_t_p2, monomial_basis, plus_cusp_basis, PlusCuspBasis};
