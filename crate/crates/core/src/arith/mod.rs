//! Exact arithmetic primitives.

pub mod field;
pub mod irreducible;
pub mod matrix;
pub mod modular;
pub mod nt;
pub mod poly;
pub mod roots;
pub mod series;

pub use field::{kernel_vector, AlgebraicNumber, NumberField};
pub use irreducible::is_irreducible;
pub use matrix::QMatrix;
pub use poly::QPoly;
pub use roots::{isolate_real_roots, RealEmbedding};
pub use series::{series_mul, series_pow, ExactSeries, IntSeries, Series};

use num_bigint::BigInt;
use num_rational::BigRational;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
