//! From exact eigenforms to real coefficient streams: index sieving,
//! normalisation, the coefficient file format, and stream slicing.

pub mod normalize;
pub mod sieve;
pub mod stream;

pub use normalize::{normalization_exponent, normalize};
pub use sieve::{recorded_indices, squarefree_sieve};
pub use stream::{prime_filter, read_stream, subset_split, write_stream, CoeffStream};
