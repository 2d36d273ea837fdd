//! Exact computation of cuspidal Hecke eigenforms of half-integral weight in
//! the Kohnen plus space of level 4, together with the statistical toolkit
//! used to study their normalised Fourier coefficients.
//!
//! The crate is organised bottom-up:
//!
//! - [`arith`]: exact power series, rational polynomials and matrices,
//!   number fields, real root isolation, and a multi-modular NTT engine for
//!   long expansions.
//! - [`modforms`]: theta/F generators, the plus cusp space, Hecke operators
//!   `T(p^2)`, eigenform extraction and level-one eigenforms.
//! - [`pipeline`]: squarefree sieving, normalisation to real values and the
//!   coefficient file format.
//! - [`lab`]: histograms, least-squares fits of the four density families,
//!   RMS comparison and sign statistics.
//! - [`shimura`]: exact Shimura-lift certificates against level-one forms.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! without it every loop runs sequentially with identical results.

pub mod arith;
pub mod error;
pub mod exec;
pub mod lab;
pub mod modforms;
pub mod pipeline;
pub mod shimura;

pub use error::{Error, Result};
