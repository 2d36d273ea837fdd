//! Distribution analysis of normalised coefficients.

pub mod cdf;
pub mod export;
pub mod fit;
pub mod histogram;
pub mod models;
pub mod signs;

pub use cdf::cdf_distance;
pub use fit::{default_init, fit, fit_nested, fit_points, fit_with, rms, FitOptions, FitResult};
pub use histogram::{histogram, Histogram};
pub use models::{model_eval, ModelKind};
pub use signs::{independence_ratio, sign_report, wilson_interval, IndependenceRatio, SignReport};
