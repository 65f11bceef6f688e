//! Spectra of separable spatio-temporal sample covariance matrices through
//! free-probability transforms, with Monte Carlo counterparts for every
//! limit law.

pub mod analysis;
pub mod error;
pub mod lsd;
pub mod montecarlo;
pub mod poly;
pub mod spiked;
pub mod transforms;
pub mod validation;

pub use analysis::{CdfCurve, ErrorTable, QuantileSummary};
pub use error::{Error, Result};
pub use lsd::{CauchyGridSolution, Degree8Coefficients, DensityCurve, GridSpec, InversionConfig};
pub use montecarlo::{EsdSample, SimSpec};
pub use num_complex::Complex64;
pub use spiked::{QuarticCoefficients, SpikeResult, SpikeSpec, SpikedModel};
pub use transforms::{BaseModel, ModelParams, SupportInterval, TransformKind, TransformValue};
