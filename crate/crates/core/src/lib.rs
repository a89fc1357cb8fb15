//! Rare-event probability estimation for heavy- and light-tailed sums.
//!
//! The centerpiece is a semiparametric adaptive importance sampling scheme:
//! a Gibbs chain draws from the zero-variance density π ∝ f·1{S > γ}, the
//! chain states are turned into Rao-Blackwell mixture estimates of π's
//! marginals, and their product (with the exact conditional in the last
//! coordinate) serves as the importance density. Crude Monte Carlo, the
//! Asmussen-Kroese conditional estimator, a parametric cross-entropy tilt,
//! a dominant-term variant, and a geometric compound-sum estimator share the
//! same reporting surface for benchmarking, and an `efficiency` lab verifies
//! the estimator's variance analysis numerically.
//!
//! Replications are scheduled on rayon when the `parallel` feature (default)
//! is enabled and run sequentially otherwise; either way results are
//! bit-identical for a fixed seed.

pub mod compound;
pub mod distributions;
pub mod efficiency;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod gibbs;
pub mod math;
pub mod mixture;
pub mod model;
pub mod quad;
pub mod report;

pub use distributions::JumpLaw;
pub use error::{Error, Result};
pub use estimators::{EstimateReport, Method};
pub use model::{FixedSumModel, RareEventModel};
