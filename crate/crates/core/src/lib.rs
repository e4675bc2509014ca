//! Simulation of intraday execution costs under a stochastic trading rate and
//! transient price impact, with estimators that separate broker spread costs
//! and impact from market noise.
//!
//! ```
//! use impactlab::{analytics, ModelParams};
//!
//! let p = ModelParams::default();
//! let cost = analytics::cost_moments(&p);
//! assert!((cost.e_linear - 50_000.0).abs() < 1e-6);
//! ```

pub mod analytics;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod ingest;
pub mod model;
pub mod params;
pub mod regression;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{OrderMetrics, WeightNormalization};
pub use experiments::ExperimentConfig;
pub use params::{ModelParams, SimGrid, SpreadSide};
