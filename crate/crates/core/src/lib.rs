//! Coverage, per-tier load and conditional rate of K-tier downlink
//! heterogeneous cellular networks.
//!
//! Base stations of each tier form a Poisson point process with their own
//! transmit power, density and SINR threshold; a user attaches to the
//! station with the highest SINR under Rayleigh fading. The crate provides
//!
//! - [`analytic`]: numerical evaluation of the closed-form and integral
//!   expressions for coverage, load, the max-SIR distribution and rate,
//! - [`montecarlo`]: a seeded, reproducible simulator that validates them,
//! - [`regions`]: rasterized average-power coverage regions.
//!
//! The model types and the analytic layer are generic over [`Scalar`]
//! (`f32` or `f64`); the aliases below fix the scalar to `f64`, which is
//! what the simulator and the rasterizer use.
//!
//! ```
//! use hetnet_core::{analytic, NetworkModel, TierParams};
//!
//! let model = NetworkModel::new(vec![TierParams::new(1.0, 1e-4, 2.0)], 4.0, 0.0).unwrap();
//! let pc = analytic::coverage_open_nonoise(&model).unwrap();
//! assert!((pc - 2f64.sqrt() / std::f64::consts::PI).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose: it rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod quadrature;
pub mod regions;
mod scalar;

pub use error::{Error, Result};
pub use model::{db_to_linear, linear_to_db, AccessPolicy, Deployment, EstimateWithCI, Station};
pub use montecarlo::{Placement, SimulationConfig, TrialOutcome};
pub use regions::RegionRaster;
pub use scalar::Scalar;

pub type TierParams = model::TierParams<f64>;
pub type NetworkModel = model::NetworkModel<f64>;
pub type QuadratureSettings = quadrature::QuadratureSettings<f64>;
pub type LoadVector = analytic::LoadVector<f64>;

pub type TierParamsF32 = model::TierParams<f32>;
pub type NetworkModelF32 = model::NetworkModel<f32>;
pub type QuadratureSettingsF32 = quadrature::QuadratureSettings<f32>;
