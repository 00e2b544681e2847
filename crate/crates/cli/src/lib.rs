//! Experiment runner behind the `hetnet` binary: spec files, built-in
//! presets, analytic/Monte Carlo sweeps written as CSV, and PPM region maps.

pub mod error;
pub mod presets;
pub mod run;
pub mod spec;

pub use error::CliError;
pub use run::Mode;
pub use spec::Experiment;
