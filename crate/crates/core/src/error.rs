use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Tier indices in errors are zero-based, matching the library API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("path-loss exponent must exceed 2, got {alpha}")]
    AlphaOutOfRange { alpha: f64 },

    #[error("tier {tier}: {field} must be positive, got {value}")]
    NonPositiveParameter {
        tier: usize,
        field: &'static str,
        value: f64,
    },

    #[error("noise power must be non-negative and finite, got {0}")]
    InvalidNoise(f64),

    #[error("network model has no tiers")]
    EmptyTierList,

    #[error(
        "tier {tier}: threshold {threshold} must exceed 1 (0 dB) for the analytic expressions"
    )]
    ThresholdTooLow { tier: usize, threshold: f64 },

    #[error("closed access requires a non-empty set of allowed tiers")]
    EmptyAllowedSet,

    #[error("tier index {tier} out of range for a {tiers}-tier model")]
    TierOutOfRange { tier: usize, tiers: usize },

    #[error("expression requires an interference-limited model (noise = 0), got noise {0}")]
    NoiseNotSupported(f64),

    #[error("adaptive quadrature did not reach tolerance within {subdivisions} subdivisions (error estimate {error:e}, value {value:e})")]
    QuadratureFailure {
        subdivisions: usize,
        error: f64,
        value: f64,
    },

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadratureSettings(&'static str),

    #[error("edge quantile must lie in (0, 1), got {0}")]
    InvalidQuantile(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("station {0} sits at the origin; its path loss is undefined")]
    StationAtOrigin(usize),

    #[error("station index {index} out of range ({len} stations)")]
    StationOutOfRange { index: usize, len: usize },

    #[error("no covered trials; conditional estimate is undefined")]
    NoCoveredTrials,

    #[error("deployment has no stations")]
    EmptyDeployment,

    #[error("invalid simulation config: {0}")]
    InvalidConfig(&'static str),
}
