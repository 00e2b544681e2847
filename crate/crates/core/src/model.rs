//! Domain types shared by the analytic evaluator, the simulator and the
//! region rasterizer.
//!
//! Every quantity is linear SI: watts, base stations per square meter,
//! meters, linear SINR ratios. Decibel conversions happen at the edges.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One tier of base stations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierParams<T> {
    /// Transmit power, watts.
    pub power: T,
    /// Base-station density, stations per square meter.
    pub density: T,
    /// SINR threshold, linear. Values at or below 1 are accepted here; the
    /// analytic expressions reject them, the simulator does not.
    pub threshold: T,
}

impl<T: Scalar> TierParams<T> {
    pub fn new(power: T, density: T, threshold: T) -> Self {
        Self {
            power,
            density,
            threshold,
        }
    }

    /// `P^{2/alpha}`, the weight a tier carries in every interference sum.
    #[inline]
    pub fn power_weight(&self, alpha: T) -> T {
        self.power.powf(T::lit(2.0) / alpha)
    }
}

/// K tiers sharing a path-loss exponent and a receiver noise floor.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel<T> {
    pub tiers: Vec<TierParams<T>>,
    /// Path-loss exponent, `l(x) = |x|^-alpha`.
    pub alpha: T,
    /// Noise power, watts. Zero means interference-limited.
    pub noise: T,
}

impl<T: Scalar> NetworkModel<T> {
    /// Builds and validates a model.
    pub fn new(tiers: Vec<TierParams<T>>, alpha: T, noise: T) -> Result<Self> {
        let model = Self {
            tiers,
            alpha,
            noise,
        };
        model.validate()?;
        Ok(model)
    }

    #[inline]
    pub fn num_tiers(&self) -> usize {
        self.tiers.len()
    }

    /// Checks the invariants of the model, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        if self.tiers.is_empty() {
            return Err(Error::EmptyTierList);
        }
        if !(self.alpha > T::lit(2.0)) || !self.alpha.is_finite() {
            return Err(Error::AlphaOutOfRange {
                alpha: self.alpha.as_f64(),
            });
        }
        for (i, tier) in self.tiers.iter().enumerate() {
            for (field, value) in [
                ("power", tier.power),
                ("density", tier.density),
                ("threshold", tier.threshold),
            ] {
                if !(value > T::zero()) || !value.is_finite() {
                    return Err(Error::NonPositiveParameter {
                        tier: i,
                        field,
                        value: value.as_f64(),
                    });
                }
            }
        }
        if !(self.noise >= T::zero()) || !self.noise.is_finite() {
            return Err(Error::InvalidNoise(self.noise.as_f64()));
        }
        Ok(())
    }

    /// Same model with every threshold replaced.
    pub fn with_thresholds(&self, thresholds: &[T]) -> Result<Self> {
        if thresholds.len() != self.tiers.len() {
            return Err(Error::InvalidArgument(
                "threshold count does not match tier count",
            ));
        }
        let mut out = self.clone();
        for (tier, &t) in out.tiers.iter_mut().zip(thresholds) {
            tier.threshold = t;
        }
        Ok(out)
    }

    /// Same model with a different noise floor.
    pub fn with_noise(&self, noise: T) -> Self {
        Self {
            noise,
            ..self.clone()
        }
    }

    /// Sum of densities over all tiers.
    pub fn total_density(&self) -> T {
        self.tiers.iter().fold(T::zero(), |acc, t| acc + t.density)
    }
}

/// Which tiers a user may attach to. Disallowed tiers still interfere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AccessPolicy {
    #[default]
    Open,
    /// Zero-based indices of the tiers the user may connect to.
    Closed(BTreeSet<usize>),
}

impl AccessPolicy {
    pub fn closed<I: IntoIterator<Item = usize>>(tiers: I) -> Self {
        AccessPolicy::Closed(tiers.into_iter().collect())
    }

    /// Whether tier `tier` may serve the user. Does not check the range.
    #[inline]
    pub fn allows(&self, tier: usize) -> bool {
        match self {
            AccessPolicy::Open => true,
            AccessPolicy::Closed(set) => set.contains(&tier),
        }
    }

    /// Sorted allowed tier indices for a `num_tiers`-tier model.
    pub fn allowed_tiers(&self, num_tiers: usize) -> Result<Vec<usize>> {
        match self {
            AccessPolicy::Open => Ok((0..num_tiers).collect()),
            AccessPolicy::Closed(set) => {
                if set.is_empty() {
                    return Err(Error::EmptyAllowedSet);
                }
                if let Some(&bad) = set.iter().find(|&&t| t >= num_tiers) {
                    return Err(Error::TierOutOfRange {
                        tier: bad,
                        tiers: num_tiers,
                    });
                }
                Ok(set.iter().copied().collect())
            }
        }
    }

    /// Allowed-tier mask; validates like [`AccessPolicy::allowed_tiers`].
    pub fn mask(&self, num_tiers: usize) -> Result<Vec<bool>> {
        let allowed = self.allowed_tiers(num_tiers)?;
        let mut mask = vec![false; num_tiers];
        for t in allowed {
            mask[t] = true;
        }
        Ok(mask)
    }
}

/// A base station in a sampled deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Station {
    /// Coordinates in meters; the typical user sits at the origin.
    pub position: [f64; 2],
    /// Zero-based tier index.
    pub tier: usize,
    /// Unit-mean exponential power fading towards the origin.
    pub fading: f64,
}

impl Station {
    #[inline]
    pub fn distance_sq(&self) -> f64 {
        self.position[0] * self.position[0] + self.position[1] * self.position[1]
    }
}

/// One realization of all tiers inside a disk centred on the typical user.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Deployment {
    pub stations: Vec<Station>,
    pub window_radius: f64,
}

impl Deployment {
    pub fn len(&self) -> usize {
        self.stations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stations.is_empty()
    }

    /// Number of stations of each tier.
    pub fn tier_counts(&self, num_tiers: usize) -> Vec<usize> {
        let mut counts = vec![0; num_tiers];
        for s in &self.stations {
            if s.tier < num_tiers {
                counts[s.tier] += 1;
            }
        }
        counts
    }
}

/// Monte Carlo point estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateWithCI {
    pub value: f64,
    pub stderr: f64,
    /// Number of samples behind the estimate. For conditional estimates
    /// (load, rate) this is the number of covered trials.
    pub trials: u64,
    pub seed: u64,
}

impl EstimateWithCI {
    /// Proportion estimate with the binomial standard error.
    pub fn proportion(successes: u64, trials: u64, seed: u64) -> Self {
        let n = trials as f64;
        let p = if trials == 0 {
            0.0
        } else {
            successes as f64 / n
        };
        let stderr = if trials == 0 {
            0.0
        } else {
            (p * (1.0 - p) / n).sqrt()
        };
        Self {
            value: p,
            stderr,
            trials,
            seed,
        }
    }

    /// Whether `target` lies within `k` standard errors of the estimate.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }

    /// Standard error of the difference of two independent estimates.
    pub fn combined_stderr(&self, other: &Self) -> f64 {
        self.stderr.hypot(other.stderr)
    }
}

/// `10^(x/10)`.
#[inline]
pub fn db_to_linear<T: Scalar>(x_db: T) -> T {
    T::lit(10.0).powf(x_db / T::lit(10.0))
}

/// `10 log10(x)`.
#[inline]
pub fn linear_to_db<T: Scalar>(x: T) -> T {
    T::lit(10.0) * x.log10()
}
