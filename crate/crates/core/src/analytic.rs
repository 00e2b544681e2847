//! Coverage probability, per-tier load and conditional average rate of the
//! K-tier downlink model with Rayleigh fading and max-SINR association.
//!
//! Every expression assumes thresholds above 1 (0 dB): under that assumption
//! at most one station can clear its threshold, so the coverage event is a
//! disjoint union over stations and its probability is a sum of per-tier
//! integrals. Functions here reject thresholds at or below 1 with
//! [`Error::ThresholdTooLow`], except [`coverage_union_bound`], which
//! evaluates the same sum without the gate.
//!
//! Notation used in the docs: `w_i = lambda_i * P_i^(2/alpha)`,
//! `W = sum_i w_i`.

use crate::error::{Error, Result};
use crate::model::{AccessPolicy, NetworkModel};
use crate::quadrature::{integrate, QuadratureSettings};
use crate::scalar::Scalar;

/// `C(alpha) = 2 pi^2 csc(2 pi / alpha) / alpha`.
pub fn c_alpha<T: Scalar>(alpha: T) -> Result<T> {
    if !(alpha > T::lit(2.0)) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha: alpha.as_f64(),
        });
    }
    let two = T::lit(2.0);
    let pi = T::PI();
    Ok(two * pi * pi / (two * pi / alpha).sin() / alpha)
}

/// Per-tier average load: the fraction of covered users served by each tier.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadVector<T> {
    /// Indexed by zero-based tier.
    pub fractions: Vec<T>,
}

impl<T: Scalar> LoadVector<T> {
    pub fn total(&self) -> T {
        self.fractions.iter().fold(T::zero(), |s, &f| s + f)
    }
}

fn two_over_alpha<T: Scalar>(model: &NetworkModel<T>) -> T {
    T::lit(2.0) / model.alpha
}

/// `W = sum_i lambda_i P_i^(2/alpha)` over all tiers.
fn interference_weight<T: Scalar>(model: &NetworkModel<T>) -> T {
    model.tiers.iter().fold(T::zero(), |s, t| {
        s + t.density * t.power_weight(model.alpha)
    })
}

fn require_thresholds<T: Scalar>(model: &NetworkModel<T>, tiers: &[usize]) -> Result<()> {
    for &i in tiers {
        let threshold = model.tiers[i].threshold;
        if !(threshold > T::one()) {
            return Err(Error::ThresholdTooLow {
                tier: i,
                threshold: threshold.as_f64(),
            });
        }
    }
    Ok(())
}

fn require_no_noise<T: Scalar>(model: &NetworkModel<T>) -> Result<()> {
    if model.noise != T::zero() {
        return Err(Error::NoiseNotSupported(model.noise.as_f64()));
    }
    Ok(())
}

/// Validates the model and the policy and checks the threshold gate on the
/// allowed tiers, which are returned.
fn gated_tiers<T: Scalar>(model: &NetworkModel<T>, policy: &AccessPolicy) -> Result<Vec<usize>> {
    model.validate()?;
    let allowed = policy.allowed_tiers(model.num_tiers())?;
    require_thresholds(model, &allowed)?;
    Ok(allowed)
}

/// Laplace transform of the aggregate interference seen at the origin,
/// `E[exp(-s I)] = exp(-s^(2/alpha) C(alpha) W)`, with `s` per watt.
pub fn laplace_interference<T: Scalar>(s: T, model: &NetworkModel<T>) -> Result<T> {
    model.validate()?;
    if !(s >= T::zero()) {
        return Err(Error::InvalidArgument(
            "Laplace argument must be non-negative",
        ));
    }
    let c = c_alpha(model.alpha)?;
    Ok((-(s.powf(two_over_alpha(model)) * c * interference_weight(model))).exp())
}

/// `J(c) = int_0^inf exp(-v - c v^h) dv` for `c >= 0`, `h > 1`.
///
/// The range is cut at `v*` where the integrand drops to `abs_tol` (relative
/// to its value 1 at the origin) and the tail beyond is replaced by the bound
/// `g(v*) / phi'(v*)`, with `phi(v) = v + c v^h` convex.
fn radial_profile_integral<T: Scalar>(c: T, h: T, quad: &QuadratureSettings<T>) -> Result<T> {
    let floor = if quad.abs_tol > T::zero() {
        quad.abs_tol.min(T::lit(0.5))
    } else {
        T::epsilon() * T::epsilon()
    };
    let level = -floor.ln();
    let phi = |v: T| v + c * v.powf(h);

    // phi(level) >= level, so the crossing lies in [0, level].
    let (mut lo, mut hi) = (T::zero(), level);
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cut = hi;

    let body = integrate(|v: T| (-phi(v)).exp(), T::zero(), cut, quad)?;
    let slope = T::one() + c * h * cut.powf(h - T::one());
    let tail = (-phi(cut)).exp() / slope;
    Ok(body.value + tail)
}

/// Planar link integral of tier `tier`:
///
/// `delta_j = int_{R^2} exp(-C(alpha) (beta_j/P_j)^(2/alpha) W |x|^2) exp(-beta_j sigma^2 |x|^alpha / P_j) dx`,
///
/// evaluated radially with `u = |x|^2` as `(pi / a) J(b a^(-alpha/2))`, where
/// `a` and `b` are the two exponent coefficients. `lambda_j * delta_j` is the
/// probability that some station of tier `j` clears its threshold when that
/// threshold exceeds 1. No threshold gate is applied.
pub fn tier_link_integral<T: Scalar>(
    model: &NetworkModel<T>,
    tier: usize,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    model.validate()?;
    quad.validate()?;
    let params = model.tiers.get(tier).ok_or(Error::TierOutOfRange {
        tier,
        tiers: model.num_tiers(),
    })?;
    let c = c_alpha(model.alpha)?;
    let half_alpha = model.alpha / T::lit(2.0);
    let ratio = params.threshold / params.power;
    let a = c * ratio.powf(two_over_alpha(model)) * interference_weight(model);
    let b = ratio * model.noise;
    let scaled_noise = b * a.powf(-half_alpha);
    let profile = radial_profile_integral(scaled_noise, half_alpha, quad)?;
    Ok(T::PI() / a * profile)
}

fn link_terms<T: Scalar>(
    model: &NetworkModel<T>,
    tiers: &[usize],
    quad: &QuadratureSettings<T>,
) -> Result<Vec<T>> {
    tiers
        .iter()
        .map(|&j| Ok(model.tiers[j].density * tier_link_integral(model, j, quad)?))
        .collect()
}

/// Expected number of allowed stations whose SINR clears their tier
/// threshold, `sum_{i in B} lambda_i delta_i`.
///
/// Equals the coverage probability when every allowed threshold exceeds 1;
/// for lower thresholds several stations may clear at once and the value is
/// an upper bound on coverage. Accepts any positive threshold.
pub fn coverage_union_bound<T: Scalar>(
    model: &NetworkModel<T>,
    policy: &AccessPolicy,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    model.validate()?;
    let allowed = policy.allowed_tiers(model.num_tiers())?;
    let terms = link_terms(model, &allowed, quad)?;
    Ok(terms.into_iter().fold(T::zero(), |s, x| s + x))
}

/// Open-access coverage probability with noise, by quadrature.
pub fn coverage_open<T: Scalar>(
    model: &NetworkModel<T>,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    coverage_closed(model, &AccessPolicy::Open, quad)
}

/// Closed-access coverage probability: the sum runs over allowed tiers while
/// every tier keeps interfering.
pub fn coverage_closed<T: Scalar>(
    model: &NetworkModel<T>,
    policy: &AccessPolicy,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    let allowed = gated_tiers(model, policy)?;
    let terms = link_terms(model, &allowed, quad)?;
    Ok(terms.into_iter().fold(T::zero(), |s, x| s + x))
}

/// Interference-limited open-access coverage in closed form,
/// `(pi / C(alpha)) sum_i w_i beta_i^(-2/alpha) / W`. Any noise in the model
/// is ignored.
pub fn coverage_open_nonoise<T: Scalar>(model: &NetworkModel<T>) -> Result<T> {
    coverage_closed_nonoise(model, &AccessPolicy::Open)
}

/// Interference-limited closed-access coverage in closed form; the numerator
/// sums over allowed tiers only. Any noise in the model is ignored.
pub fn coverage_closed_nonoise<T: Scalar>(
    model: &NetworkModel<T>,
    policy: &AccessPolicy,
) -> Result<T> {
    let allowed = gated_tiers(model, policy)?;
    let c = c_alpha(model.alpha)?;
    let e = two_over_alpha(model);
    let num = allowed.iter().fold(T::zero(), |s, &i| {
        let t = &model.tiers[i];
        s + t.density * t.power_weight(model.alpha) * t.threshold.powf(-e)
    });
    Ok(T::PI() / c * num / interference_weight(model))
}

/// Open-access load per tier, `lambda_j delta_j / P_c`.
pub fn load_open<T: Scalar>(
    model: &NetworkModel<T>,
    quad: &QuadratureSettings<T>,
) -> Result<LoadVector<T>> {
    load_closed(model, &AccessPolicy::Open, quad)
}

/// Closed-access load per tier; disallowed tiers carry exactly zero.
pub fn load_closed<T: Scalar>(
    model: &NetworkModel<T>,
    policy: &AccessPolicy,
    quad: &QuadratureSettings<T>,
) -> Result<LoadVector<T>> {
    let allowed = gated_tiers(model, policy)?;
    let terms = link_terms(model, &allowed, quad)?;
    let coverage = terms.iter().fold(T::zero(), |s, &x| s + x);
    let mut fractions = vec![T::zero(); model.num_tiers()];
    if coverage > T::zero() {
        for (&j, &term) in allowed.iter().zip(&terms) {
            fractions[j] = term / coverage;
        }
    }
    Ok(LoadVector { fractions })
}

/// `(w_i, beta_i)` for the allowed tiers.
fn allowed_weights<T: Scalar>(model: &NetworkModel<T>, allowed: &[usize]) -> Vec<(T, T)> {
    allowed
        .iter()
        .map(|&i| {
            let t = &model.tiers[i];
            (t.density * t.power_weight(model.alpha), t.threshold)
        })
        .collect()
}

fn min_threshold<T: Scalar>(weights: &[(T, T)]) -> T {
    weights
        .iter()
        .fold(T::infinity(), |m, &(_, beta)| m.min(beta))
}

/// Distribution of the maximum SIR given coverage (interference-limited):
/// `P(max SIR > t | covered)`. Equals 1 for `t <= beta_min`, otherwise
/// `sum_B w_i max(beta_i, t)^(-2/alpha) / sum_B w_i beta_i^(-2/alpha)`.
pub fn max_sir_ccdf<T: Scalar>(t: T, model: &NetworkModel<T>, policy: &AccessPolicy) -> Result<T> {
    let allowed = gated_tiers(model, policy)?;
    require_no_noise(model)?;
    let weights = allowed_weights(model, &allowed);
    if t <= min_threshold(&weights) {
        return Ok(T::one());
    }
    let e = two_over_alpha(model);
    let (num, den) = weights
        .iter()
        .fold((T::zero(), T::zero()), |(n, d), &(w, beta)| {
            (n + w * beta.max(t).powf(-e), d + w * beta.powf(-e))
        });
    Ok(num / den)
}

/// `A(alpha, beta_i, beta_min) = int_{beta_min}^inf max(beta_i, x)^(-2/alpha) / (1 + x) dx`.
///
/// Split at `s = max(beta_i, beta_min)`. The tail is mapped to `w in (0, 1]`
/// by `x = s w^(-alpha/2)`, which turns it into the smooth
/// `(alpha/2) s^(1 - 2/alpha) int_0^1 dw / (w^(alpha/2) + s)`.
pub fn rate_tail_integral<T: Scalar>(
    alpha: T,
    beta_i: T,
    beta_min: T,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    if !(alpha > T::lit(2.0)) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha: alpha.as_f64(),
        });
    }
    if !(beta_i > T::zero() && beta_min > T::zero()) || !beta_i.is_finite() {
        return Err(Error::InvalidArgument(
            "thresholds must be positive and finite",
        ));
    }
    let e = T::lit(2.0) / alpha;
    let h = alpha / T::lit(2.0);
    let split = beta_i.max(beta_min);

    let flat = integrate(|x: T| T::one() / (T::one() + x), beta_min, split, quad)?;
    let tail = integrate(
        |w: T| T::one() / (w.powf(h) + split),
        T::zero(),
        T::one(),
        quad,
    )?;
    Ok(beta_i.powf(-e) * flat.value + h * split.powf(T::one() - e) * tail.value)
}

/// Open-access conditional average rate (nats) given coverage,
/// interference-limited.
pub fn rate_open<T: Scalar>(model: &NetworkModel<T>, quad: &QuadratureSettings<T>) -> Result<T> {
    rate_closed(model, &AccessPolicy::Open, quad)
}

/// Closed-access conditional average rate (nats):
/// `ln(1 + beta_min) + sum_B w_i A(alpha, beta_i, beta_min) / sum_B w_i beta_i^(-2/alpha)`
/// with `beta_min` the smallest allowed threshold.
pub fn rate_closed<T: Scalar>(
    model: &NetworkModel<T>,
    policy: &AccessPolicy,
    quad: &QuadratureSettings<T>,
) -> Result<T> {
    let allowed = gated_tiers(model, policy)?;
    require_no_noise(model)?;
    quad.validate()?;
    let weights = allowed_weights(model, &allowed);
    let beta_min = min_threshold(&weights);
    let e = two_over_alpha(model);
    let mut num = T::zero();
    let mut den = T::zero();
    for &(w, beta) in &weights {
        num = num + w * rate_tail_integral(model.alpha, beta, beta_min, quad)?;
        den = den + w * beta.powf(-e);
    }
    Ok(beta_min.ln_1p() + num / den)
}

/// Distance beyond which the nearest station of a PPP of density `density`
/// lies with probability `1 - edge_quantile`: `sqrt(-ln(1 - q) / (pi lambda))`.
pub fn edge_distance<T: Scalar>(density: T, edge_quantile: T) -> Result<T> {
    if !(edge_quantile > T::zero() && edge_quantile < T::one()) {
        return Err(Error::InvalidQuantile(edge_quantile.as_f64()));
    }
    if !(density > T::zero()) || !density.is_finite() {
        return Err(Error::NonPositiveParameter {
            tier: 0,
            field: "density",
            value: density.as_f64(),
        });
    }
    Ok(((-(-edge_quantile).ln_1p()) / (T::PI() * density)).sqrt())
}

/// Noise power giving SNR `edge_snr` (linear) at the macro cell edge:
/// `P_t d_edge^(-alpha) / SNR_edge`. An infinite SNR yields zero noise.
pub fn noise_from_edge_snr<T: Scalar>(
    tier1_power: T,
    tier1_density: T,
    alpha: T,
    edge_snr: T,
    edge_quantile: T,
) -> Result<T> {
    let d_edge = edge_distance(tier1_density, edge_quantile)?;
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::AlphaOutOfRange {
            alpha: alpha.as_f64(),
        });
    }
    for (field, value) in [("power", tier1_power), ("edge SNR", edge_snr)] {
        if !(value > T::zero()) {
            return Err(Error::NonPositiveParameter {
                tier: 0,
                field,
                value: value.as_f64(),
            });
        }
    }
    Ok(tier1_power * d_edge.powf(-alpha) / edge_snr)
}
