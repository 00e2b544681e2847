//! Monte Carlo simulator of the typical user at the origin.
//!
//! Each trial draws every tier inside a disk around the origin (PPP, or a
//! randomly shifted and rotated hexagonal lattice for tier 1), attaches unit
//! mean exponential fading to every link, computes the SINR of every station
//! and applies max-SINR association.
//!
//! Randomness is counter based: the ChaCha8 key is derived from
//! `(seed, tier)` and the stream id is the trial index, so any trial can be
//! regenerated in isolation and results do not depend on how trials are
//! scheduled across threads.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, Poisson};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{AccessPolicy, Deployment, EstimateWithCI, NetworkModel, Station};

/// Expected total station count used to size the window when no radius is
/// given.
pub const DEFAULT_EXPECTED_STATIONS: f64 = 10_000.0;

/// How tier 1 (index 0) is placed. Other tiers are always PPPs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    #[default]
    Ppp,
    HexGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    /// Window radius in meters; `None` sizes it for
    /// [`DEFAULT_EXPECTED_STATIONS`] expected stations.
    pub window_radius: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub tier1_placement: Placement,
    /// Linear per-tier thresholds replacing the model's; may be below 1.
    pub thresholds_override: Option<Vec<f64>>,
    /// Add the mean interference of the stations beyond the window to every
    /// SINR denominator (see [`far_field_interference`]).
    pub far_field_compensation: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            window_radius: None,
            trials: 10_000,
            seed: 0,
            tier1_placement: Placement::Ppp,
            thresholds_override: None,
            far_field_compensation: true,
        }
    }
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            ..Self::default()
        }
    }

    pub fn with_placement(mut self, placement: Placement) -> Self {
        self.tier1_placement = placement;
        self
    }

    pub fn with_window_radius(mut self, radius: f64) -> Self {
        self.window_radius = Some(radius);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1"));
        }
        if let Some(r) = self.window_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidConfig("window radius must be positive"));
            }
        }
        if let Some(t) = &self.thresholds_override {
            if t.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                return Err(Error::InvalidConfig("threshold overrides must be positive"));
            }
        }
        Ok(())
    }

    /// Radius of the simulation disk for `model`.
    pub fn window_radius_for(&self, model: &NetworkModel<f64>) -> f64 {
        self.window_radius.unwrap_or_else(|| {
            let total = model.total_density();
            if total > 0.0 {
                (DEFAULT_EXPECTED_STATIONS / (PI * total)).sqrt()
            } else {
                1.0
            }
        })
    }

    pub fn without_far_field(mut self) -> Self {
        self.far_field_compensation = false;
        self
    }

    /// The model with the threshold override applied.
    pub fn effective_model(&self, model: &NetworkModel<f64>) -> Result<NetworkModel<f64>> {
        match &self.thresholds_override {
            Some(t) => model.with_thresholds(t),
            None => Ok(model.clone()),
        }
    }
}

/// Mean interference at the origin from all stations farther than `radius`,
/// `sum_i lambda_i P_i 2 pi radius^(2 - alpha) / (alpha - 2)` (unit-mean fading).
///
/// Its relative fluctuation is of order `1 / sqrt(expected stations)`, so
/// adding the mean removes almost all of the truncation bias, which otherwise
/// decays only like `radius^(2 - alpha)`.
pub fn far_field_interference(model: &NetworkModel<f64>, radius: f64) -> f64 {
    let alpha = model.alpha;
    let weight: f64 = model.tiers.iter().map(|t| t.density * t.power).sum();
    weight * TAU * radius.powf(2.0 - alpha) / (alpha - 2.0)
}

/// Result of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub covered: bool,
    /// Zero-based tier of the serving station.
    pub serving_tier: Option<usize>,
    /// Largest SINR among stations of allowed tiers; 0 if there are none.
    pub max_sinr: f64,
    /// Allowed stations whose SINR exceeds their tier threshold.
    pub num_above_threshold: u32,
}

impl TrialOutcome {
    const EMPTY: Self = Self {
        covered: false,
        serving_tier: None,
        max_sinr: 0.0,
        num_above_threshold: 0,
    };
}

fn substream(seed: u64, trial: u64, tier: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&(tier as u64).to_le_bytes());
    key[16..24].copy_from_slice(b"hetnetmc");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(trial);
    rng
}

/// Where a sampled station sits: PPP stations keep polar form so the hot
/// path never needs trigonometry.
#[derive(Debug, Clone, Copy)]
enum Point {
    Polar { radius_sq: f64, angle: f64 },
    Cartesian([f64; 2]),
}

impl Point {
    #[inline]
    fn radius_sq(&self) -> f64 {
        match *self {
            Point::Polar { radius_sq, .. } => radius_sq,
            Point::Cartesian([x, y]) => x * x + y * y,
        }
    }

    fn cartesian(&self) -> [f64; 2] {
        match *self {
            Point::Polar { radius_sq, angle } => {
                let r = radius_sq.sqrt();
                [r * angle.cos(), r * angle.sin()]
            }
            Point::Cartesian(p) => p,
        }
    }
}

/// Hexagonal lattice spacing whose cell area is `1 / density`.
pub fn hex_spacing(density: f64) -> f64 {
    (2.0 / (3f64.sqrt() * density)).sqrt()
}

/// Draws all stations of one trial, in tier order, then station order.
fn for_each_station<F>(
    model: &NetworkModel<f64>,
    config: &SimulationConfig,
    radius: f64,
    trial: u64,
    mut emit: F,
) where
    F: FnMut(usize, Point, f64),
{
    let r2 = radius * radius;
    for (tier, params) in model.tiers.iter().enumerate() {
        let mut rng = substream(config.seed, trial, tier);
        if !(params.density > 0.0) {
            continue;
        }
        if tier == 0 && config.tier1_placement == Placement::HexGrid {
            let a = hex_spacing(params.density);
            let (s1, s2): (f64, f64) = (rng.random(), rng.random());
            let theta = TAU * rng.random::<f64>();
            let (sin, cos) = theta.sin_cos();
            let row = 0.5 * 3f64.sqrt() * a;
            let rows = (radius / row).ceil() as i64 + 1;
            let span = radius / a;
            for j in -rows..=rows {
                let v = j as f64 + s2;
                let first = (-span - 0.5 * v - s1).floor() as i64;
                let last = (span - 0.5 * v - s1).ceil() as i64;
                for i in first..=last {
                    let u = i as f64 + s1;
                    let x0 = a * (u + 0.5 * v);
                    let y0 = row * v;
                    if x0 * x0 + y0 * y0 > r2 {
                        continue;
                    }
                    let p = [cos * x0 - sin * y0, sin * x0 + cos * y0];
                    let h: f64 = Exp1.sample(&mut rng);
                    emit(tier, Point::Cartesian(p), h);
                }
            }
        } else {
            let mean = params.density * PI * r2;
            let n = match Poisson::new(mean) {
                Ok(d) => d.sample(&mut rng) as u64,
                Err(_) => 0,
            };
            for _ in 0..n {
                // 1 - U lies in (0, 1]: no station exactly at the origin.
                let u = 1.0 - rng.random::<f64>();
                let angle = TAU * rng.random::<f64>();
                let h: f64 = Exp1.sample(&mut rng);
                emit(
                    tier,
                    Point::Polar {
                        radius_sq: r2 * u,
                        angle,
                    },
                    h,
                );
            }
        }
    }
}

/// Samples trial `trial_index` of the run described by `config`.
///
/// Does not validate the model: tiers with zero density simply stay empty.
/// Threshold overrides in `config` do not affect sampling.
pub fn sample_deployment(
    model: &NetworkModel<f64>,
    config: &SimulationConfig,
    trial_index: u64,
) -> Deployment {
    let radius = config.window_radius_for(model);
    let mut stations = Vec::new();
    for_each_station(model, config, radius, trial_index, |tier, point, fading| {
        stations.push(Station {
            position: point.cartesian(),
            tier,
            fading,
        })
    });
    Deployment {
        stations,
        window_radius: radius,
    }
}

/// `d^-alpha` from `d^2`, with fast paths for integer and half-integer
/// `alpha / 2`.
#[derive(Debug, Clone, Copy)]
struct PathLoss {
    half_alpha: f64,
    kind: PathLossKind,
}

#[derive(Debug, Clone, Copy)]
enum PathLossKind {
    Integer(i32),
    HalfInteger(i32),
    General,
}

impl PathLoss {
    fn new(alpha: f64) -> Self {
        let half_alpha = 0.5 * alpha;
        let twice = alpha.round();
        let kind = if half_alpha.fract() == 0.0 && half_alpha <= 16.0 {
            PathLossKind::Integer(half_alpha as i32)
        } else if twice == alpha && alpha <= 33.0 {
            PathLossKind::HalfInteger((half_alpha - 0.5) as i32)
        } else {
            PathLossKind::General
        };
        Self { half_alpha, kind }
    }

    #[inline]
    fn gain(&self, distance_sq: f64) -> f64 {
        match self.kind {
            PathLossKind::Integer(n) => distance_sq.powi(n).recip(),
            PathLossKind::HalfInteger(n) => (distance_sq.powi(n) * distance_sq.sqrt()).recip(),
            PathLossKind::General => distance_sq.powf(-self.half_alpha),
        }
    }
}

/// Received power and tier of each station.
#[derive(Debug, Clone, Copy)]
struct Link {
    power: f64,
    tier: usize,
}

/// SINR bookkeeping shared by the deployment API and the simulator hot path.
fn outcome_from_links(
    links: &[Link],
    noise: f64,
    thresholds: &[f64],
    allowed: impl Fn(usize) -> bool,
) -> TrialOutcome {
    if links.is_empty() {
        return TrialOutcome::EMPTY;
    }
    let mut total = 0.0;
    let mut strongest = 0;
    for (k, l) in links.iter().enumerate() {
        total += l.power;
        if l.power > links[strongest].power {
            strongest = k;
        }
    }
    // Interference at the strongest station, summed without it to avoid
    // cancellation when it dominates.
    let strongest_interference: f64 = links
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != strongest)
        .map(|(_, l)| l.power)
        .sum();

    let mut best_allowed: Option<(f64, usize)> = None;
    let mut best_served: Option<(f64, usize)> = None;
    let mut above = 0u32;
    for (k, l) in links.iter().enumerate() {
        if !allowed(l.tier) {
            continue;
        }
        let interference = if k == strongest {
            strongest_interference
        } else {
            total - l.power
        };
        let sinr = l.power / (interference + noise);
        if best_allowed.is_none_or(|(s, _)| sinr > s) {
            best_allowed = Some((sinr, l.tier));
        }
        if sinr > thresholds[l.tier] {
            above += 1;
            if best_served.is_none_or(|(s, _)| sinr > s) {
                best_served = Some((sinr, l.tier));
            }
        }
    }
    TrialOutcome {
        covered: best_served.is_some(),
        serving_tier: best_served.map(|(_, t)| t),
        max_sinr: best_allowed.map_or(0.0, |(s, _)| s),
        num_above_threshold: above,
    }
}

fn links_of(deployment: &Deployment, model: &NetworkModel<f64>) -> Vec<Link> {
    let loss = PathLoss::new(model.alpha);
    deployment
        .stations
        .iter()
        .map(|s| Link {
            power: model.tiers[s.tier].power * s.fading * loss.gain(s.distance_sq()),
            tier: s.tier,
        })
        .collect()
}

/// SINR at the origin when served by station `station`; every other station
/// in the deployment interferes regardless of access policy.
pub fn sinr_at_origin(
    deployment: &Deployment,
    model: &NetworkModel<f64>,
    station: usize,
) -> Result<f64> {
    let target = deployment
        .stations
        .get(station)
        .ok_or(Error::StationOutOfRange {
            index: station,
            len: deployment.len(),
        })?;
    if target.distance_sq() == 0.0 {
        return Err(Error::StationAtOrigin(station));
    }
    let links = links_of(deployment, model);
    let interference: f64 = links
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != station)
        .map(|(_, l)| l.power)
        .sum();
    Ok(links[station].power / (interference + model.noise))
}

/// Number of stations whose SINR exceeds `level`, ignoring tiers and access.
pub fn count_sinr_above(deployment: &Deployment, model: &NetworkModel<f64>, level: f64) -> usize {
    let links = links_of(deployment, model);
    let total: f64 = links.iter().map(|l| l.power).sum();
    links
        .iter()
        .filter(|l| l.power / (total - l.power + model.noise) > level)
        .count()
}

/// Coverage and association for one deployment under max-SINR association.
///
/// Covered iff some allowed station clears its tier threshold; the serving
/// station is the strongest of those.
pub fn evaluate_trial(
    deployment: &Deployment,
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
) -> TrialOutcome {
    let links = links_of(deployment, model);
    let thresholds: Vec<f64> = model.tiers.iter().map(|t| t.threshold).collect();
    outcome_from_links(&links, model.noise, &thresholds, |t| policy.allows(t))
}

/// Everything needed to run trials without building deployments.
struct Runner<'a> {
    model: &'a NetworkModel<f64>,
    config: &'a SimulationConfig,
    radius: f64,
    loss: PathLoss,
    powers: Vec<f64>,
    /// Noise plus, when enabled, the far-field interference.
    floor: f64,
    thresholds: Vec<f64>,
    mask: Vec<bool>,
}

impl<'a> Runner<'a> {
    fn new(
        model: &'a NetworkModel<f64>,
        policy: &AccessPolicy,
        config: &'a SimulationConfig,
    ) -> Result<Self> {
        model.validate()?;
        config.validate()?;
        let mask = policy.mask(model.num_tiers())?;
        let thresholds = config
            .effective_model(model)?
            .tiers
            .iter()
            .map(|t| t.threshold)
            .collect();
        let radius = config.window_radius_for(model);
        let floor = if config.far_field_compensation {
            model.noise + far_field_interference(model, radius)
        } else {
            model.noise
        };
        Ok(Self {
            model,
            config,
            radius,
            floor,
            loss: PathLoss::new(model.alpha),
            powers: model.tiers.iter().map(|t| t.power).collect(),
            thresholds,
            mask,
        })
    }

    fn run_trial(&self, trial: u64, links: &mut Vec<Link>) -> TrialOutcome {
        links.clear();
        for_each_station(
            self.model,
            self.config,
            self.radius,
            trial,
            |tier, point, h| {
                links.push(Link {
                    power: self.powers[tier] * h * self.loss.gain(point.radius_sq()),
                    tier,
                })
            },
        );
        outcome_from_links(links, self.floor, &self.thresholds, |t| self.mask[t])
    }

    fn outcomes(&self) -> Vec<TrialOutcome> {
        let capacity = (DEFAULT_EXPECTED_STATIONS * 1.2) as usize;
        (0..self.config.trials)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(capacity),
                |links, trial| self.run_trial(trial, links),
            )
            .collect()
    }
}

/// Outcomes of every trial, in trial order.
pub fn trial_outcomes(
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
    config: &SimulationConfig,
) -> Result<Vec<TrialOutcome>> {
    Ok(Runner::new(model, policy, config)?.outcomes())
}

/// Aggregated statistics of a run, reduced in trial order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSummary {
    pub trials: u64,
    pub seed: u64,
    pub covered: u64,
    /// Covered trials served by each tier.
    pub served_by: Vec<u64>,
    rate_sum: f64,
    rate_sum_sq: f64,
}

impl SimulationSummary {
    pub fn from_outcomes(outcomes: &[TrialOutcome], num_tiers: usize, seed: u64) -> Self {
        let mut s = Self {
            trials: outcomes.len() as u64,
            seed,
            covered: 0,
            served_by: vec![0; num_tiers],
            rate_sum: 0.0,
            rate_sum_sq: 0.0,
        };
        for o in outcomes {
            if let (true, Some(t)) = (o.covered, o.serving_tier) {
                s.covered += 1;
                s.served_by[t] += 1;
                let r = o.max_sinr.ln_1p();
                s.rate_sum += r;
                s.rate_sum_sq += r * r;
            }
        }
        s
    }

    pub fn coverage(&self) -> EstimateWithCI {
        EstimateWithCI::proportion(self.covered, self.trials, self.seed)
    }

    /// Fraction of covered trials served by each tier.
    pub fn load(&self) -> Result<Vec<EstimateWithCI>> {
        if self.covered == 0 {
            return Err(Error::NoCoveredTrials);
        }
        Ok(self
            .served_by
            .iter()
            .map(|&n| EstimateWithCI::proportion(n, self.covered, self.seed))
            .collect())
    }

    /// Mean of `ln(1 + max SINR)` over covered trials, in nats.
    pub fn rate(&self) -> Result<EstimateWithCI> {
        if self.covered == 0 {
            return Err(Error::NoCoveredTrials);
        }
        let n = self.covered as f64;
        let mean = self.rate_sum / n;
        let stderr = if self.covered > 1 {
            let var = ((self.rate_sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Ok(EstimateWithCI {
            value: mean,
            stderr,
            trials: self.covered,
            seed: self.seed,
        })
    }
}

/// Runs all trials and aggregates coverage, load and rate in one pass.
pub fn simulate(
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
    config: &SimulationConfig,
) -> Result<SimulationSummary> {
    let outcomes = trial_outcomes(model, policy, config)?;
    Ok(SimulationSummary::from_outcomes(
        &outcomes,
        model.num_tiers(),
        config.seed,
    ))
}

pub fn estimate_coverage(
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
    config: &SimulationConfig,
) -> Result<EstimateWithCI> {
    Ok(simulate(model, policy, config)?.coverage())
}

pub fn estimate_load(
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
    config: &SimulationConfig,
) -> Result<Vec<EstimateWithCI>> {
    simulate(model, policy, config)?.load()
}

pub fn estimate_rate(
    model: &NetworkModel<f64>,
    policy: &AccessPolicy,
    config: &SimulationConfig,
) -> Result<EstimateWithCI> {
    simulate(model, policy, config)?.rate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TierParams;
    use approx::assert_relative_eq;

    fn one_tier(threshold: f64) -> NetworkModel<f64> {
        NetworkModel::new(vec![TierParams::new(1.0, 1e-5, threshold)], 4.0, 0.0).unwrap()
    }

    fn station(x: f64, tier: usize, fading: f64) -> Station {
        Station {
            position: [x, 0.0],
            tier,
            fading,
        }
    }

    #[test]
    fn path_loss_fast_paths_agree() {
        for alpha in [2.5, 3.0, 3.7, 4.0, 5.0, 6.0] {
            let loss = PathLoss::new(alpha);
            for d2 in [0.3f64, 1.0, 17.0, 4.2e6] {
                let expected = d2.powf(-alpha / 2.0);
                assert_relative_eq!(loss.gain(d2), expected, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn zero_density_gives_empty_deployment() {
        let mut m = one_tier(2.0);
        m.tiers[0].density = 0.0;
        let cfg = SimulationConfig::new(1, 3).with_window_radius(100.0);
        assert!(sample_deployment(&m, &cfg, 0).is_empty());
    }

    #[test]
    fn stations_stay_in_window() {
        let m = NetworkModel::new(
            vec![
                TierParams::new(10.0, 1e-5, 2.0),
                TierParams::new(1.0, 4e-5, 2.0),
            ],
            3.0,
            0.0,
        )
        .unwrap();
        for placement in [Placement::Ppp, Placement::HexGrid] {
            let cfg = SimulationConfig::new(1, 11).with_placement(placement);
            let d = sample_deployment(&m, &cfg, 5);
            let r = d.window_radius;
            assert!(d
                .stations
                .iter()
                .all(|s| s.distance_sq() <= r * r * (1.0 + 1e-12)));
            assert!(d.stations.iter().all(|s| s.fading > 0.0));
        }
    }

    #[test]
    fn deployment_is_reproducible_per_trial() {
        let m = one_tier(2.0);
        let cfg = SimulationConfig::new(1, 42);
        assert_eq!(
            sample_deployment(&m, &cfg, 9),
            sample_deployment(&m, &cfg, 9)
        );
        assert_ne!(
            sample_deployment(&m, &cfg, 9),
            sample_deployment(&m, &cfg, 10)
        );
        let other_seed = SimulationConfig::new(1, 43);
        assert_ne!(
            sample_deployment(&m, &cfg, 9),
            sample_deployment(&m, &other_seed, 9)
        );
    }

    #[test]
    fn sinr_examples() {
        let m = NetworkModel::new(vec![TierParams::new(1.0, 1e-5, 2.0)], 4.0, 0.5).unwrap();
        let d = Deployment {
            stations: vec![station(2.0, 0, 1.0)],
            window_radius: 10.0,
        };
        assert_relative_eq!(sinr_at_origin(&d, &m, 0).unwrap(), (1.0 / 16.0) / 0.5);

        let quiet = m.with_noise(0.0);
        let d = Deployment {
            stations: vec![station(1.0, 0, 1.0), station(-1.0, 0, 1.0)],
            window_radius: 10.0,
        };
        assert_eq!(sinr_at_origin(&d, &quiet, 0).unwrap(), 1.0);
        assert_eq!(sinr_at_origin(&d, &quiet, 1).unwrap(), 1.0);

        // Received powers 5, 3, 1 (distance 1, fading as power).
        let d = Deployment {
            stations: vec![
                station(1.0, 0, 5.0),
                station(-1.0, 0, 3.0),
                station(0.0, 0, 1.0),
            ],
            window_radius: 10.0,
        };
        let mut d = d;
        d.stations[2].position = [0.0, 1.0];
        let sirs: Vec<f64> = (0..3)
            .map(|k| sinr_at_origin(&d, &quiet, k).unwrap())
            .collect();
        assert_relative_eq!(sirs[0], 1.25);
        assert_relative_eq!(sirs[1], 0.5);
        assert_relative_eq!(sirs[2], 0.125);
        assert_eq!(count_sinr_above(&d, &quiet, 1.0), 1);

        let bad = Deployment {
            stations: vec![Station {
                position: [0.0, 0.0],
                tier: 0,
                fading: 1.0,
            }],
            window_radius: 1.0,
        };
        assert_eq!(
            sinr_at_origin(&bad, &quiet, 0),
            Err(Error::StationAtOrigin(0))
        );
        assert!(matches!(
            sinr_at_origin(&bad, &quiet, 3),
            Err(Error::StationOutOfRange { .. })
        ));
    }

    #[test]
    fn empty_deployment_not_covered() {
        let m = one_tier(2.0);
        let o = evaluate_trial(&Deployment::default(), &m, &AccessPolicy::Open);
        assert!(!o.covered);
        assert_eq!(o.max_sinr, 0.0);
        assert_eq!(o.serving_tier, None);
    }

    #[test]
    fn disallowed_winner_is_outage() {
        let m = NetworkModel::new(
            vec![
                TierParams::new(1.0, 1e-5, 2.0),
                TierParams::new(1.0, 1e-5, 2.0),
            ],
            4.0,
            0.0,
        )
        .unwrap();
        let d = Deployment {
            stations: vec![station(1.0, 1, 10.0), station(-1.0, 0, 1.0)],
            window_radius: 10.0,
        };
        let open = evaluate_trial(&d, &m, &AccessPolicy::Open);
        assert!(open.covered);
        assert_eq!(open.serving_tier, Some(1));
        assert_eq!(open.num_above_threshold, 1);
        let closed = evaluate_trial(&d, &m, &AccessPolicy::closed([0]));
        assert!(!closed.covered);
        assert_eq!(closed.serving_tier, None);
        assert_relative_eq!(closed.max_sinr, 0.1);
    }

    #[test]
    fn sub_unity_thresholds_can_admit_several() {
        let m = NetworkModel::new(vec![TierParams::new(1.0, 1e-5, 0.4)], 4.0, 0.0).unwrap();
        let d = Deployment {
            stations: vec![station(1.0, 0, 1.0), station(-1.0, 0, 1.0)],
            window_radius: 10.0,
        };
        let o = evaluate_trial(&d, &m, &AccessPolicy::Open);
        assert!(o.covered);
        assert_eq!(o.num_above_threshold, 2);
    }

    #[test]
    fn fast_path_matches_deployment_path() {
        let m = NetworkModel::new(
            vec![
                TierParams::new(100.0, 1e-5, 1.5),
                TierParams::new(1.0, 2e-5, 3.0),
            ],
            3.0,
            1e-12,
        )
        .unwrap();
        for placement in [Placement::Ppp, Placement::HexGrid] {
            let cfg = SimulationConfig::new(40, 5)
                .with_placement(placement)
                .with_window_radius(800.0);
            let policy = AccessPolicy::Open;
            let fast = trial_outcomes(&m, &policy, &cfg).unwrap();
            let floor = m.with_noise(m.noise + far_field_interference(&m, 800.0));
            for (i, o) in fast.iter().enumerate() {
                let d = sample_deployment(&m, &cfg, i as u64);
                let slow = evaluate_trial(&d, &floor, &policy);
                assert_eq!(o.covered, slow.covered);
                assert_eq!(o.serving_tier, slow.serving_tier);
                assert_relative_eq!(o.max_sinr, slow.max_sinr, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn hex_grid_count_matches_lattice_density() {
        let density = 1e-5;
        let m = NetworkModel::new(vec![TierParams::new(1.0, density, 2.0)], 4.0, 0.0).unwrap();
        let cfg = SimulationConfig::new(1, 0)
            .with_placement(Placement::HexGrid)
            .with_window_radius(5_000.0);
        let a = hex_spacing(density);
        assert_relative_eq!(
            0.5 * 3f64.sqrt() * a * a,
            1.0 / density,
            max_relative = 1e-14
        );
        let expected = density * PI * 5_000.0f64.powi(2);
        // Boundary cells: the perimeter crosses about 2 pi R / a cells.
        let slack = 2.0 * PI * 5_000.0 / a;
        for trial in 0..20 {
            let n = sample_deployment(&m, &cfg, trial).len() as f64;
            assert!((n - expected).abs() <= slack, "{n} vs {expected}");
        }
    }

    #[test]
    fn ppp_count_mean() {
        let m = NetworkModel::new(
            vec![
                TierParams::new(1.0, 1e-5, 2.0),
                TierParams::new(1.0, 3e-5, 2.0),
            ],
            4.0,
            0.0,
        )
        .unwrap();
        let cfg = SimulationConfig::new(1, 8).with_window_radius(300.0);
        let trials = 10_000;
        let mut sums = [0.0f64; 2];
        for t in 0..trials {
            let counts = sample_deployment(&m, &cfg, t).tier_counts(2);
            sums[0] += counts[0] as f64;
            sums[1] += counts[1] as f64;
        }
        for (k, tier) in m.tiers.iter().enumerate() {
            let mean = tier.density * PI * 300.0f64.powi(2);
            let stderr = (mean / trials as f64).sqrt();
            let got = sums[k] / trials as f64;
            assert!(
                (got - mean).abs() < 3.0 * stderr,
                "tier {k}: {got} vs {mean}"
            );
        }
    }

    #[test]
    fn no_covered_trials_is_signalled() {
        // Threshold so high nothing is ever covered.
        let m = one_tier(1e12);
        let cfg = SimulationConfig::new(20, 0).with_window_radius(500.0);
        let s = simulate(&m, &AccessPolicy::Open, &cfg).unwrap();
        assert_eq!(s.coverage().value, 0.0);
        assert_eq!(s.load(), Err(Error::NoCoveredTrials));
        assert_eq!(s.rate(), Err(Error::NoCoveredTrials));
    }

    #[test]
    fn config_validation() {
        let m = one_tier(2.0);
        let bad = SimulationConfig::new(0, 0);
        assert!(simulate(&m, &AccessPolicy::Open, &bad).is_err());
        let bad = SimulationConfig::new(1, 0).with_window_radius(-1.0);
        assert!(simulate(&m, &AccessPolicy::Open, &bad).is_err());
        let mut bad = SimulationConfig::new(1, 0);
        bad.thresholds_override = Some(vec![1.0, 2.0]);
        assert!(simulate(&m, &AccessPolicy::Open, &bad).is_err());
    }

    #[test]
    fn far_field_mean_matches_annulus_sum() {
        // Mean interference from the annulus [R, 4R] by direct integration,
        // compared with the closed form difference.
        let m = NetworkModel::new(
            vec![
                TierParams::new(3.0, 2e-5, 2.0),
                TierParams::new(1.0, 5e-5, 2.0),
            ],
            3.0,
            0.0,
        )
        .unwrap();
        let (r0, r1) = (400.0, 1600.0);
        let steps = 200_000;
        let h = (r1 - r0) / steps as f64;
        let mut sum = 0.0;
        for k in 0..steps {
            let r: f64 = r0 + (k as f64 + 0.5) * h;
            sum += r.powf(-3.0) * TAU * r * h;
        }
        let weight = 3.0 * 2e-5 + 1.0 * 5e-5;
        let annulus = far_field_interference(&m, r0) - far_field_interference(&m, r1);
        assert_relative_eq!(annulus, weight * sum, max_relative = 1e-8);
    }

    #[test]
    fn auto_window_holds_expected_count() {
        let m = one_tier(2.0);
        let r = SimulationConfig::default().window_radius_for(&m);
        assert_relative_eq!(
            m.tiers[0].density * PI * r * r,
            DEFAULT_EXPECTED_STATIONS,
            max_relative = 1e-12
        );
    }
}
