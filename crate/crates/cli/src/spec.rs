//! Experiment spec files.
//!
//! TOML with explicit unit suffixes on every physical quantity:
//!
//! ```toml
//! name = "two-tier"
//! alpha = 3.0
//! noise_watts = 0.0            # or noise_dbw, or a [noise_edge] table
//! access = "open"              # or "closed" with allowed_tiers = [1]
//! outputs = ["coverage", "load"]
//!
//! [[tiers]]
//! power_watts = 100.0          # or power_dbw
//! density_per_km2 = 1.0        # or density_per_m2
//! threshold_db = 1.0           # or threshold (linear)
//!
//! [sweep]
//! parameter = "tier1.threshold_db"
//! values = [-4.0, 0.0, 4.0]
//!
//! [sim]
//! trials = 10000
//! seed = 0
//! tier1_placement = "ppp"      # or "hexgrid"
//!
//! [quadrature]                 # optional
//! rel_tol = 1e-8
//! ```
//!
//! Tiers are numbered from 1. Everything is converted to linear SI units on
//! load; [`Experiment::effective_spec`] writes the resolved linear form back.

use hetnet_core::{
    analytic, db_to_linear, linear_to_db, AccessPolicy, NetworkModel, Placement,
    QuadratureSettings, SimulationConfig, TierParams,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

const M2_PER_KM2: f64 = 1e6;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_watts: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_dbw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_edge: Option<RawNoiseEdge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub access: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed_tiers: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<String>>,
    pub tiers: Vec<RawTier>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<RawSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sim: Option<RawSim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<RawRegions>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<RawQuadrature>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawTier {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_watts: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_dbw: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_per_km2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density_per_m2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNoiseEdge {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    #[serde(default = "default_quantile")]
    pub quantile: f64,
}

fn default_quantile() -> f64 {
    0.9
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSim {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window_radius_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tier1_placement: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds_db: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_field_compensation: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawRegions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    pub extent_m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawQuadrature {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subdivisions: Option<usize>,
}

/// How the receiver noise is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSpec {
    Watts(f64),
    /// Calibrated from the macro (tier 1) cell edge.
    EdgeSnr {
        snr: f64,
        quantile: f64,
    },
}

/// Which model parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepTarget {
    Alpha,
    /// Zero-based tier.
    Threshold(usize),
    AllThresholds,
    Power(usize),
    Density(usize),
    Noise,
    EdgeSnr,
}

/// Unit the sweep values are written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepUnit {
    Linear,
    Decibel,
    PerKm2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    pub target: SweepTarget,
    pub unit: SweepUnit,
    pub values: Vec<f64>,
}

impl Sweep {
    /// Linear SI value of a sweep entry.
    pub fn linear(&self, value: f64) -> f64 {
        match self.unit {
            SweepUnit::Linear => value,
            SweepUnit::Decibel => db_to_linear(value),
            SweepUnit::PerKm2 => value / M2_PER_KM2,
        }
    }

    /// Decibel form of a sweep entry, for quantities that have one.
    pub fn decibel(&self, value: f64) -> Option<f64> {
        match (self.unit, self.target) {
            (SweepUnit::Decibel, _) => Some(value),
            (_, SweepTarget::Alpha | SweepTarget::Density(_)) => None,
            (_, _) => Some(linear_to_db(self.linear(value))),
        }
    }

    /// Path of the swept parameter in its linear SI form, e.g.
    /// `tier1.threshold` for a `tier1.threshold_db` sweep.
    pub fn linear_parameter(&self) -> String {
        match self.target {
            SweepTarget::Alpha => "alpha".to_string(),
            SweepTarget::Threshold(i) => format!("tier{}.threshold", i + 1),
            SweepTarget::AllThresholds => "tiers.threshold".to_string(),
            SweepTarget::Power(i) => format!("tier{}.power_watts", i + 1),
            SweepTarget::Density(i) => format!("tier{}.density_per_m2", i + 1),
            SweepTarget::Noise => "noise_watts".to_string(),
            SweepTarget::EdgeSnr => "noise_edge.snr".to_string(),
        }
    }

    fn to_linear_raw(&self) -> RawSweep {
        RawSweep {
            parameter: self.linear_parameter(),
            values: self.values.iter().map(|&v| self.linear(v)).collect(),
        }
    }
}

/// Quantities an experiment can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    /// Coverage with the configured noise.
    Coverage,
    /// Coverage with noise forced to zero.
    CoverageNoNoise,
    /// Expected number of stations above threshold (ungated analytic sum).
    CoverageBound,
    /// Per-tier load, one table per tier.
    Load,
    /// Conditional rate in nats.
    Rate,
    RateBits,
}

impl Output {
    pub const ALL: [(&'static str, Output); 6] = [
        ("coverage", Output::Coverage),
        ("coverage_nonoise", Output::CoverageNoNoise),
        ("coverage_bound", Output::CoverageBound),
        ("load", Output::Load),
        ("rate", Output::Rate),
        ("rate_bits", Output::RateBits),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL
            .iter()
            .find(|(_, o)| *o == self)
            .map(|(n, _)| *n)
            .expect("listed")
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().find(|(n, _)| *n == s).map(|(_, o)| *o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSettings {
    pub width: usize,
    pub height: usize,
    pub extent: f64,
    pub csv: bool,
}

/// A fully validated experiment in linear SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    /// Model before noise calibration; its `noise` is ignored.
    pub base: NetworkModel,
    pub noise: NoiseSpec,
    pub policy: AccessPolicy,
    pub sweep: Option<Sweep>,
    pub sim: SimulationConfig,
    pub outputs: Vec<Output>,
    pub regions: Option<RegionSettings>,
    pub quadrature: QuadratureSettings,
    raw: RawSpec,
}

fn one_of(
    key_a: &str,
    a: Option<f64>,
    key_b: &str,
    b: Option<f64>,
    to_linear_b: impl Fn(f64) -> f64,
) -> Result<f64, CliError> {
    match (a, b) {
        (Some(x), None) => Ok(x),
        (None, Some(y)) => Ok(to_linear_b(y)),
        (Some(_), Some(_)) => Err(CliError::config(
            key_a,
            format!("give either `{key_a}` or `{key_b}`, not both"),
        )),
        (None, None) => Err(CliError::config(key_a, format!("missing (or `{key_b}`)"))),
    }
}

fn finite(key: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::config(key, "value must be finite"))
    }
}

fn parse_tier_index(s: &str, tiers: usize, key: &str) -> Result<usize, CliError> {
    let n: usize = s
        .parse()
        .map_err(|_| CliError::config(key, format!("bad tier index `{s}`")))?;
    if n == 0 || n > tiers {
        return Err(CliError::config(
            key,
            format!("tier {n} does not exist (tiers are numbered 1..={tiers})"),
        ));
    }
    Ok(n - 1)
}

fn parse_sweep(raw: &RawSweep, tiers: usize) -> Result<Sweep, CliError> {
    let key = "sweep.parameter";
    let p = raw.parameter.as_str();
    let (target, unit) = if p == "alpha" {
        (SweepTarget::Alpha, SweepUnit::Linear)
    } else if p == "noise_watts" {
        (SweepTarget::Noise, SweepUnit::Linear)
    } else if p == "noise_dbw" {
        (SweepTarget::Noise, SweepUnit::Decibel)
    } else if p == "noise_edge.snr" {
        (SweepTarget::EdgeSnr, SweepUnit::Linear)
    } else if p == "noise_edge.snr_db" {
        (SweepTarget::EdgeSnr, SweepUnit::Decibel)
    } else if p == "tiers.threshold" {
        (SweepTarget::AllThresholds, SweepUnit::Linear)
    } else if p == "tiers.threshold_db" {
        (SweepTarget::AllThresholds, SweepUnit::Decibel)
    } else if let Some(rest) = p.strip_prefix("tier") {
        let (idx, field) = rest
            .split_once('.')
            .ok_or_else(|| CliError::config(key, format!("unknown parameter `{p}`")))?;
        let tier = parse_tier_index(idx, tiers, key)?;
        match field {
            "threshold" => (SweepTarget::Threshold(tier), SweepUnit::Linear),
            "threshold_db" => (SweepTarget::Threshold(tier), SweepUnit::Decibel),
            "power_watts" => (SweepTarget::Power(tier), SweepUnit::Linear),
            "power_dbw" => (SweepTarget::Power(tier), SweepUnit::Decibel),
            "density_per_m2" => (SweepTarget::Density(tier), SweepUnit::Linear),
            "density_per_km2" => (SweepTarget::Density(tier), SweepUnit::PerKm2),
            _ => return Err(CliError::config(key, format!("unknown parameter `{p}`"))),
        }
    } else {
        return Err(CliError::config(key, format!("unknown parameter `{p}`")));
    };
    if raw.values.is_empty() {
        return Err(CliError::config("sweep.values", "needs at least one value"));
    }
    for &v in &raw.values {
        finite("sweep.values", v)?;
    }
    Ok(Sweep {
        parameter: raw.parameter.clone(),
        target,
        unit,
        values: raw.values.clone(),
    })
}

impl Experiment {
    pub fn from_toml(text: &str, origin: &std::path::Path) -> Result<Self, CliError> {
        let raw: RawSpec = toml::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawSpec) -> Result<Self, CliError> {
        if raw.tiers.is_empty() {
            return Err(CliError::config("tiers", "at least one tier is required"));
        }
        let alpha = finite("alpha", raw.alpha)?;
        let mut tiers = Vec::with_capacity(raw.tiers.len());
        for (i, t) in raw.tiers.iter().enumerate() {
            let k = |field: &str| format!("tiers[{}].{field}", i + 1);
            let power = one_of(
                &k("power_watts"),
                t.power_watts,
                &k("power_dbw"),
                t.power_dbw,
                db_to_linear,
            )?;
            let density = one_of(
                &k("density_per_m2"),
                t.density_per_m2,
                &k("density_per_km2"),
                t.density_per_km2,
                |x| x / M2_PER_KM2,
            )?;
            let threshold = one_of(
                &k("threshold"),
                t.threshold,
                &k("threshold_db"),
                t.threshold_db,
                db_to_linear,
            )?;
            for (field, v) in [
                ("power_watts", power),
                ("density_per_m2", density),
                ("threshold", threshold),
            ] {
                if v <= 0.0 || !v.is_finite() {
                    return Err(CliError::config(
                        k(field),
                        format!("must be positive, got {v}"),
                    ));
                }
            }
            tiers.push(TierParams::new(power, density, threshold));
        }

        let noise = match (&raw.noise_edge, raw.noise_watts, raw.noise_dbw) {
            (Some(edge), None, None) => {
                let snr = one_of(
                    "noise_edge.snr",
                    edge.snr,
                    "noise_edge.snr_db",
                    edge.snr_db,
                    db_to_linear,
                )?;
                if !(edge.quantile > 0.0 && edge.quantile < 1.0) {
                    return Err(CliError::config(
                        "noise_edge.quantile",
                        "must lie in (0, 1)",
                    ));
                }
                NoiseSpec::EdgeSnr {
                    snr,
                    quantile: edge.quantile,
                }
            }
            (None, None, None) => NoiseSpec::Watts(0.0),
            (None, w, d) => {
                NoiseSpec::Watts(one_of("noise_watts", w, "noise_dbw", d, db_to_linear)?)
            }
            (Some(_), _, _) => {
                return Err(CliError::config(
                    "noise_edge",
                    "cannot be combined with noise_watts / noise_dbw",
                ))
            }
        };

        let base = NetworkModel {
            tiers,
            alpha,
            noise: 0.0,
        };
        if let Err(e) = base.validate() {
            return Err(CliError::config("alpha", e.to_string()));
        }
        if let NoiseSpec::Watts(w) = noise {
            if w < 0.0 || !w.is_finite() {
                return Err(CliError::config("noise_watts", "must be non-negative"));
            }
        }
        let k = base.num_tiers();

        let policy = match (raw.access.as_deref(), &raw.allowed_tiers) {
            (None | Some("open"), None) => AccessPolicy::Open,
            (Some("closed"), Some(list)) => {
                if list.is_empty() {
                    return Err(CliError::config(
                        "allowed_tiers",
                        "closed access needs at least one tier",
                    ));
                }
                let mut set = Vec::new();
                for s in list {
                    set.push(parse_tier_index(&s.to_string(), k, "allowed_tiers")?);
                }
                AccessPolicy::closed(set)
            }
            (Some("closed"), None) => {
                return Err(CliError::config(
                    "allowed_tiers",
                    "required for closed access",
                ))
            }
            (None | Some("open"), Some(_)) => {
                return Err(CliError::config(
                    "allowed_tiers",
                    "only valid with access = \"closed\"",
                ))
            }
            (Some(other), _) => {
                return Err(CliError::config(
                    "access",
                    format!("expected \"open\" or \"closed\", got \"{other}\""),
                ))
            }
        };

        let sweep = raw.sweep.as_ref().map(|s| parse_sweep(s, k)).transpose()?;

        let outputs = match &raw.outputs {
            None => vec![Output::Coverage],
            Some(list) => list
                .iter()
                .map(|s| {
                    Output::parse(s).ok_or_else(|| {
                        let known: Vec<_> = Output::ALL.iter().map(|(n, _)| *n).collect();
                        CliError::config(
                            "outputs",
                            format!("unknown output `{s}` (known: {})", known.join(", ")),
                        )
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
        };

        let raw_sim = raw.sim.clone().unwrap_or_default();
        let mut sim = SimulationConfig::default();
        if let Some(t) = raw_sim.trials {
            sim.trials = t;
        }
        sim.seed = raw_sim.seed.unwrap_or(0);
        sim.window_radius = raw_sim.window_radius_m;
        sim.tier1_placement = match raw_sim.tier1_placement.as_deref() {
            None | Some("ppp") => Placement::Ppp,
            Some("hexgrid") => Placement::HexGrid,
            Some(other) => {
                return Err(CliError::config(
                    "sim.tier1_placement",
                    format!("expected \"ppp\" or \"hexgrid\", got \"{other}\""),
                ))
            }
        };
        sim.thresholds_override = match (raw_sim.thresholds.clone(), raw_sim.thresholds_db.clone())
        {
            (None, None) => None,
            (Some(t), None) => Some(t),
            (None, Some(d)) => Some(d.into_iter().map(db_to_linear).collect()),
            (Some(_), Some(_)) => {
                return Err(CliError::config(
                    "sim.thresholds",
                    "give either thresholds or thresholds_db",
                ))
            }
        };
        if let Some(t) = &sim.thresholds_override {
            if t.len() != k {
                return Err(CliError::config(
                    "sim.thresholds",
                    format!("expected {k} values"),
                ));
            }
        }
        if let Some(f) = raw_sim.far_field_compensation {
            sim.far_field_compensation = f;
        }
        if let Err(e) = sim.validate() {
            return Err(CliError::config("sim", e.to_string()));
        }

        let regions = match &raw.regions {
            None => None,
            Some(r) => {
                let settings = RegionSettings {
                    width: r.width.unwrap_or(512),
                    height: r.height.unwrap_or(512),
                    extent: r.extent_m,
                    csv: r.csv.unwrap_or(false),
                };
                if settings.width == 0 || settings.height == 0 {
                    return Err(CliError::config(
                        "regions.width",
                        "raster dimensions must be at least 1",
                    ));
                }
                if settings.extent <= 0.0 || !settings.extent.is_finite() {
                    return Err(CliError::config("regions.extent_m", "must be positive"));
                }
                Some(settings)
            }
        };

        let quadrature = match &raw.quadrature {
            None => QuadratureSettings::default(),
            Some(q) => {
                let d = QuadratureSettings::default();
                QuadratureSettings::new(
                    q.rel_tol.unwrap_or(d.rel_tol),
                    q.abs_tol.unwrap_or(d.abs_tol),
                    q.max_subdivisions.unwrap_or(d.max_subdivisions),
                )
                .map_err(|e| CliError::config("quadrature", e.to_string()))?
            }
        };

        let exp = Experiment {
            name: raw.name.clone().unwrap_or_else(|| "experiment".into()),
            base,
            noise,
            policy,
            sweep,
            sim,
            outputs,
            regions,
            quadrature,
            raw,
        };
        // Catch sweep values that produce an invalid model up front.
        for point in exp.points() {
            exp.model_at(point).map_err(|e| match e {
                CliError::Model(m) => CliError::config("sweep.values", m.to_string()),
                other => other,
            })?;
        }
        Ok(exp)
    }

    /// Sweep values as written, or a single `None` point without a sweep.
    pub fn points(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            None => vec![None],
            Some(s) => s.values.iter().copied().map(Some).collect(),
        }
    }

    /// Model at a sweep point, with the noise resolved.
    pub fn model_at(&self, point: Option<f64>) -> Result<NetworkModel, CliError> {
        let mut model = self.base.clone();
        let mut noise = self.noise;
        if let (Some(sweep), Some(v)) = (&self.sweep, point) {
            let x = sweep.linear(v);
            match sweep.target {
                SweepTarget::Alpha => model.alpha = x,
                SweepTarget::Threshold(i) => model.tiers[i].threshold = x,
                SweepTarget::AllThresholds => model.tiers.iter_mut().for_each(|t| t.threshold = x),
                SweepTarget::Power(i) => model.tiers[i].power = x,
                SweepTarget::Density(i) => model.tiers[i].density = x,
                SweepTarget::Noise => noise = NoiseSpec::Watts(x),
                SweepTarget::EdgeSnr => match noise {
                    NoiseSpec::EdgeSnr { quantile, .. } => {
                        noise = NoiseSpec::EdgeSnr { snr: x, quantile }
                    }
                    NoiseSpec::Watts(_) => {
                        return Err(CliError::config(
                            "sweep.parameter",
                            "noise_edge.snr sweeps need a [noise_edge] table",
                        ))
                    }
                },
            }
        }
        model.noise = match noise {
            NoiseSpec::Watts(w) => w,
            NoiseSpec::EdgeSnr { snr, quantile } => {
                let macro_tier = model.tiers[0];
                analytic::noise_from_edge_snr(
                    macro_tier.power,
                    macro_tier.density,
                    model.alpha,
                    snr,
                    quantile,
                )?
            }
        };
        model.validate()?;
        Ok(model)
    }

    /// The spec with every value in linear SI units and every default made
    /// explicit. Running it reproduces this experiment's outputs exactly.
    pub fn effective_spec(&self) -> RawSpec {
        let tiers = self
            .base
            .tiers
            .iter()
            .map(|t| RawTier {
                power_watts: Some(t.power),
                density_per_m2: Some(t.density),
                threshold: Some(t.threshold),
                ..RawTier::default()
            })
            .collect();
        let (noise_watts, noise_edge) = match self.noise {
            NoiseSpec::Watts(w) => (Some(w), None),
            NoiseSpec::EdgeSnr { snr, quantile } => (
                None,
                Some(RawNoiseEdge {
                    snr: Some(snr),
                    snr_db: None,
                    quantile,
                }),
            ),
        };
        let (access, allowed_tiers) = match &self.policy {
            AccessPolicy::Open => (Some("open".to_string()), None),
            AccessPolicy::Closed(set) => (
                Some("closed".to_string()),
                Some(set.iter().map(|t| t + 1).collect()),
            ),
        };
        RawSpec {
            name: Some(self.name.clone()),
            description: self.raw.description.clone(),
            alpha: self.base.alpha,
            noise_watts,
            noise_dbw: None,
            noise_edge,
            access,
            allowed_tiers,
            outputs: Some(self.outputs.iter().map(|o| o.name().to_string()).collect()),
            tiers,
            sweep: self.sweep.as_ref().map(Sweep::to_linear_raw),
            sim: Some(RawSim {
                trials: Some(self.sim.trials),
                seed: Some(self.sim.seed),
                window_radius_m: self.sim.window_radius,
                tier1_placement: Some(
                    match self.sim.tier1_placement {
                        Placement::Ppp => "ppp",
                        Placement::HexGrid => "hexgrid",
                    }
                    .to_string(),
                ),
                thresholds: self.sim.thresholds_override.clone(),
                thresholds_db: None,
                far_field_compensation: Some(self.sim.far_field_compensation),
            }),
            regions: self.regions.map(|r| RawRegions {
                width: Some(r.width),
                height: Some(r.height),
                extent_m: r.extent,
                csv: Some(r.csv),
            }),
            quadrature: Some(RawQuadrature {
                rel_tol: Some(self.quadrature.rel_tol),
                abs_tol: Some(self.quadrature.abs_tol),
                max_subdivisions: Some(self.quadrature.max_subdivisions),
            }),
        }
    }

    pub fn effective_toml(&self) -> String {
        toml::to_string(&self.effective_spec()).expect("spec serializes")
    }
}
