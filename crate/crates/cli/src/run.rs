//! Sweeps, tables and region maps.
//!
//! Every table has the columns
//! `parameter,value_db,value_linear,analytic,simulated,stderr,trials,seed`,
//! one row per sweep point; `parameter` is the linear form of the swept path. Cells that do not apply (an analytic value outside
//! its domain, or the column of the mode not run) are left empty. Sweep values
//! are rounded to 10 significant digits so a dB spec and its linear twin give
//! the same text; results are written with shortest round-trip precision.

use std::fmt::Write as _;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use hetnet_core::montecarlo::{self, SimulationSummary};
use hetnet_core::{analytic, regions, Error, EstimateWithCI, NetworkModel};

use crate::error::CliError;
use crate::spec::{Experiment, Output};

pub const CSV_HEADER: &str =
    "parameter,value_db,value_linear,analytic,simulated,stderr,trials,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analyze,
    Simulate,
    Compare,
}

impl Mode {
    fn analytic(self) -> bool {
        self != Mode::Simulate
    }

    fn simulated(self) -> bool {
        self != Mode::Analyze
    }
}

/// One named table, e.g. `coverage` or `load_tier2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: Option<f64>,
    pub analytic: Option<f64>,
    pub simulated: Option<EstimateWithCI>,
}

fn sig10(x: f64) -> String {
    let rounded: f64 = format!("{x:.9e}").parse().expect("float formats parse");
    format!("{rounded}")
}

fn cell(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

impl Table {
    pub fn to_csv(&self, exp: &Experiment) -> String {
        let mut out = String::new();
        writeln!(out, "{CSV_HEADER}").unwrap();
        let parameter = exp
            .sweep
            .as_ref()
            .map_or_else(|| "none".to_string(), |s| s.linear_parameter());
        for row in &self.rows {
            let (db, lin) = match (&exp.sweep, row.point) {
                (Some(s), Some(v)) => (
                    s.decibel(v).map(sig10).unwrap_or_default(),
                    sig10(s.linear(v)),
                ),
                _ => (String::new(), String::new()),
            };
            let (sim, stderr) = match &row.simulated {
                Some(e) => (format!("{}", e.value), format!("{}", e.stderr)),
                None => (String::new(), String::new()),
            };
            let trials = if row.simulated.is_some() {
                exp.sim.trials.to_string()
            } else {
                String::new()
            };
            writeln!(
                out,
                "{parameter},{db},{lin},{},{sim},{stderr},{trials},{}",
                cell(row.analytic),
                exp.sim.seed
            )
            .unwrap();
        }
        out
    }
}

/// Domain errors that mean "no analytic value here" rather than failure.
fn not_applicable<T>(r: hetnet_core::Result<T>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ThresholdTooLow { .. } | Error::NoiseNotSupported(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn scale(e: EstimateWithCI, k: f64) -> EstimateWithCI {
    EstimateWithCI {
        value: e.value * k,
        stderr: e.stderr * k,
        ..e
    }
}

/// Lazily simulated summaries for one sweep point.
struct PointSims<'a> {
    exp: &'a Experiment,
    model: &'a NetworkModel,
    with_noise: Option<SimulationSummary>,
    without_noise: Option<SimulationSummary>,
}

impl PointSims<'_> {
    fn get(&mut self, noise: bool) -> Result<&SimulationSummary, CliError> {
        let noise = noise && self.model.noise > 0.0;
        let slot = if noise {
            &mut self.with_noise
        } else {
            &mut self.without_noise
        };
        if slot.is_none() {
            let model = if noise {
                self.model.clone()
            } else {
                self.model.with_noise(0.0)
            };
            *slot = Some(montecarlo::simulate(
                &model,
                &self.exp.policy,
                &self.exp.sim,
            )?);
        }
        Ok(slot.as_ref().expect("just filled"))
    }
}

/// Evaluates every requested output at every sweep point.
pub fn tables(exp: &Experiment, mode: Mode) -> Result<Vec<Table>, CliError> {
    let quad = exp.quadrature;
    let k = exp.base.num_tiers();
    let mut tables: Vec<Table> = Vec::new();
    let mut push = |name: String, row: Row| match tables.iter_mut().find(|t| t.name == name) {
        Some(t) => t.rows.push(row),
        None => tables.push(Table {
            name,
            rows: vec![row],
        }),
    };

    for point in exp.points() {
        let model = exp.model_at(point)?;
        let mut sims = PointSims {
            exp,
            model: &model,
            with_noise: None,
            without_noise: None,
        };
        for &output in &exp.outputs {
            match output {
                Output::Coverage | Output::CoverageNoNoise | Output::CoverageBound => {
                    let noise = output != Output::CoverageNoNoise;
                    let analytic = if !mode.analytic() {
                        None
                    } else {
                        let m = if noise {
                            model.clone()
                        } else {
                            model.with_noise(0.0)
                        };
                        match output {
                            Output::CoverageBound => {
                                Some(analytic::coverage_union_bound(&m, &exp.policy, &quad)?)
                            }
                            _ => not_applicable(analytic::coverage_closed(&m, &exp.policy, &quad))?,
                        }
                    };
                    let simulated = if mode.simulated() {
                        Some(sims.get(noise)?.coverage())
                    } else {
                        None
                    };
                    push(
                        output.name().into(),
                        Row {
                            point,
                            analytic,
                            simulated,
                        },
                    );
                }
                Output::Load => {
                    let analytic = if mode.analytic() {
                        not_applicable(analytic::load_closed(&model, &exp.policy, &quad))?
                    } else {
                        None
                    };
                    let simulated = if mode.simulated() {
                        Some(sims.get(true)?.load()?)
                    } else {
                        None
                    };
                    for j in 0..k {
                        push(
                            format!("load_tier{}", j + 1),
                            Row {
                                point,
                                analytic: analytic.as_ref().map(|l| l.fractions[j]),
                                simulated: simulated.as_ref().map(|s| s[j]),
                            },
                        );
                    }
                }
                Output::Rate | Output::RateBits => {
                    let unit = if output == Output::RateBits {
                        std::f64::consts::LN_2.recip()
                    } else {
                        1.0
                    };
                    let analytic = if mode.analytic() {
                        not_applicable(analytic::rate_closed(&model, &exp.policy, &quad))?
                    } else {
                        None
                    };
                    let simulated = if mode.simulated() {
                        Some(scale(sims.get(true)?.rate()?, unit))
                    } else {
                        None
                    };
                    push(
                        output.name().into(),
                        Row {
                            point,
                            analytic: analytic.map(|a| a * unit),
                            simulated,
                        },
                    );
                }
            }
        }
    }
    Ok(tables)
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn prepare_dir(out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out).map_err(|e| CliError::io(out, e))
}

/// Writes `effective.toml` plus one CSV per table; returns the paths written.
pub fn run_tables(exp: &Experiment, mode: Mode, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let tables = tables(exp, mode)?;
    prepare_dir(out)?;
    let mut written = Vec::new();
    let effective = out.join("effective.toml");
    write_file(&effective, exp.effective_toml())?;
    written.push(effective);
    for t in &tables {
        let path = out.join(format!("{}.csv", t.name));
        write_file(&path, t.to_csv(exp))?;
        written.push(path);
    }
    Ok(written)
}

/// Samples one deployment from the spec's seed and writes its average-power
/// regions as `<name>.ppm` (and `<name>.csv` when requested).
pub fn run_regions(exp: &Experiment, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let settings = exp
        .regions
        .ok_or_else(|| CliError::config("regions", "a [regions] table is required"))?;
    let model = exp.model_at(exp.points()[0])?;
    let mut config = exp.sim.clone();
    if config.window_radius.is_none() {
        // Covers the corners of the square with margin.
        config.window_radius = Some(0.75 * settings.extent);
    }
    let deployment = montecarlo::sample_deployment(&model, &config, 0);
    let raster = regions::rasterize(
        &deployment,
        &model,
        settings.width,
        settings.height,
        settings.extent,
    )?;

    prepare_dir(out)?;
    let mut written = Vec::new();
    let effective = out.join("effective.toml");
    write_file(&effective, exp.effective_toml())?;
    written.push(effective);

    let ppm = out.join(format!("{}.ppm", exp.name));
    let file = fs::File::create(&ppm).map_err(|e| CliError::io(&ppm, e))?;
    raster
        .write_ppm(BufWriter::new(file))
        .map_err(|e| CliError::io(&ppm, e))?;
    written.push(ppm);
    if settings.csv {
        let csv = out.join(format!("{}.csv", exp.name));
        let file = fs::File::create(&csv).map_err(|e| CliError::io(&csv, e))?;
        raster
            .write_csv(BufWriter::new(file))
            .map_err(|e| CliError::io(&csv, e))?;
        written.push(csv);
    }
    Ok(written)
}
