//! End-to-end acceptance checks: analytic identities, Monte Carlo agreement,
//! the figure-level claims, and CLI determinism. Prints one PASS/FAIL line
//! per criterion and exits non-zero if any fails.

use std::cell::OnceCell;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hetnet_core::analytic::{self, c_alpha};
use hetnet_core::montecarlo::{self, count_sinr_above, sample_deployment, trial_outcomes};
use hetnet_core::{
    db_to_linear, AccessPolicy, EstimateWithCI, NetworkModel, Placement, QuadratureSettings,
    SimulationConfig, TierParams,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn model(tiers: &[(f64, f64, f64)], alpha: f64) -> NetworkModel {
    NetworkModel::new(
        tiers
            .iter()
            .map(|&(p, l, b)| TierParams::new(p, l, b))
            .collect(),
        alpha,
        0.0,
    )
    .unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `|sim - target| <= k stderr`, with a description either way.
fn within(label: &str, e: &EstimateWithCI, target: f64, k: f64) -> Result<String, String> {
    let z = (e.value - target) / e.stderr;
    let msg = format!("{label}: sim {:.5} vs {target:.5} (z = {z:+.2})", e.value);
    if e.within(target, k) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn all(parts: Vec<Check>) -> Check {
    let failed: Vec<_> = parts
        .iter()
        .filter_map(|p| p.as_ref().err().cloned())
        .collect();
    if failed.is_empty() {
        Ok(parts
            .into_iter()
            .map(Result::unwrap)
            .collect::<Vec<_>>()
            .join("; "))
    } else {
        Err(failed.join("; "))
    }
}

fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn random_tiers(rng: &mut StdRng, k: usize, threshold: Option<f64>) -> Vec<(f64, f64, f64)> {
    (0..k)
        .map(|_| {
            let beta = threshold.unwrap_or_else(|| {
                // (1, 100]
                100.0 - rng.random_range(0.0..99.0)
            });
            (
                log_uniform(rng, 0.1, 1e3),
                log_uniform(rng, 1e-7, 1e-4),
                beta,
            )
        })
        .collect()
}

fn closed_form_vs_quadrature() -> Check {
    let mut rng = StdRng::seed_from_u64(1);
    let quad = QuadratureSettings::default();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let k = rng.random_range(1..=3);
        let alpha = rng.random_range(2.5..=5.0);
        let m = model(&random_tiers(&mut rng, k, None), alpha);
        let integral = analytic::coverage_open(&m, &quad).map_err(|e| e.to_string())?;
        let closed = analytic::coverage_open_nonoise(&m).map_err(|e| e.to_string())?;
        worst = worst.max(rel(integral, closed));
    }
    let msg = format!("50 models, worst relative gap {worst:.2e} (tol 1e-6)");
    if worst <= 1e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn single_tier_monte_carlo() -> Check {
    let c4 = c_alpha(4.0).unwrap();
    let parts = [
        (1.0 + 1e-9, "0 dB+"),
        (db_to_linear(3.0), "3 dB"),
        (10.0, "10 dB"),
    ]
    .iter()
    .enumerate()
    .map(|(i, &(beta, label))| {
        let m = model(&[(1.0, 1e-5, beta)], 4.0);
        let target = PI / (c4 * beta.sqrt());
        let est = montecarlo::estimate_coverage(
            &m,
            &AccessPolicy::Open,
            &SimulationConfig::new(100_000, 20 + i as u64),
        )
        .map_err(|e| e.to_string())?;
        within(label, &est, target, 4.0)
    })
    .collect();
    all(parts)
}

fn tier_invariance() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let beta = db_to_linear(5.0);
    let mut analytic_values = Vec::new();
    let mut sims = Vec::new();
    for k in 1..=3 {
        let m = model(&random_tiers(&mut rng, k, Some(beta)), 4.0);
        analytic_values.push(analytic::coverage_open_nonoise(&m).unwrap());
        sims.push(
            montecarlo::estimate_coverage(
                &m,
                &AccessPolicy::Open,
                &SimulationConfig::new(50_000, 30 + k as u64),
            )
            .map_err(|e| e.to_string())?,
        );
    }
    let spread = analytic_values
        .iter()
        .map(|&a| rel(a, analytic_values[0]))
        .fold(0.0, f64::max);
    let mut ok = spread <= 1e-12;
    let mut worst_z = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            let z = (sims[i].value - sims[j].value).abs() / sims[i].combined_stderr(&sims[j]);
            worst_z = worst_z.max(z);
            ok &= z <= 4.0;
        }
    }
    let msg = format!(
        "analytic {:.6} (spread {spread:.1e}), sims {:.4}/{:.4}/{:.4}, worst pair z = {worst_z:.2}",
        analytic_values[0], sims[0].value, sims[1].value, sims[2].value
    );
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn closed_access_factor() -> Check {
    let beta = 2.0;
    let densities = [1e-6, 3e-6, 6e-6];
    let m = model(&densities.map(|l| (1.0, l, beta)), 3.5);
    let open = analytic::coverage_open_nonoise(&m).unwrap();
    let total: f64 = densities.iter().sum();
    let mut worst = 0.0f64;
    for subset in [
        vec![0],
        vec![1],
        vec![2],
        vec![0, 2],
        vec![1, 2],
        vec![0, 1],
    ] {
        let policy = AccessPolicy::closed(subset.iter().copied());
        let closed = analytic::coverage_closed_nonoise(&m, &policy).unwrap();
        let factor = subset.iter().map(|&i| densities[i]).sum::<f64>() / total;
        worst = worst.max(rel(closed / open, factor));
    }
    let policy = AccessPolicy::closed([0, 2]);
    let target = analytic::coverage_closed_nonoise(&m, &policy).unwrap();
    let est = montecarlo::estimate_coverage(&m, &policy, &SimulationConfig::new(100_000, 40))
        .map_err(|e| e.to_string())?;
    let sim = within("B = {1,3}", &est, target, 4.0);
    let ratio = if worst <= 1e-12 {
        Ok(format!("ratio matches density share (worst {worst:.1e})"))
    } else {
        Err(format!("ratio off density share by {worst:.1e}"))
    };
    all(vec![ratio, sim])
}

fn load_closed_form() -> Check {
    let alpha = 3.5;
    let tiers = [
        (100.0, 1e-6, db_to_linear(2.0)),
        (1.0, 4e-6, db_to_linear(3.0)),
    ];
    let m = model(&tiers, alpha);
    let load = analytic::load_open(&m, &QuadratureSettings::default()).unwrap();
    let e = 2.0 / alpha;
    let weights: Vec<f64> = tiers
        .iter()
        .map(|&(p, l, b)| l * p.powf(e) * b.powf(-e))
        .collect();
    let sum: f64 = weights.iter().sum();
    let worst = (0..2)
        .map(|j| rel(load.fractions[j], weights[j] / sum))
        .fold(0.0, f64::max);
    let closed = if worst <= 1e-9 {
        Ok(format!("analytic matches ratios (worst {worst:.1e})"))
    } else {
        Err(format!("analytic off ratios by {worst:.1e}"))
    };
    let est =
        montecarlo::estimate_load(&m, &AccessPolicy::Open, &SimulationConfig::new(100_000, 50))
            .map_err(|e| e.to_string())?;
    let mut parts = vec![closed];
    for j in 0..2 {
        parts.push(within(
            &format!("tier {}", j + 1),
            &est[j],
            weights[j] / sum,
            4.0,
        ));
    }
    all(parts)
}

fn rate() -> Check {
    let m = model(&[(1.0, 1e-5, 1.0 + 1e-12)], 4.0);
    let target = LN_2 + FRAC_PI_2;
    let r = analytic::rate_open(&m, &QuadratureSettings::default()).unwrap();
    let analytic_ok = if (r - target).abs() <= 1e-6 {
        Ok(format!("analytic {r:.7} vs ln2 + pi/2 = {target:.7}"))
    } else {
        Err(format!("analytic {r:.7} vs ln2 + pi/2 = {target:.7}"))
    };
    let est =
        montecarlo::estimate_rate(&m, &AccessPolicy::Open, &SimulationConfig::new(100_000, 60))
            .map_err(|e| e.to_string())?;
    all(vec![analytic_ok, within("sim", &est, target, 4.0)])
}

const SWEEP_DB: [f64; 6] = [-4.0, -2.0, 0.0, 2.0, 4.0, 8.0];

fn two_tier_pc(beta1_db: f64) -> NetworkModel {
    model(
        &[
            (100.0, 1e-6, db_to_linear(beta1_db)),
            (1.0, 2e-6, db_to_linear(1.0)),
        ],
        3.0,
    )
}

fn ppp_sweep() -> Vec<EstimateWithCI> {
    SWEEP_DB
        .iter()
        .map(|&b| {
            montecarlo::estimate_coverage(
                &two_tier_pc(b),
                &AccessPolicy::Open,
                &SimulationConfig::new(100_000, 70),
            )
            .unwrap()
        })
        .collect()
}

fn upper_bound_accuracy(ppp: &[EstimateWithCI]) -> Check {
    let quad = QuadratureSettings::default();
    let mut parts = Vec::new();
    for (&b, est) in SWEEP_DB.iter().zip(ppp) {
        let a =
            analytic::coverage_union_bound(&two_tier_pc(b), &AccessPolicy::Open, &quad).unwrap();
        let msg = format!("{b:+} dB: analytic {a:.4} sim {:.4}", est.value);
        parts.push(if est.value <= a + 2.0 * est.stderr {
            Ok(msg)
        } else {
            Err(msg + " (sim above)")
        });
        if b == -4.0 {
            let gap = a - est.value;
            let msg = format!("gap at -4 dB {gap:.4}");
            parts.push(if gap <= 0.05 {
                Ok(msg)
            } else {
                Err(msg + " > 0.05")
            });
        }
    }
    all(parts)
}

fn grid_above_ppp(ppp: &[EstimateWithCI]) -> Check {
    let mut parts = Vec::new();
    for (&b, p) in SWEEP_DB.iter().zip(ppp) {
        if b < 0.0 {
            continue;
        }
        let config = SimulationConfig::new(100_000, 80).with_placement(Placement::HexGrid);
        let g =
            montecarlo::estimate_coverage(&two_tier_pc(b), &AccessPolicy::Open, &config).unwrap();
        let margin = 2.0 * g.combined_stderr(p);
        let msg = format!("{b:+} dB: grid {:.4} ppp {:.4}", g.value, p.value);
        parts.push(if g.value - p.value > margin {
            Ok(msg)
        } else {
            Err(msg)
        });
    }
    all(parts)
}

fn noise_negligible() -> Check {
    let quad = QuadratureSettings::default();
    let mut parts = Vec::new();
    for alpha in [3.0, 4.0] {
        let m = model(
            &[
                (25.0, 1e-6, db_to_linear(3.0)),
                (1.0, 5e-6, db_to_linear(1.0)),
            ],
            alpha,
        );
        let noise = analytic::noise_from_edge_snr(25.0, 1e-6, alpha, 1.0, 0.9).unwrap();
        let with = analytic::coverage_open(&m.with_noise(noise), &quad).unwrap();
        let without = analytic::coverage_open(&m, &quad).unwrap();
        let gap = (with - without).abs();
        let msg = format!("alpha {alpha}: |{with:.4} - {without:.4}| = {gap:.4}");
        parts.push(if gap <= 0.03 { Ok(msg) } else { Err(msg) });
    }
    all(parts)
}

fn at_most_m_above_one_over_m() -> Check {
    let trials = 10_000u64;
    // Thresholds barely above 1 are the hardest case.
    let m = model(
        &[
            (100.0, 1e-6, 1.0 + 1e-9),
            (1.0, 5e-6, 1.0 + 1e-9),
            (10.0, 2e-6, 1.5),
        ],
        3.0,
    );
    let config = SimulationConfig::new(trials, 90).with_window_radius(600.0);
    let outcomes = trial_outcomes(&m, &AccessPolicy::Open, &config).unwrap();
    let doubles = outcomes
        .iter()
        .filter(|o| o.num_above_threshold > 1)
        .count();
    let mut counts = [0usize; 2];
    let mut max_seen = [0usize; 2];
    for t in 0..trials {
        let d = sample_deployment(&m, &config, t);
        for (slot, level) in [2usize, 3].into_iter().enumerate() {
            let n = count_sinr_above(&d, &m, 1.0 / level as f64);
            max_seen[slot] = max_seen[slot].max(n);
            if n > level {
                counts[slot] += 1;
            }
        }
    }
    let msg = format!(
        "{trials} trials: {doubles} with two above threshold; max above 1/2 = {}, above 1/3 = {}; violations {}/{}",
        max_seen[0], max_seen[1], counts[0], counts[1]
    );
    if doubles == 0 && counts == [0, 0] {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hetnet"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "hetnet {args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

fn read_csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".csv"))
        .map(|e| {
            (
                e.file_name().into_string().unwrap(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("hetnet-acceptance-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    let path = |s: &str| dir.join(s).to_string_lossy().into_owned();
    let runs: Vec<_> = ["a", "b"]
        .iter()
        .map(|run| {
            cli(&[
                "simulate",
                "--preset",
                "fig-pc-2tier",
                "--trials",
                "2000",
                "--seed",
                "7",
                "--out",
                &path(run),
            ])?;
            Ok(read_csvs(&dir.join(run)))
        })
        .collect::<Result<_, String>>()?;
    cli(&["regions", "--preset", "fig2-regions", "--out", &path("r")])?;
    let ppm = fs::read(dir.join("r/fig2-regions.ppm")).map_err(|e| e.to_string())?;
    let golden =
        fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig2-regions.ppm"))
            .map_err(|e| e.to_string())?;
    let _ = fs::remove_dir_all(&dir);
    let csv_ok = !runs[0].is_empty() && runs[0] == runs[1];
    let msg = format!(
        "simulate CSVs identical: {csv_ok} ({} files); regions PPM matches golden: {}",
        runs[0].len(),
        ppm == golden
    );
    if csv_ok && ppm == golden {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    // `cargo test -- --list` and filters: this target has no per-test names.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut failures = 0;
    let mut report = |n: u32, name: &str, f: &dyn Fn() -> Check| {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &r {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if r.is_err() {
            failures += 1;
        }
        println!("criterion {n:>2} {tag} {name} [{secs:.1}s] {detail}");
    };
    report(1, "closed form vs quadrature", &closed_form_vs_quadrature);
    report(
        2,
        "single-tier Monte Carlo coverage",
        &single_tier_monte_carlo,
    );
    report(3, "equal-threshold tier invariance", &tier_invariance);
    report(4, "closed-access factor", &closed_access_factor);
    report(5, "load closed form", &load_closed_form);
    report(6, "rate", &rate);
    // Shared by 7 and 8; timed under 7.
    let ppp = OnceCell::new();
    report(7, "upper bound accuracy down to -4 dB", &|| {
        upper_bound_accuracy(ppp.get_or_init(ppp_sweep))
    });
    report(8, "grid above PPP", &|| {
        grid_above_ppp(ppp.get_or_init(ppp_sweep))
    });
    report(9, "noise negligibility", &noise_negligible);
    report(
        10,
        "at most one station above threshold",
        &at_most_m_above_one_over_m,
    );
    report(11, "determinism", &determinism);
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
