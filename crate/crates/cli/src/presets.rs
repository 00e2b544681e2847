//! Built-in experiments, stored as spec files so `presets show` prints
//! exactly what runs.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig-pc-2tier",
        summary: "two tiers, P1 = 100 P2, tier-1 threshold swept -8..12 dB, PPP macros",
        toml: r#"name = "fig-pc-2tier"
description = "K = 2, alpha = 3, P1 = 100 P2, lambda2 = 2 lambda1, beta2 = 1 dB, no noise; beta1 swept"
alpha = 3.0
noise_watts = 0.0
outputs = ["coverage", "coverage_bound"]

[[tiers]]
power_watts = 100.0
density_per_km2 = 1.0
threshold_db = 1.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 2.0
threshold_db = 1.0

[sweep]
parameter = "tier1.threshold_db"
values = [-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0]

[sim]
trials = 20000
seed = 0
tier1_placement = "ppp"
"#,
    },
    Preset {
        name: "fig-pc-2tier-grid",
        summary: "as fig-pc-2tier with tier-1 stations on a hexagonal grid",
        toml: r#"name = "fig-pc-2tier-grid"
description = "fig-pc-2tier with the macro tier on a randomly shifted hexagonal grid"
alpha = 3.0
noise_watts = 0.0
outputs = ["coverage", "coverage_bound"]

[[tiers]]
power_watts = 100.0
density_per_km2 = 1.0
threshold_db = 1.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 2.0
threshold_db = 1.0

[sweep]
parameter = "tier1.threshold_db"
values = [-8.0, -6.0, -4.0, -2.0, 0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0]

[sim]
trials = 20000
seed = 0
tier1_placement = "hexgrid"
"#,
    },
    Preset {
        name: "fig-noise",
        summary: "two tiers, P1 = 25 P2, edge SNR 0 dB, alpha swept; with and without noise",
        toml: r#"name = "fig-noise"
description = "K = 2, P1 = 25 P2, lambda2 = 5 lambda1, beta1 = 3 dB, beta2 = 1 dB, macro edge SNR 0 dB"
alpha = 4.0
outputs = ["coverage", "coverage_nonoise"]

[noise_edge]
snr_db = 0.0
quantile = 0.9

[[tiers]]
power_watts = 25.0
density_per_km2 = 1.0
threshold_db = 3.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 5.0
threshold_db = 1.0

[sweep]
parameter = "alpha"
values = [2.5, 3.0, 3.5, 4.0, 4.5, 5.0]

[sim]
trials = 20000
seed = 0
"#,
    },
    Preset {
        name: "fig-rate",
        summary: "two tiers, P1 = 1000 P2, common threshold swept, conditional rate",
        toml: r#"name = "fig-rate"
description = "K = 2, alpha = 3, P1 = 1000 P2, lambda2 = 2 lambda1, beta1 = beta2 swept, no noise, open access"
alpha = 3.0
noise_watts = 0.0
outputs = ["rate", "rate_bits"]

[[tiers]]
power_watts = 1000.0
density_per_km2 = 1.0
threshold_db = 1.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 2.0
threshold_db = 1.0

[sweep]
parameter = "tiers.threshold_db"
values = [1.0, 4.0, 8.0, 12.0, 16.0, 20.0]

[sim]
trials = 20000
seed = 0
"#,
    },
    Preset {
        name: "fig2-regions",
        summary: "coverage regions, macros plus femtos, P1 = 1000 P2, lambda2 = 5 lambda1",
        toml: r#"name = "fig2-regions"
alpha = 4.0
noise_watts = 0.0

[[tiers]]
power_watts = 1000.0
density_per_km2 = 1.0
threshold_db = 0.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 5.0
threshold_db = 0.0

[sim]
seed = 0

[regions]
width = 256
height = 256
extent_m = 4000.0
"#,
    },
    Preset {
        name: "fig4-regions",
        summary:
            "coverage regions, three tiers, P1 = 100 P2 = 1000 P3, lambda3 = 4 lambda2 = 8 lambda1",
        toml: r#"name = "fig4-regions"
alpha = 4.0
noise_watts = 0.0

[[tiers]]
power_watts = 1000.0
density_per_km2 = 1.0
threshold_db = 0.0

[[tiers]]
power_watts = 10.0
density_per_km2 = 2.0
threshold_db = 0.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 8.0
threshold_db = 0.0

[sim]
seed = 0

[regions]
width = 512
height = 512
extent_m = 4000.0
"#,
    },
    Preset {
        name: "single-tier-regions",
        summary: "one tier: an ordinary Voronoi tessellation",
        toml: r#"name = "single-tier-regions"
alpha = 4.0
noise_watts = 0.0

[[tiers]]
power_watts = 1.0
density_per_km2 = 5.0
threshold_db = 0.0

[sim]
seed = 0

[regions]
width = 256
height = 256
extent_m = 2000.0
"#,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
