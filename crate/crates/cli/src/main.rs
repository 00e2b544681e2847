use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hetnet_cli::{presets, run, CliError, Experiment, Mode};

/// Coverage, load and rate of multi-tier cellular networks: analytic
/// evaluation, Monte Carlo validation and coverage-region maps.
#[derive(Parser)]
#[command(name = "hetnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the analytic expressions over the sweep.
    Analyze(RunArgs),
    /// Run the Monte Carlo simulator over the sweep.
    Simulate(RunArgs),
    /// Both, side by side.
    Compare(RunArgs),
    /// Sample one deployment and rasterize its coverage regions.
    Regions(RunArgs),
    /// Built-in experiments.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
    /// Print a preset's spec file.
    Show {
        name: String,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Experiment spec (TOML).
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    spec: Option<PathBuf>,
    /// Built-in experiment; see `presets list`.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
}

fn load(args: &RunArgs) -> Result<Experiment, CliError> {
    let mut exp = match (&args.spec, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            Experiment::from_toml(&text, path)?
        }
        (None, Some(name)) => {
            let preset = presets::find(name)
                .ok_or_else(|| CliError::config("--preset", format!("unknown preset `{name}`")))?;
            Experiment::from_toml(preset.toml, Path::new(preset.name))?
        }
        (None, None) => unreachable!("clap requires one of --spec / --preset"),
    };
    if let Some(seed) = args.seed {
        exp.sim.seed = seed;
    }
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(CliError::config("--trials", "must be at least 1"));
        }
        exp.sim.trials = trials;
    }
    Ok(exp)
}

fn execute(command: Command) -> Result<(), CliError> {
    let (args, mode) = match command {
        Command::Presets { action } => {
            match action {
                PresetAction::List => {
                    for p in presets::PRESETS {
                        println!("{:<22}{}", p.name, p.summary);
                    }
                }
                PresetAction::Show { name } => {
                    let p = presets::find(&name).ok_or_else(|| {
                        CliError::config("name", format!("unknown preset `{name}`"))
                    })?;
                    print!("{}", p.toml);
                }
            }
            return Ok(());
        }
        Command::Analyze(a) => (a, Some(Mode::Analyze)),
        Command::Simulate(a) => (a, Some(Mode::Simulate)),
        Command::Compare(a) => (a, Some(Mode::Compare)),
        Command::Regions(a) => (a, None),
    };
    let exp = load(&args)?;
    let written = match mode {
        Some(mode) => run::run_tables(&exp, mode, &args.out)?,
        None => run::run_regions(&exp, &args.out)?,
    };
    eprintln!("seed {}", exp.sim.seed);
    for path in written {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
