use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soccer_dribbling::harness::{evaluate, train, ConfigError, ExperimentConfig, Mode};

#[derive(Parser)]
#[command(name = "dribbling", version, about = "Train and evaluate a Sarsa dribbler")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train one or more seeded runs and write logs, histogram and snapshots.
    Train(Opts),
    /// Evaluate a snapshot greedily on a fixed set of configurations.
    Eval(Opts),
}

macro_rules! key_flags {
    ($($key:ident),* $(,)?) => {
        /// One optional flag per configuration key.
        #[derive(Args)]
        struct KeyFlags {
            $(#[arg(long, value_name = "VALUE")] $key: Option<String>,)*
        }

        impl KeyFlags {
            fn pairs(&self) -> Vec<(&'static str, Option<&str>)> {
                vec![$((stringify!($key), self.$key.as_deref())),*]
            }
        }
    };
}

key_flags!(
    episodes,
    runs,
    seed,
    cmac_mode,
    num_layers,
    angle_width,
    distance_width,
    field_width,
    field_height,
    ball_decay,
    player_decay,
    player_max_speed,
    ball_max_speed,
    kick_power_rate,
    dash_power_rate,
    kickable_distance,
    action_noise,
    stamina_max,
    max_episode_steps,
    player_size,
    inertia_moment,
    epsilon,
    alpha,
    lambda,
    histogram_bin,
    snapshot_path,
    log_path,
    histogram_path,
);

#[derive(Args)]
struct Opts {
    /// `key = value` file applied on top of the defaults; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    keys: KeyFlags,
}

fn build(mode: Mode, opts: &Opts) -> Result<ExperimentConfig, ConfigError> {
    let mut config = ExperimentConfig::default();
    if let Some(path) = &opts.config {
        config.apply_file(path)?;
    }
    for (key, value) in opts.keys.pairs() {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    config.mode = mode;
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Cmd::Train(opts) => {
            let config = build(Mode::Train, &opts)?;
            let summary = train(&config)?;
            for (run, rate) in summary.run_win_rates.iter().enumerate() {
                println!("run {run}: training win rate {rate:.4}");
            }
            println!("best run: {} ({})", summary.best_run, summary.best_snapshot.display());
        }
        Cmd::Eval(opts) => {
            let config = build(Mode::Eval, &opts)?;
            println!("{}", evaluate(&config)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
