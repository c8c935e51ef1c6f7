//! Experiment driver: seeded training runs, frozen evaluation, histograms
//! and on-disk artifacts.
//!
//! Every run owns three independent random streams derived from the
//! experiment seed and the run index: one for initial configurations, one for
//! action noise and one for exploration. Keeping the configuration stream
//! separate means two policies evaluated from the same seed face exactly the
//! same starting positions.

mod config;
mod report;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cmac::{load_weights, save_weights, CmacMode, CmacNetwork, SnapshotError};
use crate::env::{coach_maybe_restore_stamina, InitialConfig, TerminationCause, Winner};
use crate::learner::{run_episode, EpisodeSettings, SarsaParams};
use crate::skills::MacroAction;

pub use config::{ConfigError, ExperimentConfig, Mode};
pub use report::{
    emit_histogram, write_episode_csv, write_histogram_csv, EpisodeRecord, HistogramRow, EPISODE_CSV_HEADER,
    HISTOGRAM_CSV_HEADER,
};

const CONFIG_STREAM: u64 = 0;
const PHYSICS_STREAM: u64 = 1;
const POLICY_STREAM: u64 = 2;
const EVAL_TAG: u64 = 0x6576_616c_7561_7465;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Snapshot { path: PathBuf, source: SnapshotError },
    #[error("snapshot was trained in {snapshot} mode but the configuration asks for {config} mode")]
    ModeMismatch { snapshot: CmacMode, config: CmacMode },
    #[error("{0}")]
    WrongMode(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of training run `run` under experiment seed `seed`.
pub fn run_seed(seed: u64, run: u32) -> u64 {
    splitmix64(seed ^ splitmix64(u64::from(run) + 1))
}

/// Seed of the evaluation configuration set.
pub fn eval_seed(seed: u64) -> u64 {
    splitmix64(seed ^ EVAL_TAG)
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Learner parameters with the configured step size spread over the excited
/// fields, so that one update moves Q by `alpha * delta` in either mode.
pub fn per_field_sarsa(config: &ExperimentConfig) -> SarsaParams {
    SarsaParams {
        alpha: config.sarsa.alpha / config.tiling.fields_per_state() as f64,
        ..config.sarsa
    }
}

fn settings(config: &ExperimentConfig, sarsa: SarsaParams) -> EpisodeSettings {
    EpisodeSettings {
        field: config.field,
        physics: config.physics,
        sarsa,
    }
}

/// Plays consecutive episodes, carrying stamina over and letting the coach
/// restore it every fifth episode.
fn play<I: Iterator<Item = InitialConfig>>(
    run: u32,
    configs: I,
    net: &mut CmacNetwork,
    settings: &EpisodeSettings,
    seed: u64,
) -> Vec<EpisodeRecord> {
    let mut physics_rng = stream(seed, PHYSICS_STREAM);
    let mut policy_rng = stream(seed, POLICY_STREAM);
    let max = settings.physics.stamina_max;
    let mut stamina = [max, max];
    let mut records = Vec::new();
    for (episode, initial) in configs.enumerate() {
        let world = initial.to_world(&settings.field, stamina);
        let result = run_episode(world, net, settings, &mut physics_rng, &mut policy_rng);
        records.push(EpisodeRecord {
            run,
            episode: episode as u64,
            winner: result.outcome.winner,
            cause: result.outcome.cause,
            smdp_steps: result.smdp_steps,
            sim_steps: result.sim_steps,
        });
        let end = result.final_world;
        let (d, a) = coach_maybe_restore_stamina(episode as u64 + 1, &end.dribbler, &end.adversary, &settings.physics);
        stamina = [d.stamina, a.stamina];
    }
    records
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub run: u32,
    pub records: Vec<EpisodeRecord>,
    pub network: CmacNetwork,
}

impl RunResult {
    pub fn win_rate(&self) -> f64 {
        win_rate(&self.records).unwrap_or(0.0)
    }
}

pub fn win_rate(records: &[EpisodeRecord]) -> Option<f64> {
    if records.is_empty() {
        return None;
    }
    let wins = records.iter().filter(|r| r.winner == Winner::Dribbler).count();
    Some(wins as f64 / records.len() as f64)
}

/// One training run, entirely in memory.
pub fn train_run(config: &ExperimentConfig, run: u32) -> Result<RunResult, HarnessError> {
    let seed = run_seed(config.seed, run);
    let mut network =
        CmacNetwork::new(config.tiling, MacroAction::COUNT).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut config_rng = stream(seed, CONFIG_STREAM);
    let field = config.field;
    let physics = config.physics;
    let configs = (0..config.episodes).map(|_| InitialConfig::sample(&mut config_rng, &field, &physics));
    let records = play(
        run,
        configs,
        &mut network,
        &settings(config, per_field_sarsa(config)),
        seed,
    );
    Ok(RunResult { run, records, network })
}

/// All runs of an experiment, in parallel, in run order.
pub fn train_runs(config: &ExperimentConfig) -> Result<Vec<RunResult>, HarnessError> {
    config.validate()?;
    (0..config.runs).into_par_iter().map(|r| train_run(config, r)).collect()
}

/// Run with the highest training win rate; ties go to the lower index.
pub fn best_run(results: &[RunResult]) -> Option<&RunResult> {
    results.iter().fold(None, |best: Option<&RunResult>, r| match best {
        Some(b) if b.win_rate() >= r.win_rate() => Some(b),
        _ => Some(r),
    })
}

#[derive(Clone, Debug)]
pub struct TrainSummary {
    pub histogram: Vec<HistogramRow>,
    pub run_win_rates: Vec<f64>,
    pub best_run: u32,
    pub snapshots: Vec<PathBuf>,
    pub best_snapshot: PathBuf,
}

pub fn snapshot_file(dir: &Path, run: u32) -> PathBuf {
    dir.join(format!("run-{run}.cmac"))
}

fn create_file(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_snapshot(net: &CmacNetwork, path: &Path) -> Result<(), HarnessError> {
    let mut out = create_file(path)?;
    save_weights(net, &mut out).map_err(io_err(path))?;
    out.flush().map_err(io_err(path))
}

/// Trains every run and writes the episode log, the averaged histogram and
/// one snapshot per run (plus `best.cmac`, a copy of the best run's).
pub fn train(config: &ExperimentConfig) -> Result<TrainSummary, HarnessError> {
    if config.mode != Mode::Train {
        return Err(HarnessError::WrongMode("train requires mode = train".into()));
    }
    config.validate()?;

    // open every output before simulating anything
    let dir = &config.snapshot_path;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut log = create_file(&config.log_path)?;
    let mut hist = create_file(&config.histogram_path)?;
    let best_snapshot = dir.join("best.cmac");
    let mut snapshots = Vec::new();
    for run in 0..config.runs {
        let path = snapshot_file(dir, run);
        File::create(&path).map_err(io_err(&path))?;
        snapshots.push(path);
    }

    let results = train_runs(config)?;
    let records: Vec<EpisodeRecord> = results.iter().flat_map(|r| r.records.iter().copied()).collect();
    write_episode_csv(&records, &mut log).map_err(io_err(&config.log_path))?;
    log.flush().map_err(io_err(&config.log_path))?;

    let histogram = emit_histogram(&records, config.histogram_bin);
    write_histogram_csv(&histogram, &mut hist).map_err(io_err(&config.histogram_path))?;
    hist.flush().map_err(io_err(&config.histogram_path))?;

    for (result, path) in results.iter().zip(&snapshots) {
        write_snapshot(&result.network, path)?;
    }
    let best = best_run(&results).expect("at least one run");
    write_snapshot(&best.network, &best_snapshot)?;

    Ok(TrainSummary {
        histogram,
        run_win_rates: results.iter().map(RunResult::win_rate).collect(),
        best_run: best.run,
        snapshots,
        best_snapshot,
    })
}

/// The evaluation configuration set for `config.seed`.
pub fn eval_configs(config: &ExperimentConfig, count: u64) -> Vec<InitialConfig> {
    let mut rng = stream(eval_seed(config.seed), CONFIG_STREAM);
    (0..count)
        .map(|_| InitialConfig::sample(&mut rng, &config.field, &config.physics))
        .collect()
}

/// FNV-1a over the bit patterns of a configuration list.
pub fn configs_digest(configs: &[InitialConfig]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for c in configs {
        for v in [c.adversary_position.x, c.adversary_position.y, c.adversary_angle] {
            for b in v.to_bits().to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
    }
    h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalPolicy {
    /// Highest-valued action, no learning.
    Greedy,
    /// Uniformly random macro-actions, as a baseline.
    UniformRandom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub episodes: u64,
    pub wins: u64,
    pub losses: Vec<(TerminationCause, u64)>,
    pub configs_digest: u64,
    pub records: Vec<EpisodeRecord>,
}

impl EvalReport {
    /// `None` when no configuration was played.
    pub fn success_rate(&self) -> Option<f64> {
        (self.episodes > 0).then(|| self.wins as f64 / self.episodes as f64)
    }
}

impl std::fmt::Display for EvalReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "episodes: {}", self.episodes)?;
        writeln!(f, "wins: {}", self.wins)?;
        for (cause, n) in &self.losses {
            writeln!(f, "losses ({}): {}", cause.as_str(), n)?;
        }
        match self.success_rate() {
            Some(r) => write!(f, "success rate: {:.4}", r),
            None => write!(f, "success rate: undefined (no episodes)"),
        }
    }
}

/// Plays `config.episodes` evaluation configurations against a copy of
/// `net`; the caller's network is never touched.
pub fn evaluate_network(
    config: &ExperimentConfig,
    net: &CmacNetwork,
    policy: EvalPolicy,
) -> Result<EvalReport, HarnessError> {
    if net.spec().mode != config.tiling.mode {
        return Err(HarnessError::ModeMismatch {
            snapshot: net.spec().mode,
            config: config.tiling.mode,
        });
    }
    let configs = eval_configs(config, config.episodes);
    let sarsa = match policy {
        EvalPolicy::Greedy => SarsaParams::frozen(),
        EvalPolicy::UniformRandom => SarsaParams {
            epsilon: 1.0,
            ..SarsaParams::frozen()
        },
    };
    let mut scratch = net.clone();
    let seed = eval_seed(config.seed);
    let records = play(0, configs.iter().copied(), &mut scratch, &settings(config, sarsa), seed);

    let wins = records.iter().filter(|r| r.winner == Winner::Dribbler).count() as u64;
    let losses = TerminationCause::ALL
        .iter()
        .filter(|c| c.winner() == Winner::Adversary)
        .map(|&c| (c, records.iter().filter(|r| r.cause == c).count() as u64))
        .collect();
    Ok(EvalReport {
        episodes: records.len() as u64,
        wins,
        losses,
        configs_digest: configs_digest(&configs),
        records,
    })
}

pub fn load_snapshot(path: &Path) -> Result<CmacNetwork, HarnessError> {
    let mut file = File::open(path).map_err(io_err(path))?;
    load_weights(&mut file).map_err(|source| HarnessError::Snapshot {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads the snapshot at `config.snapshot_path`, evaluates it greedily and
/// writes the evaluation episode log.
pub fn evaluate(config: &ExperimentConfig) -> Result<EvalReport, HarnessError> {
    if config.mode != Mode::Eval {
        return Err(HarnessError::WrongMode("eval requires mode = eval".into()));
    }
    config.validate()?;
    let mut log = create_file(&config.log_path)?;
    let net = load_snapshot(&config.snapshot_path)?;
    let report = evaluate_network(config, &net, EvalPolicy::Greedy)?;
    write_episode_csv(&report.records, &mut log).map_err(io_err(&config.log_path))?;
    log.flush().map_err(io_err(&config.log_path))?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmac::TilingSpec;

    fn small(episodes: u64, runs: u32) -> ExperimentConfig {
        ExperimentConfig {
            episodes,
            runs,
            seed: 42,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn run_seeds_differ() {
        assert_ne!(run_seed(1, 0), run_seed(1, 1));
        assert_ne!(run_seed(1, 0), run_seed(2, 0));
        assert_eq!(run_seed(9, 3), run_seed(9, 3));
    }

    #[test]
    fn training_is_reproducible_and_contiguous() {
        let c = small(30, 2);
        let a = train_runs(&c).unwrap();
        let b = train_runs(&c).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.records, y.records);
            assert_eq!(x.network.weights(), y.network.weights());
            assert!(x
                .records
                .iter()
                .enumerate()
                .all(|(i, r)| r.episode == i as u64 && r.run == x.run));
        }
        assert_ne!(a[0].records, a[1].records);
    }

    #[test]
    fn empty_evaluation_has_no_rate() {
        let c = ExperimentConfig {
            mode: Mode::Eval,
            episodes: 0,
            ..ExperimentConfig::default()
        };
        let net = CmacNetwork::new(TilingSpec::default(), 5).unwrap();
        let r = evaluate_network(&c, &net, EvalPolicy::Greedy).unwrap();
        assert_eq!(r.episodes, 0);
        assert_eq!(r.success_rate(), None);
        assert!(r.to_string().contains("undefined"));
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let c = small(5, 1);
        let net = CmacNetwork::new(TilingSpec::with_mode(CmacMode::OneDim), 5).unwrap();
        assert!(matches!(
            evaluate_network(&c, &net, EvalPolicy::Greedy),
            Err(HarnessError::ModeMismatch { .. })
        ));
    }

    #[test]
    fn evaluation_configs_do_not_depend_on_mode() {
        let multi = small(50, 1);
        let mut one = multi.clone();
        one.tiling.mode = CmacMode::OneDim;
        let a = eval_configs(&multi, 50);
        let b = eval_configs(&one, 50);
        assert_eq!(configs_digest(&a), configs_digest(&b));
        let m = evaluate_network(&multi, &CmacNetwork::new(multi.tiling, 5).unwrap(), EvalPolicy::Greedy).unwrap();
        let o = evaluate_network(&one, &CmacNetwork::new(one.tiling, 5).unwrap(), EvalPolicy::Greedy).unwrap();
        assert_eq!(m.configs_digest, o.configs_digest);
    }

    #[test]
    fn best_run_prefers_lowest_index_on_ties() {
        let c = small(4, 3);
        let mut runs = train_runs(&c).unwrap();
        for r in &mut runs {
            r.records.iter_mut().for_each(|e| e.winner = Winner::Dribbler);
        }
        assert_eq!(best_run(&runs).unwrap().run, 0);
        runs[2].records[0].winner = Winner::Dribbler;
        runs[0].records[0].winner = Winner::Adversary;
        assert_eq!(best_run(&runs).unwrap().run, 1);
    }
}
