//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments and blank lines are ignored
//! episodes = 5000
//! cmac_mode = multi
//! ball_decay = 0.94
//! ```
//!
//! Keys are the names listed in [`ExperimentConfig::KEYS`].

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::cmac::{CmacMode, TilingSpec};
use crate::env::{FieldSpec, PhysicsParams};
use crate::learner::SarsaParams;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    BadValue { key: String, value: String, reason: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Mode::Train),
            "eval" => Ok(Mode::Eval),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Train => "train",
            Mode::Eval => "eval",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    /// Training episodes per run, or evaluation configurations.
    pub episodes: u64,
    pub runs: u32,
    pub seed: u64,
    pub tiling: TilingSpec,
    pub field: FieldSpec,
    pub physics: PhysicsParams,
    /// `alpha` here is the fraction of the TD error corrected by one update;
    /// training divides it by the number of excited fields.
    pub sarsa: SarsaParams,
    pub histogram_bin: u64,
    /// Directory of per-run snapshots when training, a snapshot file when
    /// evaluating.
    pub snapshot_path: PathBuf,
    pub log_path: PathBuf,
    pub histogram_path: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Train,
            episodes: 50_000,
            runs: 5,
            seed: 0,
            tiling: TilingSpec::default(),
            field: FieldSpec::default(),
            physics: PhysicsParams::default(),
            sarsa: SarsaParams::default(),
            histogram_bin: 500,
            snapshot_path: PathBuf::from("snapshots"),
            log_path: PathBuf::from("episodes.csv"),
            histogram_path: PathBuf::from("histogram.csv"),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: e.to_string(),
    })
}

impl ExperimentConfig {
    pub const KEYS: &'static [&'static str] = &[
        "mode",
        "episodes",
        "runs",
        "seed",
        "cmac_mode",
        "num_layers",
        "angle_width",
        "distance_width",
        "field_width",
        "field_height",
        "ball_decay",
        "player_decay",
        "player_max_speed",
        "ball_max_speed",
        "kick_power_rate",
        "dash_power_rate",
        "kickable_distance",
        "action_noise",
        "stamina_max",
        "max_episode_steps",
        "player_size",
        "inertia_moment",
        "epsilon",
        "alpha",
        "lambda",
        "histogram_bin",
        "snapshot_path",
        "log_path",
        "histogram_path",
    ];

    pub fn cmac_mode(&self) -> CmacMode {
        self.tiling.mode
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let v = value.trim();
        match key {
            "mode" => self.mode = parse(key, v)?,
            "episodes" => self.episodes = parse(key, v)?,
            "runs" => self.runs = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "cmac_mode" => self.tiling.mode = parse(key, v)?,
            "num_layers" => self.tiling.num_layers = parse(key, v)?,
            "angle_width" => self.tiling.angle_width = parse(key, v)?,
            "distance_width" => self.tiling.distance_width = parse(key, v)?,
            "field_width" => self.field.width = parse(key, v)?,
            "field_height" => self.field.height = parse(key, v)?,
            "ball_decay" => self.physics.ball_decay = parse(key, v)?,
            "player_decay" => self.physics.player_decay = parse(key, v)?,
            "player_max_speed" => self.physics.player_max_speed = parse(key, v)?,
            "ball_max_speed" => self.physics.ball_max_speed = parse(key, v)?,
            "kick_power_rate" => self.physics.kick_power_rate = parse(key, v)?,
            "dash_power_rate" => self.physics.dash_power_rate = parse(key, v)?,
            "kickable_distance" => self.physics.kickable_distance = parse(key, v)?,
            "action_noise" => self.physics.action_noise = parse(key, v)?,
            "stamina_max" => self.physics.stamina_max = parse(key, v)?,
            "max_episode_steps" => self.physics.max_episode_steps = parse(key, v)?,
            "player_size" => self.physics.player_size = parse(key, v)?,
            "inertia_moment" => self.physics.inertia_moment = parse(key, v)?,
            "epsilon" => self.sarsa.epsilon = parse(key, v)?,
            "alpha" => self.sarsa.alpha = parse(key, v)?,
            "lambda" => self.sarsa.lambda = parse(key, v)?,
            "histogram_bin" => self.histogram_bin = parse(key, v)?,
            "snapshot_path" => self.snapshot_path = PathBuf::from(v),
            "log_path" => self.log_path = PathBuf::from(v),
            "histogram_path" => self.histogram_path = PathBuf::from(v),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text` on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = key.trim();
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |e: &dyn fmt::Display| ConfigError::Invalid(e.to_string());
        if self.episodes == 0 && self.mode == Mode::Train {
            return Err(ConfigError::Invalid("episodes must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(ConfigError::Invalid("runs must be at least 1".into()));
        }
        if self.histogram_bin == 0 {
            return Err(ConfigError::Invalid("histogram_bin must be at least 1".into()));
        }
        self.field.validate().map_err(|e| invalid(&e))?;
        self.physics.validate().map_err(|e| invalid(&e))?;
        self.sarsa.validate().map_err(|e| invalid(&e))?;
        self.tiling.validate().map_err(|e| invalid(&e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_override_defaults() {
        let mut c = ExperimentConfig::default();
        c.apply_text(
            "# experiment\n\
             episodes = 1000\n\
             cmac_mode = one   # trailing comment\n\
             \n\
             ball_decay=0.9\n\
             log_path = out/log.csv\n",
        )
        .unwrap();
        assert_eq!(c.episodes, 1000);
        assert_eq!(c.cmac_mode(), CmacMode::OneDim);
        assert_eq!(c.physics.ball_decay, 0.9);
        assert_eq!(c.log_path, PathBuf::from("out/log.csv"));
        assert_eq!(c.runs, 5);
    }

    #[test]
    fn every_key_is_settable() {
        let samples = [
            ("mode", "eval"),
            ("cmac_mode", "multi"),
            ("snapshot_path", "a"),
            ("log_path", "b"),
            ("histogram_path", "c"),
        ];
        for key in ExperimentConfig::KEYS {
            let value = samples.iter().find(|(k, _)| k == key).map(|(_, v)| *v).unwrap_or("1");
            ExperimentConfig::default().set(key, value).unwrap();
        }
    }

    #[test]
    fn errors_are_reported() {
        let mut c = ExperimentConfig::default();
        assert_eq!(c.set("nope", "1"), Err(ConfigError::UnknownKey("nope".into())));
        assert!(matches!(c.set("episodes", "many"), Err(ConfigError::BadValue { .. })));
        assert_eq!(c.apply_text("episodes 5"), Err(ConfigError::Syntax { line: 1 }));
        c.histogram_bin = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn defaults_validate() {
        ExperimentConfig::default().validate().unwrap();
    }
}
