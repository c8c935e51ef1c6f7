//! CMAC tile coding over [`StateFeatures`].
//!
//! Every layer partitions the state space into hyper-rectangular receptive
//! fields; layer `l` is shifted by `l / num_layers` of a width in every
//! continuous dimension. A state excites one field per layer (or one per layer
//! and variable in [`CmacMode::OneDim`]) and each action owns a separate
//! weight per field. Angle dimensions wrap around at 360°, and `pos_y` is
//! categorical with three unshifted cells.
//!
//! Weights are created lazily and read as zero until first updated. Distinct
//! keys never share a weight.

mod snapshot;
mod store;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::features::StateFeatures;

pub use snapshot::{load_weights, save_weights, SnapshotError, SNAPSHOT_MAGIC, SNAPSHOT_VERSION};
use store::WeightStore;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CmacError {
    #[error("invalid tiling: {0}")]
    InvalidSpec(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmacMode {
    /// Joint tiles over all five variables.
    MultiDim,
    /// Independent intervals along each variable.
    OneDim,
}

impl CmacMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CmacMode::MultiDim => "multi",
            CmacMode::OneDim => "one",
        }
    }
}

impl fmt::Display for CmacMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CmacMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "multi" | "multidim" | "multi-dim" => Ok(CmacMode::MultiDim),
            "one" | "onedim" | "one-dim" => Ok(CmacMode::OneDim),
            other => Err(format!("unknown cmac mode `{other}` (expected `multi` or `one`)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TilingSpec {
    pub mode: CmacMode,
    pub num_layers: u32,
    /// Width of every angle interval in degrees. Must divide 360.
    pub angle_width: f64,
    /// Width of the distance interval in meters.
    pub distance_width: f64,
}

impl Default for TilingSpec {
    fn default() -> Self {
        TilingSpec {
            mode: CmacMode::MultiDim,
            num_layers: 32,
            angle_width: 20.0,
            distance_width: 3.0,
        }
    }
}

impl TilingSpec {
    pub fn with_mode(mode: CmacMode) -> Self {
        TilingSpec {
            mode,
            ..TilingSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), CmacError> {
        if self.num_layers == 0 || self.num_layers > u32::from(u16::MAX) {
            return Err(CmacError::InvalidSpec(format!(
                "num_layers must be in 1..=65535, got {}",
                self.num_layers
            )));
        }
        if !(self.angle_width > 0.0 && self.distance_width > 0.0) {
            return Err(CmacError::InvalidSpec("widths must be positive".into()));
        }
        let cells = 360.0 / self.angle_width;
        if (cells - cells.round()).abs() > 1e-9 {
            return Err(CmacError::InvalidSpec(format!(
                "angle width {} does not divide 360",
                self.angle_width
            )));
        }
        Ok(())
    }

    /// Shift of `layer` as a fraction of a width, in `[0, 1)`.
    pub fn offset_fraction(&self, layer: u32) -> f64 {
        f64::from(layer) / f64::from(self.num_layers)
    }

    fn angle_cells(&self) -> i64 {
        (360.0 / self.angle_width).round() as i64
    }

    fn angle_cell(&self, value: f64, layer: u32) -> i32 {
        let shifted = value + self.offset_fraction(layer) * self.angle_width;
        ((shifted / self.angle_width).floor() as i64).rem_euclid(self.angle_cells()) as i32
    }

    fn distance_cell(&self, value: f64, layer: u32) -> i32 {
        let shifted = value + self.offset_fraction(layer) * self.distance_width;
        (shifted / self.distance_width).floor() as i32
    }

    /// Cell index of every variable for one layer, in feature order.
    fn cells(&self, s: &StateFeatures, layer: u32) -> [i32; 5] {
        [
            i32::from(s.pos_y) + 1,
            self.angle_cell(s.ang_dribbler, layer),
            self.angle_cell(s.ang_dribbler_adversary, layer),
            self.angle_cell(s.ang_ball_adversary, layer),
            self.distance_cell(s.dist_ball_adversary, layer),
        ]
    }

    /// Receptive fields excited per (state, action).
    pub fn fields_per_state(&self) -> usize {
        match self.mode {
            CmacMode::MultiDim => self.num_layers as usize,
            CmacMode::OneDim => self.num_layers as usize * StateFeatures::COUNT,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Joint([i32; 5]),
    Single { variable: u8, index: i32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReceptiveFieldKey {
    pub action: u8,
    pub layer: u16,
    pub cell: Cell,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CmacNetwork {
    spec: TilingSpec,
    num_actions: u8,
    store: WeightStore,
}

impl CmacNetwork {
    pub fn new(spec: TilingSpec, num_actions: usize) -> Result<Self, CmacError> {
        Self::build(spec, num_actions, WeightStore::exact())
    }

    /// Fixed-capacity open-addressing storage. Every slot keeps its full key,
    /// so lookups never alias; once full, updates to unseen fields are
    /// dropped and counted.
    pub fn with_hashed_storage(spec: TilingSpec, num_actions: usize, capacity: usize) -> Result<Self, CmacError> {
        if capacity == 0 {
            return Err(CmacError::InvalidSpec("hashed capacity must be positive".into()));
        }
        Self::build(spec, num_actions, WeightStore::hashed(capacity))
    }

    fn build(spec: TilingSpec, num_actions: usize, store: WeightStore) -> Result<Self, CmacError> {
        spec.validate()?;
        let num_actions = u8::try_from(num_actions)
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CmacError::InvalidSpec(format!("unsupported action count {num_actions}")))?;
        Ok(CmacNetwork {
            spec,
            num_actions,
            store,
        })
    }

    pub fn spec(&self) -> &TilingSpec {
        &self.spec
    }

    pub fn num_actions(&self) -> usize {
        usize::from(self.num_actions)
    }

    /// Number of stored (ever updated) receptive fields.
    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.store.len() == 0
    }

    /// Capacity of hashed storage, `None` for exact storage.
    pub fn hashed_capacity(&self) -> Option<usize> {
        self.store.capacity()
    }

    /// Updates discarded because hashed storage was full.
    pub fn dropped_updates(&self) -> u64 {
        self.store.dropped()
    }

    pub fn excite(&self, s: &StateFeatures, action: usize) -> Vec<ReceptiveFieldKey> {
        assert!(action < self.num_actions(), "action {action} out of range");
        let action = action as u8;
        let mut keys = Vec::with_capacity(self.spec.fields_per_state());
        for layer in 0..self.spec.num_layers {
            let cells = self.spec.cells(s, layer);
            let layer = layer as u16;
            match self.spec.mode {
                CmacMode::MultiDim => keys.push(ReceptiveFieldKey {
                    action,
                    layer,
                    cell: Cell::Joint(cells),
                }),
                CmacMode::OneDim => keys.extend(cells.iter().enumerate().map(|(v, &index)| ReceptiveFieldKey {
                    action,
                    layer,
                    cell: Cell::Single {
                        variable: v as u8,
                        index,
                    },
                })),
            }
        }
        keys
    }

    pub fn weight(&self, key: &ReceptiveFieldKey) -> f64 {
        self.store.get(key)
    }

    /// Sum of the weights of `fields`.
    pub fn response(&self, fields: &[ReceptiveFieldKey]) -> f64 {
        fields.iter().map(|k| self.store.get(k)).sum()
    }

    pub fn q_value(&self, s: &StateFeatures, action: usize) -> f64 {
        self.response(&self.excite(s, action))
    }

    /// Delta rule: every listed weight moves by `alpha * delta`.
    pub fn apply_delta(&mut self, fields: &[ReceptiveFieldKey], alpha: f64, delta: f64) {
        let step = alpha * delta;
        if step == 0.0 {
            return;
        }
        for key in fields {
            self.store.add(*key, step);
        }
    }

    /// Sets a weight directly.
    pub fn set_weight(&mut self, key: ReceptiveFieldKey, value: f64) {
        self.store.set(key, value);
    }

    /// All stored weights, sorted by key.
    pub fn weights(&self) -> Vec<(ReceptiveFieldKey, f64)> {
        let mut all = self.store.entries();
        all.sort_by_key(|e| e.0);
        all
    }
}
