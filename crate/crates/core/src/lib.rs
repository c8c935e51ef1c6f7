//! Learning to dribble with Sarsa and CMAC tile coding.
//!
//! A seedable 2D soccer micro-simulator pits a learning dribbler against a
//! fixed adversary. The dribbler chooses among five macro-actions at
//! semi-Markov decision points and learns their values with linear Sarsa
//! over a CMAC.
//!
//! ```
//! use soccer_dribbling::cmac::{CmacNetwork, TilingSpec};
//! use soccer_dribbling::env::{FieldSpec, InitialConfig, PhysicsParams};
//! use soccer_dribbling::learner::{run_episode, EpisodeSettings, SarsaParams};
//! use soccer_dribbling::skills::MacroAction;
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//!
//! let settings = EpisodeSettings {
//!     field: FieldSpec::default(),
//!     physics: PhysicsParams::default(),
//!     sarsa: SarsaParams::default(),
//! };
//! let mut rng = ChaCha8Rng::seed_from_u64(7);
//! let start = InitialConfig::sample(&mut rng, &settings.field, &settings.physics);
//! let max = settings.physics.stamina_max;
//! let world = start.to_world(&settings.field, [max, max]);
//! let mut net = CmacNetwork::new(TilingSpec::default(), MacroAction::COUNT).unwrap();
//! let mut policy = ChaCha8Rng::seed_from_u64(8);
//! let result = run_episode(world, &mut net, &settings, &mut rng, &mut policy);
//! assert!(result.sim_steps >= 1);
//! ```

pub mod adversary;
pub mod cmac;
pub mod env;
pub mod features;
pub mod geometry;
pub mod harness;
pub mod learner;
pub mod skills;
