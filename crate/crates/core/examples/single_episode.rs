//! Plays one episode with an untrained dribbler and prints every decision.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soccer_dribbling::cmac::{CmacNetwork, TilingSpec};
use soccer_dribbling::env::{FieldSpec, InitialConfig, PhysicsParams};
use soccer_dribbling::learner::{run_episode, EpisodeResult, EpisodeSettings, SarsaParams};
use soccer_dribbling::skills::MacroAction;

pub fn run_example(seed: u64) -> EpisodeResult {
    let settings = EpisodeSettings {
        field: FieldSpec::default(),
        physics: PhysicsParams::default(),
        // an untrained network has no preferences, so explore uniformly
        sarsa: SarsaParams {
            epsilon: 1.0,
            ..SarsaParams::default()
        },
    };
    let mut physics = ChaCha8Rng::seed_from_u64(seed);
    let mut policy = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));

    let start = InitialConfig::sample(&mut physics, &settings.field, &settings.physics);
    let stamina = settings.physics.stamina_max;
    let world = start.to_world(&settings.field, [stamina, stamina]);
    let mut net = CmacNetwork::new(TilingSpec::default(), MacroAction::COUNT).expect("default tiling is valid");
    run_episode(world, &mut net, &settings, &mut physics, &mut policy)
}

fn main() {
    let result = run_example(3);
    for (step, action) in &result.decisions {
        println!("step {step:>4}: {}", MacroAction::from_index(*action));
    }
    println!(
        "{} wins ({}) after {} cycles and {} decisions",
        result.outcome.winner.as_str(),
        result.outcome.cause.as_str(),
        result.sim_steps,
        result.smdp_steps
    );
}
