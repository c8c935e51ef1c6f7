//! The Sarsa routines on a five-state corridor, with a single-layer CMAC
//! acting as a lookup table.
//!
//! Action 0 moves right, action 1 moves left. Leaving the right end pays +1
//! and ends the episode; pushing against the left wall costs 0.5.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soccer_dribbling::cmac::{CmacMode, CmacNetwork, TilingSpec};
use soccer_dribbling::features::StateFeatures;
use soccer_dribbling::learner::{rl_end_episode, rl_start_episode, rl_step, SarsaParams};

pub const STATES: usize = 5;
pub const GAMMA: f64 = 0.9;

/// `(next state, reward)`; `None` is the terminal state.
pub fn transition(s: usize, a: usize) -> (Option<usize>, f64) {
    match (s, a) {
        (s, 0) if s + 1 == STATES => (None, 1.0),
        (s, 0) => (Some(s + 1), 0.0),
        (0, _) => (Some(0), -0.5),
        (s, _) => (Some(s - 1), 0.0),
    }
}

/// Each state gets its own distance cell.
pub fn features(s: usize) -> StateFeatures {
    StateFeatures {
        pos_y: 0,
        ang_dribbler: 0.0,
        ang_dribbler_adversary: 0.0,
        ang_ball_adversary: 0.0,
        dist_ball_adversary: 3.0 * s as f64 + 1.5,
    }
}

pub fn table() -> CmacNetwork {
    let spec = TilingSpec {
        mode: CmacMode::MultiDim,
        num_layers: 1,
        ..TilingSpec::default()
    };
    CmacNetwork::new(spec, 2).expect("valid tiling")
}

/// Exploring starts: a random state and a random first action, greedy
/// afterwards.
pub fn train(episodes: u64, alpha: f64, seed: u64) -> CmacNetwork {
    let mut net = table();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let explore = SarsaParams {
        epsilon: 1.0,
        alpha,
        lambda: GAMMA,
    };
    let greedy = SarsaParams {
        epsilon: 0.0,
        ..explore
    };
    for _ in 0..episodes {
        let mut s = rng.gen_range(0..STATES);
        let mut learner = rl_start_episode(&net, &features(s), &explore, &mut rng);
        // bounded so that a greedy loop cannot run forever
        for _ in 0..100 {
            match transition(s, learner.last_action) {
                (Some(next), r) => {
                    rl_step(&mut learner, &mut net, &features(next), r, &greedy, &mut rng);
                    s = next;
                }
                (None, r) => {
                    rl_end_episode(learner, &mut net, r, &greedy);
                    break;
                }
            }
        }
    }
    net
}

pub fn run_example() -> Vec<[f64; 2]> {
    let net = train(2000, 0.1, 5);
    (0..STATES)
        .map(|s| [net.q_value(&features(s), 0), net.q_value(&features(s), 1)])
        .collect()
}

fn main() {
    for (s, q) in run_example().iter().enumerate() {
        println!("state {s}: right {:.4}, left {:.4}", q[0], q[1]);
    }
}
