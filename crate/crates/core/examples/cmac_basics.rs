//! Receptive fields, the delta rule and snapshot round trips for both tile
//! layouts.

use soccer_dribbling::cmac::{load_weights, save_weights, CmacMode, CmacNetwork, TilingSpec};
use soccer_dribbling::features::StateFeatures;

pub struct Summary {
    pub mode: CmacMode,
    pub fields: usize,
    pub q_after_update: f64,
    pub neighbour_q: f64,
    pub snapshot_bytes: usize,
}

pub fn run_example() -> Vec<Summary> {
    let s = StateFeatures {
        pos_y: 0,
        ang_dribbler: 10.0,
        ang_dribbler_adversary: 95.0,
        ang_ball_adversary: 200.0,
        dist_ball_adversary: 4.2,
    };
    // a state a little further away shares only some of the fields
    let near = StateFeatures {
        dist_ball_adversary: 5.2,
        ..s
    };

    [CmacMode::MultiDim, CmacMode::OneDim]
        .into_iter()
        .map(|mode| {
            let mut net = CmacNetwork::new(TilingSpec::with_mode(mode), 5).expect("valid tiling");
            let fields = net.excite(&s, 0);
            net.apply_delta(&fields, 0.125, 1.0);

            let mut bytes = Vec::new();
            save_weights(&net, &mut bytes).expect("writing to memory");
            let restored = load_weights(&mut bytes.as_slice()).expect("fresh snapshot");
            assert_eq!(restored.weights(), net.weights());

            Summary {
                mode,
                fields: fields.len(),
                q_after_update: net.q_value(&s, 0),
                neighbour_q: net.q_value(&near, 0),
                snapshot_bytes: bytes.len(),
            }
        })
        .collect()
}

fn main() {
    for s in run_example() {
        println!(
            "{:>5}: {:>3} fields, Q = {:.3}, neighbour Q = {:.3}, snapshot {} bytes",
            s.mode.as_str(),
            s.fields,
            s.q_after_update,
            s.neighbour_q,
            s.snapshot_bytes
        );
    }
}
