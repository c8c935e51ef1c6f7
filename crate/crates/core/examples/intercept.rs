//! Predicts where an agent meets a rolling ball, then chases it with the
//! real simulator to check the prediction.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use soccer_dribbling::env::{step, AgentBody, AgentId, BallState, Command, PhysicsParams, WorldState};
use soccer_dribbling::geometry::Vec2;
use soccer_dribbling::skills::{intercept_point, move_to_intercept, Intercept};

/// Returns the prediction and the cycle at which the chase actually gained
/// possession.
pub fn run_example() -> (Intercept, Option<u64>) {
    let params = PhysicsParams::default().noiseless();
    let agent = AgentBody::at_rest(Vec2::new(0.0, -8.0), 0.0, params.stamina_max);
    let ball = BallState {
        position: Vec2::new(-10.0, 0.0),
        velocity: Vec2::new(1.2, 0.3),
    };
    let predicted = intercept_point(&agent, &ball, &params);

    let mut world = WorldState {
        dribbler: agent,
        adversary: AgentBody::at_rest(Vec2::new(20.0, 15.0), 180.0, 0.0),
        ball,
        step_index: 0,
        adversary_hold_streak: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut reached = None;
    while world.step_index < 200 {
        let cmd = move_to_intercept(&world, AgentId::Dribbler, &params);
        step(&mut world, cmd, Command::Idle, &params, &mut rng);
        if world.possesses(AgentId::Dribbler, &params) {
            reached = Some(world.step_index);
            break;
        }
    }
    (predicted, reached)
}

fn main() {
    let (predicted, reached) = run_example();
    println!(
        "predicted: ({:.2}, {:.2}) after {} cycles",
        predicted.point.x, predicted.point.y, predicted.steps
    );
    match reached {
        Some(t) => println!("chase gained possession after {t} cycles"),
        None => println!("chase never reached the ball"),
    }
}
