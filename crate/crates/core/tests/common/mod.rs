//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soccer_dribbling::env::{
    step, AgentBody, BallState, Command, EpisodeOutcome, FieldSpec, PhysicsParams, TerminationCause, WorldState,
};
use soccer_dribbling::geometry::{bearing, signed_angle, Vec2};
use soccer_dribbling::skills::TURN_THRESHOLD;

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A world with the ball and one chasing agent; the other player parked far
/// away with no stamina.
pub fn chase_world(agent: AgentBody, ball: BallState) -> WorldState {
    WorldState {
        dribbler: agent,
        adversary: AgentBody::at_rest(Vec2::new(1.0e6, 1.0e6), 0.0, 0.0),
        ball,
        step_index: 0,
        adversary_hold_streak: 0,
    }
}

/// Simulates the pursuit plan aimed at the ball's position after `t` cycles:
/// one turn toward it unless already facing it, then full-power dashes.
/// Returns the agent-ball distance after `t` cycles.
pub fn chase_distance(agent: &AgentBody, ball: &BallState, t: u64, params: &PhysicsParams) -> f64 {
    let mut target = *ball;
    for _ in 0..t {
        target.position += target.velocity;
        target.velocity = target.velocity * params.ball_decay;
    }
    let mut world = chase_world(*agent, *ball);
    let mut rng = rng(0);
    let error = signed_angle(bearing(agent.position, target.position) - agent.body_angle);
    for i in 0..t {
        let cmd = if i == 0 && error.abs() > TURN_THRESHOLD {
            Command::Turn(error)
        } else {
            Command::Dash(100.0)
        };
        step(&mut world, cmd, Command::Idle, params, &mut rng);
    }
    world.dribbler.position.distance(world.ball.position)
}

/// First cycle at which the pursuit plan ends within reach, if any up to
/// `horizon`.
pub fn first_feasible(agent: &AgentBody, ball: &BallState, horizon: u64, params: &PhysicsParams) -> Option<u64> {
    if agent.position.distance(ball.position) < params.kickable_distance {
        return Some(0);
    }
    (1..=horizon).find(|&t| chase_distance(agent, ball, t, params) < params.kickable_distance)
}

/// Termination rules restated from the game description.
pub fn expected_outcome(world: &WorldState, field: &FieldSpec, params: &PhysicsParams) -> Option<EpisodeOutcome> {
    let hw = field.width / 2.0;
    let hh = field.height / 2.0;
    let reach = params.kickable_distance;
    let ball = world.ball.position;
    let outcome = |cause: TerminationCause| EpisodeOutcome {
        winner: cause.winner(),
        cause,
        steps: world.step_index,
    };
    if world.adversary_hold_streak >= 2 {
        return Some(outcome(TerminationCause::AdversaryHold));
    }
    if ball.x > hw {
        let d = world.dribbler.position.distance(ball);
        let a = world.adversary.position.distance(ball);
        if d < reach || a < reach {
            // the nearer of two possessors takes it; an exact tie goes to the dribbler
            let dribbler_first = d < reach && (a >= reach || d <= a);
            return Some(outcome(if dribbler_first {
                TerminationCause::RightLineDribbler
            } else {
                TerminationCause::RightLineAdversary
            }));
        }
    } else if ball.x < -hw || ball.y < -hh || ball.y > hh {
        return Some(outcome(TerminationCause::LeftTopBottomOut));
    }
    if world.step_index >= params.max_episode_steps {
        return Some(outcome(TerminationCause::Timeout));
    }
    None
}

/// Near the possession boundary half of the time, anywhere otherwise.
pub fn around<R: Rng>(rng: &mut R, centre: Vec2, spread: f64) -> Vec2 {
    let d = match rng.gen_range(0..4) {
        0 => 1.085,
        1 => 1.085 + rng.gen_range(-1e-3..1e-3),
        _ => rng.gen_range(0.0..spread),
    };
    centre + Vec2::from_angle(rng.gen_range(0.0..360.0)) * d
}

/// Optimal action values of a small deterministic MDP by value iteration.
/// `transition(s, a)` returns `(next, reward)`, `None` being terminal.
pub fn value_iteration(
    states: usize,
    actions: usize,
    gamma: f64,
    transition: impl Fn(usize, usize) -> (Option<usize>, f64),
) -> Vec<Vec<f64>> {
    let mut q = vec![vec![0.0; actions]; states];
    loop {
        let v: Vec<f64> = q
            .iter()
            .map(|row| row.iter().copied().fold(f64::MIN, f64::max))
            .collect();
        let mut change: f64 = 0.0;
        for (s, row) in q.iter_mut().enumerate() {
            for (a, value) in row.iter_mut().enumerate() {
                let (next, r) = transition(s, a);
                let target = r + next.map_or(0.0, |n| gamma * v[n]);
                change = change.max((target - *value).abs());
                *value = target;
            }
        }
        if change < 1e-14 {
            return q;
        }
    }
}
