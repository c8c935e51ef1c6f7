use rand::Rng;

use crate::adversary::adversary_decide;
use crate::cmac::CmacNetwork;
use crate::env::{check_termination, step, AgentId, EpisodeOutcome, FieldSpec, PhysicsParams, WorldState};
use crate::features::extract_features;
use crate::skills::{move_to_intercept, MacroAction, MacroExecutor};

use super::{rl_end_episode, rl_start_episode, rl_step, terminal_reward, SarsaParams};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpisodeSettings {
    pub field: FieldSpec,
    pub physics: PhysicsParams,
    pub sarsa: SarsaParams,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpisodeResult {
    pub outcome: EpisodeOutcome,
    /// Number of decisions taken (the start plus every SMDP step).
    pub smdp_steps: u64,
    pub sim_steps: u64,
    /// `(simulator step, action index)` at every decision point.
    pub decisions: Vec<(u64, usize)>,
    /// TD errors in the order they were applied, the terminal one last.
    pub td_errors: Vec<f64>,
    pub final_world: WorldState,
}

/// Plays one episode from `world` with the dribbler driven by Sarsa over
/// `net`. A new decision is taken whenever the running macro-action has
/// finished and the dribbler holds the ball; if a macro finishes without
/// possession the dribbler chases the ball until it has it again.
///
/// `physics_rng` feeds action noise, `policy_rng` feeds exploration.
pub fn run_episode<P: Rng + ?Sized, Q: Rng + ?Sized>(
    mut world: WorldState,
    net: &mut CmacNetwork,
    settings: &EpisodeSettings,
    physics_rng: &mut P,
    policy_rng: &mut Q,
) -> EpisodeResult {
    let field = &settings.field;
    let physics = &settings.physics;
    let sarsa = &settings.sarsa;

    let s0 = extract_features(&world, field);
    let mut learner = rl_start_episode(net, &s0, sarsa, policy_rng);
    let mut decisions = vec![(world.step_index, learner.last_action)];
    let mut td_errors = Vec::new();
    let mut running = MacroExecutor::new(MacroAction::from_index(learner.last_action));

    loop {
        let dribbler_cmd = if running.is_done() {
            move_to_intercept(&world, AgentId::Dribbler, physics)
        } else {
            running.command(&world, physics)
        };
        let adversary_cmd = adversary_decide(&world, physics);
        step(&mut world, dribbler_cmd, adversary_cmd, physics, physics_rng);
        if !running.is_done() {
            running.observe(&world, physics);
        }

        if let Some(outcome) = check_termination(&world, field, physics) {
            td_errors.push(rl_end_episode(learner, net, terminal_reward(outcome.winner), sarsa));
            return EpisodeResult {
                outcome,
                smdp_steps: decisions.len() as u64,
                sim_steps: world.step_index,
                decisions,
                td_errors,
                final_world: world,
            };
        }

        if running.is_done() && world.possesses(AgentId::Dribbler, physics) {
            let s = extract_features(&world, field);
            let action = rl_step(&mut learner, net, &s, 0.0, sarsa, policy_rng);
            td_errors.push(learner.last_td_error.expect("set by rl_step"));
            decisions.push((world.step_index, action));
            running = MacroExecutor::new(MacroAction::from_index(action));
        }
    }
}
