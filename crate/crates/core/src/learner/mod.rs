//! Linear gradient-descent Sarsa over a [`CmacNetwork`], split into the three
//! episode routines: start, step and end.
//!
//! The routines are generic over the number of actions so the same code can
//! be checked against small tabular problems.

mod episode;

use rand::Rng;
use thiserror::Error;

use crate::cmac::{CmacNetwork, ReceptiveFieldKey};
use crate::env::Winner;
use crate::features::StateFeatures;

pub use episode::{run_episode, EpisodeResult, EpisodeSettings};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid Sarsa parameter {name}: {value}")]
pub struct SarsaParamError {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SarsaParams {
    pub epsilon: f64,
    pub alpha: f64,
    /// Discount rate.
    pub lambda: f64,
}

impl Default for SarsaParams {
    fn default() -> Self {
        SarsaParams {
            epsilon: 0.01,
            alpha: 0.125,
            lambda: 1.0,
        }
    }
}

impl SarsaParams {
    /// Greedy, non-learning execution.
    pub fn frozen() -> Self {
        SarsaParams {
            epsilon: 0.0,
            alpha: 0.0,
            lambda: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), SarsaParamError> {
        let check = |name, value: f64, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(SarsaParamError { name, value })
            }
        };
        check("epsilon", self.epsilon, (0.0..=1.0).contains(&self.epsilon))?;
        check("alpha", self.alpha, self.alpha >= 0.0 && self.alpha.is_finite())?;
        check("lambda", self.lambda, (0.0..=1.0).contains(&self.lambda))
    }
}

/// +1 when the dribbler wins, -1 otherwise. Intermediate rewards are 0.
pub fn terminal_reward(winner: Winner) -> f64 {
    match winner {
        Winner::Dribbler => 1.0,
        Winner::Adversary => -1.0,
    }
}

/// What the learner remembers between decision points.
#[derive(Clone, Debug, PartialEq)]
pub struct LearnerState {
    pub last_action: usize,
    pub last_state: StateFeatures,
    pub last_excited: Vec<ReceptiveFieldKey>,
    pub q_last: f64,
    /// TD error applied by the most recent update, if any.
    pub last_td_error: Option<f64>,
}

/// Index of the largest value; ties go to the lowest index.
pub fn greedy_action(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = i;
        }
    }
    best
}

/// ε-greedy choice. The random branch draws uniformly over every action,
/// the greedy one included.
pub fn epsilon_greedy<R: Rng + ?Sized>(q: &[f64], epsilon: f64, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    if u < epsilon {
        rng.gen_range(0..q.len())
    } else {
        greedy_action(q)
    }
}

fn action_values(net: &CmacNetwork, s: &StateFeatures) -> Vec<f64> {
    (0..net.num_actions()).map(|a| net.q_value(s, a)).collect()
}

pub fn rl_start_episode<R: Rng + ?Sized>(
    net: &CmacNetwork,
    s0: &StateFeatures,
    params: &SarsaParams,
    rng: &mut R,
) -> LearnerState {
    let q = action_values(net, s0);
    let action = epsilon_greedy(&q, params.epsilon, rng);
    LearnerState {
        last_action: action,
        last_state: *s0,
        last_excited: net.excite(s0, action),
        q_last: q[action],
        last_td_error: None,
    }
}

/// One SMDP step: completes the TD error with the newly chosen action's
/// value, updates the previous action's fields, then re-reads the chosen
/// action's value from the updated weights.
pub fn rl_step<R: Rng + ?Sized>(
    learner: &mut LearnerState,
    net: &mut CmacNetwork,
    s: &StateFeatures,
    reward: f64,
    params: &SarsaParams,
    rng: &mut R,
) -> usize {
    let mut delta = reward - learner.q_last;
    let q = action_values(net, s);
    let current = epsilon_greedy(&q, params.epsilon, rng);
    delta += params.lambda * q[current];
    net.apply_delta(&learner.last_excited, params.alpha, delta);

    let excited = net.excite(s, current);
    learner.q_last = net.response(&excited);
    learner.last_action = current;
    learner.last_state = *s;
    learner.last_excited = excited;
    learner.last_td_error = Some(delta);
    current
}

/// Final update toward the terminal reward; terminal states are worth 0.
/// Returns the TD error.
pub fn rl_end_episode(learner: LearnerState, net: &mut CmacNetwork, reward: f64, params: &SarsaParams) -> f64 {
    let delta = reward - learner.q_last;
    net.apply_delta(&learner.last_excited, params.alpha, delta);
    delta
}
