//! Macro-actions compiled down to primitive commands, and the interception
//! routine shared by both players.

use thiserror::Error;

use crate::env::{AgentBody, AgentId, BallState, Command, PhysicsParams, WorldState};
use crate::geometry::{bearing, signed_angle, Vec2};

/// Distance from the holder at which HoldBall settles the ball.
pub const HOLD_DISTANCE: f64 = 0.7;

/// Heading errors up to this many degrees are tolerated without turning.
pub const TURN_THRESHOLD: f64 = 10.0;

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum SkillError {
    #[error("{0:?} does not have possession of the ball")]
    NoPossession(AgentId),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MacroAction {
    HoldBall,
    /// Turn toward global angle `theta`, kick the ball so it rolls `k`
    /// meters, then chase it.
    Dribble {
        theta: f64,
        k: f64,
    },
}

impl MacroAction {
    /// The dribbler's action set, in action-index order.
    pub const ALL: [MacroAction; 5] = [
        MacroAction::HoldBall,
        MacroAction::Dribble { theta: 30.0, k: 5.0 },
        MacroAction::Dribble { theta: 330.0, k: 5.0 },
        MacroAction::Dribble { theta: 0.0, k: 5.0 },
        MacroAction::Dribble { theta: 0.0, k: 10.0 },
    ];

    pub const COUNT: usize = Self::ALL.len();

    pub fn from_index(index: usize) -> MacroAction {
        Self::ALL[index]
    }

    pub fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|a| *a == self)
            .expect("macro-action outside the dribbler's action set")
    }
}

impl std::fmt::Display for MacroAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MacroAction::HoldBall => write!(f, "HoldBall"),
            MacroAction::Dribble { theta, k } => write!(f, "Dribble({theta}, {k})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacroPhase {
    /// Ball not yet kicked; a turn may still be pending.
    Turning,
    /// The kick was issued on the last cycle.
    BallReleased,
    Intercepting,
    Done,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MacroStatus {
    pub phase: MacroPhase,
    pub steps_elapsed: u64,
}

/// Initial ball speed for a kick that rolls `k` meters in total.
pub fn dribble_kick_speed(k: f64, params: &PhysicsParams) -> f64 {
    k * (1.0 - params.ball_decay)
}

pub fn dribble_kick_power(k: f64, params: &PhysicsParams) -> f64 {
    dribble_kick_speed(k, params) / params.kick_power_rate
}

/// Command that settles the ball [`HOLD_DISTANCE`] meters from `holder`,
/// directly away from the opponent.
pub fn hold_ball(world: &WorldState, holder: AgentId, params: &PhysicsParams) -> Result<Command, SkillError> {
    if !world.possesses(holder, params) {
        return Err(SkillError::NoPossession(holder));
    }
    Ok(Command::Hold {
        distance: HOLD_DISTANCE,
    })
}

/// Validates the start of a dribble. The kick itself is issued by
/// [`MacroExecutor`].
pub fn start_dribble(world: &WorldState, params: &PhysicsParams) -> Result<MacroStatus, SkillError> {
    if !world.possesses(AgentId::Dribbler, params) {
        return Err(SkillError::NoPossession(AgentId::Dribbler));
    }
    Ok(MacroStatus {
        phase: MacroPhase::Turning,
        steps_elapsed: 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Intercept {
    pub point: Vec2,
    pub steps: u64,
}

/// Earliest cycle at which `agent` can be within kickable distance of the
/// ball, assuming it turns once toward the predicted ball position (unless it
/// already faces it within [`TURN_THRESHOLD`]) and then dashes at full power.
///
/// Ball and agent motion are predicted in closed form: the ball's position
/// after `t` cycles is `p + v (1 - ρ^t) / (1 - ρ)`, and the agent's position is
/// its own drift plus the distance covered by `n` dashes from rest.
pub fn intercept_point(agent: &AgentBody, ball: &BallState, params: &PhysicsParams) -> Intercept {
    let reach = params.kickable_distance;
    let rho = params.ball_decay;
    let max_steps = params.max_episode_steps;

    if agent.position.distance(ball.position) < reach {
        return Intercept {
            point: ball.position,
            steps: 0,
        };
    }

    // dash_reach[n]: distance covered by n full-power dashes from rest
    let mut dash_reach = vec![0.0];
    let mut dash_speed = 0.0;
    let mut stamina = agent.stamina.max(0.0);
    let mut rho_t = 1.0;
    let mut drift = Vec2::ZERO;
    let mut drift_velocity = agent.velocity;

    for t in 1..=max_steps {
        let power = stamina.min(100.0);
        dash_speed = (dash_speed + power * params.dash_power_rate).min(params.player_max_speed);
        dash_reach.push(dash_reach[dash_reach.len() - 1] + dash_speed);
        dash_speed *= params.player_decay;
        stamina -= power;

        rho_t *= rho;
        let predicted = ball.position + ball.velocity * ((1.0 - rho_t) / (1.0 - rho));
        drift += drift_velocity;
        drift_velocity = drift_velocity * params.player_decay;

        let heading = bearing(agent.position, predicted);
        let error = signed_angle(heading - agent.body_angle);
        let (direction, dashes) = if error.abs() > TURN_THRESHOLD {
            (Vec2::from_angle(heading), t - 1)
        } else {
            (Vec2::from_angle(agent.body_angle), t)
        };
        let arrival = agent.position + drift + direction * dash_reach[dashes as usize];
        if arrival.distance(predicted) < reach {
            return Intercept {
                point: predicted,
                steps: t,
            };
        }

        // Once stamina is gone the remaining motion of both bodies is a
        // convergent series; stop when it can no longer close the gap.
        if stamina <= 0.0 {
            let decay = params.player_decay;
            let agent_left = (dash_speed + drift_velocity.norm()) / (1.0 - decay);
            let ball_left = ball.velocity.norm() * rho_t / (1.0 - rho);
            let centre = agent.position + drift;
            let gap = centre.distance(predicted) - dash_reach[dash_reach.len() - 1];
            if gap - agent_left - ball_left > reach {
                break;
            }
        }
    }

    Intercept {
        point: ball.position + ball.velocity * (1.0 / (1.0 - rho)),
        steps: max_steps,
    }
}

/// Turn toward the interception point when the heading error exceeds the
/// threshold, otherwise dash with whatever stamina allows.
pub fn move_to_intercept(world: &WorldState, id: AgentId, params: &PhysicsParams) -> Command {
    let agent = world.agent(id);
    let target = intercept_point(agent, &world.ball, params).point;
    if agent.position.distance(target) < 1e-9 {
        return Command::Idle;
    }
    let error = signed_angle(bearing(agent.position, target) - agent.body_angle);
    if error.abs() > TURN_THRESHOLD {
        Command::Turn(error)
    } else {
        Command::Dash(agent.stamina.clamp(0.0, 100.0))
    }
}

/// Runs one macro-action for the dribbler, one primitive per cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MacroExecutor {
    action: MacroAction,
    status: MacroStatus,
    turned: bool,
}

impl MacroExecutor {
    pub fn new(action: MacroAction) -> Self {
        MacroExecutor {
            action,
            status: MacroStatus {
                phase: MacroPhase::Turning,
                steps_elapsed: 0,
            },
            turned: false,
        }
    }

    pub fn action(&self) -> MacroAction {
        self.action
    }

    pub fn status(&self) -> MacroStatus {
        self.status
    }

    pub fn is_done(&self) -> bool {
        self.status.phase == MacroPhase::Done
    }

    /// Primitive for the coming cycle.
    pub fn command(&mut self, world: &WorldState, params: &PhysicsParams) -> Command {
        match self.action {
            // a hold without possession degrades to a no-op cycle
            MacroAction::HoldBall => hold_ball(world, AgentId::Dribbler, params).unwrap_or(Command::Idle),
            MacroAction::Dribble { theta, k } => match self.status.phase {
                MacroPhase::Turning => {
                    if start_dribble(world, params).is_err() {
                        self.status.phase = MacroPhase::Intercepting;
                        return move_to_intercept(world, AgentId::Dribbler, params);
                    }
                    let error = signed_angle(theta - world.dribbler.body_angle);
                    if error.abs() > TURN_THRESHOLD && !self.turned {
                        self.turned = true;
                        Command::Turn(error)
                    } else {
                        self.status.phase = MacroPhase::BallReleased;
                        Command::Kick {
                            power: dribble_kick_power(k, params),
                            direction: theta,
                        }
                    }
                }
                MacroPhase::BallReleased | MacroPhase::Intercepting => {
                    move_to_intercept(world, AgentId::Dribbler, params)
                }
                MacroPhase::Done => Command::Idle,
            },
        }
    }

    /// Updates the phase after the world has advanced one cycle.
    pub fn observe(&mut self, world: &WorldState, params: &PhysicsParams) {
        self.status.steps_elapsed += 1;
        self.status.phase = match (self.action, self.status.phase) {
            (MacroAction::HoldBall, _) => MacroPhase::Done,
            (_, MacroPhase::BallReleased) => MacroPhase::Intercepting,
            (_, MacroPhase::Intercepting) if world.possesses(AgentId::Dribbler, params) => MacroPhase::Done,
            (_, phase) => phase,
        };
    }
}
