//! Fixed opponent policy: hold the ball when in possession, otherwise run to
//! the interception point.

use crate::env::{AgentId, Command, PhysicsParams, WorldState};
#[cfg(test)]
use crate::skills::HOLD_DISTANCE;
use crate::skills::{hold_ball, move_to_intercept};

pub fn adversary_decide(world: &WorldState, params: &PhysicsParams) -> Command {
    hold_ball(world, AgentId::Adversary, params)
        .unwrap_or_else(|_| move_to_intercept(world, AgentId::Adversary, params))
}
