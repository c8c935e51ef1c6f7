//! The five state variables the dribbler learns from.

use crate::env::{FieldSpec, WorldState};
use crate::geometry::{bearing, normalize_angle};

/// Distance from the top or bottom line under which `pos_y` flags the
/// dribbler as close to it.
pub const SIDELINE_MARGIN: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateFeatures {
    /// 1 near the top line, -1 near the bottom line, 0 otherwise.
    pub pos_y: i8,
    /// Dribbler body angle, `[0, 360)`.
    pub ang_dribbler: f64,
    /// Bearing of the adversary relative to the dribbler's body, `[0, 360)`.
    pub ang_dribbler_adversary: f64,
    /// Global bearing from the ball to the adversary, `[0, 360)`.
    pub ang_ball_adversary: f64,
    pub dist_ball_adversary: f64,
}

impl StateFeatures {
    pub const COUNT: usize = 5;

    /// Continuous variables in their fixed order, after the categorical
    /// `pos_y`.
    pub fn continuous(&self) -> [f64; 4] {
        [
            self.ang_dribbler,
            self.ang_dribbler_adversary,
            self.ang_ball_adversary,
            self.dist_ball_adversary,
        ]
    }
}

pub fn extract_features(world: &WorldState, field: &FieldSpec) -> StateFeatures {
    let d = &world.dribbler;
    let adversary = world.adversary.position;
    let ball = world.ball.position;

    let y = d.position.y;
    let pos_y = if y < -field.half_height() + SIDELINE_MARGIN {
        1
    } else if y > field.half_height() - SIDELINE_MARGIN {
        -1
    } else {
        0
    };

    StateFeatures {
        pos_y,
        ang_dribbler: normalize_angle(d.body_angle),
        ang_dribbler_adversary: normalize_angle(bearing(d.position, adversary) - d.body_angle),
        ang_ball_adversary: bearing(ball, adversary),
        dist_ball_adversary: ball.distance(adversary),
    }
}
