//! Deterministic 2D soccer micro-simulator.
//!
//! One call to [`step`] advances the world by one simulated cycle. Both agents
//! submit a single primitive [`Command`]; ball-affecting commands are resolved
//! first against possession at the start of the cycle, then bodies move, then
//! the ball moves. Perception is global and exact; only actions are noisy.

use rand::Rng;
use thiserror::Error;

use crate::geometry::{bearing, normalize_angle, Vec2};

/// Distance beyond the kickable radius that the adversary must keep from the
/// ball when an episode starts.
pub const SPAWN_MARGIN: f64 = 0.5;

/// Lateral offset of the ball from the dribbler at kick-off.
pub const START_BALL_OFFSET: f64 = 0.5;

/// Number of consecutive cycles of adversary possession that ends an episode.
pub const ADVERSARY_HOLD_STEPS: u8 = 2;

/// Episodes between two stamina restorations by the coach.
pub const STAMINA_RESTORE_PERIOD: u64 = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("{0:?} tried to kick without possession of the ball")]
    KickWithoutPossession(AgentId),
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSpec {
    pub width: f64,
    pub height: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec {
            width: 20.0,
            height: 20.0,
        }
    }
}

impl FieldSpec {
    pub fn validate(&self) -> Result<(), EnvError> {
        positive("field.width", self.width)?;
        positive("field.height", self.height)
    }

    pub fn diagonal(&self) -> f64 {
        self.width.hypot(self.height)
    }

    pub fn half_width(&self) -> f64 {
        self.width / 2.0
    }

    pub fn half_height(&self) -> f64 {
        self.height / 2.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicsParams {
    pub ball_decay: f64,
    pub player_decay: f64,
    /// m/step
    pub player_max_speed: f64,
    /// m/step
    pub ball_max_speed: f64,
    /// Ball speed (m/step) per unit of kick power.
    pub kick_power_rate: f64,
    /// Player acceleration (m/step²) per unit of dash power.
    pub dash_power_rate: f64,
    pub kickable_distance: f64,
    /// Relative magnitude noise; kick directions also get ±`noise * 30°`.
    pub action_noise: f64,
    pub stamina_max: f64,
    pub max_episode_steps: u64,
    /// Body radius of each player; two bodies never overlap. Zero disables
    /// collisions.
    pub player_size: f64,
    /// A turn command of `a` degrees rotates a body moving at speed `v` by
    /// `a / (1 + inertia_moment * v)`.
    pub inertia_moment: f64,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        PhysicsParams {
            ball_decay: 0.94,
            player_decay: 0.4,
            player_max_speed: 1.05,
            ball_max_speed: 3.0,
            kick_power_rate: 0.027,
            dash_power_rate: 0.006,
            kickable_distance: 1.085,
            action_noise: 0.05,
            stamina_max: 4000.0,
            max_episode_steps: 1000,
            player_size: 0.3,
            inertia_moment: 5.0,
        }
    }
}

impl PhysicsParams {
    /// Same parameters with action noise switched off.
    pub fn noiseless(mut self) -> Self {
        self.action_noise = 0.0;
        self
    }

    pub fn validate(&self) -> Result<(), EnvError> {
        unit_interval("ball_decay", self.ball_decay)?;
        unit_interval("player_decay", self.player_decay)?;
        unit_interval("kick_power_rate", self.kick_power_rate)?;
        unit_interval("dash_power_rate", self.dash_power_rate)?;
        positive("player_max_speed", self.player_max_speed)?;
        positive("ball_max_speed", self.ball_max_speed)?;
        positive("kickable_distance", self.kickable_distance)?;
        if !(0.0..=1.0).contains(&self.action_noise) {
            return Err(invalid("action_noise", "must lie in [0, 1]"));
        }
        if self.stamina_max.is_nan() || self.stamina_max < 0.0 {
            return Err(invalid("stamina_max", "must be non-negative"));
        }
        if !(self.player_size >= 0.0 && self.player_size.is_finite()) {
            return Err(invalid("player_size", "must be non-negative"));
        }
        if !(self.inertia_moment >= 0.0 && self.inertia_moment.is_finite()) {
            return Err(invalid("inertia_moment", "must be non-negative"));
        }
        if self.max_episode_steps == 0 {
            return Err(invalid("max_episode_steps", "must be at least 1"));
        }
        Ok(())
    }
}

fn invalid(name: &'static str, reason: &str) -> EnvError {
    EnvError::InvalidParameter {
        name,
        reason: reason.to_string(),
    }
}

fn positive(name: &'static str, v: f64) -> Result<(), EnvError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, "must be positive"))
    }
}

fn unit_interval(name: &'static str, v: f64) -> Result<(), EnvError> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(invalid(name, "must lie in (0, 1]"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AgentId {
    Dribbler,
    Adversary,
}

impl AgentId {
    pub fn opponent(self) -> AgentId {
        match self {
            AgentId::Dribbler => AgentId::Adversary,
            AgentId::Adversary => AgentId::Dribbler,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgentBody {
    pub position: Vec2,
    pub velocity: Vec2,
    /// Degrees in `[0, 360)`.
    pub body_angle: f64,
    pub stamina: f64,
}

impl AgentBody {
    pub fn at_rest(position: Vec2, body_angle: f64, stamina: f64) -> Self {
        AgentBody {
            position,
            velocity: Vec2::ZERO,
            body_angle: normalize_angle(body_angle),
            stamina,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallState {
    pub position: Vec2,
    pub velocity: Vec2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorldState {
    pub dribbler: AgentBody,
    pub adversary: AgentBody,
    pub ball: BallState,
    pub step_index: u64,
    /// Consecutive most-recent cycles ending with adversary possession,
    /// saturating at [`ADVERSARY_HOLD_STEPS`].
    pub adversary_hold_streak: u8,
}

impl WorldState {
    pub fn agent(&self, id: AgentId) -> &AgentBody {
        match id {
            AgentId::Dribbler => &self.dribbler,
            AgentId::Adversary => &self.adversary,
        }
    }

    pub fn agent_mut(&mut self, id: AgentId) -> &mut AgentBody {
        match id {
            AgentId::Dribbler => &mut self.dribbler,
            AgentId::Adversary => &mut self.adversary,
        }
    }

    pub fn possesses(&self, id: AgentId, params: &PhysicsParams) -> bool {
        has_possession(self.agent(id), &self.ball, params)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    Dribbler,
    Adversary,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Dribbler => "dribbler",
            Winner::Adversary => "adversary",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TerminationCause {
    RightLineDribbler,
    RightLineAdversary,
    LeftTopBottomOut,
    AdversaryHold,
    Timeout,
}

impl TerminationCause {
    pub const ALL: [TerminationCause; 5] = [
        TerminationCause::RightLineDribbler,
        TerminationCause::RightLineAdversary,
        TerminationCause::LeftTopBottomOut,
        TerminationCause::AdversaryHold,
        TerminationCause::Timeout,
    ];

    pub fn winner(self) -> Winner {
        match self {
            TerminationCause::RightLineDribbler => Winner::Dribbler,
            _ => Winner::Adversary,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TerminationCause::RightLineDribbler => "right_line_dribbler",
            TerminationCause::RightLineAdversary => "right_line_adversary",
            TerminationCause::LeftTopBottomOut => "left_top_bottom_out",
            TerminationCause::AdversaryHold => "adversary_hold",
            TerminationCause::Timeout => "timeout",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpisodeOutcome {
    pub winner: Winner,
    pub cause: TerminationCause,
    pub steps: u64,
}

impl EpisodeOutcome {
    fn new(cause: TerminationCause, steps: u64) -> Self {
        EpisodeOutcome {
            winner: cause.winner(),
            cause,
            steps,
        }
    }
}

/// One primitive action per agent per cycle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Command {
    Idle,
    /// Relative turn in degrees, clamped to `[-180, 180]`.
    Turn(f64),
    /// Dash power in `[0, 100]`.
    Dash(f64),
    /// Kick power in `[0, 100]` toward a global direction.
    Kick {
        power: f64,
        direction: f64,
    },
    /// Stop the ball and settle it `distance` meters from the holder, on the
    /// side facing away from where the opponent is expected to be after
    /// coasting one cycle.
    Hold {
        distance: f64,
    },
}

impl Command {
    fn touches_ball(&self) -> bool {
        matches!(self, Command::Kick { .. } | Command::Hold { .. })
    }
}

/// Multiplicative noise `1 + U(-noise, noise)`. Always draws once so that the
/// random stream does not depend on whether noise is enabled.
pub fn noise_factor<R: Rng + ?Sized>(rng: &mut R, noise: f64) -> f64 {
    let u: f64 = rng.gen();
    1.0 + noise * (2.0 * u - 1.0)
}

fn direction_noise<R: Rng + ?Sized>(rng: &mut R, noise: f64) -> f64 {
    let u: f64 = rng.gen();
    noise * 30.0 * (2.0 * u - 1.0)
}

pub fn has_possession(agent: &AgentBody, ball: &BallState, params: &PhysicsParams) -> bool {
    agent.position.distance(ball.position) < params.kickable_distance
}

pub fn apply_turn(agent: &AgentBody, angle: f64) -> AgentBody {
    let angle = angle.clamp(-180.0, 180.0);
    AgentBody {
        body_angle: normalize_angle(agent.body_angle + angle),
        ..*agent
    }
}

/// Rotation actually achieved by a turn command, reduced by the body's speed.
pub fn effective_turn(agent: &AgentBody, angle: f64, params: &PhysicsParams) -> f64 {
    angle.clamp(-180.0, 180.0) / (1.0 + params.inertia_moment * agent.velocity.norm())
}

/// Moves a body by its velocity and applies player decay.
pub fn drift(agent: &AgentBody, params: &PhysicsParams) -> AgentBody {
    AgentBody {
        position: agent.position + agent.velocity,
        velocity: agent.velocity * params.player_decay,
        ..*agent
    }
}

pub fn apply_dash<R: Rng + ?Sized>(agent: &AgentBody, power: f64, rng: &mut R, params: &PhysicsParams) -> AgentBody {
    let effective = power.clamp(0.0, 100.0).min(agent.stamina.max(0.0));
    let accel = effective * params.dash_power_rate * noise_factor(rng, params.action_noise);
    let velocity = (agent.velocity + Vec2::from_angle(agent.body_angle) * accel).clamp_norm(params.player_max_speed);
    AgentBody {
        position: agent.position + velocity,
        velocity: velocity * params.player_decay,
        stamina: agent.stamina - effective,
        ..*agent
    }
}

/// Sets the ball velocity from a kick. Only the ball velocity changes; the
/// ball moves on the next [`step_ball`].
pub fn apply_kick<R: Rng + ?Sized>(
    world: &mut WorldState,
    kicker: AgentId,
    power: f64,
    direction: f64,
    rng: &mut R,
    params: &PhysicsParams,
) -> Result<(), EnvError> {
    if !world.possesses(kicker, params) {
        return Err(EnvError::KickWithoutPossession(kicker));
    }
    let speed = power.clamp(0.0, 100.0) * params.kick_power_rate * noise_factor(rng, params.action_noise);
    let direction = direction + direction_noise(rng, params.action_noise);
    world.ball.velocity = (Vec2::from_angle(direction) * speed).clamp_norm(params.ball_max_speed);
    Ok(())
}

pub fn step_ball(ball: &BallState, params: &PhysicsParams) -> BallState {
    BallState {
        position: ball.position + ball.velocity,
        velocity: ball.velocity * params.ball_decay,
    }
}

/// Randomized part of a fresh episode. The dribbler and ball always start from
/// the same spot, so the adversary's placement is the whole configuration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialConfig {
    pub adversary_position: Vec2,
    pub adversary_angle: f64,
}

impl InitialConfig {
    pub fn dribbler_start(field: &FieldSpec) -> Vec2 {
        Vec2::new(-field.width / 4.0, 0.0)
    }

    pub fn ball_start(field: &FieldSpec) -> Vec2 {
        Self::dribbler_start(field) + Vec2::new(START_BALL_OFFSET, 0.0)
    }

    /// Uniform adversary placement, rejection-sampled away from the ball.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, field: &FieldSpec, params: &PhysicsParams) -> Self {
        let ball = Self::ball_start(field);
        let min_dist = params.kickable_distance + SPAWN_MARGIN;
        loop {
            let p = Vec2::new(
                rng.gen_range(-field.half_width()..field.half_width()),
                rng.gen_range(-field.half_height()..field.half_height()),
            );
            let angle = rng.gen_range(0.0..360.0);
            if p.distance(ball) >= min_dist {
                return InitialConfig {
                    adversary_position: p,
                    adversary_angle: angle,
                };
            }
        }
    }

    pub fn to_world(&self, field: &FieldSpec, stamina: [f64; 2]) -> WorldState {
        WorldState {
            dribbler: AgentBody::at_rest(Self::dribbler_start(field), 0.0, stamina[0]),
            adversary: AgentBody::at_rest(self.adversary_position, self.adversary_angle, stamina[1]),
            ball: BallState {
                position: Self::ball_start(field),
                velocity: Vec2::ZERO,
            },
            step_index: 0,
            adversary_hold_streak: 0,
        }
    }
}

/// Coach reset. `stamina` carries over from the previous episode as
/// `[dribbler, adversary]`.
pub fn reset_episode<R: Rng + ?Sized>(
    rng: &mut R,
    field: &FieldSpec,
    params: &PhysicsParams,
    stamina: [f64; 2],
) -> WorldState {
    InitialConfig::sample(rng, field, params).to_world(field, stamina)
}

/// What happened during one cycle, beyond the state change itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepEvents {
    /// Agents whose kick or hold was rejected for lack of possession.
    pub rejected: [bool; 2],
    /// Both agents touched the ball; a coin flip picked the effective one.
    pub contested: bool,
}

fn index(id: AgentId) -> usize {
    match id {
        AgentId::Dribbler => 0,
        AgentId::Adversary => 1,
    }
}

/// Pushes overlapping players apart symmetrically along the line joining
/// them and reverses their velocities at a tenth of the magnitude.
fn separate_bodies(world: &mut WorldState, params: &PhysicsParams) {
    let min_gap = 2.0 * params.player_size;
    let offset = world.adversary.position - world.dribbler.position;
    let gap = offset.norm();
    if min_gap <= 0.0 || gap >= min_gap {
        return;
    }
    let axis = if gap > 1e-12 {
        offset * (1.0 / gap)
    } else {
        Vec2::from_angle(world.dribbler.body_angle + 180.0)
    };
    let push = axis * (0.5 * (min_gap - gap));
    world.dribbler.position = world.dribbler.position - push;
    world.adversary.position += push;
    world.dribbler.velocity = world.dribbler.velocity * -0.1;
    world.adversary.velocity = world.adversary.velocity * -0.1;
}

/// Advances the world by one cycle.
pub fn step<R: Rng + ?Sized>(
    world: &mut WorldState,
    dribbler_cmd: Command,
    adversary_cmd: Command,
    params: &PhysicsParams,
    rng: &mut R,
) -> StepEvents {
    let mut events = StepEvents::default();
    let cmds = [(AgentId::Dribbler, dribbler_cmd), (AgentId::Adversary, adversary_cmd)];

    let mut touching: Vec<(AgentId, Command)> = Vec::with_capacity(2);
    for &(id, cmd) in &cmds {
        if cmd.touches_ball() {
            if world.possesses(id, params) {
                touching.push((id, cmd));
            } else {
                events.rejected[index(id)] = true;
            }
        }
    }
    let ball_cmd = match touching.len() {
        0 => None,
        1 => Some(touching[0]),
        _ => {
            events.contested = true;
            let pick = usize::from(rng.gen_bool(0.5));
            Some(touching[pick])
        }
    };

    if let Some((kicker, Command::Kick { power, direction })) = ball_cmd {
        apply_kick(world, kicker, power, direction, rng, params).expect("possession checked above");
    }

    // where each body would be after coasting one cycle, as seen before moving
    let foreseen = [world.dribbler, world.adversary].map(|b| b.position + b.velocity);
    for &(id, cmd) in &cmds {
        let body = world.agent(id);
        let moved = match cmd {
            Command::Dash(power) => apply_dash(body, power, rng, params),
            Command::Turn(angle) => drift(&apply_turn(body, effective_turn(body, angle, params)), params),
            _ => drift(body, params),
        };
        *world.agent_mut(id) = moved;
    }
    separate_bodies(world, params);

    world.ball = match ball_cmd {
        Some((holder, Command::Hold { distance })) => {
            let me = world.agent(holder);
            let them = foreseen[index(holder.opponent())];
            let away = if me.position.distance(them) > 1e-12 {
                bearing(them, me.position)
            } else {
                me.body_angle
            };
            let distance = distance * noise_factor(rng, params.action_noise);
            let direction = away + direction_noise(rng, params.action_noise);
            BallState {
                position: me.position + Vec2::from_angle(direction) * distance,
                velocity: Vec2::ZERO,
            }
        }
        _ => step_ball(&world.ball, params),
    };

    world.step_index += 1;
    world.adversary_hold_streak = if world.possesses(AgentId::Adversary, params) {
        (world.adversary_hold_streak + 1).min(ADVERSARY_HOLD_STEPS)
    } else {
        0
    };
    events
}

/// Coach rules. Precedence: adversary hold, then the ball leaving the field,
/// then timeout. A ball beyond the right line with no possessor keeps the
/// episode running until someone reaches it.
pub fn check_termination(world: &WorldState, field: &FieldSpec, params: &PhysicsParams) -> Option<EpisodeOutcome> {
    let steps = world.step_index;
    if world.adversary_hold_streak >= ADVERSARY_HOLD_STEPS {
        return Some(EpisodeOutcome::new(TerminationCause::AdversaryHold, steps));
    }
    let ball = world.ball.position;
    if ball.x > field.half_width() {
        let d = world.dribbler.position.distance(ball);
        let a = world.adversary.position.distance(ball);
        let reach = params.kickable_distance;
        let cause = match (d < reach, a < reach) {
            (true, true) if a < d => Some(TerminationCause::RightLineAdversary),
            (true, _) => Some(TerminationCause::RightLineDribbler),
            (false, true) => Some(TerminationCause::RightLineAdversary),
            (false, false) => None,
        };
        if let Some(cause) = cause {
            return Some(EpisodeOutcome::new(cause, steps));
        }
    } else if ball.x < -field.half_width() || ball.y.abs() > field.half_height() {
        return Some(EpisodeOutcome::new(TerminationCause::LeftTopBottomOut, steps));
    }
    if steps >= params.max_episode_steps {
        return Some(EpisodeOutcome::new(TerminationCause::Timeout, steps));
    }
    None
}

/// Restores both agents' stamina after every fifth completed episode
/// (`episode_index` is 1-based).
pub fn coach_maybe_restore_stamina(
    episode_index: u64,
    dribbler: &AgentBody,
    adversary: &AgentBody,
    params: &PhysicsParams,
) -> (AgentBody, AgentBody) {
    if episode_index > 0 && episode_index.is_multiple_of(STAMINA_RESTORE_PERIOD) {
        (
            AgentBody {
                stamina: params.stamina_max,
                ..*dribbler
            },
            AgentBody {
                stamina: params.stamina_max,
                ..*adversary
            },
        )
    } else {
        (*dribbler, *adversary)
    }
}
