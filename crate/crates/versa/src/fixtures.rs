//! Synthetic match data for demos and tests.
//!
//! [`synthetic_half`] walks the transition model itself, so the streams it
//! emits verify with zero exceptions by construction; corrupting them with
//! a known plan then gives fixtures with exact ground truth. The hand-built
//! case fixtures reproduce the two canonical inconsistency patterns
//! (block-before-shot and missing reception).

use crate::corruptor::{CorruptionPlan, JitterSpec, SplitMix64};
use crate::event_model::{
    ActionType, Event, Outcome, Provenance, ShotResult, VersaStream, PITCH_LENGTH, PITCH_WIDTH,
};

/// Knobs for the synthetic generator. `target_events` is a lower bound; the
/// half ends at the first natural stopping point past it.
#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub target_events: usize,
    pub period: u8,
    pub match_id: String,
}

impl SyntheticConfig {
    pub fn new(match_id: impl Into<String>, period: u8, seed: u64) -> Self {
        SyntheticConfig {
            seed,
            target_events: 550,
            period,
            match_id: match_id.into(),
        }
    }

    pub fn with_target(mut self, target_events: usize) -> Self {
        self.target_events = target_events;
        self
    }
}

const TEAMS: [&str; 2] = ["team-a", "team-b"];

#[derive(Debug, Clone, Copy, PartialEq)]
enum GenState {
    KickOff,
    InTransition,
    InPossession,
    BallNeutral,
    SetPiece,
    PostShot,
}

struct Generator {
    rng: SplitMix64,
    period: u8,
    clock: f64,
    counter: usize,
    events: Vec<Event>,
    state: GenState,
    ball: (f64, f64),
    /// current possession once in InPossession: (team, player)
    holder: (usize, String),
    /// last pass-like emission: (team, player, outcome)
    last_pass: (usize, String, Outcome),
    /// possession actions since the holder gained the ball; fouls against
    /// the holder are only generated after at least one
    settled: usize,
    pending_shot: ShotResult,
    restart: (usize, ActionType),
    kickoff_team: usize,
}

impl Generator {
    fn new(seed: u64, period: u8) -> Self {
        Generator {
            rng: SplitMix64::new(seed),
            period,
            clock: 0.0,
            counter: 0,
            events: Vec::new(),
            state: GenState::KickOff,
            ball: (PITCH_LENGTH / 2.0, PITCH_WIDTH / 2.0),
            holder: (0, "a1".to_string()),
            last_pass: (0, "a1".to_string(), Outcome::Unknown),
            settled: 0,
            pending_shot: ShotResult::GoalMiss,
            restart: (0, ActionType::FreeKick),
            kickoff_team: 0,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.next_f64() < p
    }

    fn player(&mut self, team: usize) -> String {
        let n = 2 + self.rng.next_below(10);
        format!("{}{}", if team == 0 { "a" } else { "b" }, n)
    }

    fn teammate(&mut self, team: usize, other_than: &str) -> String {
        loop {
            let p = self.player(team);
            if p != other_than {
                return p;
            }
        }
    }

    fn keeper(team: usize) -> String {
        format!("{}1", if team == 0 { "a" } else { "b" })
    }

    fn clamp(&self, x: f64, y: f64) -> (f64, f64) {
        (x.clamp(1.0, PITCH_LENGTH - 1.0), y.clamp(1.0, PITCH_WIDTH - 1.0))
    }

    fn drift(&mut self, max: f64) -> (f64, f64) {
        let (x, y) = self.ball;
        let dx = (self.rng.next_f64() * 2.0 - 1.0) * max;
        let dy = (self.rng.next_f64() * 2.0 - 1.0) * max;
        self.clamp(x + dx, y + dy)
    }

    /// A move of between `min` and `max` meters in a random direction.
    fn jump(&mut self, min: f64, max: f64) -> (f64, f64) {
        let (x, y) = self.ball;
        let dist = min + self.rng.next_f64() * (max - min);
        let angle = self.rng.next_f64() * std::f64::consts::TAU;
        self.clamp(x + dist * angle.cos(), y + dist * angle.sin())
    }

    fn round1(v: f64) -> f64 {
        (v * 10.0).round() / 10.0
    }

    fn emit(
        &mut self,
        team: Option<usize>,
        player: &str,
        action: ActionType,
        outcome: Outcome,
        loc: (f64, f64),
        shot_result: Option<ShotResult>,
    ) {
        self.clock = Self::round1(self.clock + 1.0 + self.rng.next_f64() * 5.0);
        self.counter += 1;
        self.events.push(Event {
            event_id: format!("e{:04}", self.counter),
            period: self.period,
            timestamp: self.clock,
            team_id: team.map(|t| TEAMS[t].to_string()).unwrap_or_default(),
            player_id: player.to_string(),
            action,
            outcome,
            shot_result,
            x: Some(loc.0),
            y: Some(loc.1),
            provenance: Provenance::Recorded,
        });
    }

    fn pass_outcome(&mut self) -> Outcome {
        let roll = self.rng.next_f64();
        if roll < 0.72 {
            Outcome::Success
        } else if roll < 0.95 {
            Outcome::Failure
        } else {
            Outcome::Unknown
        }
    }

    fn pick_shot_result(&mut self) -> ShotResult {
        let roll = self.rng.next_f64();
        if roll < 0.10 {
            ShotResult::Goal
        } else if roll < 0.35 {
            ShotResult::Catch
        } else if roll < 0.55 {
            ShotResult::Block
        } else if roll < 0.70 {
            ShotResult::Out
        } else if roll < 0.75 {
            ShotResult::GoalPost
        } else {
            ShotResult::GoalMiss
        }
    }

    fn step(&mut self) {
        // occasional own goal; never straight after a reception so every
        // dropped reception stays detectable
        let own_goal_possible = match self.state {
            GenState::InPossession => self.settled >= 1,
            GenState::BallNeutral => true,
            _ => false,
        };
        if own_goal_possible && self.chance(0.004) {
            let team = self.rng.next_below(2);
            let player = self.player(team);
            let loc = self.drift(2.0);
            self.emit(Some(team), &player, ActionType::OwnGoal, Outcome::Success, loc, None);
            self.kickoff_team = team;
            self.state = GenState::KickOff;
            return;
        }
        match self.state {
            GenState::KickOff => self.step_kickoff(),
            GenState::InTransition => self.step_transition(),
            GenState::InPossession => self.step_possession(),
            GenState::BallNeutral => self.step_neutral(),
            GenState::SetPiece => self.step_set_piece(),
            GenState::PostShot => self.step_post_shot(),
        }
    }

    fn step_kickoff(&mut self) {
        let team = self.kickoff_team;
        let center = (PITCH_LENGTH / 2.0, PITCH_WIDTH / 2.0);
        self.ball = center;
        let player = self.player(team);
        if self.chance(0.5) {
            self.emit(Some(team), &player, ActionType::KickOff, Outcome::Success, center, None);
        }
        let outcome = self.pass_outcome();
        self.emit(Some(team), &player, ActionType::Pass, outcome, center, None);
        self.last_pass = (team, player, outcome);
        self.state = GenState::InTransition;
    }

    fn step_transition(&mut self) {
        let (pass_team, pass_player, outcome) = self.last_pass.clone();
        if self.chance(0.04) {
            let loc = self.jump(2.0, 10.0);
            self.ball = loc;
            self.emit(None, "", ActionType::Out, Outcome::Unknown, loc, None);
            self.restart = (self.rng.next_below(2), ActionType::ThrowIn);
            self.state = GenState::SetPiece;
            return;
        }
        if self.chance(0.04) {
            let team = 1 - pass_team;
            let player = self.player(team);
            let loc = self.jump(3.0, 12.0);
            self.ball = loc;
            self.emit(Some(team), &player, ActionType::Clearance, Outcome::Unknown, loc, None);
            self.state = GenState::BallNeutral;
            return;
        }
        if outcome == Outcome::Success {
            let receiver = self.teammate(pass_team, &pass_player);
            let loc = self.jump(5.0, 25.0);
            self.ball = loc;
            self.emit(
                Some(pass_team),
                &receiver,
                ActionType::PassReceived,
                Outcome::Success,
                loc,
                None,
            );
            self.holder = (pass_team, receiver);
            self.settled = 0;
            self.state = GenState::InPossession;
        } else {
            if self.chance(0.12) {
                let team = self.rng.next_below(2);
                let player = self.player(team);
                let loc = self.ball;
                self.emit(Some(team), &player, ActionType::Duel, Outcome::Unknown, loc, None);
            }
            if self.chance(0.05) {
                let player = self.teammate(pass_team, &pass_player);
                let loc = self.ball;
                self.emit(Some(pass_team), &player, ActionType::Offside, Outcome::Failure, loc, None);
            }
            let team = 1 - pass_team;
            let player = self.player(team);
            let loc = self.jump(2.0, 10.0);
            self.ball = loc;
            let action = if self.chance(0.6) {
                ActionType::Interception
            } else {
                ActionType::Tackle
            };
            self.emit(Some(team), &player, action, Outcome::Success, loc, None);
            self.holder = (team, player);
            self.settled = 1;
            self.state = GenState::InPossession;
        }
    }

    fn step_possession(&mut self) {
        let (team, player) = self.holder.clone();
        let roll = self.rng.next_f64();
        if roll < 0.40 {
            let loc = self.drift(1.2);
            self.ball = loc;
            let outcome = self.pass_outcome();
            self.emit(Some(team), &player, ActionType::Pass, outcome, loc, None);
            self.last_pass = (team, player, outcome);
            self.state = GenState::InTransition;
        } else if roll < 0.45 {
            let loc = self.drift(1.2);
            self.ball = loc;
            let outcome = self.pass_outcome();
            self.emit(Some(team), &player, ActionType::Cross, outcome, loc, None);
            self.last_pass = (team, player, outcome);
            self.state = GenState::InTransition;
        } else if roll < 0.60 {
            let dest = self.jump(4.0, 12.0);
            self.ball = dest;
            self.emit(Some(team), &player, ActionType::Carry, Outcome::Success, dest, None);
            self.settled += 1;
        } else if roll < 0.72 {
            let loc = self.drift(1.2);
            self.ball = loc;
            self.emit(Some(team), &player, ActionType::Dribble, Outcome::Success, loc, None);
            self.settled += 1;
        } else if roll < 0.84 {
            let loc = self.drift(1.2);
            self.ball = loc;
            let result = self.pick_shot_result();
            let outcome = if result == ShotResult::Goal {
                Outcome::Success
            } else {
                Outcome::Failure
            };
            self.emit(Some(team), &player, ActionType::Shot, outcome, loc, Some(result));
            self.pending_shot = result;
            self.state = GenState::PostShot;
        } else if roll < 0.88 {
            let loc = self.drift(1.5);
            self.ball = loc;
            self.emit(Some(team), &player, ActionType::Error, Outcome::Failure, loc, None);
            self.state = GenState::BallNeutral;
        } else if roll < 0.95 && self.settled >= 1 {
            let opponent = 1 - team;
            let fouler = self.player(opponent);
            let loc = self.ball;
            self.emit(Some(opponent), &fouler, ActionType::Foul, Outcome::Failure, loc, None);
            self.restart = (team, ActionType::FreeKick);
            self.state = GenState::SetPiece;
        } else {
            let duel_team = self.rng.next_below(2);
            let dueler = self.player(duel_team);
            let loc = self.ball;
            self.emit(Some(duel_team), &dueler, ActionType::Duel, Outcome::Unknown, loc, None);
        }
    }

    fn step_post_shot(&mut self) {
        let (team, shooter) = self.holder.clone();
        let opponent = 1 - team;
        match self.pending_shot {
            ShotResult::Goal => {
                let loc = self.clamp(PITCH_LENGTH - 2.0, PITCH_WIDTH / 2.0);
                self.emit(Some(team), &shooter, ActionType::Goal, Outcome::Success, loc, None);
                self.kickoff_team = opponent;
                self.state = GenState::KickOff;
            }
            ShotResult::Catch => {
                let keeper = Self::keeper(opponent);
                let spread = (self.rng.next_f64() - 0.5) * 10.0;
                let loc = self.clamp(5.0, PITCH_WIDTH / 2.0 + spread);
                self.ball = loc;
                self.emit(Some(opponent), &keeper, ActionType::Catch, Outcome::Success, loc, None);
                self.holder = (opponent, keeper);
                self.settled = 1;
                self.state = GenState::InPossession;
            }
            ShotResult::Block => {
                let blocker = self.player(opponent);
                let loc = self.drift(2.0);
                self.ball = loc;
                self.emit(Some(opponent), &blocker, ActionType::Block, Outcome::Success, loc, None);
                self.state = GenState::BallNeutral;
            }
            ShotResult::Out => {
                let loc = self.drift(4.0);
                self.emit(None, "", ActionType::Out, Outcome::Unknown, loc, None);
                let roll = self.rng.next_f64();
                self.restart = if roll < 0.3 {
                    (team, ActionType::PassCorner)
                } else if roll < 0.4 {
                    (team, ActionType::ShotCorner)
                } else if roll < 0.55 {
                    (team, ActionType::CornerKick)
                } else {
                    (opponent, ActionType::GoalKick)
                };
                self.state = GenState::SetPiece;
            }
            ShotResult::GoalMiss => {
                let wide = self.rng.next_f64() * PITCH_WIDTH;
                let loc = self.clamp(PITCH_LENGTH - 2.0, wide);
                self.emit(Some(team), &shooter, ActionType::GoalMiss, Outcome::Failure, loc, None);
                self.restart = (opponent, ActionType::GoalKick);
                self.state = GenState::SetPiece;
            }
            ShotResult::GoalPost => {
                let loc = self.drift(5.0);
                self.ball = loc;
                self.emit(Some(team), &shooter, ActionType::GoalPost, Outcome::Failure, loc, None);
                self.state = GenState::BallNeutral;
            }
        }
    }

    fn step_neutral(&mut self) {
        let roll = self.rng.next_f64();
        if roll < 0.12 {
            let team = self.rng.next_below(2);
            let dueler = self.player(team);
            let loc = self.ball;
            self.emit(Some(team), &dueler, ActionType::Duel, Outcome::Unknown, loc, None);
        } else if roll < 0.22 {
            let team = self.rng.next_below(2);
            let player = self.player(team);
            let loc = self.jump(8.0, 25.0);
            self.ball = loc;
            self.emit(Some(team), &player, ActionType::Clearance, Outcome::Unknown, loc, None);
        } else if roll < 0.30 {
            let loc = self.drift(4.0);
            self.emit(None, "", ActionType::Out, Outcome::Unknown, loc, None);
            self.restart = (self.rng.next_below(2), ActionType::ThrowIn);
            self.state = GenState::SetPiece;
        } else {
            let team = self.rng.next_below(2);
            let player = self.player(team);
            let loc = self.drift(3.0);
            self.ball = loc;
            self.emit(Some(team), &player, ActionType::Recovery, Outcome::Success, loc, None);
            self.holder = (team, player);
            self.settled = 1;
            self.state = GenState::InPossession;
        }
    }

    fn step_set_piece(&mut self) {
        let (team, action) = self.restart;
        let taker = self.player(team);
        let loc = match action {
            ActionType::PassCorner | ActionType::ShotCorner | ActionType::CornerKick => {
                let y = if self.chance(0.5) { 1.0 } else { PITCH_WIDTH - 1.0 };
                (PITCH_LENGTH - 1.0, y)
            }
            ActionType::GoalKick => (6.0, PITCH_WIDTH / 2.0),
            _ => self.drift(2.0),
        };
        self.ball = loc;
        if action == ActionType::ShotCorner {
            let result = self.pick_shot_result();
            let outcome = if result == ShotResult::Goal {
                Outcome::Success
            } else {
                Outcome::Failure
            };
            self.emit(Some(team), &taker, ActionType::ShotCorner, outcome, loc, Some(result));
            self.holder = (team, taker);
            self.pending_shot = result;
            self.state = GenState::PostShot;
        } else {
            let outcome = self.pass_outcome();
            self.emit(Some(team), &taker, action, outcome, loc, None);
            self.last_pass = (team, taker, outcome);
            self.state = GenState::InTransition;
        }
    }
}

/// Generates one clean half. The stream verifies with zero exceptions
/// against the default table and handler registry.
pub fn synthetic_half(config: &SyntheticConfig) -> VersaStream {
    let mut generator = Generator::new(config.seed, config.period);
    while generator.events.len() < config.target_events {
        generator.step();
    }
    let mut stream = VersaStream::new(config.match_id.clone(), config.period, generator.events);
    stream.meta.provider = Some("synthetic".to_string());
    stream
}

/// Both halves of a synthetic match.
pub fn synthetic_match(match_id: &str, seed: u64, target_events: usize) -> Vec<VersaStream> {
    vec![
        synthetic_half(&SyntheticConfig::new(match_id, 1, seed).with_target(target_events)),
        synthetic_half(
            &SyntheticConfig::new(match_id, 2, seed.wrapping_add(0x9E37)).with_target(target_events),
        ),
    ]
}

#[allow(clippy::too_many_arguments)]
fn fixture_event(
    id: &str,
    t: f64,
    team: &str,
    player: &str,
    action: ActionType,
    outcome: Outcome,
    loc: (f64, f64),
    shot_result: Option<ShotResult>,
) -> Event {
    Event {
        event_id: id.to_string(),
        period: 1,
        timestamp: t,
        team_id: team.to_string(),
        player_id: player.to_string(),
        action,
        outcome,
        shot_result,
        x: Some(loc.0),
        y: Some(loc.1),
        provenance: Provenance::Recorded,
    }
}

/// The wrong-order case: a Block recorded before the Shot it answered,
/// inside a possession chain ([... Carry, Block, Shot]).
pub fn case1_block_before_shot() -> VersaStream {
    VersaStream::new(
        "case1",
        1,
        vec![
            fixture_event("c1-pass", 10.0, "team-a", "a7", ActionType::Pass, Outcome::Success, (52.5, 34.0), None),
            fixture_event("c1-recv", 12.0, "team-a", "a9", ActionType::PassReceived, Outcome::Success, (60.0, 30.0), None),
            fixture_event("c1-carry", 14.0, "team-a", "a9", ActionType::Carry, Outcome::Success, (78.0, 33.0), None),
            fixture_event("c1-block", 16.0, "team-b", "b5", ActionType::Block, Outcome::Success, (79.0, 33.0), None),
            fixture_event("c1-shot", 17.0, "team-a", "a9", ActionType::Shot, Outcome::Failure, (79.0, 33.0), Some(ShotResult::Block)),
        ],
    )
}

/// The missing-event case: a shot follows a successful same-team pass with
/// no reception recorded between them.
pub fn case2_missing_reception() -> VersaStream {
    VersaStream::new(
        "case2",
        1,
        vec![
            fixture_event("c2-pass", 10.0, "team-a", "a7", ActionType::Pass, Outcome::Success, (55.0, 30.0), None),
            fixture_event("c2-shot", 12.0, "team-a", "a10", ActionType::Shot, Outcome::Failure, (88.0, 36.0), Some(ShotResult::GoalMiss)),
        ],
    )
}

/// Drops every PassReceived: the reception-free annotation style.
pub fn wyscout_like_plan(seed: u64) -> CorruptionPlan {
    CorruptionPlan {
        drop_pass_received: 1.0,
        ..CorruptionPlan::noop(seed)
    }
}

/// Inserts sub-threshold carries at same-player touch pairs: the
/// micro-movement annotation style.
pub fn statsbomb_like_plan(seed: u64) -> CorruptionPlan {
    CorruptionPlan {
        insert_micro_carry: 0.6,
        ..CorruptionPlan::noop(seed)
    }
}

/// Drops half of the carries, leaving spatial gaps.
pub fn bepro_like_plan(seed: u64) -> CorruptionPlan {
    CorruptionPlan {
        drop_carry: 0.5,
        ..CorruptionPlan::noop(seed)
    }
}

/// Mild timestamp noise on top of order damage.
pub fn jitter_plan(seed: u64) -> CorruptionPlan {
    CorruptionPlan {
        swap_shot_block: 0.5,
        timestamp_jitter: JitterSpec {
            rate: 0.05,
            max_seconds: 1.0,
        },
        ..CorruptionPlan::noop(seed)
    }
}
