//! Six-state transition model of match flow.
//!
//! A [`VerifierMachine`] holds exactly one [`MatchState`] at a time and
//! advances by triggering events against a [`TransitionTable`]. A transition
//! is accepted only when a rule for the (state, action) pair exists and all
//! of its guard [`Condition`]s hold; anything else is a logical exception
//! reported as a [`TriggerResult::Rejected`] value, never an error.
//!
//! The machine is inherently sequential per stream. Distinct streams can be
//! verified in parallel; the table is read-only shared data.

mod table;
mod verify;

pub use table::{default_table, TableError, TransitionTable, WildcardRule};
pub use verify::{verify_stream, verify_stream_with, window, EventWindow, VerifyOptions};

use serde::{Deserialize, Serialize};

use crate::event_model::{action_distance, ActionType, Event, Outcome, ShotResult};

/// The six mutually exclusive logical contexts of a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MatchState {
    KickOff,
    InTransition,
    InPossession,
    BallNeutral,
    SetPiece,
    PostShot,
}

impl MatchState {
    /// All states, in the fixed order used for deterministic scans.
    pub const ALL: [MatchState; 6] = [
        MatchState::KickOff,
        MatchState::InTransition,
        MatchState::InPossession,
        MatchState::BallNeutral,
        MatchState::SetPiece,
        MatchState::PostShot,
    ];
}

impl std::fmt::Display for MatchState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Guard predicate attached to a transition rule. Conditions are pure
/// functions of (current event, event window, machine context); evaluation
/// has no side effects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Condition {
    /// The most recent pass-like action completed successfully.
    PrevPassSuccessful,
    /// The event's team matches the last pass's team.
    SameTeamAsLastPass,
    /// The event's team differs from the last pass's team.
    OpposingTeamOfLastPass,
    /// The event's player matches the last on-ball touch's player.
    SamePlayerAsPrev,
    /// Consecutive touches by the same player stay within `max_gap_meters`;
    /// a larger move requires an explicit Carry. Vacuously true across
    /// different players or when either location is unknown.
    SpatialContinuity {
        #[serde(default = "default_carry_gap")]
        max_gap_meters: f64,
    },
    /// When the last shot declared a result, the follow-up event must match
    /// it. Vacuously true when the shot carried no result.
    ShotResultIs { result: ShotResult },
}

pub(crate) fn default_carry_gap() -> f64 {
    3.0
}

impl Condition {
    /// Stable name used in diagnostics and exception records.
    pub fn name(&self) -> &'static str {
        match self {
            Condition::PrevPassSuccessful => "PrevPassSuccessful",
            Condition::SameTeamAsLastPass => "SameTeamAsLastPass",
            Condition::OpposingTeamOfLastPass => "OpposingTeamOfLastPass",
            Condition::SamePlayerAsPrev => "SamePlayerAsPrev",
            Condition::SpatialContinuity { .. } => "SpatialContinuity",
            Condition::ShotResultIs { .. } => "ShotResultIs",
        }
    }

    pub fn evaluate(&self, event: &Event, _window: &EventWindow, ctx: &MachineContext) -> bool {
        match self {
            Condition::PrevPassSuccessful => ctx
                .last_pass
                .as_ref()
                .is_some_and(|p| p.outcome == Outcome::Success),
            Condition::SameTeamAsLastPass => ctx
                .last_pass
                .as_ref()
                .is_some_and(|p| p.team_id == event.team_id),
            Condition::OpposingTeamOfLastPass => ctx
                .last_pass
                .as_ref()
                .is_some_and(|p| p.team_id != event.team_id),
            Condition::SamePlayerAsPrev => ctx
                .last_on_ball
                .as_ref()
                .is_some_and(|t| t.player_id == event.player_id),
            Condition::SpatialContinuity { max_gap_meters } => {
                let Some(touch) = ctx.last_on_ball.as_ref() else {
                    return true;
                };
                if touch.player_id != event.player_id {
                    return true;
                }
                match action_distance(&touch.as_probe(), event) {
                    Ok(d) => d <= *max_gap_meters,
                    Err(_) => true,
                }
            }
            Condition::ShotResultIs { result } => match ctx.last_shot_result {
                Some(r) => r == *result,
                None => true,
            },
        }
    }
}

/// One entry of the transition table: from `source`, an event labelled
/// `action` moves the machine to `target` provided every condition holds.
/// Conditions are conjunctive and evaluated in declaration order; the first
/// failure is the one reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRule {
    pub source: MatchState,
    pub action: ActionType,
    pub target: MatchState,
    #[serde(default)]
    pub conditions: Vec<Condition>,
}

/// Why a trigger was rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RejectReason {
    /// No rule exists for the (state, action) pair.
    NoRule,
    /// A rule exists but this guard condition failed.
    ConditionFailed { condition: Condition },
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RejectReason::NoRule => write!(f, "NoRule"),
            RejectReason::ConditionFailed { condition } => {
                write!(f, "ConditionFailed({})", condition.name())
            }
        }
    }
}

/// Outcome of attempting one event against the machine.
#[derive(Debug, Clone, PartialEq)]
pub enum TriggerResult {
    Accepted { new_state: MatchState },
    Rejected { reason: RejectReason },
}

impl TriggerResult {
    pub fn is_accepted(&self) -> bool {
        matches!(self, TriggerResult::Accepted { .. })
    }
}

/// The most recent pass-like action seen by the machine.
#[derive(Debug, Clone, PartialEq)]
pub struct PassContext {
    pub team_id: String,
    pub player_id: String,
    pub timestamp: f64,
    pub outcome: Outcome,
}

/// The most recent on-ball touch seen by the machine.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchContext {
    pub team_id: String,
    pub player_id: String,
    pub x: Option<f64>,
    pub y: Option<f64>,
}

impl TouchContext {
    /// A minimal event standing in for the touch location in distance
    /// computations.
    fn as_probe(&self) -> Event {
        Event {
            event_id: String::new(),
            period: 0,
            timestamp: 0.0,
            team_id: self.team_id.clone(),
            player_id: self.player_id.clone(),
            action: ActionType::Carry,
            outcome: Outcome::Unknown,
            shot_result: None,
            x: self.x,
            y: self.y,
            provenance: Default::default(),
        }
    }
}

/// Rolling context the guard conditions read.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MachineContext {
    pub last_pass: Option<PassContext>,
    pub last_on_ball: Option<TouchContext>,
    pub last_shot_result: Option<ShotResult>,
}

impl MachineContext {
    fn absorb(&mut self, event: &Event) {
        if event.action.is_pass_like() {
            self.last_pass = Some(PassContext {
                team_id: event.team_id.clone(),
                player_id: event.player_id.clone(),
                timestamp: event.timestamp,
                outcome: event.outcome,
            });
        }
        if event.action.is_on_ball() {
            self.last_on_ball = Some(TouchContext {
                team_id: event.team_id.clone(),
                player_id: event.player_id.clone(),
                x: event.x,
                y: event.y,
            });
        }
        if matches!(event.action, ActionType::Shot | ActionType::ShotCorner) {
            self.last_shot_result = event.shot_result;
        }
    }
}

/// Sequential verifier over one stream. Starts in `KickOff`; the state only
/// changes through [`VerifierMachine::trigger`] or handler resolution.
#[derive(Debug, Clone)]
pub struct VerifierMachine<'t> {
    state: MatchState,
    context: MachineContext,
    table: &'t TransitionTable,
}

impl<'t> VerifierMachine<'t> {
    pub fn new(table: &'t TransitionTable) -> Self {
        VerifierMachine {
            state: MatchState::KickOff,
            context: MachineContext::default(),
            table,
        }
    }

    pub fn state(&self) -> MatchState {
        self.state
    }

    pub fn context(&self) -> &MachineContext {
        &self.context
    }

    pub fn table(&self) -> &'t TransitionTable {
        self.table
    }

    /// Attempts the event from the current state. On acceptance the state
    /// advances to the rule's target and the context absorbs the event; a
    /// rejection leaves both untouched and reports why.
    pub fn trigger(&mut self, event: &Event, window: &EventWindow) -> TriggerResult {
        match self.table.resolve(self.state, event.action) {
            None => TriggerResult::Rejected {
                reason: RejectReason::NoRule,
            },
            Some((target, conditions)) => {
                for condition in conditions {
                    if !condition.evaluate(event, window, &self.context) {
                        return TriggerResult::Rejected {
                            reason: RejectReason::ConditionFailed {
                                condition: condition.clone(),
                            },
                        };
                    }
                }
                self.state = target;
                self.context.absorb(event);
                TriggerResult::Accepted { new_state: target }
            }
        }
    }

    /// Overrides the state without touching context. Used by the fallback
    /// handler when no rule-based resolution exists.
    pub fn force_state(&mut self, state: MatchState) {
        self.state = state;
    }

    /// Accepts the event unconditionally: applies the target of whatever
    /// rule covers (state, action), guard conditions ignored, and absorbs
    /// the event into context. Leaves the state alone when no rule exists.
    pub fn force_accept(&mut self, event: &Event) {
        if let Some((target, _)) = self.table.resolve(self.state, event.action) {
            self.state = target;
        }
        self.context.absorb(event);
    }
}
