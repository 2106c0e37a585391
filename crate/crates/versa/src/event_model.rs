//! Canonical event representation shared by every other module.
//!
//! An [`Event`] is one annotated match action; a [`VersaStream`] is the
//! ordered event list for one match period. Coordinates live in a single
//! metric frame (105 m x 68 m pitch, x along the attacking direction of the
//! acting team) so spatial rules such as the carry-gap threshold are
//! unit-independent. All types are immutable values after construction and
//! safe to share across threads.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Pitch length of the canonical coordinate frame, in meters.
pub const PITCH_LENGTH: f64 = 105.0;
/// Pitch width of the canonical coordinate frame, in meters.
pub const PITCH_WIDTH: f64 = 68.0;

/// Closed action taxonomy. Provider vocabularies map onto these labels
/// during ingestion; unknown provider actions are rejected there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ActionType {
    KickOff,
    Pass,
    Cross,
    PassReceived,
    Carry,
    Dribble,
    Shot,
    Goal,
    GoalMiss,
    GoalPost,
    OwnGoal,
    Block,
    Catch,
    Out,
    Interception,
    Tackle,
    Recovery,
    Clearance,
    Duel,
    Foul,
    Offside,
    Error,
    FreeKick,
    CornerKick,
    ThrowIn,
    GoalKick,
    PassCorner,
    ShotCorner,
    Corner,
}

impl ActionType {
    /// Every member of the taxonomy, in declaration order.
    pub const ALL: [ActionType; 29] = [
        ActionType::KickOff,
        ActionType::Pass,
        ActionType::Cross,
        ActionType::PassReceived,
        ActionType::Carry,
        ActionType::Dribble,
        ActionType::Shot,
        ActionType::Goal,
        ActionType::GoalMiss,
        ActionType::GoalPost,
        ActionType::OwnGoal,
        ActionType::Block,
        ActionType::Catch,
        ActionType::Out,
        ActionType::Interception,
        ActionType::Tackle,
        ActionType::Recovery,
        ActionType::Clearance,
        ActionType::Duel,
        ActionType::Foul,
        ActionType::Offside,
        ActionType::Error,
        ActionType::FreeKick,
        ActionType::CornerKick,
        ActionType::ThrowIn,
        ActionType::GoalKick,
        ActionType::PassCorner,
        ActionType::ShotCorner,
        ActionType::Corner,
    ];

    /// Outcome events defined by the verification model itself (Goal,
    /// GoalMiss, GoalPost, Out). These are never counted as exceptions in
    /// quality statistics.
    pub fn is_model_outcome(self) -> bool {
        matches!(
            self,
            ActionType::Goal | ActionType::GoalMiss | ActionType::GoalPost | ActionType::Out
        )
    }

    /// Actions that deliver the ball toward a teammate and therefore update
    /// the "last pass" context (reception checks key off these).
    pub fn is_pass_like(self) -> bool {
        matches!(
            self,
            ActionType::Pass
                | ActionType::Cross
                | ActionType::FreeKick
                | ActionType::CornerKick
                | ActionType::ThrowIn
                | ActionType::GoalKick
                | ActionType::PassCorner
                | ActionType::Corner
        )
    }

    /// Actions performed with the ball; these update the "last on-ball
    /// touch" context used by the same-player and spatial-continuity checks.
    pub fn is_on_ball(self) -> bool {
        self.is_pass_like()
            || matches!(
                self,
                ActionType::PassReceived
                    | ActionType::Carry
                    | ActionType::Dribble
                    | ActionType::Shot
                    | ActionType::ShotCorner
                    | ActionType::Block
                    | ActionType::Catch
                    | ActionType::Interception
                    | ActionType::Tackle
                    | ActionType::Recovery
                    | ActionType::Clearance
                    | ActionType::Error
            )
    }
}

impl std::fmt::Display for ActionType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Generic action outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Failure,
    Unknown,
}

/// Result a Shot (or ShotCorner) may additionally carry; the post-shot
/// transition checks the follow-up event against it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShotResult {
    Goal,
    Catch,
    Block,
    Out,
    GoalMiss,
    GoalPost,
}

/// How the event entered the stream. Raw input is always `Recorded`;
/// only the correction handlers produce `Synthesized` and `Reordered`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Provenance {
    #[default]
    Recorded,
    Synthesized,
    Reordered,
}

/// One annotated match action.
///
/// `x`/`y` are meters in the canonical frame and may be absent for events
/// without a usable location. A Carry's coordinates give the *destination*
/// of the movement, so a carry re-anchors the spatial-continuity check.
/// `player_id` may be empty for neutral events such as `Out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub event_id: String,
    pub period: u8,
    /// Seconds from the start of the period.
    pub timestamp: f64,
    pub team_id: String,
    pub player_id: String,
    pub action: ActionType,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shot_result: Option<ShotResult>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl Event {
    pub fn coords(&self) -> Option<(f64, f64)> {
        match (self.x, self.y) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some((x, y)),
            _ => None,
        }
    }
}

/// Raised when a spatial computation needs coordinates an event lacks.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("event `{event_id}` carries no usable coordinates")]
pub struct DistanceUnavailable {
    pub event_id: String,
}

/// Euclidean distance in meters between two events' locations.
pub fn action_distance(a: &Event, b: &Event) -> Result<f64, DistanceUnavailable> {
    let (ax, ay) = a.coords().ok_or_else(|| DistanceUnavailable {
        event_id: a.event_id.clone(),
    })?;
    let (bx, by) = b.coords().ok_or_else(|| DistanceUnavailable {
        event_id: b.event_id.clone(),
    })?;
    Ok(((ax - bx).powi(2) + (ay - by).powi(2)).sqrt())
}

/// Which representation a stream is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FormatVariant {
    #[default]
    Versa,
    SimplifiedVersa,
}

/// Match-level annotations carried alongside a stream. Not part of the
/// canonical event file; provider files and CLI flags supply them and the
/// report layer groups by them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct StreamMeta {
    pub provider: Option<String>,
    pub league: Option<String>,
    pub season: Option<String>,
}

/// Ordered event dataset for one match period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VersaStream {
    pub match_id: String,
    pub period: u8,
    pub team_ids: (String, String),
    #[serde(default)]
    pub format_variant: FormatVariant,
    #[serde(default)]
    pub meta: StreamMeta,
    pub events: Vec<Event>,
}

impl VersaStream {
    /// Builds a stream from events, deriving the team pair and sorting
    /// canonically.
    pub fn new(match_id: impl Into<String>, period: u8, events: Vec<Event>) -> Self {
        let stream = VersaStream {
            match_id: match_id.into(),
            period,
            team_ids: derive_team_ids(&events),
            format_variant: FormatVariant::Versa,
            meta: StreamMeta::default(),
            events,
        };
        sort_canonical(stream)
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// The action-type token sequence, as consumed by the sequence metrics.
    pub fn action_sequence(&self) -> Vec<ActionType> {
        self.events.iter().map(|e| e.action).collect()
    }

    /// True when events are non-decreasing in timestamp.
    pub fn is_sorted(&self) -> bool {
        self.events
            .windows(2)
            .all(|w| w[0].timestamp <= w[1].timestamp)
    }
}

/// The two distinct non-empty team ids appearing in the events, in sorted
/// order. Pads with an empty string when fewer than two appear.
pub fn derive_team_ids(events: &[Event]) -> (String, String) {
    let mut teams: Vec<&str> = events
        .iter()
        .map(|e| e.team_id.as_str())
        .filter(|t| !t.is_empty())
        .collect();
    teams.sort_unstable();
    teams.dedup();
    let a = teams.first().copied().unwrap_or("").to_string();
    let b = teams.get(1).copied().unwrap_or("").to_string();
    (a, b)
}

/// Sorts the stream by timestamp. The sort is stable, so events with equal
/// timestamps keep their source-file order; that makes verification
/// deterministic for same-second annotations.
pub fn sort_canonical(mut stream: VersaStream) -> VersaStream {
    stream
        .events
        .sort_by(|a, b| a.timestamp.total_cmp(&b.timestamp));
    stream
}
