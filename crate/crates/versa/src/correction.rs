//! Rule-based repair of rejected events.
//!
//! Each [`Handler`] is keyed by a (state, action) pattern and, given the
//! machine context and the event window around the rejection, produces a
//! corrected window: a synthesized missing event, a reordered window, or a
//! forced state reset. Handlers are pure functions (the same context and
//! window always yield the same output) and they never delete recorded
//! events; the output window holds the same recorded events as the input.
//!
//! The registry is consulted in order and the first willing handler wins.
//! A terminal fallback guarantees the verification pass always makes
//! progress: it force-sets the machine to the rejected action's canonical
//! source state, or flags the event unresolved when the action has no rule
//! anywhere.

use serde::{Deserialize, Serialize};

use crate::event_model::{ActionType, Event, Outcome, Provenance};
use crate::state_machine::{
    Condition, EventWindow, MachineContext, MatchState, RejectReason, TransitionTable,
};

/// What a handler does to resolve an exception.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandlerKind {
    InsertBefore,
    Reorder,
    Relabel,
    ForceState,
}

/// Resolution recorded on an [`ExceptionRecord`]. `ForceState` and
/// `Unresolved` both count as unresolved for exit-code and replay purposes:
/// a forced reset papers over the inconsistency rather than repairing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandlerOutcome {
    InsertBefore,
    Reorder,
    Relabel,
    ForceState,
    Unresolved,
}

impl HandlerOutcome {
    /// True when the repair makes the corrected stream replay cleanly
    /// through this point.
    pub fn is_resolved(self) -> bool {
        matches!(
            self,
            HandlerOutcome::InsertBefore | HandlerOutcome::Reorder | HandlerOutcome::Relabel
        )
    }
}

impl std::fmt::Display for HandlerOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HandlerOutcome::ForceState => write!(f, "Unresolved-ForcedState"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// One detected logical inconsistency.
///
/// `stream_index` is the position of the rejected event in the canonically
/// sorted *input* stream (synthesized events inherit the index of the event
/// whose rejection spawned them), so downstream scoring can align records
/// with injection sites regardless of how many events corrections inserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionRecord {
    pub stream_index: usize,
    pub event_id: String,
    pub state_at_failure: MatchState,
    pub action: ActionType,
    pub reason: RejectReason,
    pub handler_applied: HandlerOutcome,
    pub events_inserted: Vec<String>,
    pub events_moved: Vec<String>,
}

impl ExceptionRecord {
    pub fn is_resolved(&self) -> bool {
        self.handler_applied.is_resolved()
    }
}

/// Everything a handler may read about the rejection.
#[derive(Debug)]
pub struct RejectionContext<'a> {
    pub state: MatchState,
    pub reason: &'a RejectReason,
    pub event: &'a Event,
    pub machine: &'a MachineContext,
    pub table: &'a TransitionTable,
    /// How many times a handler has already been applied for this event;
    /// feeds the synthesized-id scheme so handler output stays a pure
    /// function of its inputs.
    pub attempt: u32,
}

/// A corrected window plus bookkeeping for the exception record.
#[derive(Debug, Clone, PartialEq)]
pub struct Correction {
    /// Replacement for the window's event slice.
    pub window_events: Vec<Event>,
    /// The action the verification loop resumes with (the inserted event's
    /// action for insertions, the rejected action otherwise).
    pub corrected_action: ActionType,
    pub inserted: Vec<String>,
    pub moved: Vec<String>,
    /// Set only by the fallback: state to force before re-accepting.
    pub force_state: Option<MatchState>,
    pub outcome: HandlerOutcome,
}

/// (state, action) pattern; `None` matches anything.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HandlerKey {
    pub state: Option<MatchState>,
    pub action: Option<ActionType>,
}

impl HandlerKey {
    pub fn matches(&self, state: MatchState, action: ActionType) -> bool {
        self.state.is_none_or(|s| s == state) && self.action.is_none_or(|a| a == action)
    }
}

/// Handler logic: `None` defers to the next handler in the registry.
pub type HandlerFn = fn(&RejectionContext<'_>, &EventWindow) -> Option<Correction>;

pub struct Handler {
    pub key: HandlerKey,
    pub kind: HandlerKind,
    pub logic: HandlerFn,
}

/// Ordered handler list with a mandatory terminal fallback.
pub struct HandlerRegistry {
    handlers: Vec<Handler>,
    fallback: Handler,
}

impl HandlerRegistry {
    pub fn new(handlers: Vec<Handler>, fallback: Handler) -> Self {
        HandlerRegistry { handlers, fallback }
    }

    /// The built-in catalogue: shot/block reordering, missing-reception and
    /// missing-turnover synthesis, missing-carry synthesis, then the
    /// force-state fallback.
    pub fn standard() -> Self {
        let key = |state, action| HandlerKey { state, action };
        HandlerRegistry::new(
            vec![
                Handler {
                    key: key(Some(MatchState::InPossession), Some(ActionType::Block)),
                    kind: HandlerKind::Reorder,
                    logic: handle_shot_block_reorder,
                },
                Handler {
                    key: key(Some(MatchState::InTransition), Some(ActionType::Block)),
                    kind: HandlerKind::Reorder,
                    logic: handle_shot_block_reorder,
                },
                Handler {
                    key: key(Some(MatchState::InPossession), None),
                    kind: HandlerKind::InsertBefore,
                    logic: handle_missing_carry,
                },
                Handler {
                    key: key(Some(MatchState::InTransition), None),
                    kind: HandlerKind::InsertBefore,
                    logic: handle_missing_reception,
                },
                Handler {
                    key: key(Some(MatchState::InTransition), None),
                    kind: HandlerKind::InsertBefore,
                    logic: handle_missing_turnover,
                },
            ],
            Handler {
                key: key(None, None),
                kind: HandlerKind::ForceState,
                logic: handle_fallback,
            },
        )
    }

    /// First matching, willing handler's correction; the fallback answers
    /// when nothing else does.
    pub fn resolve(&self, ctx: &RejectionContext<'_>, window: &EventWindow) -> Correction {
        for handler in &self.handlers {
            if handler.key.matches(ctx.state, ctx.event.action) {
                if let Some(correction) = (handler.logic)(ctx, window) {
                    return correction;
                }
            }
        }
        self.fallback_correction(ctx, window)
    }

    /// The fallback alone; used once an event has exhausted its handler
    /// budget.
    pub fn fallback_correction(&self, ctx: &RejectionContext<'_>, window: &EventWindow) -> Correction {
        (self.fallback.logic)(ctx, window).expect("fallback handler always resolves")
    }
}

fn synthesized_id(anchor: &str, attempt: u32) -> String {
    format!("syn-{anchor}-{attempt}")
}

/// Midpoint timestamp of the events bracketing an insertion point, which
/// keeps the stream sorted without inventing durations.
fn midpoint(left: f64, right: f64) -> f64 {
    (left + right) / 2.0
}

fn synthesized(
    ctx: &RejectionContext<'_>,
    action: ActionType,
    timestamp: f64,
    coords: (Option<f64>, Option<f64>),
) -> Event {
    Event {
        event_id: synthesized_id(&ctx.event.event_id, ctx.attempt),
        period: ctx.event.period,
        timestamp,
        team_id: ctx.event.team_id.clone(),
        player_id: ctx.event.player_id.clone(),
        action,
        outcome: Outcome::Success,
        shot_result: None,
        x: coords.0,
        y: coords.1,
        provenance: Provenance::Synthesized,
    }
}

/// A same-team action follows a successful pass with no reception between:
/// synthesize the PassReceived immediately after that pass. The receiver
/// identity comes from the rejected event (the pass's receiver attribute is
/// the one that tends to be missing), its location from the rejected
/// event's recorded coordinates. Defers when the antecedent pass is not
/// within the window.
pub fn handle_missing_reception(
    ctx: &RejectionContext<'_>,
    window: &EventWindow,
) -> Option<Correction> {
    let pass = ctx.machine.last_pass.as_ref()?;
    if pass.outcome != Outcome::Success
        || pass.team_id != ctx.event.team_id
        || ctx.event.player_id.is_empty()
    {
        return None;
    }
    let pass_pos = window.events[..window.center_offset].iter().rposition(|e| {
        e.action.is_pass_like()
            && e.team_id == pass.team_id
            && e.player_id == pass.player_id
            && e.timestamp == pass.timestamp
    })?;
    let insert_at = pass_pos + 1;
    let timestamp = midpoint(
        window.events[pass_pos].timestamp,
        window.events[insert_at].timestamp,
    );
    let reception = synthesized(
        ctx,
        ActionType::PassReceived,
        timestamp,
        (ctx.event.x, ctx.event.y),
    );
    let inserted = vec![reception.event_id.clone()];
    let mut events = window.events.clone();
    events.insert(insert_at, reception);
    Some(Correction {
        window_events: events,
        corrected_action: ActionType::PassReceived,
        inserted,
        moved: vec![],
        force_state: None,
        outcome: HandlerOutcome::InsertBefore,
    })
}

/// An opposing-team action follows a failed (or unknown-outcome) pass while
/// the ball is in transition: the possession change implies an unrecorded
/// interception, so synthesize one for the rejected event's player
/// immediately before it. Defers when no pass context exists or the pass
/// was recorded successful.
pub fn handle_missing_turnover(
    ctx: &RejectionContext<'_>,
    window: &EventWindow,
) -> Option<Correction> {
    let pass = ctx.machine.last_pass.as_ref()?;
    if pass.outcome == Outcome::Success
        || pass.team_id == ctx.event.team_id
        || ctx.event.player_id.is_empty()
        || window.center_offset == 0
    {
        return None;
    }
    let timestamp = midpoint(
        window.events[window.center_offset - 1].timestamp,
        ctx.event.timestamp,
    );
    let interception = synthesized(
        ctx,
        ActionType::Interception,
        timestamp,
        (ctx.event.x, ctx.event.y),
    );
    let inserted = vec![interception.event_id.clone()];
    let mut events = window.events.clone();
    events.insert(window.center_offset, interception);
    Some(Correction {
        window_events: events,
        corrected_action: ActionType::Interception,
        inserted,
        moved: vec![],
        force_state: None,
        outcome: HandlerOutcome::InsertBefore,
    })
}

/// A Block was recorded before the Shot it answered. Move the block to the
/// position immediately after the nearest forward opposing-team shot in the
/// window; when the two were adjacent their timestamps are swapped,
/// otherwise the block adopts the shot's timestamp. Moved events are marked
/// `Reordered`. Defers when no matching shot exists in the forward half.
pub fn handle_shot_block_reorder(
    ctx: &RejectionContext<'_>,
    window: &EventWindow,
) -> Option<Correction> {
    if ctx.event.action != ActionType::Block {
        return None;
    }
    let forward = &window.events[window.center_offset + 1..];
    let offset = forward
        .iter()
        .position(|e| e.action == ActionType::Shot && e.team_id != ctx.event.team_id)?;
    let mut events = window.events.clone();
    let mut block = events.remove(window.center_offset);
    let shot_pos = window.center_offset + offset; // shot's index after removal
    let mut moved = vec![block.event_id.clone()];
    block.provenance = Provenance::Reordered;
    if block.timestamp < events[shot_pos].timestamp {
        if shot_pos == window.center_offset {
            std::mem::swap(&mut block.timestamp, &mut events[shot_pos].timestamp);
            events[shot_pos].provenance = Provenance::Reordered;
            moved.push(events[shot_pos].event_id.clone());
        } else {
            // events sit between block and shot; adopting the shot's
            // timestamp keeps the window sorted
            block.timestamp = events[shot_pos].timestamp;
        }
    }
    events.insert(shot_pos + 1, block);
    Some(Correction {
        window_events: events,
        corrected_action: ActionType::Block,
        inserted: vec![],
        moved,
        force_state: None,
        outcome: HandlerOutcome::Reorder,
    })
}

/// The same player acted twice with more than the carry-gap threshold
/// between the touches: synthesize the Carry that moved the ball. The carry
/// is stamped with the rejected event's coordinates (a carry records its
/// destination) and the midpoint timestamp. Applies only to
/// spatial-continuity rejections.
pub fn handle_missing_carry(
    ctx: &RejectionContext<'_>,
    window: &EventWindow,
) -> Option<Correction> {
    let RejectReason::ConditionFailed {
        condition: Condition::SpatialContinuity { .. },
    } = ctx.reason
    else {
        return None;
    };
    let touch = ctx.machine.last_on_ball.as_ref()?;
    if touch.player_id != ctx.event.player_id
        || ctx.event.player_id.is_empty()
        || ctx.event.coords().is_none()
        || window.center_offset == 0
    {
        return None;
    }
    let timestamp = midpoint(
        window.events[window.center_offset - 1].timestamp,
        ctx.event.timestamp,
    );
    let carry = synthesized(ctx, ActionType::Carry, timestamp, (ctx.event.x, ctx.event.y));
    let inserted = vec![carry.event_id.clone()];
    let mut events = window.events.clone();
    events.insert(window.center_offset, carry);
    Some(Correction {
        window_events: events,
        corrected_action: ActionType::Carry,
        inserted,
        moved: vec![],
        force_state: None,
        outcome: HandlerOutcome::InsertBefore,
    })
}

/// Terminal fallback: force the machine into the rejected action's
/// canonical source state (the first state, in the fixed state order, from
/// which a rule for the action exists) and accept the event there. When the
/// action has no rule anywhere the event is kept, flagged unresolved, and
/// the state left alone.
pub fn handle_fallback(ctx: &RejectionContext<'_>, window: &EventWindow) -> Option<Correction> {
    let outcome = ctx.table.canonical_source(ctx.event.action);
    Some(Correction {
        window_events: window.events.clone(),
        corrected_action: ctx.event.action,
        inserted: vec![],
        moved: vec![],
        force_state: outcome,
        outcome: match outcome {
            Some(_) => HandlerOutcome::ForceState,
            None => HandlerOutcome::Unresolved,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event_model::ShotResult;
    use crate::state_machine::{default_table, PassContext, TouchContext};

    fn ev(id: &str, t: f64, team: &str, player: &str, action: ActionType) -> Event {
        Event {
            event_id: id.to_string(),
            period: 1,
            timestamp: t,
            team_id: team.to_string(),
            player_id: player.to_string(),
            action,
            outcome: Outcome::Success,
            shot_result: None,
            x: Some(50.0),
            y: Some(30.0),
            provenance: Provenance::Recorded,
        }
    }

    fn pass_ctx(team: &str, player: &str, t: f64, outcome: Outcome) -> Option<PassContext> {
        Some(PassContext {
            team_id: team.to_string(),
            player_id: player.to_string(),
            timestamp: t,
            outcome,
        })
    }

    #[test]
    fn missing_reception_inserted_at_pass_midpoint() {
        let table = default_table();
        let pass = ev("p", 10.0, "team-a", "a1", ActionType::Pass);
        let shot = ev("s", 12.0, "team-a", "a2", ActionType::Shot);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![pass, shot],
        };
        let machine = MachineContext {
            last_pass: pass_ctx("team-a", "a1", 10.0, Outcome::Success),
            last_on_ball: None,
            last_shot_result: None,
        };
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InTransition,
            reason: &reason,
            event: &window.events[1].clone(),
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = handle_missing_reception(&ctx, &window).unwrap();
        assert_eq!(correction.window_events.len(), 3);
        let inserted = &correction.window_events[1];
        assert_eq!(inserted.action, ActionType::PassReceived);
        assert_eq!(inserted.timestamp, 11.0);
        assert_eq!(inserted.player_id, "a2");
        assert_eq!(inserted.provenance, Provenance::Synthesized);
        assert_eq!(correction.outcome, HandlerOutcome::InsertBefore);
    }

    #[test]
    fn missing_reception_defers_after_failed_pass() {
        let table = default_table();
        let pass = ev("p", 10.0, "team-a", "a1", ActionType::Pass);
        let shot = ev("s", 12.0, "team-b", "b2", ActionType::Shot);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![pass, shot.clone()],
        };
        let machine = MachineContext {
            last_pass: pass_ctx("team-a", "a1", 10.0, Outcome::Failure),
            last_on_ball: None,
            last_shot_result: None,
        };
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InTransition,
            reason: &reason,
            event: &shot,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        assert!(handle_missing_reception(&ctx, &window).is_none());
        // the turnover handler picks it up instead
        let correction = handle_missing_turnover(&ctx, &window).unwrap();
        let inserted = &correction.window_events[1];
        assert_eq!(inserted.action, ActionType::Interception);
        assert_eq!(inserted.player_id, "b2");
    }

    #[test]
    fn turnover_defers_without_pass_context() {
        let table = default_table();
        let carry = ev("c", 12.0, "team-b", "b2", ActionType::Carry);
        let window = EventWindow {
            start: 0,
            center_offset: 0,
            events: vec![carry.clone()],
        };
        let machine = MachineContext::default();
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InTransition,
            reason: &reason,
            event: &carry,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        assert!(handle_missing_turnover(&ctx, &window).is_none());
    }

    #[test]
    fn block_moves_after_nearest_forward_shot() {
        let table = default_table();
        let carry = ev("c", 14.0, "team-a", "a2", ActionType::Carry);
        let block = ev("b", 16.0, "team-b", "b5", ActionType::Block);
        let mut shot = ev("s", 17.0, "team-a", "a2", ActionType::Shot);
        shot.shot_result = Some(ShotResult::Block);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![carry, block.clone(), shot],
        };
        let machine = MachineContext::default();
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InPossession,
            reason: &reason,
            event: &block,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = handle_shot_block_reorder(&ctx, &window).unwrap();
        let actions: Vec<ActionType> = correction.window_events.iter().map(|e| e.action).collect();
        assert_eq!(
            actions,
            vec![ActionType::Carry, ActionType::Shot, ActionType::Block]
        );
        // adjacent pair: timestamps swapped, both marked reordered
        assert_eq!(correction.window_events[1].timestamp, 16.0);
        assert_eq!(correction.window_events[2].timestamp, 17.0);
        assert_eq!(correction.window_events[1].provenance, Provenance::Reordered);
        assert_eq!(correction.window_events[2].provenance, Provenance::Reordered);
        assert_eq!(correction.moved.len(), 2);
        assert_eq!(correction.outcome, HandlerOutcome::Reorder);
    }

    #[test]
    fn block_attaches_to_nearest_of_two_forward_shots() {
        let table = default_table();
        let block = ev("b", 10.0, "team-b", "b5", ActionType::Block);
        let shot1 = ev("s1", 11.0, "team-a", "a2", ActionType::Shot);
        let shot2 = ev("s2", 13.0, "team-a", "a3", ActionType::Shot);
        let window = EventWindow {
            start: 0,
            center_offset: 0,
            events: vec![block.clone(), shot1, shot2],
        };
        let machine = MachineContext::default();
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InPossession,
            reason: &reason,
            event: &block,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = handle_shot_block_reorder(&ctx, &window).unwrap();
        let ids: Vec<&str> = correction
            .window_events
            .iter()
            .map(|e| e.event_id.as_str())
            .collect();
        assert_eq!(ids, vec!["s1", "b", "s2"], "nearest forward shot wins");
        assert!(correction.window_events.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    }

    #[test]
    fn block_without_forward_shot_defers() {
        let table = default_table();
        let carry = ev("c", 14.0, "team-a", "a2", ActionType::Carry);
        let block = ev("b", 16.0, "team-b", "b5", ActionType::Block);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![carry, block.clone()],
        };
        let machine = MachineContext::default();
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InPossession,
            reason: &reason,
            event: &block,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        assert!(handle_shot_block_reorder(&ctx, &window).is_none());
        // fallback then forces the block's canonical source state
        let fallback = handle_fallback(&ctx, &window).unwrap();
        assert_eq!(fallback.force_state, Some(MatchState::PostShot));
        assert_eq!(fallback.outcome, HandlerOutcome::ForceState);
    }

    #[test]
    fn missing_carry_bridges_the_gap() {
        let table = default_table();
        let recv = ev("r", 20.0, "team-a", "a2", ActionType::PassReceived);
        let mut shot = ev("s", 24.0, "team-a", "a2", ActionType::Shot);
        shot.x = Some(28.0);
        shot.y = Some(34.0);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![recv, shot.clone()],
        };
        let machine = MachineContext {
            last_pass: None,
            last_on_ball: Some(TouchContext {
                team_id: "team-a".into(),
                player_id: "a2".into(),
                x: Some(20.0),
                y: Some(30.0),
            }),
            last_shot_result: None,
        };
        let reason = RejectReason::ConditionFailed {
            condition: Condition::SpatialContinuity { max_gap_meters: 3.0 },
        };
        let ctx = RejectionContext {
            state: MatchState::InPossession,
            reason: &reason,
            event: &shot,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = handle_missing_carry(&ctx, &window).unwrap();
        let carry = &correction.window_events[1];
        assert_eq!(carry.action, ActionType::Carry);
        assert_eq!(carry.timestamp, 22.0);
        assert_eq!((carry.x, carry.y), (Some(28.0), Some(34.0)));
        assert_eq!(carry.provenance, Provenance::Synthesized);
    }

    #[test]
    fn handlers_are_pure() {
        let table = default_table();
        let pass = ev("p", 10.0, "team-a", "a1", ActionType::Pass);
        let shot = ev("s", 12.0, "team-a", "a2", ActionType::Shot);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![pass, shot.clone()],
        };
        let machine = MachineContext {
            last_pass: pass_ctx("team-a", "a1", 10.0, Outcome::Success),
            last_on_ball: None,
            last_shot_result: None,
        };
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InTransition,
            reason: &reason,
            event: &shot,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let first = handle_missing_reception(&ctx, &window).unwrap();
        let second = handle_missing_reception(&ctx, &window).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn fallback_flags_actions_with_no_rule_anywhere() {
        // Duel is self-loop-only, so it has no canonical source state; were
        // it ever rejected (a custom table could arrange that), the
        // fallback keeps the event, flags it, and touches nothing
        let table = default_table();
        let duel = ev("d", 5.0, "team-a", "a4", ActionType::Duel);
        let window = EventWindow {
            start: 0,
            center_offset: 0,
            events: vec![duel.clone()],
        };
        let machine = MachineContext::default();
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InPossession,
            reason: &reason,
            event: &duel,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = handle_fallback(&ctx, &window).unwrap();
        assert_eq!(correction.outcome, HandlerOutcome::Unresolved);
        assert_eq!(correction.force_state, None);
        assert_eq!(correction.window_events, window.events);
    }

    #[test]
    fn registry_preserves_recorded_events() {
        let table = default_table();
        let registry = HandlerRegistry::standard();
        let pass = ev("p", 10.0, "team-a", "a1", ActionType::Pass);
        let shot = ev("s", 12.0, "team-a", "a2", ActionType::Shot);
        let window = EventWindow {
            start: 0,
            center_offset: 1,
            events: vec![pass, shot.clone()],
        };
        let machine = MachineContext {
            last_pass: pass_ctx("team-a", "a1", 10.0, Outcome::Success),
            last_on_ball: None,
            last_shot_result: None,
        };
        let reason = RejectReason::NoRule;
        let ctx = RejectionContext {
            state: MatchState::InTransition,
            reason: &reason,
            event: &shot,
            machine: &machine,
            table: &table,
            attempt: 0,
        };
        let correction = registry.resolve(&ctx, &window);
        let mut input_ids: Vec<&str> = window.events.iter().map(|e| e.event_id.as_str()).collect();
        let mut output_ids: Vec<&str> = correction
            .window_events
            .iter()
            .filter(|e| e.provenance != Provenance::Synthesized)
            .map(|e| e.event_id.as_str())
            .collect();
        input_ids.sort_unstable();
        output_ids.sort_unstable();
        assert_eq!(input_ids, output_ids);
    }
}
