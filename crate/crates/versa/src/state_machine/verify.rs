//! Sequential verification of a stream against the transition table.
//!
//! Each event is attempted in order. A rejection is dispatched to the
//! handler registry; the corrected window is spliced back into the working
//! stream and processing resumes at the first changed position, with the
//! machine restored from a snapshot taken before that position. The result
//! is deterministic: identical input, table, and registry always produce an
//! identical corrected stream and exception list.

use std::collections::{HashMap, VecDeque};

use crate::correction::{ExceptionRecord, HandlerOutcome, HandlerRegistry, RejectionContext};
use crate::event_model::{sort_canonical, Event, VersaStream};
use crate::state_machine::{TransitionTable, TriggerResult, VerifierMachine};

/// The up-to-`2*radius+1` events around a center position, truncated at the
/// stream boundaries, together with the absolute index range so handler
/// output can be spliced back.
#[derive(Debug, Clone, PartialEq)]
pub struct EventWindow {
    /// Absolute index of the first window event.
    pub start: usize,
    /// Index of the center event within `events`.
    pub center_offset: usize,
    pub events: Vec<Event>,
}

impl EventWindow {
    pub fn center(&self) -> &Event {
        &self.events[self.center_offset]
    }

    /// Absolute index of the center event.
    pub fn center_index(&self) -> usize {
        self.start + self.center_offset
    }
}

/// Window around position `center` (0-based) of the stream's event list.
pub fn window(stream: &VersaStream, center: usize, radius: usize) -> EventWindow {
    window_of(&stream.events, center, radius)
}

pub(crate) fn window_of(events: &[Event], center: usize, radius: usize) -> EventWindow {
    assert!(center < events.len(), "window center out of bounds");
    let start = center.saturating_sub(radius);
    let end = (center + radius + 1).min(events.len());
    EventWindow {
        start,
        center_offset: center - start,
        events: events[start..end].to_vec(),
    }
}

/// Knobs for the verification pass. Defaults match the canonical setup:
/// ±5-event windows and a 3-handler budget per event before the fallback
/// takes over.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub window_radius: usize,
    /// Handler applications allowed per event id before escalating straight
    /// to the fallback; guarantees the pass terminates.
    pub handler_budget: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            window_radius: 5,
            handler_budget: 3,
        }
    }
}

/// Verifies and corrects one stream with default options.
pub fn verify_stream(
    stream: &VersaStream,
    table: &TransitionTable,
    handlers: &HandlerRegistry,
) -> (VersaStream, Vec<ExceptionRecord>) {
    verify_stream_with(stream, table, handlers, &VerifyOptions::default())
}

/// Verifies and corrects one stream.
///
/// Returns the corrected stream plus one [`ExceptionRecord`] per rejected
/// trigger. When every record is resolved, replaying the returned stream
/// yields zero new exceptions (the corrected stream is a fixed point);
/// force-state and unresolved records mark positions that will re-raise.
pub fn verify_stream_with(
    stream: &VersaStream,
    table: &TransitionTable,
    handlers: &HandlerRegistry,
    options: &VerifyOptions,
) -> (VersaStream, Vec<ExceptionRecord>) {
    let sorted = sort_canonical(stream.clone());
    let input_index: HashMap<String, usize> = sorted
        .events
        .iter()
        .enumerate()
        .map(|(i, e)| (e.event_id.clone(), i))
        .collect();

    let mut events = sorted.events.clone();
    let mut machine = VerifierMachine::new(table);
    let mut records: Vec<ExceptionRecord> = Vec::new();
    // handler applications so far, per rejected event id
    let mut attempts: HashMap<String, u32> = HashMap::new();
    // synthesized event id -> input index of the event that spawned it
    let mut anchors: HashMap<String, usize> = HashMap::new();
    // machine snapshots for the last window_radius+1 positions
    let mut snapshots: VecDeque<(usize, VerifierMachine)> = VecDeque::new();
    // hard cap on total handler applications; past it everything
    // escalates to the fallback
    let application_cap = events.len().saturating_mul(4) + 64;
    let mut applications = 0usize;

    let mut i = 0usize;
    while i < events.len() {
        if snapshots.back().map(|(pos, _)| *pos) != Some(i) {
            snapshots.push_back((i, machine.clone()));
            while snapshots.len() > options.window_radius + 1 {
                snapshots.pop_front();
            }
        }
        let win = window_of(&events, i, options.window_radius);
        match machine.trigger(&win.events[win.center_offset], &win) {
            TriggerResult::Accepted { .. } => {
                i += 1;
            }
            TriggerResult::Rejected { reason } => {
                let event = events[i].clone();
                let attempt = attempts.get(&event.event_id).copied().unwrap_or(0);
                let rejection = RejectionContext {
                    state: machine.state(),
                    reason: &reason,
                    event: &event,
                    machine: machine.context(),
                    table,
                    attempt,
                };
                let escalate = attempt >= options.handler_budget || applications >= application_cap;
                let correction = if escalate {
                    handlers.fallback_correction(&rejection, &win)
                } else {
                    handlers.resolve(&rejection, &win)
                };
                *attempts.entry(event.event_id.clone()).or_insert(0) += 1;
                applications += 1;

                let record_index = input_index
                    .get(&event.event_id)
                    .or_else(|| anchors.get(&event.event_id))
                    .copied()
                    .unwrap_or(i);
                for id in &correction.inserted {
                    anchors.insert(id.clone(), record_index);
                }
                records.push(ExceptionRecord {
                    stream_index: record_index,
                    event_id: event.event_id.clone(),
                    state_at_failure: machine.state(),
                    action: event.action,
                    reason: reason.clone(),
                    handler_applied: correction.outcome,
                    events_inserted: correction.inserted.clone(),
                    events_moved: correction.moved.clone(),
                });

                match correction.outcome {
                    HandlerOutcome::ForceState => {
                        let state = correction
                            .force_state
                            .expect("force-state correction carries a state");
                        machine.force_state(state);
                        machine.force_accept(&event);
                        i += 1;
                    }
                    HandlerOutcome::Unresolved => {
                        i += 1;
                    }
                    _ => {
                        let window_len = win.events.len();
                        let first_changed =
                            first_difference(&events[win.start..win.start + window_len], &correction.window_events)
                                .map(|d| (win.start + d).min(i));
                        events.splice(win.start..win.start + window_len, correction.window_events);
                        if let Some(changed) = first_changed {
                            // snapshots cover a contiguous range ending at i;
                            // clamp in case a handler changed events before it
                            let oldest = snapshots
                                .front()
                                .map(|(pos, _)| *pos)
                                .expect("snapshot for the current position was just pushed");
                            let resume = changed.max(oldest);
                            while snapshots.back().is_some_and(|(pos, _)| *pos > resume) {
                                snapshots.pop_back();
                            }
                            let (pos, snapshot) = snapshots
                                .pop_back()
                                .expect("deque retains an entry at the resume position");
                            debug_assert_eq!(pos, resume);
                            machine = snapshot;
                            i = resume;
                        }
                        // unchanged window: retry the same position; the
                        // attempt counter escalates to the fallback
                    }
                }
            }
        }
    }

    let mut corrected = sorted;
    corrected.events = events;
    debug_assert!(corrected.is_sorted(), "corrections must preserve ordering");
    (corrected, records)
}

fn first_difference(old: &[Event], new: &[Event]) -> Option<usize> {
    let shared = old.len().min(new.len());
    (0..shared)
        .find(|&k| old[k] != new[k])
        .or_else(|| (old.len() != new.len()).then_some(shared))
}
