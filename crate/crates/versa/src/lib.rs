//! VERSA: verified event data for soccer analytics.
//!
//! Event streams collected by human annotators carry logical
//! inconsistencies: blocks recorded before the shots they answered,
//! receptions that were never written down, carries missing between distant
//! touches. This crate verifies streams against a six-state transition
//! model of match flow, repairs the exceptions it finds with rule-based
//! handlers, unifies heterogeneous provider formats into one canonical
//! representation, and quantifies how consistent two providers' accounts of
//! the same match are.
//!
//! The pieces:
//!
//! - [`event_model`]: the canonical [`Event`]/[`VersaStream`]
//!   representation and the action taxonomy.
//! - [`state_machine`]: the six [`MatchState`]s, the guarded
//!   [`TransitionTable`], and [`verify_stream`].
//! - [`correction`]: the handler catalogue that synthesizes missing events
//!   or reorders windows, and the [`ExceptionRecord`]s it emits.
//! - [`adapters`]: provider-profile ingestion, canonical JSONL export, and
//!   the simplified variant.
//! - [`metrics`]: edit-distance similarity, Pearson correlation, and
//!   exception statistics.
//! - [`corruptor`]: seeded fault injection with ground truth, plus
//!   precision/recall scoring of detection.
//! - [`fixtures`]: synthetic clean halves and the hand-built case fixtures
//!   used by the examples and the test suites.
//! - [`cli`]: the batch pipeline behind the `versa` binary.
//!
//! Start with the runnable examples (`cargo run --example verify_basics`)
//! or the `verify_stream` round trip:
//!
//! ```
//! use versa::{default_table, verify_stream, HandlerRegistry};
//!
//! let stream = versa::fixtures::case2_missing_reception();
//! let (corrected, exceptions) =
//!     verify_stream(&stream, &default_table(), &HandlerRegistry::standard());
//! assert_eq!(exceptions.len(), 1);
//! assert_eq!(corrected.len(), stream.len() + 1);
//! ```

pub mod adapters;
pub mod cli;
pub mod correction;
pub mod corruptor;
pub mod event_model;
pub mod fixtures;
pub mod metrics;
pub mod state_machine;

pub use correction::{
    Correction, ExceptionRecord, Handler, HandlerKey, HandlerKind, HandlerOutcome,
    HandlerRegistry, RejectionContext,
};
pub use event_model::{
    action_distance, sort_canonical, ActionType, DistanceUnavailable, Event, FormatVariant,
    Outcome, Provenance, ShotResult, StreamMeta, VersaStream, PITCH_LENGTH, PITCH_WIDTH,
};
pub use state_machine::{
    default_table, verify_stream, verify_stream_with, window, Condition, EventWindow, MatchState,
    RejectReason, TableError, TransitionRule, TransitionTable, TriggerResult, VerifierMachine,
    VerifyOptions, WildcardRule,
};
