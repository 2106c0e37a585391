//! The transition table: complete rule set plus the exceptional transitions
//! (own-goal wildcard and the self-loop action set).
//!
//! The canonical table ships as a versioned JSON document embedded from
//! `data/default_table.json`, so the topology can be reviewed and diffed as
//! data. A custom table can be loaded from disk (`--table` on the CLI).

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::event_model::ActionType;
use crate::state_machine::{Condition, MatchState, TransitionRule};

const DEFAULT_TABLE_JSON: &str = include_str!("../../data/default_table.json");

/// An action accepted from every state except the listed ones, always
/// transitioning to `target`. The own-goal rule is the only default entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WildcardRule {
    pub action: ActionType,
    pub target: MatchState,
    #[serde(default)]
    pub excluded_sources: Vec<MatchState>,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("duplicate rule for ({state}, {action})")]
    DuplicateRule {
        state: MatchState,
        action: ActionType,
    },
    #[error("table covers no rule, self-loop, or wildcard for actions: {0:?}")]
    UncoveredActions(Vec<ActionType>),
    #[error("unsupported table version {0} (expected 1)")]
    UnsupportedVersion(u32),
    #[error("failed to parse transition table: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("failed to read transition table: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TableDoc {
    version: u32,
    rules: Vec<TransitionRule>,
    #[serde(default)]
    self_loops: Vec<ActionType>,
    #[serde(default)]
    wildcards: Vec<WildcardRule>,
}

/// Complete transition rule set with constant-time (state, action) lookup.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    version: u32,
    rules: Vec<TransitionRule>,
    self_loops: BTreeSet<ActionType>,
    wildcards: Vec<WildcardRule>,
    index: HashMap<(MatchState, ActionType), usize>,
}

impl TransitionTable {
    /// Builds and validates a table. Duplicate (source, action) keys are
    /// rejected, and every member of the action taxonomy must be covered by
    /// at least one rule, self-loop, or wildcard.
    pub fn from_parts(
        rules: Vec<TransitionRule>,
        self_loops: impl IntoIterator<Item = ActionType>,
        wildcards: Vec<WildcardRule>,
    ) -> Result<Self, TableError> {
        let mut index = HashMap::with_capacity(rules.len());
        for (i, rule) in rules.iter().enumerate() {
            if index.insert((rule.source, rule.action), i).is_some() {
                return Err(TableError::DuplicateRule {
                    state: rule.source,
                    action: rule.action,
                });
            }
        }
        let self_loops: BTreeSet<ActionType> = self_loops.into_iter().collect();
        let uncovered: Vec<ActionType> = ActionType::ALL
            .into_iter()
            .filter(|a| {
                !self_loops.contains(a)
                    && !rules.iter().any(|r| r.action == *a)
                    && !wildcards.iter().any(|w| w.action == *a)
            })
            .collect();
        if !uncovered.is_empty() {
            return Err(TableError::UncoveredActions(uncovered));
        }
        Ok(TransitionTable {
            version: 1,
            rules,
            self_loops,
            wildcards,
            index,
        })
    }

    /// Target state and guard conditions for (state, action), if any rule
    /// covers the pair. Precedence: explicit rule, then wildcard, then the
    /// self-loop set.
    pub fn resolve(&self, state: MatchState, action: ActionType) -> Option<(MatchState, &[Condition])> {
        if let Some(&i) = self.index.get(&(state, action)) {
            let rule = &self.rules[i];
            return Some((rule.target, rule.conditions.as_slice()));
        }
        if let Some(w) = self
            .wildcards
            .iter()
            .find(|w| w.action == action && !w.excluded_sources.contains(&state))
        {
            return Some((w.target, &[]));
        }
        if self.self_loops.contains(&action) {
            return Some((state, &[]));
        }
        None
    }

    /// The explicit rule for (state, action), ignoring wildcards/self-loops.
    pub fn rule(&self, state: MatchState, action: ActionType) -> Option<&TransitionRule> {
        self.index.get(&(state, action)).map(|&i| &self.rules[i])
    }

    /// First state (in the fixed state order) from which an explicit rule
    /// for the action exists; falls back to the first state a wildcard
    /// accepts it from. `None` when the action is rule-less everywhere.
    pub fn canonical_source(&self, action: ActionType) -> Option<MatchState> {
        MatchState::ALL
            .into_iter()
            .find(|s| self.index.contains_key(&(*s, action)))
            .or_else(|| {
                self.wildcards.iter().find(|w| w.action == action).and_then(|w| {
                    MatchState::ALL
                        .into_iter()
                        .find(|s| !w.excluded_sources.contains(s))
                })
            })
    }

    pub fn rules(&self) -> &[TransitionRule] {
        &self.rules
    }

    pub fn self_loops(&self) -> &BTreeSet<ActionType> {
        &self.self_loops
    }

    pub fn wildcards(&self) -> &[WildcardRule] {
        &self.wildcards
    }

    pub fn version(&self) -> u32 {
        self.version
    }

    /// Returns a copy with every SpatialContinuity guard set to `gap`
    /// meters. Backs the `--carry-threshold` flag.
    pub fn with_carry_gap(&self, gap: f64) -> Self {
        let mut table = self.clone();
        for rule in &mut table.rules {
            for condition in &mut rule.conditions {
                if let Condition::SpatialContinuity { max_gap_meters } = condition {
                    *max_gap_meters = gap;
                }
            }
        }
        table
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let doc: TableDoc = serde_json::from_str(text)?;
        if doc.version != 1 {
            return Err(TableError::UnsupportedVersion(doc.version));
        }
        Self::from_parts(doc.rules, doc.self_loops, doc.wildcards)
    }

    pub fn to_json(&self) -> String {
        let doc = TableDoc {
            version: self.version,
            rules: self.rules.clone(),
            self_loops: self.self_loops.iter().copied().collect(),
            wildcards: self.wildcards.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("table serialization cannot fail")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TableError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// The canonical transition table.
pub fn default_table() -> TransitionTable {
    static TABLE: OnceLock<TransitionTable> = OnceLock::new();
    TABLE
        .get_or_init(|| {
            TransitionTable::from_json(DEFAULT_TABLE_JSON)
                .expect("embedded default table must be valid")
        })
        .clone()
}
