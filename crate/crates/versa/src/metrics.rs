//! Data-quality and cross-provider consistency metrics.
//!
//! Exception statistics summarize how much of a dataset the verifier
//! flagged and which missing/misplaced action dominates. Sequence
//! similarity between two providers' accounts of the same half is
//! `1 - d_edit(x, y) / max(|x|, |y|)` over the action-type sequences, and
//! per-half value sums can be correlated with the sample Pearson
//! coefficient. All computations here are pure; per-match work can run in
//! parallel and aggregation is an associative reduce.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correction::ExceptionRecord;
use crate::event_model::{ActionType, Provenance, VersaStream};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("vector lengths unusable for correlation: {left} vs {right} (need equal lengths >= 2)")]
    LengthMismatch { left: usize, right: usize },
    #[error("correlation undefined: {0} input has zero variance")]
    ZeroVariance(&'static str),
    #[error("streams cover different periods: {left} vs {right}")]
    PeriodMismatch { left: u8, right: u8 },
}

/// Levenshtein distance with unit insert/delete/substitute costs.
pub fn edit_distance<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    if x.is_empty() {
        return y.len();
    }
    if y.is_empty() {
        return x.len();
    }
    let mut prev: Vec<usize> = (0..=y.len()).collect();
    let mut cur = vec![0usize; y.len() + 1];
    for (i, xi) in x.iter().enumerate() {
        cur[0] = i + 1;
        for (j, yj) in y.iter().enumerate() {
            let substitute = prev[j] + usize::from(xi != yj);
            cur[j + 1] = substitute.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// `1 - d_edit(x, y) / max(|x|, |y|)`, in [0, 1]. Two empty sequences agree
/// vacuously and score 1.0.
pub fn normalized_edit_similarity<T: PartialEq>(x: &[T], y: &[T]) -> f64 {
    let longest = x.len().max(y.len());
    if longest == 0 {
        return 1.0;
    }
    1.0 - edit_distance(x, y) as f64 / longest as f64
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, MetricsError> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(MetricsError::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cross = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        cross += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if var_x == 0.0 {
        return Err(MetricsError::ZeroVariance("left"));
    }
    if var_y == 0.0 {
        return Err(MetricsError::ZeroVariance("right"));
    }
    Ok(cross / (var_x.sqrt() * var_y.sqrt()))
}

/// Count and share of one exception action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionStat {
    pub count: usize,
    /// Fraction of *total events*, matching how per-action exception shares
    /// are reported alongside the overall ratio.
    pub fraction: f64,
}

/// Aggregated exception statistics over one stream collection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExceptionStats {
    /// Recorded (non-synthesized) events across the collection.
    pub total_events: usize,
    /// Exceptions counted, model-defined outcome events excluded.
    pub exception_count: usize,
    pub exception_ratio: f64,
    pub per_action: BTreeMap<ActionType, ActionStat>,
    /// The action with the largest share, when any exceptions exist.
    pub primary_exception: Option<(ActionType, f64)>,
}

/// The action a record is attributed to: the synthesized (missing) event's
/// action when the handler inserted one, otherwise the rejected action.
fn exception_action(record: &ExceptionRecord, stream: &VersaStream) -> ActionType {
    record
        .events_inserted
        .first()
        .and_then(|id| stream.events.iter().find(|e| &e.event_id == id))
        .map(|e| e.action)
        .unwrap_or(record.action)
}

/// Aggregates exception statistics over verified (stream, records) pairs.
/// Streams are the corrected outputs of verification, so synthesized events
/// are present for attribution but excluded from the event total. Events
/// defined by the model itself (Goal, GoalMiss, GoalPost, Out) never count
/// as exceptions.
pub fn exception_report(verified: &[(VersaStream, Vec<ExceptionRecord>)]) -> ExceptionStats {
    let total_events: usize = verified
        .iter()
        .map(|(stream, _)| {
            stream
                .events
                .iter()
                .filter(|e| e.provenance != Provenance::Synthesized)
                .count()
        })
        .sum();
    let mut counts: BTreeMap<ActionType, usize> = BTreeMap::new();
    for (stream, records) in verified {
        for record in records {
            let action = exception_action(record, stream);
            if action.is_model_outcome() {
                continue;
            }
            *counts.entry(action).or_insert(0) += 1;
        }
    }
    let exception_count: usize = counts.values().sum();
    let fraction = |count: usize| {
        if total_events == 0 {
            0.0
        } else {
            count as f64 / total_events as f64
        }
    };
    let per_action: BTreeMap<ActionType, ActionStat> = counts
        .iter()
        .map(|(&action, &count)| {
            (
                action,
                ActionStat {
                    count,
                    fraction: fraction(count),
                },
            )
        })
        .collect();
    let primary_exception = per_action
        .iter()
        .max_by(|a, b| {
            a.1.count
                .cmp(&b.1.count)
                .then_with(|| b.0.cmp(a.0)) // deterministic tie-break: smaller action wins
        })
        .map(|(&action, stat)| (action, stat.fraction));
    ExceptionStats {
        total_events,
        exception_count,
        exception_ratio: fraction(exception_count),
        per_action,
        primary_exception,
    }
}

/// Grouping key for Table-style reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReportKey {
    pub provider: String,
    pub league: String,
    pub season: String,
}

impl ReportKey {
    fn of(stream: &VersaStream) -> Self {
        let field = |v: &Option<String>| v.clone().unwrap_or_else(|| "unknown".to_string());
        ReportKey {
            provider: field(&stream.meta.provider),
            league: field(&stream.meta.league),
            season: field(&stream.meta.season),
        }
    }
}

/// One row of the exception-statistics report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub key: ReportKey,
    pub match_count: usize,
    pub stats: ExceptionStats,
}

/// Groups verified streams by (provider, league, season) carried in their
/// metadata and reports per-group statistics, ordered by key.
pub fn grouped_exception_report(
    verified: &[(VersaStream, Vec<ExceptionRecord>)],
) -> Vec<ReportRow> {
    let mut groups: BTreeMap<ReportKey, Vec<&(VersaStream, Vec<ExceptionRecord>)>> =
        BTreeMap::new();
    for pair in verified {
        groups.entry(ReportKey::of(&pair.0)).or_default().push(pair);
    }
    groups
        .into_iter()
        .map(|(key, pairs)| {
            let mut matches: Vec<&str> = pairs.iter().map(|p| p.0.match_id.as_str()).collect();
            matches.sort_unstable();
            matches.dedup();
            let owned: Vec<(VersaStream, Vec<ExceptionRecord>)> =
                pairs.into_iter().cloned().collect();
            ReportRow {
                key,
                match_count: matches.len(),
                stats: exception_report(&owned),
            }
        })
        .collect()
}

/// Consistency of two providers' accounts of one half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfConsistency {
    pub period: u8,
    pub edit_similarity: f64,
    /// Per-half sums of externally supplied per-event values, when given.
    pub value_sum_a: Option<f64>,
    pub value_sum_b: Option<f64>,
}

/// Edit similarity between two providers' action sequences for the same
/// half.
pub fn compare_providers(
    a: &VersaStream,
    b: &VersaStream,
) -> Result<HalfConsistency, MetricsError> {
    if a.period != b.period {
        return Err(MetricsError::PeriodMismatch {
            left: a.period,
            right: b.period,
        });
    }
    Ok(HalfConsistency {
        period: a.period,
        edit_similarity: normalized_edit_similarity(&a.action_sequence(), &b.action_sequence()),
        value_sum_a: None,
        value_sum_b: None,
    })
}

/// As [`compare_providers`], with per-event values (one per event, in
/// stream order) summed per half for downstream correlation.
pub fn compare_providers_with_values(
    a: &VersaStream,
    b: &VersaStream,
    values_a: &[f64],
    values_b: &[f64],
) -> Result<HalfConsistency, MetricsError> {
    if values_a.len() != a.len() {
        return Err(MetricsError::LengthMismatch {
            left: values_a.len(),
            right: a.len(),
        });
    }
    if values_b.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            left: values_b.len(),
            right: b.len(),
        });
    }
    let mut half = compare_providers(a, b)?;
    half.value_sum_a = Some(values_a.iter().sum());
    half.value_sum_b = Some(values_b.iter().sum());
    Ok(half)
}

/// Per-half similarity figures plus the correlation of per-half value sums
/// across the collection (when at least two halves carry values and both
/// sides vary).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub halves: Vec<HalfConsistency>,
    pub pearson_r: Option<f64>,
}

impl ConsistencyReport {
    pub fn from_halves(halves: Vec<HalfConsistency>) -> Self {
        let paired: Vec<(f64, f64)> = halves
            .iter()
            .filter_map(|h| h.value_sum_a.zip(h.value_sum_b))
            .collect();
        let xs: Vec<f64> = paired.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = paired.iter().map(|p| p.1).collect();
        let pearson_r = pearson(&xs, &ys).ok();
        ConsistencyReport { halves, pearson_r }
    }

    pub fn mean_edit_similarity(&self) -> Option<f64> {
        if self.halves.is_empty() {
            return None;
        }
        Some(self.halves.iter().map(|h| h.edit_similarity).sum::<f64>() / self.halves.len() as f64)
    }
}
