//! Provider-format ingestion, canonical JSONL export, and the simplified
//! variant.
//!
//! A [`ProviderProfile`] declares everything provider-specific as data: the
//! coordinate frame, the time unit, the action/result vocabularies, and the
//! two behavioral flags the verifier cares about (whether receptions are
//! recorded, how carries are annotated). Three profiles ship under
//! `profiles/` (`bepro_like`, `statsbomb_like`, `wyscout_like`) capturing
//! the documented distinctions between annotation styles; real provider
//! mappings can be added as new profile files without code changes.
//!
//! Provider files share one record schema (`match_id` + `events`, each
//! event `{event_id, period, time, team_id, player_id, action, result?,
//! shot_result?, x?, y?}`); the profile supplies the semantics.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::event_model::{
    derive_team_ids, ActionType, Event, FormatVariant, Outcome, Provenance, ShotResult,
    StreamMeta, VersaStream, PITCH_LENGTH, PITCH_WIDTH,
};

const BEPRO_LIKE_JSON: &str = include_str!("../../../profiles/bepro_like.json");
const STATSBOMB_LIKE_JSON: &str = include_str!("../../../profiles/statsbomb_like.json");
const WYSCOUT_LIKE_JSON: &str = include_str!("../../../profiles/wyscout_like.json");
const DEFAULT_SIMPLIFICATION_JSON: &str = include_str!("../data/default_simplification.json");

/// Where the provider's y axis starts. `TopLeft` means y grows downward
/// and is flipped during normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PitchOrigin {
    BottomLeft,
    TopLeft,
}

/// Affine, invertible mapping between a provider's coordinate units and
/// the canonical 105 m x 68 m frame. x always runs along the pitch length
/// in the acting team's attacking direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PitchFrame {
    pub length_units: f64,
    pub width_units: f64,
    pub origin: PitchOrigin,
}

impl PitchFrame {
    pub fn normalize(&self, x: f64, y: f64) -> (f64, f64) {
        let nx = x / self.length_units * PITCH_LENGTH;
        let ny = match self.origin {
            PitchOrigin::BottomLeft => y / self.width_units * PITCH_WIDTH,
            PitchOrigin::TopLeft => (1.0 - y / self.width_units) * PITCH_WIDTH,
        };
        (nx.clamp(0.0, PITCH_LENGTH), ny.clamp(0.0, PITCH_WIDTH))
    }

    pub fn denormalize(&self, x: f64, y: f64) -> (f64, f64) {
        let px = x / PITCH_LENGTH * self.length_units;
        let py = match self.origin {
            PitchOrigin::BottomLeft => y / PITCH_WIDTH * self.width_units,
            PitchOrigin::TopLeft => (1.0 - y / PITCH_WIDTH) * self.width_units,
        };
        (px, py)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    Seconds,
    Milliseconds,
    Minutes,
}

impl TimeUnit {
    pub fn to_seconds(self, t: f64) -> f64 {
        match self {
            TimeUnit::Seconds => t,
            TimeUnit::Milliseconds => t / 1000.0,
            TimeUnit::Minutes => t * 60.0,
        }
    }

    pub fn from_seconds(self, t: f64) -> f64 {
        match self {
            TimeUnit::Seconds => t,
            TimeUnit::Milliseconds => t * 1000.0,
            TimeUnit::Minutes => t / 60.0,
        }
    }
}

/// How a profile annotates ball transport.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarryConvention {
    /// Carries recorded even for sub-threshold movement.
    ExplicitMicro,
    /// Carries appear only when a real gap exists (or not at all).
    ImplicitGapOnly,
}

/// Target of one vocabulary entry: a canonical action, or drop the record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionMapping {
    Action(ActionType),
    Drop,
}

impl Serialize for ActionMapping {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ActionMapping::Action(a) => a.serialize(serializer),
            ActionMapping::Drop => "Drop".serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for ActionMapping {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        if name == "Drop" {
            return Ok(ActionMapping::Drop);
        }
        action_from_name(&name)
            .map(ActionMapping::Action)
            .ok_or_else(|| D::Error::custom(format!("unknown action `{name}`")))
    }
}

fn action_from_name(name: &str) -> Option<ActionType> {
    serde_json::from_value(serde_json::Value::String(name.to_string())).ok()
}

/// Everything provider-specific, as data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderProfile {
    pub name: String,
    pub pitch_frame: PitchFrame,
    pub time_unit: TimeUnit,
    /// Total over the profile's declared vocabulary; unmapped strings in a
    /// file are a hard ingestion error listing the offenders.
    pub action_map: BTreeMap<String, ActionMapping>,
    #[serde(default)]
    pub outcome_map: BTreeMap<String, Outcome>,
    #[serde(default)]
    pub shot_result_map: BTreeMap<String, ShotResult>,
    pub records_pass_received: bool,
    pub carry_convention: CarryConvention,
}

impl ProviderProfile {
    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IngestError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The profiles compiled into the library.
    pub fn builtin(name: &str) -> Option<ProviderProfile> {
        let text = match name {
            "bepro_like" => BEPRO_LIKE_JSON,
            "statsbomb_like" => STATSBOMB_LIKE_JSON,
            "wyscout_like" => WYSCOUT_LIKE_JSON,
            _ => return None,
        };
        Some(Self::from_json(text).expect("embedded profile must be valid"))
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["bepro_like", "statsbomb_like", "wyscout_like"]
    }

    /// Resolves a `--profile` argument: an existing path, a builtin name,
    /// or `profiles/<name>.json` relative to the working directory.
    pub fn resolve(name_or_path: &str) -> Result<ProviderProfile, IngestError> {
        let path = Path::new(name_or_path);
        if path.is_file() {
            return Self::load(path);
        }
        if let Some(profile) = Self::builtin(name_or_path) {
            return Ok(profile);
        }
        let local = Path::new("profiles").join(format!("{name_or_path}.json"));
        if local.is_file() {
            return Self::load(local);
        }
        Err(IngestError::UnknownProfile {
            name: name_or_path.to_string(),
            builtin: Self::builtin_names().join(", "),
        })
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("provider file is missing `{0}`")]
    MissingField(&'static str),
    #[error("record {index}: {detail}")]
    MalformedRecord { index: usize, detail: String },
    #[error("actions not in profile `{profile}` vocabulary: {actions:?}")]
    UnmappedActions { profile: String, actions: Vec<String> },
    #[error("no events remain after mapping")]
    EmptyStream,
    #[error("file contains multiple periods {0:?}; use ingest_periods")]
    MultiplePeriods(Vec<u8>),
    #[error("events name {0} distinct teams (at most 2 expected)")]
    TooManyTeams(usize),
    #[error("unknown profile `{name}` (builtin: {builtin})")]
    UnknownProfile { name: String, builtin: String },
    #[error("file name `{0}` is not <match_id>_p<period>[.simplified].versa.jsonl")]
    BadFileName(String),
    #[error("line {line}: {detail}")]
    MalformedLine { line: usize, detail: String },
    #[error("action {0} has no representation in profile `{1}`")]
    UnrepresentableAction(ActionType, String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProviderRecord {
    event_id: String,
    period: u8,
    time: f64,
    team_id: String,
    #[serde(default)]
    player_id: String,
    action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    result: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    shot_result: Option<String>,
    #[serde(default)]
    x: Option<f64>,
    #[serde(default)]
    y: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ProviderFile {
    match_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provider: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    league: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    season: Option<String>,
    events: Vec<ProviderRecord>,
}

fn convert_records(
    file: &ProviderFile,
    profile: &ProviderProfile,
) -> Result<Vec<Event>, IngestError> {
    let mut unmapped: BTreeSet<String> = BTreeSet::new();
    let mut events = Vec::with_capacity(file.events.len());
    for record in &file.events {
        let action = match profile.action_map.get(&record.action) {
            Some(ActionMapping::Action(action)) => *action,
            Some(ActionMapping::Drop) => continue,
            None => {
                unmapped.insert(record.action.clone());
                continue;
            }
        };
        let outcome = match &record.result {
            Some(result) => profile
                .outcome_map
                .get(result)
                .copied()
                .unwrap_or(Outcome::Unknown),
            None => Outcome::Unknown,
        };
        let shot_result = record
            .shot_result
            .as_ref()
            .and_then(|r| profile.shot_result_map.get(r).copied());
        let (x, y) = match (record.x, record.y) {
            (Some(x), Some(y)) => {
                let (nx, ny) = profile.pitch_frame.normalize(x, y);
                (Some(nx), Some(ny))
            }
            _ => (None, None),
        };
        events.push(Event {
            event_id: record.event_id.clone(),
            period: record.period,
            timestamp: profile.time_unit.to_seconds(record.time),
            team_id: record.team_id.clone(),
            player_id: record.player_id.clone(),
            action,
            outcome,
            shot_result,
            x,
            y,
            provenance: Provenance::Recorded,
        });
    }
    if !unmapped.is_empty() {
        return Err(IngestError::UnmappedActions {
            profile: profile.name.clone(),
            actions: unmapped.into_iter().collect(),
        });
    }
    if events.is_empty() {
        return Err(IngestError::EmptyStream);
    }
    let teams: BTreeSet<&str> = events
        .iter()
        .map(|e| e.team_id.as_str())
        .filter(|t| !t.is_empty())
        .collect();
    if teams.len() > 2 {
        return Err(IngestError::TooManyTeams(teams.len()));
    }
    Ok(events)
}

fn parse_provider_file(path: impl AsRef<Path>) -> Result<ProviderFile, IngestError> {
    let text = std::fs::read_to_string(path)?;
    let doc: serde_json::Value = serde_json::from_str(&text)?;
    let match_id = doc
        .get("match_id")
        .and_then(|v| v.as_str())
        .ok_or(IngestError::MissingField("match_id"))?
        .to_string();
    let raw_events = doc
        .get("events")
        .and_then(|v| v.as_array())
        .ok_or(IngestError::MissingField("events"))?;
    let mut events = Vec::with_capacity(raw_events.len());
    for (index, raw) in raw_events.iter().enumerate() {
        let record: ProviderRecord =
            serde_json::from_value(raw.clone()).map_err(|e| IngestError::MalformedRecord {
                index,
                detail: e.to_string(),
            })?;
        events.push(record);
    }
    let field = |key: &str| {
        doc.get(key)
            .and_then(|v| v.as_str())
            .map(|s| s.to_string())
    };
    Ok(ProviderFile {
        match_id,
        provider: field("provider"),
        league: field("league"),
        season: field("season"),
        events,
    })
}

fn meta_of(file: &ProviderFile, profile: &ProviderProfile) -> StreamMeta {
    StreamMeta {
        provider: file
            .provider
            .clone()
            .or_else(|| Some(profile.name.clone())),
        league: file.league.clone(),
        season: file.season.clone(),
    }
}

/// Ingests a single-period provider file into a canonical stream:
/// vocabulary mapped, coordinates normalized to the 105x68 frame,
/// timestamps converted to seconds from period start, events canonically
/// sorted. Files covering several periods are an error here; use
/// [`ingest_periods`].
pub fn ingest(path: impl AsRef<Path>, profile: &ProviderProfile) -> Result<VersaStream, IngestError> {
    let mut streams = ingest_periods(path, profile)?;
    if streams.len() > 1 {
        return Err(IngestError::MultiplePeriods(
            streams.iter().map(|s| s.period).collect(),
        ));
    }
    Ok(streams.remove(0))
}

/// Ingests a provider file into one canonical stream per period, ordered
/// by period.
pub fn ingest_periods(
    path: impl AsRef<Path>,
    profile: &ProviderProfile,
) -> Result<Vec<VersaStream>, IngestError> {
    let file = parse_provider_file(path)?;
    let events = convert_records(&file, profile)?;
    let meta = meta_of(&file, profile);
    let mut periods: Vec<u8> = events.iter().map(|e| e.period).collect();
    periods.sort_unstable();
    periods.dedup();
    Ok(periods
        .into_iter()
        .map(|period| {
            let period_events: Vec<Event> = events
                .iter()
                .filter(|e| e.period == period)
                .cloned()
                .collect();
            let mut stream = VersaStream::new(file.match_id.clone(), period, period_events);
            stream.meta = meta.clone();
            stream
        })
        .collect())
}

/// Canonical file name for a stream: `<match_id>_p<period>.versa.jsonl`,
/// with a `.simplified` marker for the simplified variant.
pub fn canonical_file_name(stream: &VersaStream) -> String {
    match stream.format_variant {
        FormatVariant::Versa => format!("{}_p{}.versa.jsonl", stream.match_id, stream.period),
        FormatVariant::SimplifiedVersa => format!(
            "{}_p{}.simplified.versa.jsonl",
            stream.match_id, stream.period
        ),
    }
}

fn parse_canonical_name(name: &str) -> Option<(String, u8, FormatVariant)> {
    let (stem, variant) = if let Some(stem) = name.strip_suffix(".simplified.versa.jsonl") {
        (stem, FormatVariant::SimplifiedVersa)
    } else {
        (name.strip_suffix(".versa.jsonl")?, FormatVariant::Versa)
    };
    let (match_id, period) = stem.rsplit_once("_p")?;
    let period: u8 = period.parse().ok()?;
    Some((match_id.to_string(), period, variant))
}

/// Writes the canonical JSON Lines representation: one Event object per
/// line, UTF-8, trailing newline. Export followed by [`read_stream`]
/// reproduces the stream exactly.
pub fn export(stream: &VersaStream, path: impl AsRef<Path>) -> Result<(), IngestError> {
    let mut out = Vec::new();
    for event in &stream.events {
        serde_json::to_writer(&mut out, event)?;
        out.push(b'\n');
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&out)?;
    Ok(())
}

/// Reads a canonical `.versa.jsonl` file; match id, period, and variant
/// come from the file name.
pub fn read_stream(path: impl AsRef<Path>) -> Result<VersaStream, IngestError> {
    let path = path.as_ref();
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let (match_id, period, variant) = parse_canonical_name(name)
        .ok_or_else(|| IngestError::BadFileName(name.to_string()))?;
    let text = std::fs::read_to_string(path)?;
    let mut events = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let event: Event =
            serde_json::from_str(line).map_err(|e| IngestError::MalformedLine {
                line: index + 1,
                detail: e.to_string(),
            })?;
        events.push(event);
    }
    if events.is_empty() {
        return Err(IngestError::EmptyStream);
    }
    let mut stream = VersaStream::new(match_id, period, events);
    stream.format_variant = variant;
    Ok(stream)
}

/// Writes a stream back out in a provider's vocabulary, units, and frame,
/// the inverse of [`ingest`]. Used to fabricate provider-style fixtures.
/// Fails when the stream contains an action the profile cannot express
/// (for example receptions under a profile that does not record them).
pub fn write_provider_file(
    stream: &VersaStream,
    profile: &ProviderProfile,
    path: impl AsRef<Path>,
) -> Result<(), IngestError> {
    let mut action_names: BTreeMap<ActionType, &str> = BTreeMap::new();
    for (name, mapping) in &profile.action_map {
        if let ActionMapping::Action(action) = mapping {
            action_names.entry(*action).or_insert(name.as_str());
        }
    }
    let mut outcome_names: BTreeMap<Outcome, &str> = BTreeMap::new();
    for (name, outcome) in &profile.outcome_map {
        outcome_names.entry(*outcome).or_insert(name.as_str());
    }
    let mut shot_result_names: BTreeMap<ShotResult, &str> = BTreeMap::new();
    for (name, result) in &profile.shot_result_map {
        shot_result_names.entry(*result).or_insert(name.as_str());
    }

    let mut records = Vec::with_capacity(stream.len());
    for event in &stream.events {
        let action = action_names.get(&event.action).ok_or(
            IngestError::UnrepresentableAction(event.action, profile.name.clone()),
        )?;
        let (x, y) = match event.coords() {
            Some((x, y)) => {
                let (px, py) = profile.pitch_frame.denormalize(x, y);
                (Some(px), Some(py))
            }
            None => (None, None),
        };
        records.push(ProviderRecord {
            event_id: event.event_id.clone(),
            period: event.period,
            time: profile.time_unit.from_seconds(event.timestamp),
            team_id: event.team_id.clone(),
            player_id: event.player_id.clone(),
            action: action.to_string(),
            result: outcome_names.get(&event.outcome).map(|s| s.to_string()),
            shot_result: event
                .shot_result
                .and_then(|r| shot_result_names.get(&r).map(|s| s.to_string())),
            x,
            y,
        });
    }
    let file = ProviderFile {
        match_id: stream.match_id.clone(),
        provider: stream.meta.provider.clone(),
        league: stream.meta.league.clone(),
        season: stream.meta.season.clone(),
        events: records,
    };
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(())
}

#[derive(Debug, Error, PartialEq)]
pub enum SimplifyError {
    #[error("merge chain starting at {0} forms a cycle")]
    MergeCycle(ActionType),
    #[error("{0} merges into {1}, which the map drops")]
    MergeIntoDropped(ActionType, ActionType),
    #[error("{0} is both merged and dropped")]
    MergeDropConflict(ActionType),
    #[error("invalid simplification map: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SimplificationDoc {
    #[serde(default)]
    merges: BTreeMap<ActionType, ActionType>,
    #[serde(default)]
    drops: BTreeSet<ActionType>,
}

/// Merge rules plus a drop set, closed under composition so applying the
/// map twice equals applying it once.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplificationMap {
    merges: BTreeMap<ActionType, ActionType>,
    drops: BTreeSet<ActionType>,
}

impl SimplificationMap {
    /// Builds a map, resolving merge chains to their final targets and
    /// rejecting cycles and merge/drop conflicts.
    pub fn new(
        merges: BTreeMap<ActionType, ActionType>,
        drops: BTreeSet<ActionType>,
    ) -> Result<Self, SimplifyError> {
        let mut resolved = BTreeMap::new();
        for &start in merges.keys() {
            if drops.contains(&start) {
                return Err(SimplifyError::MergeDropConflict(start));
            }
            let mut seen = BTreeSet::new();
            let mut current = start;
            while let Some(&next) = merges.get(&current) {
                if !seen.insert(current) {
                    return Err(SimplifyError::MergeCycle(start));
                }
                current = next;
            }
            if drops.contains(&current) {
                return Err(SimplifyError::MergeIntoDropped(start, current));
            }
            resolved.insert(start, current);
        }
        Ok(SimplificationMap {
            merges: resolved,
            drops,
        })
    }

    pub fn empty() -> Self {
        SimplificationMap {
            merges: BTreeMap::new(),
            drops: BTreeSet::new(),
        }
    }

    /// The shipped default: the corner variants merge into a single Corner
    /// action, and the off-ball self-loop events (Duel, Offside) drop.
    /// Defined in `data/default_simplification.json`.
    pub fn default_map() -> Self {
        Self::from_json(DEFAULT_SIMPLIFICATION_JSON)
            .expect("embedded default simplification must be valid")
    }

    pub fn from_json(text: &str) -> Result<Self, SimplifyError> {
        let doc: SimplificationDoc =
            serde_json::from_str(text).map_err(|e| SimplifyError::Parse(e.to_string()))?;
        Self::new(doc.merges, doc.drops)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, SimplifyError> {
        let text = std::fs::read_to_string(path).map_err(|e| SimplifyError::Parse(e.to_string()))?;
        Self::from_json(&text)
    }

    pub fn maps_to(&self, action: ActionType) -> Option<ActionType> {
        if self.drops.contains(&action) {
            return None;
        }
        Some(self.merges.get(&action).copied().unwrap_or(action))
    }
}

/// Applies merge/drop rules and marks the stream as the simplified variant.
/// Ordering is preserved; applying the same map again is a no-op.
pub fn simplify(stream: &VersaStream, map: &SimplificationMap) -> VersaStream {
    let events: Vec<Event> = stream
        .events
        .iter()
        .filter_map(|event| {
            map.maps_to(event.action).map(|action| {
                let mut event = event.clone();
                event.action = action;
                event
            })
        })
        .collect();
    let mut simplified = stream.clone();
    simplified.team_ids = derive_team_ids(&events);
    simplified.events = events;
    simplified.format_variant = FormatVariant::SimplifiedVersa;
    simplified
}
