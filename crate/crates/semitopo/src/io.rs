//! JSON documents: semitopology, assignment, schedule and trace.
//!
//! Every document is an object with a `kind`/`version` envelope. On input
//! the envelope fields may be omitted; when present they must match. Unknown
//! top-level fields are rejected. Validation is staged: syntax, then schema,
//! then (for assignments and schedules) resolution against a semitopology
//! when the document is used.
//!
//! Output is canonical: identifiers sorted lexicographically, two-space
//! indentation, trailing newline.

use std::collections::BTreeMap;
use std::fmt;

use semitopo_core::sim::{ScheduleEvent, SimOutcome, Status};
use semitopo_core::valuation::{Value, ValueAssignment};
use semitopo_core::{Error, PointId, PointSet, SemiTopology};
use serde::Serialize;
use serde_json::{Map, Value as Json};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    SemiTopology,
    Assignment,
    Schedule,
    Trace,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::SemiTopology => "semitopology",
            Kind::Assignment => "assignment",
            Kind::Schedule => "schedule",
            Kind::Trace => "trace",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("value error at {path}: expected \"T\" or \"F\", got {token:?}")]
    Value { path: String, token: String },
    #[error("at {path}: {source}")]
    Semantic {
        path: String,
        #[source]
        source: Error,
    },
}

impl IoError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        IoError::Schema { path: path.to_owned(), message: message.into() }
    }

    /// The underlying model error, for semantic failures.
    pub fn semantic(&self) -> Option<&Error> {
        match self {
            IoError::Semantic { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;

fn parse_json(text: &[u8]) -> Result<Json> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let before = &text[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        IoError::Syntax { line, column, message: "invalid UTF-8".into() }
    })?;
    serde_json::from_str(text).map_err(|e| IoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Checks the envelope and returns the remaining fields.
fn envelope(doc: Json, kind: Kind, allowed: &[&str]) -> Result<Map<String, Json>> {
    let Json::Object(mut obj) = doc else {
        return Err(IoError::schema("$", "expected an object"));
    };
    match obj.remove("kind") {
        None => {}
        Some(Json::String(k)) if k == kind.as_str() => {}
        Some(other) => return Err(IoError::schema("$.kind", format!("expected \"{kind}\", got {other}"))),
    }
    match obj.remove("version") {
        None => {}
        Some(Json::Number(n)) if n.as_u64() == Some(FORMAT_VERSION) => {}
        Some(other) => {
            return Err(IoError::schema("$.version", format!("unsupported version {other}, expected {FORMAT_VERSION}")))
        }
    }
    if let Some(extra) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(IoError::schema(&format!("$.{extra}"), "unknown field"));
    }
    Ok(obj)
}

fn take<'a>(obj: &'a Map<String, Json>, key: &str) -> Result<&'a Json> {
    obj.get(key).ok_or_else(|| IoError::schema("$", format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Json, path: &str) -> Result<&'a Vec<Json>> {
    v.as_array().ok_or_else(|| IoError::schema(path, "expected an array"))
}

fn string<'a>(v: &'a Json, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| IoError::schema(path, "expected a string"))
}

fn string_list(v: &Json, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| string(s, &format!("{path}[{i}]")).map(str::to_owned))
        .collect()
}

fn value_token(v: &Json, path: &str) -> Result<Value> {
    let token = string(v, path)?;
    token.parse().map_err(|_| IoError::Value { path: path.to_owned(), token: token.to_owned() })
}

fn render(json: &impl Serialize) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(json).expect("documents serialize");
    out.push(b'\n');
    out
}

// ---------------------------------------------------------------------------
// semitopology

#[derive(Serialize)]
struct SemiTopologyDoc<'a> {
    kind: &'static str,
    version: u64,
    points: Vec<&'a str>,
    basis: Vec<Vec<&'a str>>,
}

pub fn parse_semitopology(text: &[u8]) -> Result<SemiTopology> {
    let obj = envelope(parse_json(text)?, Kind::SemiTopology, &["points", "basis"])?;
    let points = string_list(take(&obj, "points")?, "$.points")?;
    let rows = array(take(&obj, "basis")?, "$.basis")?
        .iter()
        .enumerate()
        .map(|(i, row)| string_list(row, &format!("$.basis[{i}]")))
        .collect::<Result<Vec<_>>>()?;

    for (i, p) in points.iter().enumerate() {
        semitopo_core::Point::new(p.as_str())
            .map_err(|source| IoError::Semantic { path: format!("$.points[{i}]"), source })?;
    }
    let known: std::collections::BTreeSet<&str> = points.iter().map(String::as_str).collect();
    for (i, row) in rows.iter().enumerate() {
        if let Some(j) = row.iter().position(|p| !known.contains(p.as_str())) {
            return Err(IoError::Semantic {
                path: format!("$.basis[{i}][{j}]"),
                source: Error::BasisOutOfUniverse { point: row[j].clone() },
            });
        }
    }
    SemiTopology::new(&points, &rows).map_err(|source| IoError::Semantic { path: "$.basis".into(), source })
}

pub fn serialize_semitopology(st: &SemiTopology) -> Vec<u8> {
    let canon = st.canonical_form();
    render(&SemiTopologyDoc {
        kind: Kind::SemiTopology.as_str(),
        version: FORMAT_VERSION,
        points: canon.points,
        basis: canon.basis,
    })
}

// ---------------------------------------------------------------------------
// assignment

/// Assignment as written in a file, not yet checked against a semitopology.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawAssignment {
    pub map: BTreeMap<String, Value>,
}

impl RawAssignment {
    pub fn from_assignment(st: &SemiTopology, f: &ValueAssignment) -> Self {
        RawAssignment { map: st.ids().map(|p| (st.name(p).to_owned(), f.get(p))).collect() }
    }

    /// Fails with [`Error::TotalityError`] if a point is missing, or
    /// [`Error::UnknownPoint`] for identifiers outside the universe.
    pub fn resolve(&self, st: &SemiTopology) -> Result<ValueAssignment> {
        ValueAssignment::from_names(st, self.map.iter().map(|(k, v)| (k.as_str(), *v)))
            .map_err(|source| IoError::Semantic { path: "$.map".into(), source })
    }
}

#[derive(Serialize)]
struct AssignmentDoc<'a> {
    kind: &'static str,
    version: u64,
    map: BTreeMap<&'a str, &'static str>,
}

pub fn parse_assignment(text: &[u8]) -> Result<RawAssignment> {
    let obj = envelope(parse_json(text)?, Kind::Assignment, &["map"])?;
    let map = take(&obj, "map")?
        .as_object()
        .ok_or_else(|| IoError::schema("$.map", "expected an object"))?;
    let mut out = BTreeMap::new();
    for (k, v) in map {
        out.insert(k.clone(), value_token(v, &format!("$.map.{k}"))?);
    }
    Ok(RawAssignment { map: out })
}

pub fn serialize_assignment(raw: &RawAssignment) -> Vec<u8> {
    render(&AssignmentDoc {
        kind: Kind::Assignment.as_str(),
        version: FORMAT_VERSION,
        map: raw.map.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect(),
    })
}

// ---------------------------------------------------------------------------
// schedule

/// One schedule row by identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEvent {
    pub coalition: Vec<String>,
    pub value: Value,
}

impl RawEvent {
    pub fn from_event(st: &SemiTopology, ev: &ScheduleEvent) -> Self {
        RawEvent { coalition: names(st, &ev.coalition), value: ev.value }
    }
}

#[derive(Serialize)]
struct EventDoc<'a> {
    coalition: Vec<&'a str>,
    value: &'static str,
}

impl<'a> From<&'a RawEvent> for EventDoc<'a> {
    fn from(ev: &'a RawEvent) -> Self {
        let mut coalition: Vec<&str> = ev.coalition.iter().map(String::as_str).collect();
        coalition.sort_unstable();
        coalition.dedup();
        EventDoc { coalition, value: ev.value.as_str() }
    }
}

#[derive(Serialize)]
struct ScheduleDoc<'a> {
    kind: &'static str,
    version: u64,
    events: Vec<EventDoc<'a>>,
}

fn parse_event(v: &Json, path: &str) -> Result<RawEvent> {
    let obj = v.as_object().ok_or_else(|| IoError::schema(path, "expected an object"))?;
    if let Some(extra) = obj.keys().find(|k| !["coalition", "value"].contains(&k.as_str())) {
        return Err(IoError::schema(&format!("{path}.{extra}"), "unknown field"));
    }
    let coalition = obj
        .get("coalition")
        .ok_or_else(|| IoError::schema(path, "missing field \"coalition\""))?;
    let value = obj.get("value").ok_or_else(|| IoError::schema(path, "missing field \"value\""))?;
    Ok(RawEvent {
        coalition: string_list(coalition, &format!("{path}.coalition"))?,
        value: value_token(value, &format!("{path}.value"))?,
    })
}

fn parse_events(obj: &Map<String, Json>, key: &str) -> Result<Vec<RawEvent>> {
    array(take(obj, key)?, &format!("$.{key}"))?
        .iter()
        .enumerate()
        .map(|(i, ev)| parse_event(ev, &format!("$.{key}[{i}]")))
        .collect()
}

pub fn parse_schedule(text: &[u8]) -> Result<Vec<RawEvent>> {
    let obj = envelope(parse_json(text)?, Kind::Schedule, &["events"])?;
    parse_events(&obj, "events")
}

pub fn serialize_schedule(events: &[RawEvent]) -> Vec<u8> {
    render(&ScheduleDoc {
        kind: Kind::Schedule.as_str(),
        version: FORMAT_VERSION,
        events: events.iter().map(EventDoc::from).collect(),
    })
}

/// Maps each row onto point sets of `st`.
pub fn resolve_schedule(st: &SemiTopology, events: &[RawEvent]) -> Result<Vec<ScheduleEvent>> {
    events
        .iter()
        .enumerate()
        .map(|(i, ev)| {
            let mut coalition = PointSet::new();
            for (j, name) in ev.coalition.iter().enumerate() {
                let p = st
                    .id(name)
                    .map_err(|source| IoError::Semantic { path: format!("$.events[{i}].coalition[{j}]"), source })?;
                coalition.insert(p);
            }
            Ok(ScheduleEvent::new(coalition, ev.value))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// trace

/// Outcome of a simulation by identifier: applied events, rejected events,
/// final statuses (`None` is undecided), deadlocked points and forks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub events: Vec<RawEvent>,
    pub rejected: Vec<RejectedEvent>,
    pub status: BTreeMap<String, Option<Value>>,
    pub deadlocked: Vec<String>,
    pub forks: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedEvent {
    pub index: usize,
    pub event: RawEvent,
    pub reason: String,
}

fn names(st: &SemiTopology, s: &PointSet) -> Vec<String> {
    let mut v: Vec<String> = s.iter().map(|p| st.name(p).to_owned()).collect();
    v.sort();
    v
}

fn ordered_pair(st: &SemiTopology, (p, q): (PointId, PointId)) -> (String, String) {
    let (a, b) = (st.name(p).to_owned(), st.name(q).to_owned());
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Trace {
    pub fn from_outcome(st: &SemiTopology, out: &SimOutcome) -> Self {
        let mut forks: Vec<(String, String)> = out.forks.iter().map(|&e| ordered_pair(st, e)).collect();
        forks.sort();
        Trace {
            events: out.final_state.trace().iter().map(|ev| RawEvent::from_event(st, ev)).collect(),
            rejected: out
                .rejected
                .iter()
                .map(|r| RejectedEvent {
                    index: r.index,
                    event: RawEvent::from_event(st, &r.event),
                    reason: r.reason.to_string(),
                })
                .collect(),
            status: st
                .ids()
                .map(|p| {
                    let s = match out.final_state.status(p) {
                        Status::Undecided => None,
                        Status::Committed(v) => Some(v),
                    };
                    (st.name(p).to_owned(), s)
                })
                .collect(),
            deadlocked: names(st, &out.deadlocked),
            forks,
        }
    }
}

#[derive(Serialize)]
struct RejectedDoc<'a> {
    index: usize,
    coalition: Vec<&'a str>,
    value: &'static str,
    reason: &'a str,
}

#[derive(Serialize)]
struct TraceDoc<'a> {
    kind: &'static str,
    version: u64,
    events: Vec<EventDoc<'a>>,
    rejected: Vec<RejectedDoc<'a>>,
    status: BTreeMap<&'a str, Option<&'static str>>,
    deadlocked: &'a [String],
    forks: Vec<[&'a str; 2]>,
}

pub fn serialize_trace(trace: &Trace) -> Vec<u8> {
    render(&TraceDoc {
        kind: Kind::Trace.as_str(),
        version: FORMAT_VERSION,
        events: trace.events.iter().map(EventDoc::from).collect(),
        rejected: trace
            .rejected
            .iter()
            .map(|r| {
                let ev = EventDoc::from(&r.event);
                RejectedDoc { index: r.index, coalition: ev.coalition, value: ev.value, reason: &r.reason }
            })
            .collect(),
        status: trace.status.iter().map(|(k, v)| (k.as_str(), v.map(Value::as_str))).collect(),
        deadlocked: &trace.deadlocked,
        forks: trace.forks.iter().map(|(a, b)| [a.as_str(), b.as_str()]).collect(),
    })
}

pub fn parse_trace(text: &[u8]) -> Result<Trace> {
    let obj = envelope(
        parse_json(text)?,
        Kind::Trace,
        &["events", "rejected", "status", "deadlocked", "forks"],
    )?;
    let events = parse_events(&obj, "events")?;
    let rejected = array(take(&obj, "rejected")?, "$.rejected")?
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let path = format!("$.rejected[{i}]");
            let o = r.as_object().ok_or_else(|| IoError::schema(&path, "expected an object"))?;
            let field = |k: &str| o.get(k).ok_or_else(|| IoError::schema(&path, format!("missing field \"{k}\"")));
            let index = field("index")?
                .as_u64()
                .ok_or_else(|| IoError::schema(&format!("{path}.index"), "expected a nonnegative integer"))?;
            Ok(RejectedEvent {
                index: index as usize,
                event: RawEvent {
                    coalition: string_list(field("coalition")?, &format!("{path}.coalition"))?,
                    value: value_token(field("value")?, &format!("{path}.value"))?,
                },
                reason: string(field("reason")?, &format!("{path}.reason"))?.to_owned(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let status = take(&obj, "status")?
        .as_object()
        .ok_or_else(|| IoError::schema("$.status", "expected an object"))?
        .iter()
        .map(|(k, v)| {
            let s = if v.is_null() { None } else { Some(value_token(v, &format!("$.status.{k}"))?) };
            Ok((k.clone(), s))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let deadlocked = string_list(take(&obj, "deadlocked")?, "$.deadlocked")?;
    let forks = array(take(&obj, "forks")?, "$.forks")?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let path = format!("$.forks[{i}]");
            match string_list(f, &path)?.as_slice() {
                [a, b] => Ok((a.clone(), b.clone())),
                _ => Err(IoError::schema(&path, "expected a pair of identifiers")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trace { events, rejected, status, deadlocked, forks })
}
