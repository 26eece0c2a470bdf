//! Trace parsing and serialization, snapshot-sequence import, and DOT/CSV
//! export.
//!
//! Traces use the line-oriented TVG/1 format (UTF-8, `#` starts a comment):
//!
//! ```text
//! tvg 1
//! directed false
//! lifetime [0,8)
//! tickscale 1 tick = 1 day        # optional, display only
//! node a
//! node b
//! edge a b label=wifi latency=2 [1,3) [5,6)
//! ```
//!
//! `label` and `latency` are optional (latency defaults to 0); an edge line
//! with no intervals declares an edge that is never present. Serialization
//! is canonical — nodes sorted, edges sorted by `(tail, head, label)`,
//! intervals ascending — so equal graphs produce byte-identical documents.
//! A non-default crossing policy is written as an extra `crossing
//! continuous` header line so that parsing a serialized graph always
//! reconstructs it exactly.
//!
//! Snapshot-sequence documents (`snapshots 1`) list the edges present at
//! each tick; consecutive ticks merge into presence intervals and the
//! resulting graph has zero latency.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::closure::ClosureGraph;
use crate::indicators::IndicatorSeries;
use crate::model::{CrossingPolicy, EdgeId, EdgeSchedule, Footprint, Latency, NodeId, Tvg};
use crate::time::{Duration, Interval, IntervalSet, TimePoint};

/// Parsing or serialization failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    /// The text does not match the grammar.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Grammatical but semantically invalid (bad interval, unknown node…).
    #[error("invalid trace at line {line}: {message}")]
    Validation { line: usize, message: String },
    /// The graph has no representation in the trace format.
    #[error("cannot serialize: {0}")]
    Unsupported(String),
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> TraceError {
    TraceError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn valid_err(line: usize, message: impl Into<String>) -> TraceError {
    TraceError::Validation {
        line,
        message: message.into(),
    }
}

/// A token with its 1-based column.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_time(s: &str) -> Option<TimePoint> {
    s.parse::<u64>().ok().map(TimePoint)
}

/// Parses `[a,b)` and checks `a < b`.
fn parse_interval(lineno: usize, col: usize, tok: &str) -> Result<Interval, TraceError> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| {
            parse_err(
                lineno,
                col,
                format!("expected an interval [a,b), got `{tok}`"),
            )
        })?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| parse_err(lineno, col, format!("expected `start,end` inside `{tok}`")))?;
    let start = parse_time(a.trim())
        .ok_or_else(|| parse_err(lineno, col, format!("bad interval start `{a}`")))?;
    let end = parse_time(b.trim())
        .ok_or_else(|| parse_err(lineno, col, format!("bad interval end `{b}`")))?;
    Interval::checked(start, end)
        .ok_or_else(|| valid_err(lineno, format!("interval {tok}: end must exceed start")))
}

/// Parses a TVG/1 document into a validated graph.
pub fn parse_tvg(text: &str) -> Result<Tvg, TraceError> {
    let mut directed: Option<bool> = None;
    let mut lifetime: Option<Interval> = None;
    let mut tick_scale: Option<String> = None;
    let mut crossing = CrossingPolicy::AtDeparture;
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut edges: Vec<(usize, EdgeId, EdgeSchedule)> = Vec::new();
    let mut seen_magic = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        let tokens = tokenize(line);
        let Some(&(_, keyword)) = tokens.first() else {
            continue;
        };
        if !seen_magic {
            if keyword != "tvg" || tokens.get(1).map(|t| t.1) != Some("1") {
                return Err(parse_err(lineno, 1, "expected the header line `tvg 1`"));
            }
            seen_magic = true;
            continue;
        }
        match keyword {
            "tvg" => return Err(parse_err(lineno, 1, "duplicate `tvg` header")),
            "directed" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`directed` needs true or false"))?;
                directed = Some(match v.1 {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(parse_err(
                            lineno,
                            v.0,
                            format!("expected true or false, got `{other}`"),
                        ))
                    }
                });
            }
            "lifetime" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`lifetime` needs an interval"))?;
                lifetime = Some(parse_interval(lineno, v.0, v.1)?);
            }
            "tickscale" => {
                let rest = line.trim_start();
                let rest = rest["tickscale".len()..].trim();
                if rest.is_empty() {
                    return Err(parse_err(lineno, 1, "`tickscale` needs a description"));
                }
                tick_scale = Some(rest.to_owned());
            }
            "crossing" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`crossing` needs a policy"))?;
                crossing = match v.1 {
                    "atdeparture" => CrossingPolicy::AtDeparture,
                    "continuous" => CrossingPolicy::ContinuousPresence,
                    other => {
                        return Err(parse_err(
                            lineno,
                            v.0,
                            format!("expected atdeparture or continuous, got `{other}`"),
                        ))
                    }
                };
            }
            "node" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`node` needs a name"))?;
                nodes.insert(NodeId::from(v.1));
            }
            "edge" => {
                let (lifetime_known, directed_known) = (lifetime.is_some(), directed.is_some());
                if !lifetime_known || !directed_known {
                    return Err(valid_err(
                        lineno,
                        "`lifetime` and `directed` must appear before edges",
                    ));
                }
                let tail = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`edge` needs two endpoints"))?;
                let head = tokens
                    .get(2)
                    .ok_or_else(|| parse_err(lineno, 1, "`edge` needs two endpoints"))?;
                for endpoint in [tail, head] {
                    if !nodes.contains(&NodeId::from(endpoint.1)) {
                        return Err(valid_err(
                            lineno,
                            format!("edge endpoint `{}` is not a declared node", endpoint.1),
                        ));
                    }
                }
                let mut label: Option<String> = None;
                let mut latency = Duration::ZERO;
                let mut intervals = IntervalSet::new();
                for &(col, tok) in &tokens[3..] {
                    if let Some(v) = tok.strip_prefix("label=") {
                        if v.is_empty() {
                            return Err(parse_err(lineno, col, "empty label"));
                        }
                        label = Some(v.to_owned());
                    } else if let Some(v) = tok.strip_prefix("latency=") {
                        let ticks: u64 = v
                            .parse()
                            .map_err(|_| parse_err(lineno, col, format!("bad latency `{v}`")))?;
                        latency = Duration(ticks);
                    } else {
                        let iv = parse_interval(lineno, col, tok)?;
                        let bounds = lifetime.expect("checked above");
                        if !bounds.contains_interval(&iv) {
                            return Err(valid_err(
                                lineno,
                                format!("interval {iv} lies outside the lifetime {bounds}"),
                            ));
                        }
                        intervals.insert(iv);
                    }
                }
                let edge = match label {
                    Some(l) => EdgeId::labeled(tail.1, head.1, l),
                    None => EdgeId::new(tail.1, head.1),
                };
                edges.push((
                    lineno,
                    edge,
                    EdgeSchedule::with_constant_latency(intervals, latency),
                ));
            }
            other => {
                return Err(parse_err(lineno, 1, format!("unknown record `{other}`")));
            }
        }
    }

    if !seen_magic {
        return Err(parse_err(1, 1, "empty document; expected `tvg 1`"));
    }
    let directed = directed.ok_or_else(|| valid_err(0, "missing `directed` header"))?;
    let lifetime = lifetime.ok_or_else(|| valid_err(0, "missing `lifetime` header"))?;

    let mut builder = Tvg::builder(lifetime)
        .directed(directed)
        .crossing_policy(crossing);
    if let Some(scale) = tick_scale {
        builder = builder.tick_scale(scale);
    }
    for n in &nodes {
        builder = builder.node(n.clone());
    }
    let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
    for (lineno, edge, schedule) in edges {
        let canonical = if directed {
            edge.clone()
        } else {
            edge.undirected_canonical()
        };
        if !seen.insert(canonical) {
            return Err(valid_err(lineno, format!("duplicate edge {edge}")));
        }
        builder = builder.edge(edge, schedule);
    }
    builder
        .build()
        .map_err(|e| valid_err(0, format!("invalid graph: {e}")))
}

/// Serializes a graph into canonical TVG/1 text. Graphs with piecewise
/// latency have no trace representation and are rejected.
pub fn serialize_tvg(g: &Tvg) -> Result<String, TraceError> {
    let mut out = String::new();
    out.push_str("tvg 1\n");
    let _ = writeln!(out, "directed {}", g.is_directed());
    let _ = writeln!(out, "lifetime {}", g.lifetime());
    if let Some(scale) = g.tick_scale() {
        let _ = writeln!(out, "tickscale {scale}");
    }
    if g.crossing_policy() == CrossingPolicy::ContinuousPresence {
        out.push_str("crossing continuous\n");
    }
    for n in g.nodes() {
        let _ = writeln!(out, "node {n}");
    }
    for (e, schedule) in g.edges() {
        let _ = write!(out, "edge {} {}", e.tail(), e.head());
        if let Some(l) = e.label() {
            let _ = write!(out, " label={l}");
        }
        match schedule.latency() {
            Latency::Constant(d) => {
                if *d != Duration::ZERO {
                    let _ = write!(out, " latency={d}");
                }
            }
            Latency::Piecewise(_) => {
                return Err(TraceError::Unsupported(format!(
                    "edge {e} has piecewise latency; traces carry per-edge constants only"
                )))
            }
        }
        for iv in schedule.presence().iter() {
            let _ = write!(out, " {iv}");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Parses a snapshot-sequence document into a zero-latency graph:
///
/// ```text
/// snapshots 1
/// directed false     # optional
/// node a
/// node b
/// t 0
/// edge a b
/// t 1
/// ```
///
/// Ticks must be strictly increasing; ticks not listed are empty. The
/// lifetime spans the first to one past the last listed tick.
pub fn parse_snapshots(text: &str) -> Result<Tvg, TraceError> {
    let mut directed = false;
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut current_tick: Option<u64> = None;
    let mut first_tick: Option<u64> = None;
    let mut presence: BTreeMap<EdgeId, IntervalSet> = BTreeMap::new();
    let mut edge_lines: BTreeMap<EdgeId, usize> = BTreeMap::new();
    let mut seen_magic = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        let tokens = tokenize(line);
        let Some(&(_, keyword)) = tokens.first() else {
            continue;
        };
        if !seen_magic {
            if keyword != "snapshots" || tokens.get(1).map(|t| t.1) != Some("1") {
                return Err(parse_err(
                    lineno,
                    1,
                    "expected the header line `snapshots 1`",
                ));
            }
            seen_magic = true;
            continue;
        }
        match keyword {
            "directed" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`directed` needs true or false"))?;
                directed = v.1 == "true";
            }
            "node" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`node` needs a name"))?;
                nodes.insert(NodeId::from(v.1));
            }
            "t" => {
                let v = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`t` needs a tick"))?;
                let tick: u64 =
                    v.1.parse()
                        .map_err(|_| parse_err(lineno, v.0, format!("bad tick `{}`", v.1)))?;
                if current_tick.is_some_and(|c| tick <= c) {
                    return Err(valid_err(lineno, format!("tick {tick} is not increasing")));
                }
                first_tick.get_or_insert(tick);
                current_tick = Some(tick);
            }
            "edge" => {
                let Some(tick) = current_tick else {
                    return Err(valid_err(lineno, "edge before the first `t` block"));
                };
                let tail = tokens
                    .get(1)
                    .ok_or_else(|| parse_err(lineno, 1, "`edge` needs two endpoints"))?;
                let head = tokens
                    .get(2)
                    .ok_or_else(|| parse_err(lineno, 1, "`edge` needs two endpoints"))?;
                for endpoint in [tail, head] {
                    if !nodes.contains(&NodeId::from(endpoint.1)) {
                        return Err(valid_err(
                            lineno,
                            format!("edge endpoint `{}` is not a declared node", endpoint.1),
                        ));
                    }
                }
                let edge = EdgeId::new(tail.1, head.1);
                let edge = if directed {
                    edge
                } else {
                    edge.undirected_canonical()
                };
                edge_lines.entry(edge.clone()).or_insert(lineno);
                presence
                    .entry(edge)
                    .or_default()
                    .insert(Interval::new(TimePoint(tick), TimePoint(tick + 1)));
            }
            other => {
                return Err(parse_err(lineno, 1, format!("unknown record `{other}`")));
            }
        }
    }
    if !seen_magic {
        return Err(parse_err(1, 1, "empty document; expected `snapshots 1`"));
    }

    let start = first_tick.unwrap_or(0);
    let end = current_tick.map(|t| t + 1).unwrap_or(start + 1);
    let mut builder =
        Tvg::builder(Interval::new(TimePoint(start), TimePoint(end))).directed(directed);
    for n in &nodes {
        builder = builder.node(n.clone());
    }
    for (edge, set) in presence {
        builder = builder.edge(edge, EdgeSchedule::instant(set));
    }
    builder
        .build()
        .map_err(|e| valid_err(0, format!("invalid graph: {e}")))
}

/// Renders a footprint as an undirected DOT graph, nodes and edges sorted.
pub fn export_dot_footprint(f: &Footprint) -> String {
    let mut out = String::from("graph {\n");
    for n in &f.nodes {
        let _ = writeln!(out, "  \"{n}\";");
    }
    for e in &f.edges {
        match e.label() {
            Some(l) => {
                let _ = writeln!(
                    out,
                    "  \"{}\" -- \"{}\" [label=\"{l}\"];",
                    e.tail(),
                    e.head()
                );
            }
            None => {
                let _ = writeln!(out, "  \"{}\" -- \"{}\";", e.tail(), e.head());
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Renders a reachability closure as a directed DOT graph.
pub fn export_dot_closure(h: &ClosureGraph) -> String {
    let mut out = String::from("digraph {\n");
    for n in h.nodes() {
        let _ = writeln!(out, "  \"{n}\";");
    }
    for (a, b) in h.arcs() {
        let _ = writeln!(out, "  \"{a}\" -> \"{b}\";");
    }
    out.push_str("}\n");
    out
}

/// Renders an indicator series as CSV with header
/// `window_start,window_end,value`; undefined values leave the field empty.
pub fn export_csv(series: &IndicatorSeries) -> String {
    let mut out = String::from("window_start,window_end,value\n");
    for (w, v) in series.iter() {
        match v {
            Some(v) => {
                let _ = writeln!(out, "{},{},{v}", w.start(), w.end());
            }
            None => {
                let _ = writeln!(out, "{},{},", w.start(), w.end());
            }
        }
    }
    out
}
