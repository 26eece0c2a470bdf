//! Recognition of the hierarchy of dynamics classes C1–C13 on finite traces.
//!
//! The thirteen classes range from basic reachability guarantees (some node
//! reaches all others) through recurrence assumptions (edges reappear
//! boundedly or periodically) to instant-connectivity families (every
//! snapshot connected, T-interval connectivity, population-protocol style
//! complete interaction). Several classes quantify over an infinite future,
//! which a finite trace cannot witness; verdicts are therefore issued under
//! a declared [`TraceSemantics`]:
//!
//! - [`TraceSemantics::AsObserved`] judges only what the trace shows.
//!   Genuinely infinitary properties (C6, C7, C8, C13) come back
//!   [`Verdict::NotDecidable`]; the eventual-connectivity classes C11/C12
//!   degenerate to existence within the trace and are flagged as finite
//!   readings.
//! - [`TraceSemantics::PeriodicExtension`] declares the trace to repeat with
//!   a given period. The first period is tiled into an extension long
//!   enough for any cycle-free round trip, and the reachability classes are
//!   evaluated against that periodic object. C8 additionally checks that
//!   the observed trace really is shift-invariant by the declared period.
//!
//! Edge-recurrence classes require the underlying graph to be connected; we
//! restrict that test to *crossable* edges (edges with at least one
//! policy-valid crossing), which keeps the inclusion of C6 in C5 sound even
//! for schedules whose presence windows are too short to ever cross.
//!
//! Snapshot connectivity (C9–C12) uses the undirected reading of each
//! snapshot, matching the evolving-graph setting these classes come from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TvgError;
use crate::model::{EdgeId, EdgeSchedule, Footprint, NodeId, Tvg};
use crate::time::{Duration, Interval, TimePoint};

/// The thirteen dynamics classes, in hierarchy order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    C12,
    C13,
}

impl ClassId {
    pub const ALL: [ClassId; 13] = [
        ClassId::C1,
        ClassId::C2,
        ClassId::C3,
        ClassId::C4,
        ClassId::C5,
        ClassId::C6,
        ClassId::C7,
        ClassId::C8,
        ClassId::C9,
        ClassId::C10,
        ClassId::C11,
        ClassId::C12,
        ClassId::C13,
    ];

    /// Conventional name of the class property.
    pub fn name(self) -> &'static str {
        match self {
            ClassId::C1 => "some node reaches all others",
            ClassId::C2 => "some node is reached by all others",
            ClassId::C3 => "connectivity over time",
            ClassId::C4 => "round connectivity",
            ClassId::C5 => "recurrent connectivity",
            ClassId::C6 => "recurrence of edges",
            ClassId::C7 => "time-bounded recurrence of edges",
            ClassId::C8 => "periodicity of edges",
            ClassId::C9 => "constant connectivity",
            ClassId::C10 => "T-interval connectivity",
            ClassId::C11 => "eventual instant-connectivity",
            ClassId::C12 => "eventual instant-routability",
            ClassId::C13 => "complete graph of interaction",
        }
    }

    /// Parses `"C1"`..`"C13"`.
    pub fn parse(s: &str) -> Option<ClassId> {
        let idx: usize = s.strip_prefix('C')?.parse().ok()?;
        ClassId::ALL.get(idx.checked_sub(1)?).copied()
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", *self as u8 + 1)
    }
}

/// How a finite trace is interpreted when judging infinitary properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSemantics {
    /// Judge only what the trace shows.
    AsObserved,
    /// The trace repeats forever with this period (> 0). The first period
    /// is taken as the canonical one.
    PeriodicExtension(Duration),
}

/// Outcome of one class membership test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    NotDecidable,
}

/// Concrete evidence accompanying a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Node(NodeId),
    Pair(NodeId, NodeId),
    Edge(EdgeId),
    Date(TimePoint),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Node(n) => write!(f, "node {n}"),
            Witness::Pair(u, v) => write!(f, "pair ({u},{v})"),
            Witness::Edge(e) => write!(f, "edge {e}"),
            Witness::Date(t) => write!(f, "date {t}"),
        }
    }
}

/// A verdict with its evidence and reading qualifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// Informational note on how the verdict was computed.
    pub note: Option<String>,
    /// Set when the verdict is only an existential observation on the
    /// finite trace and claims nothing about the infinite property. Such
    /// verdicts do not propagate along the inclusion hierarchy.
    pub finite_reading: bool,
}

impl ClassVerdict {
    fn of(verdict: Verdict) -> Self {
        ClassVerdict {
            verdict,
            witness: None,
            note: None,
            finite_reading: false,
        }
    }

    fn with_witness(verdict: Verdict, witness: Witness) -> Self {
        ClassVerdict {
            verdict,
            witness: Some(witness),
            note: None,
            finite_reading: false,
        }
    }

    fn noted(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn finite(mut self) -> Self {
        self.finite_reading = true;
        self
    }
}

/// Membership verdicts for all classes under one declared semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    semantics: TraceSemantics,
    verdicts: BTreeMap<ClassId, ClassVerdict>,
    discovered_delta: Option<Duration>,
    period: Option<Duration>,
    t_interval: Option<u64>,
}

impl ClassificationReport {
    pub fn semantics(&self) -> TraceSemantics {
        self.semantics
    }

    pub fn verdict(&self, c: ClassId) -> &ClassVerdict {
        &self.verdicts[&c]
    }

    pub fn holds(&self, c: ClassId) -> bool {
        self.verdicts[&c].verdict == Verdict::Holds
    }

    pub fn verdicts(&self) -> impl Iterator<Item = (ClassId, &ClassVerdict)> {
        self.verdicts.iter().map(|(c, v)| (*c, v))
    }

    /// Recurrence bound discovered for C7, when it holds.
    pub fn discovered_delta(&self) -> Option<Duration> {
        self.discovered_delta
    }

    /// Period echoed back under a periodic semantics.
    pub fn period(&self) -> Option<Duration> {
        self.period
    }

    /// Window length supplied for C10.
    pub fn t_interval(&self) -> Option<u64> {
        self.t_interval
    }

    /// Pairs `(child, ancestor)` where the child holds but an ancestor does
    /// not. Finite-reading verdicts are skipped: they claim nothing about
    /// the limit object. An empty result is the report's soundness check.
    pub fn hierarchy_violations(&self) -> Vec<(ClassId, ClassId)> {
        let mut out = Vec::new();
        for (&c, cv) in &self.verdicts {
            if cv.verdict != Verdict::Holds || cv.finite_reading {
                continue;
            }
            for a in ancestors(c) {
                if self.verdicts[&a].verdict != Verdict::Holds {
                    out.push((c, a));
                }
            }
        }
        out
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.semantics {
            TraceSemantics::AsObserved => writeln!(f, "semantics: as observed")?,
            TraceSemantics::PeriodicExtension(p) => {
                writeln!(f, "semantics: periodic extension, period {p}")?
            }
        }
        for (c, v) in &self.verdicts {
            let verdict = match v.verdict {
                Verdict::Holds => "holds",
                Verdict::Fails => "fails",
                Verdict::NotDecidable => "not decidable",
            };
            write!(f, "{:<4} {:<38} {:<14}", c.to_string(), c.name(), verdict)?;
            if let Some(w) = &v.witness {
                write!(f, " [{w}]")?;
            }
            if *c == ClassId::C7 {
                if let Some(d) = self.discovered_delta {
                    write!(f, " [delta {d}]")?;
                }
            }
            if *c == ClassId::C10 {
                if let Some(t) = self.t_interval {
                    write!(f, " [T {t}]")?;
                }
            }
            if v.finite_reading {
                write!(f, " (finite reading)")?;
            }
            if let Some(n) = &v.note {
                write!(f, " ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Direct inclusions `(child, parent)`: membership in the child class
/// implies membership in the parent.
pub fn class_inclusions() -> &'static [(ClassId, ClassId)] {
    use ClassId::*;
    &[
        (C8, C7),
        (C7, C6),
        (C6, C5),
        (C5, C3),
        (C3, C1),
        (C3, C2),
        (C4, C3),
        (C13, C6),
        (C10, C9),
        (C9, C11),
        (C11, C12),
        (C12, C5),
    ]
}

/// All classes implied by membership in `c`, transitively.
pub fn ancestors(c: ClassId) -> BTreeSet<ClassId> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![c];
    while let Some(x) = frontier.pop() {
        for &(child, parent) in class_inclusions() {
            if child == x && out.insert(parent) {
                frontier.push(parent);
            }
        }
    }
    out
}

impl Tvg {
    /// Classifies the graph against C1–C13 under the declared semantics.
    /// `t_interval` supplies the window length for C10; without it C10 is
    /// not decidable.
    pub fn classify(
        &self,
        semantics: TraceSemantics,
        t_interval: Option<u64>,
    ) -> Result<ClassificationReport, TvgError> {
        if let TraceSemantics::PeriodicExtension(p) = semantics {
            if p == Duration::ZERO {
                return Err(TvgError::BadSpec("period must be positive".into()));
            }
        }
        let mut ctx = Classifier::new(self, semantics, t_interval)?;
        let report = ctx.run();
        debug_assert!(
            report.hierarchy_violations().is_empty(),
            "class verdicts violate the inclusion hierarchy: {:?}",
            report.hierarchy_violations()
        );
        Ok(report)
    }
}

/// Working state shared by the class checks.
struct Classifier<'g> {
    g: &'g Tvg,
    semantics: TraceSemantics,
    t_interval: Option<u64>,
    /// The graph reachability classes are judged on: the trace itself, or
    /// its periodic extension.
    reach: Tvg,
    /// Anchor dates in the canonical window: start plus event dates.
    anchors: Vec<TimePoint>,
    /// Per-tick snapshots over the canonical window. Under a periodic
    /// semantics later ticks repeat these modulo the period.
    ticks: Vec<(TimePoint, Footprint)>,
    delta: Option<Duration>,
}

impl<'g> Classifier<'g> {
    fn new(
        g: &'g Tvg,
        semantics: TraceSemantics,
        t_interval: Option<u64>,
    ) -> Result<Self, TvgError> {
        let start = g.lifetime().start();
        // The snapshot window covers the full canonical period even when the
        // trace observes only part of it: the unobserved remainder repeats
        // as silence and must count against the instant-connectivity
        // classes.
        let (reach, window_end) = match semantics {
            TraceSemantics::AsObserved => (g.clone(), g.lifetime().end()),
            TraceSemantics::PeriodicExtension(p) => (extend_periodic(g, p)?, start + p),
        };
        let mut anchors = vec![start];
        for t in g.characteristic_dates() {
            if t > start && t < window_end && t < g.lifetime().end() {
                anchors.push(t);
            }
        }
        let mut ticks = Vec::with_capacity((window_end - start).ticks() as usize);
        let mut t = start;
        while t < window_end {
            ticks.push((t, reach.snapshot_at(t).expect("tick within lifetime").graph));
            t = t + Duration(1);
        }
        Ok(Classifier {
            g,
            semantics,
            t_interval,
            reach,
            anchors,
            ticks,
            delta: None,
        })
    }

    fn run(&mut self) -> ClassificationReport {
        let mut verdicts = BTreeMap::new();
        if self.g.node_count() == 0 {
            // Degenerate convention: an empty graph satisfies everything.
            for c in ClassId::ALL {
                verdicts.insert(c, ClassVerdict::of(Verdict::Holds));
            }
        } else {
            verdicts.insert(ClassId::C1, self.c1());
            verdicts.insert(ClassId::C2, self.c2());
            verdicts.insert(ClassId::C3, self.c3());
            verdicts.insert(ClassId::C4, self.c4());
            verdicts.insert(ClassId::C5, self.c5());
            verdicts.insert(ClassId::C6, self.c6());
            verdicts.insert(ClassId::C7, self.c7());
            verdicts.insert(ClassId::C8, self.c8());
            verdicts.insert(ClassId::C9, self.c9());
            verdicts.insert(ClassId::C10, self.c10());
            verdicts.insert(ClassId::C11, self.c11());
            verdicts.insert(ClassId::C12, self.c12());
            verdicts.insert(ClassId::C13, self.c13());
        }
        ClassificationReport {
            semantics: self.semantics,
            verdicts,
            discovered_delta: self.delta,
            period: match self.semantics {
                TraceSemantics::PeriodicExtension(p) => Some(p),
                TraceSemantics::AsObserved => None,
            },
            t_interval: self.t_interval,
        }
    }

    fn start(&self) -> TimePoint {
        self.g.lifetime().start()
    }

    fn horizon_of(&self, u: &NodeId, t: TimePoint) -> BTreeSet<NodeId> {
        self.reach.horizon(u, t).expect("known node")
    }

    fn c1(&self) -> ClassVerdict {
        let all = self.g.nodes();
        let mut best: Option<(usize, &NodeId, BTreeSet<NodeId>)> = None;
        for u in all {
            let h = self.horizon_of(u, self.start());
            if h.len() == all.len() {
                return ClassVerdict::with_witness(Verdict::Holds, Witness::Node(u.clone()));
            }
            if best.as_ref().is_none_or(|(len, _, _)| h.len() > *len) {
                best = Some((h.len(), u, h));
            }
        }
        let (_, u, h) = best.expect("non-empty node set");
        let missing = all.iter().find(|v| !h.contains(v)).expect("incomplete row");
        ClassVerdict::with_witness(Verdict::Fails, Witness::Pair(u.clone(), missing.clone()))
    }

    fn c2(&self) -> ClassVerdict {
        let all = self.g.nodes();
        let mut reached_by: BTreeMap<&NodeId, BTreeSet<&NodeId>> =
            all.iter().map(|v| (v, BTreeSet::new())).collect();
        for u in all {
            for v in self.horizon_of(u, self.start()) {
                if let Some(set) = reached_by.get_mut(&v) {
                    set.insert(u);
                }
            }
        }
        let mut best: Option<(&NodeId, &BTreeSet<&NodeId>)> = None;
        for (v, sources) in &reached_by {
            if sources.len() == all.len() {
                return ClassVerdict::with_witness(Verdict::Holds, Witness::Node((*v).clone()));
            }
            if best.is_none_or(|(_, s)| sources.len() > s.len()) {
                best = Some((v, sources));
            }
        }
        let (v, sources) = best.expect("non-empty node set");
        let missing = all
            .iter()
            .find(|u| !sources.contains(u))
            .expect("incomplete column");
        ClassVerdict::with_witness(Verdict::Fails, Witness::Pair(missing.clone(), v.clone()))
    }

    fn c3(&self) -> ClassVerdict {
        for u in self.g.nodes() {
            let h = self.horizon_of(u, self.start());
            if let Some(v) = self.g.nodes().iter().find(|v| !h.contains(v)) {
                return ClassVerdict::with_witness(
                    Verdict::Fails,
                    Witness::Pair(u.clone(), v.clone()),
                );
            }
        }
        ClassVerdict::of(Verdict::Holds)
    }

    fn c4(&self) -> ClassVerdict {
        for u in self.g.nodes() {
            for v in self.g.nodes() {
                if u == v {
                    continue;
                }
                // The earliest arrival is the most permissive anchor for
                // the return journey, so checking it alone is exact.
                let Some(arrival) = self
                    .reach
                    .foremost_journey(u, v, self.start())
                    .expect("known nodes")
                    .map(|j| j.arrival(&self.reach).expect("valid journey"))
                else {
                    return ClassVerdict::with_witness(
                        Verdict::Fails,
                        Witness::Pair(u.clone(), v.clone()),
                    );
                };
                if !self.reach.can_reach(v, u, arrival).expect("known nodes") {
                    return ClassVerdict::with_witness(
                        Verdict::Fails,
                        Witness::Pair(u.clone(), v.clone()),
                    );
                }
            }
        }
        ClassVerdict::of(Verdict::Holds)
    }

    fn c5(&self) -> ClassVerdict {
        for &t in &self.anchors {
            for u in self.g.nodes() {
                let h = self.horizon_of(u, t);
                if h.len() != self.g.node_count() {
                    return ClassVerdict::with_witness(Verdict::Fails, Witness::Date(t))
                        .noted("suffix connectivity checked at topological event dates");
                }
            }
        }
        ClassVerdict::of(Verdict::Holds)
            .noted("suffix connectivity checked at topological event dates")
    }

    /// Edges with at least one policy-valid crossing in the judged graph.
    fn crossable_footprint(&self) -> Footprint {
        let mut edges = BTreeSet::new();
        for (e, schedule) in self.reach.edges() {
            if schedule
                .earliest_crossing(self.reach.lifetime().start(), self.reach.crossing_policy())
                .is_some()
            {
                edges.insert(e.clone());
            }
        }
        Footprint {
            nodes: self.g.nodes().clone(),
            edges,
        }
    }

    fn disconnection_witness(f: &Footprint) -> Witness {
        let comps = f.components();
        match (comps.first(), comps.get(1)) {
            (Some(a), Some(b)) => Witness::Pair(
                a.iter().next().expect("non-empty component").clone(),
                b.iter().next().expect("non-empty component").clone(),
            ),
            _ => Witness::Node(f.nodes.iter().next().expect("non-empty graph").clone()),
        }
    }

    fn c6(&self) -> ClassVerdict {
        match self.semantics {
            TraceSemantics::AsObserved => ClassVerdict::of(Verdict::NotDecidable)
                .noted("edge recurrence quantifies over an infinite future"),
            TraceSemantics::PeriodicExtension(_) => {
                let f = self.crossable_footprint();
                if f.is_connected() {
                    ClassVerdict::of(Verdict::Holds)
                        .noted("every first-period edge recurs under the declared period")
                } else {
                    ClassVerdict::with_witness(Verdict::Fails, Self::disconnection_witness(&f))
                }
            }
        }
    }

    fn c7(&mut self) -> ClassVerdict {
        match self.semantics {
            TraceSemantics::AsObserved => ClassVerdict::of(Verdict::NotDecidable)
                .noted("bounded recurrence quantifies over an infinite future"),
            TraceSemantics::PeriodicExtension(p) => {
                let f = self.crossable_footprint();
                if !f.is_connected() {
                    return ClassVerdict::with_witness(
                        Verdict::Fails,
                        Self::disconnection_witness(&f),
                    );
                }
                // The recurrence bound of one edge is its largest absence
                // gap within a period, wrap-around included, plus one tick.
                let start = self.start();
                let mut delta = Duration::ZERO;
                for e in &f.edges {
                    let presence = self
                        .g
                        .available_dates(e)
                        .expect("edge of the underlying graph")
                        .clip(Interval::new(start, start + p));
                    let intervals: Vec<Interval> = presence.iter().collect();
                    if intervals.is_empty() {
                        continue;
                    }
                    let mut gap = Duration::ZERO;
                    for pair in intervals.windows(2) {
                        gap = gap.max(pair[1].start() - pair[0].end());
                    }
                    let first = intervals.first().expect("non-empty");
                    let last = intervals.last().expect("non-empty");
                    gap = gap.max((first.start() + p) - last.end());
                    delta = delta.max(gap + Duration(1));
                }
                self.delta = Some(delta);
                ClassVerdict::of(Verdict::Holds)
            }
        }
    }

    fn c8(&self) -> ClassVerdict {
        match self.semantics {
            TraceSemantics::AsObserved => ClassVerdict::of(Verdict::NotDecidable)
                .noted("periodicity quantifies over an infinite future"),
            TraceSemantics::PeriodicExtension(p) => {
                let lifetime = self.g.lifetime();
                if lifetime.len() > p {
                    let head = Interval::new(lifetime.start(), lifetime.end() - p);
                    for (e, schedule) in self.g.edges() {
                        let shifted = schedule
                            .presence()
                            .clip(head)
                            .shifted(p)
                            .expect("within the time domain");
                        let tail = schedule
                            .presence()
                            .clip(Interval::new(lifetime.start() + p, lifetime.end()));
                        if shifted != tail {
                            return ClassVerdict::with_witness(
                                Verdict::Fails,
                                Witness::Edge(e.clone()),
                            )
                            .noted("presence is not invariant under the declared period");
                        }
                    }
                }
                let f = self.crossable_footprint();
                if f.is_connected() {
                    ClassVerdict::of(Verdict::Holds)
                } else {
                    ClassVerdict::with_witness(Verdict::Fails, Self::disconnection_witness(&f))
                }
            }
        }
    }

    fn c9(&self) -> ClassVerdict {
        for (t, f) in &self.ticks {
            if !f.is_connected() {
                return ClassVerdict::with_witness(Verdict::Fails, Witness::Date(*t));
            }
        }
        ClassVerdict::of(Verdict::Holds)
    }

    fn c10(&self) -> ClassVerdict {
        let Some(t) = self.t_interval else {
            return ClassVerdict::of(Verdict::NotDecidable).noted("no window length supplied");
        };
        if t == 0 {
            return ClassVerdict::of(Verdict::NotDecidable).noted("window length must be >= 1");
        }
        let t = t as usize;
        let len = self.ticks.len();
        let window_starts = match self.semantics {
            TraceSemantics::AsObserved => {
                if len < t {
                    return ClassVerdict::of(Verdict::NotDecidable)
                        .noted("trace shorter than the window length");
                }
                len - t + 1
            }
            // Windows wrap around the period.
            TraceSemantics::PeriodicExtension(_) => len,
        };
        let wrap = matches!(self.semantics, TraceSemantics::PeriodicExtension(_));
        for i in 0..window_starts {
            let mut common: BTreeSet<EdgeId> = self.ticks[i].1.edges.clone();
            for k in 1..t {
                let idx = if wrap { (i + k) % len } else { i + k };
                common = common
                    .intersection(&self.ticks[idx].1.edges)
                    .cloned()
                    .collect();
            }
            let f = Footprint {
                nodes: self.g.nodes().clone(),
                edges: common,
            };
            if !f.is_connected() {
                return ClassVerdict::with_witness(Verdict::Fails, Witness::Date(self.ticks[i].0));
            }
        }
        ClassVerdict::of(Verdict::Holds)
    }

    fn c11(&self) -> ClassVerdict {
        let finite = self.semantics == TraceSemantics::AsObserved;
        for (t, f) in &self.ticks {
            if f.is_connected() {
                let v = ClassVerdict::with_witness(Verdict::Holds, Witness::Date(*t));
                return if finite { v.finite() } else { v };
            }
        }
        let v = ClassVerdict::of(Verdict::Fails);
        if finite {
            v.finite()
        } else {
            v
        }
    }

    fn c12(&self) -> ClassVerdict {
        let finite = self.semantics == TraceSemantics::AsObserved;
        for u in self.g.nodes() {
            for v in self.g.nodes() {
                if u >= v {
                    continue;
                }
                let ok = self.ticks.iter().any(|(_, f)| f.has_path(u, v));
                if !ok {
                    let verdict = ClassVerdict::with_witness(
                        Verdict::Fails,
                        Witness::Pair(u.clone(), v.clone()),
                    );
                    return if finite { verdict.finite() } else { verdict };
                }
            }
        }
        let v = ClassVerdict::of(Verdict::Holds);
        if finite {
            v.finite()
        } else {
            v
        }
    }

    fn c13(&self) -> ClassVerdict {
        match self.semantics {
            TraceSemantics::AsObserved => ClassVerdict::of(Verdict::NotDecidable)
                .noted("complete interaction quantifies over an infinite future"),
            TraceSemantics::PeriodicExtension(_) => {
                let f = self.crossable_footprint();
                let adj = f.adjacency();
                for u in self.g.nodes() {
                    for v in self.g.nodes() {
                        if u >= v {
                            continue;
                        }
                        if !adj.get(u).is_some_and(|s| s.contains(v)) {
                            return ClassVerdict::with_witness(
                                Verdict::Fails,
                                Witness::Pair(u.clone(), v.clone()),
                            );
                        }
                    }
                }
                ClassVerdict::of(Verdict::Holds)
            }
        }
    }
}

/// Tiles the first period of `g` into an extension long enough that any
/// cycle-free round trip of the infinite periodic graph fits inside.
fn extend_periodic(g: &Tvg, p: Duration) -> Result<Tvg, TvgError> {
    let start = g.lifetime().start();
    let period = Interval::new(start, start + p);
    let max_latency = g
        .edges()
        .flat_map(|(_, s)| s.latency_pieces())
        .map(|(_, d)| d)
        .max()
        .unwrap_or(Duration::ZERO);
    // Each hop may wait up to one period for its edge and then cross; a
    // round trip takes at most 2n such hops.
    let span = (2 * g.node_count() as u64 + 4) * (p.ticks() + max_latency.ticks()) + p.ticks();
    let copies = span.div_ceil(p.ticks()).max(3);

    let mut builder = Tvg::builder(Interval::new(start, start + Duration(copies * p.ticks())))
        .directed(g.is_directed())
        .crossing_policy(g.crossing_policy());
    for n in g.nodes() {
        builder = builder.node(n.clone());
    }
    for (e, schedule) in g.edges() {
        let pieces: Vec<(Interval, Duration)> = schedule
            .latency_pieces()
            .into_iter()
            .filter_map(|(iv, d)| iv.intersect(&period).map(|c| (c, d)))
            .collect();
        let mut tiled: Vec<(Interval, Duration)> = Vec::new();
        for k in 0..copies {
            let offset = Duration(k * p.ticks());
            for (iv, d) in &pieces {
                tiled.push((Interval::new(iv.start() + offset, iv.end() + offset), *d));
            }
        }
        let schedule = if tiled.is_empty() {
            EdgeSchedule::instant(Default::default())
        } else {
            EdgeSchedule::piecewise(tiled)?
        };
        builder = builder.edge(e.clone(), schedule);
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generate::fixture_calendar_line;
    use crate::model::Tvg;
    use crate::time::IntervalSet;

    fn n(s: &str) -> NodeId {
        NodeId::from(s)
    }

    fn iv(a: u64, b: u64) -> Interval {
        Interval::new(TimePoint(a), TimePoint(b))
    }

    #[test]
    fn inclusion_dag_shape() {
        use ClassId::*;
        assert_eq!(ancestors(C8), [C7, C6, C5, C3, C1, C2].into());
        let c10_up = ancestors(C10);
        for c in [C9, C11, C12, C5, C3, C1, C2] {
            assert!(c10_up.contains(&c));
        }
        assert!(!ancestors(C8).contains(&C4), "C4 is a child of C3");
        assert!(!ancestors(C1).contains(&C2));
        assert!(!ancestors(C2).contains(&C1), "C1 and C2 are incomparable");
    }

    #[test]
    fn class_id_round_trip() {
        for c in ClassId::ALL {
            assert_eq!(ClassId::parse(&c.to_string()), Some(c));
        }
        assert_eq!(ClassId::parse("C14"), None);
        assert_eq!(ClassId::parse("x"), None);
    }

    #[test]
    fn cascade_classification() {
        let g = fixtures::cascade_tvg();
        let report = g.classify(TraceSemantics::AsObserved, None).unwrap();
        assert_eq!(report.verdict(ClassId::C1).verdict, Verdict::Holds);
        assert_eq!(
            report.verdict(ClassId::C1).witness,
            Some(Witness::Node(n("a")))
        );
        assert_eq!(report.verdict(ClassId::C2).verdict, Verdict::Holds);
        // The reported receiver must genuinely be reached by all others.
        if let Some(Witness::Node(v)) = &report.verdict(ClassId::C2).witness {
            for u in g.nodes() {
                assert!(g.can_reach(u, v, TimePoint(0)).unwrap());
            }
        } else {
            panic!("expected a node witness");
        }
        assert_eq!(report.verdict(ClassId::C3).verdict, Verdict::Fails);
        assert_eq!(report.verdict(ClassId::C6).verdict, Verdict::NotDecidable);
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn relay_line_classification() {
        let report = fixtures::relay_line_tvg()
            .classify(TraceSemantics::AsObserved, None)
            .unwrap();
        assert_eq!(report.verdict(ClassId::C1).verdict, Verdict::Fails);
        assert_eq!(report.verdict(ClassId::C3).verdict, Verdict::Fails);
        // b hears from everyone: a directly, c at tick 2, d relayed via c.
        assert_eq!(report.verdict(ClassId::C2).verdict, Verdict::Holds);
        assert_eq!(
            report.verdict(ClassId::C2).witness,
            Some(Witness::Node(n("b")))
        );
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn calendar_is_periodic() {
        let g = fixture_calendar_line(
            &[
                ("a", "b", 0),
                ("b", "c", 1),
                ("c", "d", 2),
                ("d", "e", 3),
                ("e", "f", 4),
            ],
            Duration(7),
            8,
        )
        .unwrap();
        let report = g
            .classify(TraceSemantics::PeriodicExtension(Duration(7)), None)
            .unwrap();
        for c in [
            ClassId::C8,
            ClassId::C7,
            ClassId::C6,
            ClassId::C5,
            ClassId::C3,
            ClassId::C1,
            ClassId::C2,
            ClassId::C4,
        ] {
            assert_eq!(report.verdict(c).verdict, Verdict::Holds, "{c}");
        }
        // One 1-tick meeting each period: worst wait is 6 ticks, bound 7.
        assert_eq!(report.discovered_delta(), Some(Duration(7)));
        assert_eq!(report.period(), Some(Duration(7)));
        // Single-edge snapshots of a six-node line are never connected.
        assert_eq!(report.verdict(ClassId::C9).verdict, Verdict::Fails);
        assert_eq!(report.verdict(ClassId::C13).verdict, Verdict::Fails);
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn shifted_schedule_breaks_periodicity() {
        // The second week's meeting moves by one day.
        let g = Tvg::builder(iv(0, 14))
            .nodes(["a", "b"])
            .instant_edge("a", "b", [(0, 1), (8, 9)])
            .build()
            .unwrap();
        let report = g
            .classify(TraceSemantics::PeriodicExtension(Duration(7)), None)
            .unwrap();
        assert_eq!(report.verdict(ClassId::C8).verdict, Verdict::Fails);
        assert!(matches!(
            report.verdict(ClassId::C8).witness,
            Some(Witness::Edge(_))
        ));
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn always_connected_instances() {
        // A 3-node star present throughout: every snapshot is connected.
        let g = Tvg::builder(iv(0, 6))
            .nodes(["a", "b", "c"])
            .instant_edge("a", "b", [(0, 6)])
            .instant_edge("a", "c", [(0, 6)])
            .build()
            .unwrap();
        let report = g.classify(TraceSemantics::AsObserved, Some(3)).unwrap();
        assert_eq!(report.verdict(ClassId::C9).verdict, Verdict::Holds);
        assert_eq!(report.verdict(ClassId::C10).verdict, Verdict::Holds);
        assert_eq!(report.verdict(ClassId::C11).verdict, Verdict::Holds);
        assert_eq!(report.verdict(ClassId::C12).verdict, Verdict::Holds);
        assert_eq!(report.verdict(ClassId::C4).verdict, Verdict::Holds);
        assert!(report.hierarchy_violations().is_empty());

        let periodic = g
            .classify(TraceSemantics::PeriodicExtension(Duration(3)), Some(2))
            .unwrap();
        assert_eq!(periodic.verdict(ClassId::C13).verdict, Verdict::Fails);
        assert_eq!(periodic.verdict(ClassId::C9).verdict, Verdict::Holds);
        assert_eq!(periodic.verdict(ClassId::C8).verdict, Verdict::Holds);
        assert!(periodic.hierarchy_violations().is_empty());
    }

    #[test]
    fn t_interval_one_equals_constant_connectivity() {
        for g in [
            fixtures::relay_line_tvg(),
            fixtures::cascade_tvg(),
            Tvg::builder(iv(0, 4))
                .nodes(["a", "b"])
                .instant_edge("a", "b", [(0, 4)])
                .build()
                .unwrap(),
        ] {
            let report = g.classify(TraceSemantics::AsObserved, Some(1)).unwrap();
            assert_eq!(
                report.verdict(ClassId::C10).verdict,
                report.verdict(ClassId::C9).verdict
            );
        }
    }

    #[test]
    fn missing_t_interval_is_not_decidable() {
        let report = fixtures::cascade_tvg()
            .classify(TraceSemantics::AsObserved, None)
            .unwrap();
        assert_eq!(report.verdict(ClassId::C10).verdict, Verdict::NotDecidable);
    }

    #[test]
    fn flooding_completes_within_node_count_in_constantly_connected_graphs() {
        // Random per-tick spanning trees keep every snapshot connected;
        // flooding from any node at any tick must then inform everyone
        // within |V| ticks.
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let names = ["a", "b", "c", "d", "e"];
        let ticks = 12u64;
        let mut presence: BTreeMap<(usize, usize), IntervalSet> = BTreeMap::new();
        for t in 0..ticks {
            let mut order: Vec<usize> = (0..names.len()).collect();
            for i in (1..order.len()).rev() {
                order.swap(i, rng.random_range(0..=i));
            }
            for i in 1..order.len() {
                let a = order[i];
                let b = order[rng.random_range(0..i)];
                let key = (a.min(b), a.max(b));
                presence.entry(key).or_default().insert(iv(t, t + 1));
            }
        }
        let mut builder = Tvg::builder(iv(0, ticks)).nodes(names);
        for ((i, j), set) in presence {
            builder = builder.edge(EdgeId::new(names[i], names[j]), EdgeSchedule::instant(set));
        }
        let g = builder.build().unwrap();
        let report = g.classify(TraceSemantics::AsObserved, Some(1)).unwrap();
        assert_eq!(report.verdict(ClassId::C9).verdict, Verdict::Holds);
        assert!(report.hierarchy_violations().is_empty());

        let n_nodes = names.len() as u64;
        for source in names {
            for t0 in 0..(ticks - n_nodes) {
                let mut informed: BTreeSet<NodeId> = [NodeId::from(source)].into();
                for t in t0..(t0 + n_nodes) {
                    let mut next = informed.clone();
                    for u in &informed {
                        next.extend(g.neighbors_at(u, TimePoint(t)).unwrap());
                    }
                    informed = next;
                }
                assert_eq!(informed.len(), names.len(), "flood from {source}@{t0}");
            }
        }
    }

    #[test]
    fn period_longer_than_the_trace() {
        // Two ticks observed, declared period five: the trace cannot refute
        // periodicity (C8 holds) but the silent remainder of each period
        // breaks the instant-connectivity classes.
        let g = Tvg::builder(iv(0, 2))
            .nodes(["a", "b"])
            .instant_edge("a", "b", [(0, 2)])
            .build()
            .unwrap();
        let report = g
            .classify(TraceSemantics::PeriodicExtension(Duration(5)), Some(1))
            .unwrap();
        assert_eq!(report.verdict(ClassId::C8).verdict, Verdict::Holds);
        assert_eq!(report.verdict(ClassId::C5).verdict, Verdict::Holds);
        assert_eq!(
            report.verdict(ClassId::C9).verdict,
            Verdict::Fails,
            "ticks 2..5 of every period are silent"
        );
        assert_eq!(report.verdict(ClassId::C11).verdict, Verdict::Holds);
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn empty_and_singleton_graphs() {
        let empty = Tvg::builder(iv(0, 1)).build().unwrap();
        let report = empty.classify(TraceSemantics::AsObserved, Some(1)).unwrap();
        assert!(ClassId::ALL.iter().all(|&c| report.holds(c)));

        let single = Tvg::builder(iv(0, 1)).node("x").build().unwrap();
        let report = single
            .classify(TraceSemantics::PeriodicExtension(Duration(1)), Some(1))
            .unwrap();
        assert!(ClassId::ALL.iter().all(|&c| report.holds(c)));
        assert!(report.hierarchy_violations().is_empty());
    }

    #[test]
    fn zero_period_rejected() {
        let g = fixtures::demo_tvg();
        assert!(matches!(
            g.classify(TraceSemantics::PeriodicExtension(Duration::ZERO), None),
            Err(TvgError::BadSpec(_))
        ));
    }
}
