//! The time-varying graph model: nodes, labeled edge schedules over a
//! lifetime, and the structural derivations (underlying graph, snapshots,
//! footprints, temporal subgraphs, degrees, characteristic dates).
//!
//! A [`Tvg`] is immutable once built; every operation is a pure read, so
//! values can be shared freely across threads.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TvgError;
use crate::time::{Duration, Interval, IntervalSet, TimePoint};

/// Identifier of a graph entity. Ordering is lexicographic on the name and
/// fixes every canonical ordering in the library.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Self {
        NodeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// A relation between two entities, optionally labeled. Distinct labels give
/// distinct edges between the same pair, so multi-edges are expressed through
/// labels only.
///
/// In an undirected graph the stored form keeps `tail <= head`; lookups
/// through [`Tvg`] canonicalize automatically, so `(b, a)` finds `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    tail: NodeId,
    head: NodeId,
    label: Option<String>,
}

impl EdgeId {
    pub fn new(tail: impl Into<NodeId>, head: impl Into<NodeId>) -> Self {
        EdgeId {
            tail: tail.into(),
            head: head.into(),
            label: None,
        }
    }

    pub fn labeled(
        tail: impl Into<NodeId>,
        head: impl Into<NodeId>,
        label: impl Into<String>,
    ) -> Self {
        EdgeId {
            tail: tail.into(),
            head: head.into(),
            label: Some(label.into()),
        }
    }

    pub fn tail(&self) -> &NodeId {
        &self.tail
    }

    pub fn head(&self) -> &NodeId {
        &self.head
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// The endpoint opposite `n`, if `n` is an endpoint.
    pub fn other_endpoint(&self, n: &NodeId) -> Option<&NodeId> {
        if *n == self.tail {
            Some(&self.head)
        } else if *n == self.head {
            Some(&self.tail)
        } else {
            None
        }
    }

    pub fn is_incident(&self, n: &NodeId) -> bool {
        *n == self.tail || *n == self.head
    }

    /// Stored form for an undirected graph: endpoints in ascending order.
    pub(crate) fn undirected_canonical(&self) -> EdgeId {
        if self.tail <= self.head {
            self.clone()
        } else {
            EdgeId {
                tail: self.head.clone(),
                head: self.tail.clone(),
                label: self.label.clone(),
            }
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "({},{}:{})", self.tail, self.head, l),
            None => write!(f, "({},{})", self.tail, self.head),
        }
    }
}

/// Time to cross an edge as a function of the departure date.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Latency {
    /// The same crossing time at every departure date.
    Constant(Duration),
    /// Per-interval crossing times; the intervals must exactly cover the
    /// presence set.
    Piecewise(Vec<(Interval, Duration)>),
}

/// When an edge is present and how long it takes to cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSchedule {
    presence: IntervalSet,
    latency: Latency,
}

impl EdgeSchedule {
    /// Presence with zero crossing time.
    pub fn instant(presence: IntervalSet) -> Self {
        EdgeSchedule {
            presence,
            latency: Latency::Constant(Duration::ZERO),
        }
    }

    pub fn with_constant_latency(presence: IntervalSet, latency: Duration) -> Self {
        EdgeSchedule {
            presence,
            latency: Latency::Constant(latency),
        }
    }

    /// Builds a schedule from `(interval, latency)` pieces. The presence set
    /// is the union of the pieces, so the containment invariant (every
    /// latency interval lies inside the presence set) holds by construction
    /// and lookups at present instants are total.
    pub fn piecewise(pieces: Vec<(Interval, Duration)>) -> Result<Self, TvgError> {
        let mut presence = IntervalSet::new();
        for (iv, _) in &pieces {
            for existing in &pieces {
                if !std::ptr::eq(iv, &existing.0) && iv.overlaps(&existing.0) {
                    return Err(TvgError::InvalidGraph(format!(
                        "latency pieces {} and {} overlap",
                        iv, existing.0
                    )));
                }
            }
            presence.insert(*iv);
        }
        let mut pieces = pieces;
        pieces.sort_by_key(|(iv, _)| iv.start());
        Ok(EdgeSchedule {
            presence,
            latency: Latency::Piecewise(pieces),
        })
    }

    pub fn presence(&self) -> &IntervalSet {
        &self.presence
    }

    pub fn latency(&self) -> &Latency {
        &self.latency
    }

    pub fn is_present(&self, t: TimePoint) -> bool {
        self.presence.contains(t)
    }

    /// Crossing time when departing at `t`, if the edge is present then.
    pub fn latency_at(&self, t: TimePoint) -> Option<Duration> {
        if !self.presence.contains(t) {
            return None;
        }
        match &self.latency {
            Latency::Constant(d) => Some(*d),
            Latency::Piecewise(pieces) => pieces
                .iter()
                .find(|(iv, _)| iv.contains(t))
                .map(|(_, d)| *d),
        }
    }

    /// Iterates maximal spans of constant latency: the presence intervals for
    /// a constant latency, the declared pieces otherwise.
    pub(crate) fn latency_pieces(&self) -> Vec<(Interval, Duration)> {
        match &self.latency {
            Latency::Constant(d) => self.presence.iter().map(|iv| (iv, *d)).collect(),
            Latency::Piecewise(pieces) => pieces.clone(),
        }
    }

    /// Is a crossing departing exactly at `t` allowed? Returns the arrival.
    pub(crate) fn crossing_at(&self, t: TimePoint, policy: CrossingPolicy) -> Option<TimePoint> {
        let lat = self.latency_at(t)?;
        let arrival = t.checked_add(lat)?;
        if policy == CrossingPolicy::ContinuousPresence && lat > Duration::ZERO {
            let span = self.presence.interval_containing(t)?;
            if span.end() < arrival {
                return None;
            }
        }
        Some(arrival)
    }

    /// The policy-valid crossing available from `from` onwards that arrives
    /// earliest; ties prefer the earlier departure. Returns `(dep, arrival)`.
    pub(crate) fn earliest_crossing(
        &self,
        from: TimePoint,
        policy: CrossingPolicy,
    ) -> Option<(TimePoint, TimePoint)> {
        let mut best: Option<(TimePoint, TimePoint)> = None;
        for (piece, lat) in self.latency_pieces() {
            if piece.end() <= from {
                continue;
            }
            let dep = piece.start().max(from);
            let Some(arrival) = dep.checked_add(lat) else {
                continue;
            };
            if policy == CrossingPolicy::ContinuousPresence && lat > Duration::ZERO {
                let span = self
                    .presence
                    .interval_containing(dep)
                    .expect("piece lies inside presence");
                if span.end() < arrival {
                    continue;
                }
            }
            let better = match best {
                None => true,
                Some((bd, ba)) => (arrival, dep) < (ba, bd),
            };
            if better {
                best = Some((dep, arrival));
            }
        }
        best
    }

    /// The latest policy-valid departure whose arrival is `<= by`.
    pub(crate) fn latest_crossing_arriving_by(
        &self,
        by: TimePoint,
        policy: CrossingPolicy,
    ) -> Option<TimePoint> {
        let mut best: Option<TimePoint> = None;
        for (piece, lat) in self.latency_pieces() {
            // dep < piece.end, dep + lat <= by, and under ContinuousPresence
            // with lat > 0 also dep + lat <= containing presence span end.
            let mut cap = piece.end().ticks() - 1;
            let Some(by_cap) = by.ticks().checked_sub(lat.ticks()) else {
                continue;
            };
            cap = cap.min(by_cap);
            if policy == CrossingPolicy::ContinuousPresence && lat > Duration::ZERO {
                let span = self
                    .presence
                    .interval_containing(piece.start())
                    .expect("piece lies inside presence");
                let Some(span_cap) = span.end().ticks().checked_sub(lat.ticks()) else {
                    continue;
                };
                cap = cap.min(span_cap);
            }
            if cap < piece.start().ticks() {
                continue;
            }
            let dep = TimePoint(cap);
            if best.is_none_or(|b| dep > b) {
                best = Some(dep);
            }
        }
        best
    }
}

/// What a journey hop needs from the presence function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CrossingPolicy {
    /// Presence is required at the departure tick only.
    #[default]
    AtDeparture,
    /// Presence must hold for the whole crossing `[t, t + latency)`, as when
    /// a link must stay up until a message is delivered.
    ContinuousPresence,
}

/// A static graph: the time dimension flattened away.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Footprint {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Footprint {
    /// Distinct neighbor sets, ignoring direction and labels.
    pub fn adjacency(&self) -> BTreeMap<&NodeId, BTreeSet<&NodeId>> {
        let mut adj: BTreeMap<&NodeId, BTreeSet<&NodeId>> =
            self.nodes.iter().map(|n| (n, BTreeSet::new())).collect();
        for e in &self.edges {
            if e.tail() != e.head() {
                adj.entry(e.tail()).or_default().insert(e.head());
                adj.entry(e.head()).or_default().insert(e.tail());
            }
        }
        adj
    }

    /// Connected components under the undirected reading, each sorted, in
    /// order of their smallest member.
    pub fn components(&self) -> Vec<BTreeSet<NodeId>> {
        let adj = self.adjacency();
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in &self.nodes {
            if seen.contains(start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut stack = vec![start];
            while let Some(n) = stack.pop() {
                if !seen.insert(n) {
                    continue;
                }
                comp.insert(n.clone());
                if let Some(next) = adj.get(n) {
                    stack.extend(next.iter().copied());
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.len() <= 1 || self.components().len() == 1
    }

    /// Hop distances from `from` under the undirected reading.
    pub fn hop_distances(&self, from: &NodeId) -> BTreeMap<NodeId, usize> {
        let adj = self.adjacency();
        let mut dist = BTreeMap::new();
        let mut frontier = vec![from.clone()];
        dist.insert(from.clone(), 0usize);
        let mut d = 0usize;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for n in frontier {
                if let Some(nbrs) = adj.get(&n) {
                    for &m in nbrs {
                        if !dist.contains_key(m) {
                            dist.insert(m.clone(), d);
                            next.push(m.clone());
                        }
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    /// Whether an undirected path `u`–`v` exists.
    pub fn has_path(&self, u: &NodeId, v: &NodeId) -> bool {
        u == v || self.hop_distances(u).contains_key(v)
    }
}

/// The static graph of edges present at one instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub at: TimePoint,
    pub graph: Footprint,
}

/// How [`Tvg::snapshot_sequence`] samples the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnapshotMode {
    /// One snapshot per topological event; consecutive entries differ.
    EventDriven,
    /// One snapshot per tick of the lifetime; consecutive entries may repeat.
    PerTick,
}

/// A time-varying graph: a node set, labeled edge schedules, and a lifetime.
///
/// Construct through [`TvgBuilder`]. Invariants enforced at build time:
/// every presence interval lies within the lifetime, and every edge endpoint
/// is a declared node.
#[derive(Debug, Clone, PartialEq)]
pub struct Tvg {
    nodes: BTreeSet<NodeId>,
    edges: BTreeMap<EdgeId, EdgeSchedule>,
    lifetime: Interval,
    directed: bool,
    crossing_policy: CrossingPolicy,
    tick_scale: Option<String>,
    // Edges usable leaving / entering each node, sorted for determinism.
    out_edges: BTreeMap<NodeId, Vec<EdgeId>>,
    in_edges: BTreeMap<NodeId, Vec<EdgeId>>,
}

impl Tvg {
    pub fn builder(lifetime: Interval) -> TvgBuilder {
        TvgBuilder::new(lifetime)
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = &EdgeId> {
        self.edges.keys()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&EdgeId, &EdgeSchedule)> {
        self.edges.iter()
    }

    pub fn lifetime(&self) -> Interval {
        self.lifetime
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn crossing_policy(&self) -> CrossingPolicy {
        self.crossing_policy
    }

    /// Display-only annotation, e.g. `1 tick = 1 day`.
    pub fn tick_scale(&self) -> Option<&str> {
        self.tick_scale.as_deref()
    }

    pub fn contains_node(&self, n: &NodeId) -> bool {
        self.nodes.contains(n)
    }

    /// The stored key for `e` under this graph's orientation mode.
    pub(crate) fn canonical_edge(&self, e: &EdgeId) -> EdgeId {
        if self.directed {
            e.clone()
        } else {
            e.undirected_canonical()
        }
    }

    pub fn schedule(&self, e: &EdgeId) -> Result<&EdgeSchedule, TvgError> {
        let key = self.canonical_edge(e);
        self.edges
            .get(&key)
            .ok_or_else(|| TvgError::UnknownEdge(e.clone()))
    }

    fn check_in_lifetime(&self, t: TimePoint) -> Result<(), TvgError> {
        if self.lifetime.contains(t) {
            Ok(())
        } else {
            Err(TvgError::OutOfLifetime {
                time: t,
                lifetime: self.lifetime,
            })
        }
    }

    fn check_node(&self, n: &NodeId) -> Result<(), TvgError> {
        if self.nodes.contains(n) {
            Ok(())
        } else {
            Err(TvgError::UnknownNode(n.clone()))
        }
    }

    /// Is edge `e` available at instant `t`?
    pub fn presence(&self, e: &EdgeId, t: TimePoint) -> Result<bool, TvgError> {
        let schedule = self.schedule(e)?;
        self.check_in_lifetime(t)?;
        Ok(schedule.is_present(t))
    }

    /// Time to cross `e` when departing at `t`. The edge must be present.
    pub fn latency(&self, e: &EdgeId, t: TimePoint) -> Result<Duration, TvgError> {
        let schedule = self.schedule(e)?;
        schedule.latency_at(t).ok_or(TvgError::EdgeAbsent {
            edge: e.clone(),
            time: t,
        })
    }

    /// All dates at which `e` is available, as a merged multi-interval.
    pub fn available_dates(&self, e: &EdgeId) -> Result<&IntervalSet, TvgError> {
        Ok(self.schedule(e)?.presence())
    }

    /// The sorted appearance/disappearance dates of `e`.
    pub fn characteristic_dates_edge(&self, e: &EdgeId) -> Result<Vec<TimePoint>, TvgError> {
        Ok(self.schedule(e)?.presence().endpoints())
    }

    /// Dates at which `e` becomes available.
    pub fn appearance_dates(&self, e: &EdgeId) -> Result<Vec<TimePoint>, TvgError> {
        Ok(self
            .schedule(e)?
            .presence()
            .iter()
            .map(|iv| iv.start())
            .collect())
    }

    /// Dates at which `e` stops being available.
    pub fn disappearance_dates(&self, e: &EdgeId) -> Result<Vec<TimePoint>, TvgError> {
        Ok(self
            .schedule(e)?
            .presence()
            .iter()
            .map(|iv| iv.end())
            .collect())
    }

    /// Sorted, deduplicated dates of all topological events in the graph.
    pub fn characteristic_dates(&self) -> Vec<TimePoint> {
        let mut dates: BTreeSet<TimePoint> = BTreeSet::new();
        for schedule in self.edges.values() {
            dates.extend(schedule.presence().endpoints());
        }
        dates.into_iter().collect()
    }

    /// The static graph of edges present at `t`, over all nodes.
    pub fn snapshot_at(&self, t: TimePoint) -> Result<Snapshot, TvgError> {
        self.check_in_lifetime(t)?;
        let edges = self
            .edges
            .iter()
            .filter(|(_, s)| s.is_present(t))
            .map(|(e, _)| e.clone())
            .collect();
        Ok(Snapshot {
            at: t,
            graph: Footprint {
                nodes: self.nodes.clone(),
                edges,
            },
        })
    }

    /// The evolution as a sequence of static graphs.
    ///
    /// Event-driven form: one entry per characteristic date `t_i` strictly
    /// inside the lifetime, valid on `[t_i, t_{i+1})`; consecutive entries
    /// differ. Per-tick form: one entry per tick, repeats allowed.
    pub fn snapshot_sequence(&self, mode: SnapshotMode) -> Vec<(TimePoint, Footprint)> {
        let mut out = Vec::new();
        match mode {
            SnapshotMode::EventDriven => {
                for t in self.characteristic_dates() {
                    if !self.lifetime.contains(t) {
                        continue;
                    }
                    let snap = self.snapshot_at(t).expect("date within lifetime");
                    debug_assert!(
                        out.last().is_none_or(|(_, g)| *g != snap.graph),
                        "event-driven snapshots must differ"
                    );
                    out.push((t, snap.graph));
                }
            }
            SnapshotMode::PerTick => {
                let mut t = self.lifetime.start();
                while t < self.lifetime.end() {
                    out.push((t, self.snapshot_at(t).expect("tick within lifetime").graph));
                    t = t + Duration(1);
                }
            }
        }
        out
    }

    /// The underlying graph: all nodes, and every edge available at some
    /// point of the lifetime. Equals the union of all snapshots.
    pub fn underlying_graph(&self) -> Footprint {
        Footprint {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, s)| !s.presence().is_empty())
                .map(|(e, _)| e.clone())
                .collect(),
        }
    }

    fn checked_window(&self, w: Interval) -> Result<Interval, TvgError> {
        w.intersect(&self.lifetime)
            .ok_or(TvgError::WindowOutOfLifetime {
                window: w,
                lifetime: self.lifetime,
            })
    }

    /// The static aggregation of all interactions within `w`: every edge
    /// whose presence intersects the window.
    pub fn footprint(&self, w: Interval) -> Result<Footprint, TvgError> {
        let w = self.checked_window(w)?;
        Ok(Footprint {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, s)| s.presence().iter().any(|iv| iv.overlaps(&w)))
                .map(|(e, _)| e.clone())
                .collect(),
        })
    }

    /// Restriction of the graph to `w`: the lifetime becomes the overlap,
    /// presence sets are clipped, and an edge is kept only if some clipped
    /// departure finishes its crossing inside the new lifetime.
    pub fn temporal_subgraph(&self, w: Interval) -> Result<Tvg, TvgError> {
        let lifetime = self.checked_window(w)?;
        let mut builder = TvgBuilder::new(lifetime)
            .directed(self.directed)
            .crossing_policy(self.crossing_policy);
        if let Some(scale) = &self.tick_scale {
            builder = builder.tick_scale(scale.clone());
        }
        for n in &self.nodes {
            builder = builder.node(n.clone());
        }
        for (e, schedule) in &self.edges {
            let kept_pieces: Vec<(Interval, Duration)> = schedule
                .latency_pieces()
                .into_iter()
                .filter_map(|(iv, lat)| iv.intersect(&lifetime).map(|c| (c, lat)))
                .collect();
            // Keep the edge only if its earliest clipped crossing finishes
            // inside the new lifetime.
            let usable = kept_pieces.iter().any(|(iv, lat)| {
                iv.start()
                    .checked_add(*lat)
                    .is_some_and(|arrival| arrival < lifetime.end())
            });
            if !usable {
                continue;
            }
            let schedule = match schedule.latency() {
                Latency::Constant(d) => {
                    EdgeSchedule::with_constant_latency(schedule.presence().clip(lifetime), *d)
                }
                Latency::Piecewise(_) => EdgeSchedule::piecewise(kept_pieces)?,
            };
            builder = builder.edge(e.clone(), schedule);
        }
        builder.build()
    }

    /// Restriction from `t` to the end of the lifetime.
    pub fn temporal_subgraph_from(&self, t: TimePoint) -> Result<Tvg, TvgError> {
        self.temporal_subgraph(Interval::new(t, self.lifetime.end().max(t + Duration(1))))
    }

    /// Restriction from the start of the lifetime up to `t`.
    pub fn temporal_subgraph_until(&self, t: TimePoint) -> Result<Tvg, TvgError> {
        self.temporal_subgraph(Interval::new(self.lifetime.start(), t))
    }

    /// Number of edges incident on `v` that are present at `t`.
    pub fn degree_at(&self, v: &NodeId, t: TimePoint) -> Result<usize, TvgError> {
        self.check_node(v)?;
        self.check_in_lifetime(t)?;
        Ok(self
            .edges
            .iter()
            .filter(|(e, s)| e.is_incident(v) && s.is_present(t))
            .count())
    }

    /// Number of edges incident on `v` present at some instant of `w`.
    pub fn degree_over(&self, v: &NodeId, w: Interval) -> Result<usize, TvgError> {
        self.check_node(v)?;
        let w = self.checked_window(w)?;
        Ok(self
            .edges
            .iter()
            .filter(|(e, s)| e.is_incident(v) && s.presence().iter().any(|iv| iv.overlaps(&w)))
            .count())
    }

    /// The neighbors of `v` at instant `t`. In a directed graph these are
    /// the heads of present edges leaving `v`.
    pub fn neighbors_at(&self, v: &NodeId, t: TimePoint) -> Result<BTreeSet<NodeId>, TvgError> {
        self.check_node(v)?;
        self.check_in_lifetime(t)?;
        let mut out = BTreeSet::new();
        for e in self.out_edges.get(v).into_iter().flatten() {
            if self.edges[e].is_present(t) {
                if let Some(other) = self.traversal_target(v, e) {
                    out.insert(other.clone());
                }
            }
        }
        Ok(out)
    }

    /// Edges usable when leaving `v` (respecting direction), sorted.
    pub(crate) fn edges_from(&self, v: &NodeId) -> &[EdgeId] {
        self.out_edges.get(v).map_or(&[], Vec::as_slice)
    }

    /// Edges usable when arriving at `v` (respecting direction), sorted.
    pub(crate) fn edges_into(&self, v: &NodeId) -> &[EdgeId] {
        self.in_edges.get(v).map_or(&[], Vec::as_slice)
    }

    /// The node reached by traversing `e` from `at`, or `None` when the edge
    /// cannot be traversed in that direction.
    pub(crate) fn traversal_target<'a>(&'a self, at: &NodeId, e: &'a EdgeId) -> Option<&'a NodeId> {
        if self.directed {
            (e.tail() == at).then_some(e.head())
        } else {
            e.other_endpoint(at)
        }
    }
}

/// Staged construction of a [`Tvg`]; `build` validates all invariants.
#[derive(Debug, Clone)]
pub struct TvgBuilder {
    nodes: BTreeSet<NodeId>,
    edges: Vec<(EdgeId, EdgeSchedule)>,
    lifetime: Interval,
    directed: bool,
    crossing_policy: CrossingPolicy,
    tick_scale: Option<String>,
}

impl TvgBuilder {
    pub fn new(lifetime: Interval) -> Self {
        TvgBuilder {
            nodes: BTreeSet::new(),
            edges: Vec::new(),
            lifetime,
            directed: false,
            crossing_policy: CrossingPolicy::default(),
            tick_scale: None,
        }
    }

    pub fn directed(mut self, directed: bool) -> Self {
        self.directed = directed;
        self
    }

    pub fn crossing_policy(mut self, policy: CrossingPolicy) -> Self {
        self.crossing_policy = policy;
        self
    }

    pub fn tick_scale(mut self, scale: impl Into<String>) -> Self {
        self.tick_scale = Some(scale.into());
        self
    }

    pub fn node(mut self, n: impl Into<NodeId>) -> Self {
        self.nodes.insert(n.into());
        self
    }

    pub fn nodes<I, N>(mut self, ns: I) -> Self
    where
        I: IntoIterator<Item = N>,
        N: Into<NodeId>,
    {
        self.nodes.extend(ns.into_iter().map(Into::into));
        self
    }

    pub fn edge(mut self, e: EdgeId, schedule: EdgeSchedule) -> Self {
        self.edges.push((e, schedule));
        self
    }

    /// Shorthand: an unlabeled edge with the given presence intervals and
    /// zero latency.
    pub fn instant_edge<I>(self, tail: &str, head: &str, intervals: I) -> Self
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let presence: IntervalSet = intervals
            .into_iter()
            .map(|(a, b)| Interval::new(TimePoint(a), TimePoint(b)))
            .collect();
        self.edge(EdgeId::new(tail, head), EdgeSchedule::instant(presence))
    }

    pub fn build(self) -> Result<Tvg, TvgError> {
        let mut edges: BTreeMap<EdgeId, EdgeSchedule> = BTreeMap::new();
        for (e, schedule) in self.edges {
            let key = if self.directed {
                e
            } else {
                e.undirected_canonical()
            };
            for endpoint in [key.tail(), key.head()] {
                if !self.nodes.contains(endpoint) {
                    return Err(TvgError::UnknownNode(endpoint.clone()));
                }
            }
            if let Some(iv) = schedule
                .presence()
                .iter()
                .find(|iv| !self.lifetime.contains_interval(iv))
            {
                return Err(TvgError::InvalidGraph(format!(
                    "edge {key}: presence {iv} lies outside the lifetime {}",
                    self.lifetime
                )));
            }
            if edges.insert(key.clone(), schedule).is_some() {
                return Err(TvgError::InvalidGraph(format!("duplicate edge {key}")));
            }
        }

        let mut out_edges: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
        let mut in_edges: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
        for e in edges.keys() {
            if self.directed {
                out_edges
                    .entry(e.tail().clone())
                    .or_default()
                    .push(e.clone());
                in_edges
                    .entry(e.head().clone())
                    .or_default()
                    .push(e.clone());
            } else {
                out_edges
                    .entry(e.tail().clone())
                    .or_default()
                    .push(e.clone());
                out_edges
                    .entry(e.head().clone())
                    .or_default()
                    .push(e.clone());
                in_edges
                    .entry(e.tail().clone())
                    .or_default()
                    .push(e.clone());
                in_edges
                    .entry(e.head().clone())
                    .or_default()
                    .push(e.clone());
            }
        }

        Ok(Tvg {
            nodes: self.nodes,
            edges,
            lifetime: self.lifetime,
            directed: self.directed,
            crossing_policy: self.crossing_policy,
            tick_scale: self.tick_scale,
            out_edges,
            in_edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn tp(t: u64) -> TimePoint {
        TimePoint(t)
    }

    fn iv(a: u64, b: u64) -> Interval {
        Interval::new(tp(a), tp(b))
    }

    #[test]
    fn presence_respects_half_open_intervals() {
        let g = fixtures::demo_tvg();
        let cd = EdgeId::new("c", "d");
        assert!(!g.presence(&cd, tp(6)).unwrap());
        assert!(g.presence(&cd, tp(5)).unwrap());
        assert!(!g.presence(&cd, tp(0)).unwrap(), "before first appearance");
        assert!(matches!(
            g.presence(&cd, tp(9)),
            Err(TvgError::OutOfLifetime { .. })
        ));
        assert!(matches!(
            g.presence(&EdgeId::new("a", "z"), tp(0)),
            Err(TvgError::UnknownEdge(_))
        ));
    }

    #[test]
    fn undirected_lookup_canonicalizes() {
        let g = fixtures::demo_tvg();
        assert!(g.presence(&EdgeId::new("d", "c"), tp(5)).unwrap());
    }

    #[test]
    fn latency_lookup() {
        let g = fixtures::demo_tvg();
        assert_eq!(
            g.latency(&EdgeId::new("a", "b"), tp(1)).unwrap(),
            Duration::ZERO
        );
        assert!(matches!(
            g.latency(&EdgeId::new("a", "b"), tp(7)),
            Err(TvgError::EdgeAbsent { .. })
        ));

        let pw = Tvg::builder(iv(0, 10))
            .nodes(["u", "v"])
            .edge(
                EdgeId::new("u", "v"),
                EdgeSchedule::piecewise(vec![(iv(1, 3), Duration(2)), (iv(5, 9), Duration(4))])
                    .unwrap(),
            )
            .build()
            .unwrap();
        let e = EdgeId::new("u", "v");
        assert_eq!(pw.latency(&e, tp(6)).unwrap(), Duration(4));
        assert_eq!(pw.latency(&e, tp(2)).unwrap(), Duration(2));
        // Oracle: linear scan over the declared pieces.
        for t in 0..10u64 {
            let expect = [(1u64, 3u64, 2u64), (5, 9, 4)]
                .iter()
                .find(|&&(a, b, _)| a <= t && t < b)
                .map(|&(_, _, d)| Duration(d));
            assert_eq!(pw.schedule(&e).unwrap().latency_at(tp(t)), expect);
        }
    }

    #[test]
    fn available_dates_merge() {
        let g = fixtures::demo_tvg();
        let dates = g.available_dates(&EdgeId::new("c", "d")).unwrap();
        assert_eq!(dates.as_slice(), &[iv(5, 6), iv(7, 8)]);

        let merged = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(1, 2), (2, 3)])
            .build()
            .unwrap();
        assert_eq!(
            merged
                .available_dates(&EdgeId::new("u", "v"))
                .unwrap()
                .as_slice(),
            &[iv(1, 3)]
        );

        let empty = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [])
            .build()
            .unwrap();
        assert!(empty
            .available_dates(&EdgeId::new("u", "v"))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn characteristic_dates_per_edge_and_global() {
        let g = fixtures::demo_tvg();
        let cd = EdgeId::new("c", "d");
        assert_eq!(
            g.characteristic_dates_edge(&cd).unwrap(),
            vec![tp(5), tp(6), tp(7), tp(8)]
        );
        assert_eq!(g.appearance_dates(&cd).unwrap(), vec![tp(5), tp(7)]);
        assert_eq!(g.disappearance_dates(&cd).unwrap(), vec![tp(6), tp(8)]);
        assert_eq!(
            g.characteristic_dates(),
            (0..=8).map(tp).collect::<Vec<_>>()
        );

        let single = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(1, 3)])
            .build()
            .unwrap();
        assert_eq!(
            single
                .characteristic_dates_edge(&EdgeId::new("u", "v"))
                .unwrap(),
            vec![tp(1), tp(3)]
        );
        assert_eq!(single.characteristic_dates(), vec![tp(1), tp(3)]);

        let dup = Tvg::builder(iv(0, 2))
            .nodes(["u", "v", "w"])
            .instant_edge("u", "v", [(0, 2)])
            .instant_edge("v", "w", [(0, 2)])
            .build()
            .unwrap();
        assert_eq!(dup.characteristic_dates(), vec![tp(0), tp(2)]);
    }

    #[test]
    fn snapshots_at_instants() {
        let g = fixtures::demo_tvg();
        let s2 = g.snapshot_at(tp(2)).unwrap();
        let names: Vec<String> = s2.graph.edges.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, vec!["(a,b)", "(a,c)", "(b,c)"]);
        assert!(g.snapshot_at(tp(6)).unwrap().graph.edges.is_empty());
    }

    #[test]
    fn event_driven_snapshot_sequence() {
        let g = fixtures::relay_line_tvg();
        let seq = g.snapshot_sequence(SnapshotMode::EventDriven);
        let shape: Vec<(u64, usize)> = seq
            .iter()
            .map(|(t, f)| (t.ticks(), f.edges.len()))
            .collect();
        assert_eq!(shape, vec![(0, 2), (1, 0), (2, 1), (3, 0)]);
        for w in seq.windows(2) {
            assert_ne!(w[0].1, w[1].1);
        }
        // Union of snapshots equals the underlying graph.
        let mut union = Footprint {
            nodes: g.nodes().clone(),
            edges: BTreeSet::new(),
        };
        for (_, f) in &seq {
            union.edges.extend(f.edges.iter().cloned());
        }
        assert_eq!(union, g.underlying_graph());
    }

    #[test]
    fn per_tick_snapshot_sequence_spans_lifetime() {
        let g = fixtures::relay_line_tvg();
        let seq = g.snapshot_sequence(SnapshotMode::PerTick);
        assert_eq!(seq.len(), 4);
        assert_eq!(seq[1].1.edges.len(), 0);
    }

    #[test]
    fn snapshot_sequence_trivial_cases() {
        let single = Tvg::builder(iv(0, 5))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(0, 5)])
            .build()
            .unwrap();
        assert_eq!(single.snapshot_sequence(SnapshotMode::EventDriven).len(), 1);

        let empty = Tvg::builder(iv(0, 5)).build().unwrap();
        assert!(empty
            .snapshot_sequence(SnapshotMode::EventDriven)
            .is_empty());
    }

    #[test]
    fn underlying_graph_flattens_time() {
        let line = fixtures::relay_line_tvg();
        let under = line.underlying_graph();
        assert_eq!(under.edges.len(), 3);
        assert!(under.is_connected());

        let demo = fixtures::demo_tvg().underlying_graph();
        assert_eq!(demo.edges.len(), 4);

        let silent = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [])
            .build()
            .unwrap();
        assert!(silent.underlying_graph().edges.is_empty());
    }

    #[test]
    fn footprint_of_window() {
        let g = fixtures::demo_tvg();
        let f = g.footprint(iv(0, 2)).unwrap();
        let names: Vec<String> = f.edges.iter().map(|e| e.to_string()).collect();
        assert_eq!(names, vec!["(a,b)", "(b,c)"]);

        assert_eq!(g.footprint(g.lifetime()).unwrap(), g.underlying_graph());
        assert!(g.footprint(iv(6, 7)).unwrap().edges.is_empty());
        assert!(matches!(
            g.footprint(iv(20, 30)),
            Err(TvgError::WindowOutOfLifetime { .. })
        ));
    }

    #[test]
    fn temporal_subgraph_clips_and_filters() {
        let g = fixtures::demo_tvg();
        let sub = g.temporal_subgraph(iv(2, 5)).unwrap();
        assert_eq!(sub.lifetime(), iv(2, 5));
        assert_eq!(
            sub.available_dates(&EdgeId::new("a", "b"))
                .unwrap()
                .as_slice(),
            &[iv(2, 3)]
        );
        assert!(
            sub.schedule(&EdgeId::new("c", "d")).is_err(),
            "absent in window"
        );

        // Window equal to the lifetime is the identity.
        assert_eq!(g.temporal_subgraph(g.lifetime()).unwrap(), g);

        // Zero latency: kept iff the clipped presence is non-empty.
        assert_eq!(sub.edge_count(), 3);
    }

    #[test]
    fn temporal_subgraph_respects_latency_exit() {
        // One edge, latency 3: a crossing departing in [4,6) cannot finish
        // before the window ends at 6, so the edge is dropped.
        let g = Tvg::builder(iv(0, 10))
            .nodes(["u", "v"])
            .edge(
                EdgeId::new("u", "v"),
                EdgeSchedule::with_constant_latency(
                    IntervalSet::from_interval(iv(4, 8)),
                    Duration(3),
                ),
            )
            .build()
            .unwrap();
        let sub = g.temporal_subgraph(iv(0, 6)).unwrap();
        assert_eq!(sub.edge_count(), 0);
        let wide = g.temporal_subgraph(iv(0, 8)).unwrap();
        assert_eq!(wide.edge_count(), 1);
    }

    #[test]
    fn unbounded_window_shorthands() {
        let g = fixtures::demo_tvg();
        assert_eq!(
            g.temporal_subgraph_from(tp(2)).unwrap().lifetime(),
            iv(2, 8)
        );
        assert_eq!(
            g.temporal_subgraph_until(tp(5)).unwrap().lifetime(),
            iv(0, 5)
        );
    }

    #[test]
    fn degree_and_neighbors() {
        let g = fixtures::demo_tvg();
        let c = NodeId::from("c");
        assert_eq!(g.degree_at(&c, tp(3)).unwrap(), 2);
        assert_eq!(g.degree_over(&c, g.lifetime()).unwrap(), 3);
        assert_eq!(
            g.neighbors_at(&c, tp(3)).unwrap(),
            ["a", "b"].map(NodeId::from).into_iter().collect()
        );

        let line = fixtures::relay_line_tvg();
        assert!(line
            .neighbors_at(&NodeId::from("a"), tp(2))
            .unwrap()
            .is_empty());

        let lonely = Tvg::builder(iv(0, 4)).node("x").build().unwrap();
        assert_eq!(lonely.degree_at(&NodeId::from("x"), tp(0)).unwrap(), 0);
        assert!(matches!(
            lonely.degree_at(&NodeId::from("y"), tp(0)),
            Err(TvgError::UnknownNode(_))
        ));
    }

    #[test]
    fn graphs_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Tvg>();
        assert_send_sync::<Footprint>();
        assert_send_sync::<Snapshot>();
    }

    #[test]
    fn snapshot_before_any_appearance_is_empty() {
        let g = fixtures::cascade_tvg();
        assert!(g.snapshot_at(tp(0)).unwrap().graph.edges.is_empty());
    }

    #[test]
    fn snapshots_are_contained_in_covering_footprints() {
        let g = fixtures::demo_tvg();
        for t in 0..8u64 {
            let snap = g.snapshot_at(tp(t)).unwrap().graph;
            for (a, b) in [(0, 8), (t.saturating_sub(1), t + 1), (t, t + 1)] {
                let w = iv(a.min(t), b.max(t + 1));
                let foot = g.footprint(w).unwrap();
                assert!(
                    snap.edges.is_subset(&foot.edges),
                    "snapshot at {t} not within footprint of {w}"
                );
            }
        }
    }

    #[test]
    fn degree_over_lifetime_matches_underlying_graph() {
        let g = fixtures::demo_tvg();
        let under = g.underlying_graph();
        for n in g.nodes() {
            let structural = under.edges.iter().filter(|e| e.is_incident(n)).count();
            assert_eq!(g.degree_over(n, g.lifetime()).unwrap(), structural);
        }
    }

    #[test]
    fn directed_neighbors_respect_orientation() {
        let g = Tvg::builder(iv(0, 4))
            .directed(true)
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(0, 4)])
            .build()
            .unwrap();
        assert_eq!(g.neighbors_at(&NodeId::from("u"), tp(0)).unwrap().len(), 1);
        assert!(g
            .neighbors_at(&NodeId::from("v"), tp(0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn builder_rejects_invalid_graphs() {
        let out_of_lifetime = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(2, 6)])
            .build();
        assert!(matches!(out_of_lifetime, Err(TvgError::InvalidGraph(_))));

        let missing_node = Tvg::builder(iv(0, 4))
            .node("u")
            .instant_edge("u", "v", [(0, 1)])
            .build();
        assert!(matches!(missing_node, Err(TvgError::UnknownNode(_))));

        let duplicate = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .instant_edge("u", "v", [(0, 1)])
            .instant_edge("v", "u", [(1, 2)])
            .build();
        assert!(matches!(duplicate, Err(TvgError::InvalidGraph(_))));
    }

    #[test]
    fn labeled_edges_are_distinct() {
        let g = Tvg::builder(iv(0, 4))
            .nodes(["u", "v"])
            .edge(
                EdgeId::labeled("u", "v", "wifi"),
                EdgeSchedule::instant(IntervalSet::from_interval(iv(0, 1))),
            )
            .edge(
                EdgeId::labeled("u", "v", "satellite"),
                EdgeSchedule::instant(IntervalSet::from_interval(iv(2, 3))),
            )
            .build()
            .unwrap();
        assert_eq!(g.edge_count(), 2);
    }
}
