//! Journeys: paths over time.
//!
//! A journey is a sequence of `(edge, departure)` hops whose edges form a
//! walk, whose departures never precede the previous hop's arrival, and
//! whose every hop satisfies the graph's crossing policy. Journeys are
//! directed entities even over undirected edges: the time dimension creates
//! its own direction, so `u` reaching `v` says nothing about `v` reaching
//! `u`.
//!
//! Three optimality metrics apply to journeys departing at or after an
//! anchor date: *foremost* (earliest arrival), *shortest* (fewest hops), and
//! *fastest* (smallest end-to-end duration). The reflexive case `u == v` is
//! the empty journey with zero length by convention.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::TvgError;
use crate::model::{EdgeId, NodeId, Tvg};
use crate::time::{Duration, TimePoint};

/// Hard ceiling on [`Tvg::enumerate_journeys`] depth.
pub const MAX_ENUMERATION_HOPS: usize = 10;

/// Work budget (DFS states) for [`Tvg::enumerate_journeys`].
const ENUMERATION_STATE_BUDGET: usize = 2_000_000;

/// One step of a journey: cross `edge` leaving at `departure`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Hop {
    pub edge: EdgeId,
    pub departure: TimePoint,
}

/// A (possibly empty) journey anchored at a start node.
///
/// The start node orients the hops: over undirected edges the walk direction
/// is not recoverable from the edge list alone.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Journey {
    start: NodeId,
    hops: Vec<Hop>,
}

/// Which journey optimality metric a query asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JourneyMetric {
    Foremost,
    Shortest,
    Fastest,
}

impl Journey {
    pub fn new(start: impl Into<NodeId>, hops: Vec<Hop>) -> Self {
        Journey {
            start: start.into(),
            hops,
        }
    }

    /// The zero-hop journey standing still at `at`.
    pub fn empty(at: impl Into<NodeId>) -> Self {
        Journey {
            start: at.into(),
            hops: Vec::new(),
        }
    }

    pub fn start(&self) -> &NodeId {
        &self.start
    }

    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// Number of hops.
    pub fn topological_length(&self) -> usize {
        self.hops.len()
    }

    /// Departure date of the first hop.
    pub fn departure(&self) -> Result<TimePoint, TvgError> {
        self.hops
            .first()
            .map(|h| h.departure)
            .ok_or(TvgError::EmptyJourney)
    }

    /// Arrival date: last departure plus that hop's crossing latency.
    pub fn arrival(&self, g: &Tvg) -> Result<TimePoint, TvgError> {
        let last = self.hops.last().ok_or(TvgError::EmptyJourney)?;
        let lat = g.latency(&last.edge, last.departure)?;
        last.departure
            .checked_add(lat)
            .ok_or_else(|| TvgError::InvalidJourney("arrival overflows the time domain".into()))
    }

    /// End-to-end duration: arrival minus departure.
    pub fn temporal_length(&self, g: &Tvg) -> Result<Duration, TvgError> {
        let dep = self.departure()?;
        let arr = self.arrival(g)?;
        arr.checked_since(dep)
            .ok_or_else(|| TvgError::InvalidJourney("arrival precedes departure".into()))
    }

    /// The nodes visited, starting with the start node. Fails when the hops
    /// do not form a walk from the start.
    pub fn visited_nodes(&self, g: &Tvg) -> Result<Vec<NodeId>, TvgError> {
        let mut at = self.start.clone();
        let mut out = vec![at.clone()];
        for hop in &self.hops {
            g.schedule(&hop.edge)?;
            let next = g
                .traversal_target(&at, &hop.edge)
                .ok_or_else(|| {
                    TvgError::InvalidJourney(format!("hop {} does not leave node {at}", hop.edge))
                })?
                .clone();
            out.push(next.clone());
            at = next;
        }
        Ok(out)
    }
}

impl Tvg {
    /// Checks all journey invariants: the edges exist and form a walk from
    /// the start, departures respect presence and the crossing policy, and
    /// each hop departs no earlier than the previous arrival.
    ///
    /// Unknown edges are an error; every other violation yields `false`.
    pub fn is_valid_journey(&self, j: &Journey) -> Result<bool, TvgError> {
        for hop in j.hops() {
            self.schedule(&hop.edge)?;
        }
        if !self.contains_node(j.start()) {
            return Ok(false);
        }
        let mut at = j.start().clone();
        let mut ready = None::<TimePoint>;
        for hop in j.hops() {
            let Some(next) = self.traversal_target(&at, &hop.edge) else {
                return Ok(false);
            };
            if let Some(ready) = ready {
                if hop.departure < ready {
                    return Ok(false);
                }
            }
            let schedule = self.schedule(&hop.edge)?;
            let Some(arrival) = schedule.crossing_at(hop.departure, self.crossing_policy()) else {
                return Ok(false);
            };
            ready = Some(arrival);
            at = next.clone();
        }
        Ok(true)
    }

    /// Is every next edge already present at the moment the previous hop
    /// arrives? Journeys with this property need no store-and-wait at the
    /// intermediate nodes; the others are indirect.
    pub fn is_direct(&self, j: &Journey) -> Result<bool, TvgError> {
        if !self.is_valid_journey(j)? {
            return Err(TvgError::InvalidJourney(
                "direct/indirect is defined for valid journeys only".into(),
            ));
        }
        for pair in j.hops().windows(2) {
            let lat = self.latency(&pair[0].edge, pair[0].departure)?;
            let Some(arrival) = pair[0].departure.checked_add(lat) else {
                return Ok(false);
            };
            if !self.schedule(&pair[1].edge)?.is_present(arrival) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_node_known(&self, n: &NodeId) -> Result<(), TvgError> {
        if self.contains_node(n) {
            Ok(())
        } else {
            Err(TvgError::UnknownNode(n.clone()))
        }
    }

    /// Single-source earliest arrivals for journeys departing at or after
    /// `t`, with parent hops for path reconstruction.
    fn earliest_arrivals(&self, source: &NodeId, t: TimePoint) -> ArrivalTable {
        let mut arrival: BTreeMap<NodeId, TimePoint> = BTreeMap::new();
        let mut parent: BTreeMap<NodeId, (EdgeId, TimePoint, NodeId)> = BTreeMap::new();
        let mut heap: BinaryHeap<Reverse<(TimePoint, NodeId)>> = BinaryHeap::new();
        arrival.insert(source.clone(), t);
        heap.push(Reverse((t, source.clone())));
        while let Some(Reverse((time, node))) = heap.pop() {
            if arrival.get(&node).is_some_and(|&a| a < time) {
                continue;
            }
            for e in self.edges_from(&node) {
                let Some(target) = self.traversal_target(&node, e) else {
                    continue;
                };
                let schedule = self.schedule(e).expect("adjacency edge exists");
                let Some((dep, arr)) = schedule.earliest_crossing(time, self.crossing_policy())
                else {
                    continue;
                };
                if arrival.get(target).is_none_or(|&best| arr < best) {
                    arrival.insert(target.clone(), arr);
                    parent.insert(target.clone(), (e.clone(), dep, node.clone()));
                    heap.push(Reverse((arr, target.clone())));
                }
            }
        }
        ArrivalTable {
            source: source.clone(),
            arrival,
            parent,
        }
    }

    /// A journey from `u` departing at or after `t` that arrives at `v` as
    /// early as possible, or `None` when `v` is unreachable. `u == v` yields
    /// the empty journey.
    pub fn foremost_journey(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Journey>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Ok(Some(Journey::empty(u.clone())));
        }
        Ok(self.earliest_arrivals(u, t).journey_to(v))
    }

    /// Arrival of the foremost journey minus `t`; `None` when unreachable.
    pub fn temporal_distance(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Duration>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Ok(Some(Duration::ZERO));
        }
        let table = self.earliest_arrivals(u, t);
        Ok(table.arrival.get(v).map(|&a| a - t))
    }

    /// Earliest arrival at `target` using at most `max_hops` hops, starting
    /// from `from` no earlier than `t`.
    fn earliest_arrival_bounded(
        &self,
        from: &NodeId,
        t: TimePoint,
        max_hops: usize,
        target: &NodeId,
    ) -> Option<TimePoint> {
        let mut best: BTreeMap<NodeId, TimePoint> = BTreeMap::new();
        best.insert(from.clone(), t);
        let mut answer = (from == target).then_some(t);
        for _ in 0..max_hops {
            let mut next = best.clone();
            for (node, &time) in &best {
                for e in self.edges_from(node) {
                    let Some(tgt) = self.traversal_target(node, e) else {
                        continue;
                    };
                    let schedule = self.schedule(e).expect("adjacency edge exists");
                    let Some((_, arr)) = schedule.earliest_crossing(time, self.crossing_policy())
                    else {
                        continue;
                    };
                    if next.get(tgt).is_none_or(|&b| arr < b) {
                        next.insert(tgt.clone(), arr);
                    }
                }
            }
            best = next;
            if let Some(&a) = best.get(target) {
                if answer.is_none_or(|cur| a < cur) {
                    answer = Some(a);
                }
            }
        }
        answer
    }

    /// Minimum hop count over journeys `u -> v` departing at or after `t`,
    /// together with the earliest arrival achievable at that hop count.
    fn shortest_hops_and_arrival(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Option<(usize, TimePoint)> {
        if u == v {
            return Some((0, t));
        }
        // Layered relaxation: layer k holds the earliest arrival within <= k
        // hops. Hop-minimal journeys never revisit a node, so n - 1 layers
        // suffice.
        let mut best: BTreeMap<NodeId, TimePoint> = BTreeMap::new();
        best.insert(u.clone(), t);
        for k in 1..self.node_count() {
            let mut next = best.clone();
            for (node, &time) in &best {
                for e in self.edges_from(node) {
                    let Some(tgt) = self.traversal_target(node, e) else {
                        continue;
                    };
                    let schedule = self.schedule(e).expect("adjacency edge exists");
                    let Some((_, arr)) = schedule.earliest_crossing(time, self.crossing_policy())
                    else {
                        continue;
                    };
                    if next.get(tgt).is_none_or(|&b| arr < b) {
                        next.insert(tgt.clone(), arr);
                    }
                }
            }
            best = next;
            if let Some(&a) = best.get(v) {
                return Some((k, a));
            }
        }
        None
    }

    /// Minimum hop count of a journey `u -> v` departing at or after `t`.
    pub fn topological_distance(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<usize>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        Ok(self.shortest_hops_and_arrival(u, v, t).map(|(k, _)| k))
    }

    /// A hop-minimal journey `u -> v` departing at or after `t`. Ties are
    /// broken by earliest arrival, then by the lexicographically least hop
    /// sequence, so the output is deterministic.
    pub fn shortest_journey(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Journey>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Ok(Some(Journey::empty(u.clone())));
        }
        let Some((hops, target_arrival)) = self.shortest_hops_and_arrival(u, v, t) else {
            return Ok(None);
        };

        // Greedy reconstruction of the lexicographically least hop sequence
        // among journeys with `hops` hops and arrival <= target_arrival: at
        // each step take the least (edge, departure) that still admits a
        // completion. Candidate departures are the per-piece minima; a later
        // departure in the same piece arrives no earlier, so it cannot be
        // feasible when the piece minimum is not.
        let mut journey = Vec::with_capacity(hops);
        let mut at = u.clone();
        let mut time = t;
        for remaining in (1..=hops).rev() {
            let mut chosen: Option<(EdgeId, TimePoint, TimePoint, NodeId)> = None;
            'edges: for e in self.edges_from(&at) {
                let Some(tgt) = self.traversal_target(&at, e) else {
                    continue;
                };
                let schedule = self.schedule(e).expect("adjacency edge exists");
                let mut candidates: Vec<(TimePoint, TimePoint)> = Vec::new();
                for (piece, _) in schedule.latency_pieces() {
                    if piece.end() <= time {
                        continue;
                    }
                    let dep = piece.start().max(time);
                    if let Some(arr) = schedule.crossing_at(dep, self.crossing_policy()) {
                        candidates.push((dep, arr));
                    }
                }
                candidates.sort();
                for (dep, arr) in candidates {
                    if arr > target_arrival {
                        continue;
                    }
                    let feasible = if remaining == 1 {
                        tgt == v
                    } else {
                        self.earliest_arrival_bounded(tgt, arr, remaining - 1, v)
                            .is_some_and(|a| a <= target_arrival)
                    };
                    if feasible {
                        chosen = Some((e.clone(), dep, arr, tgt.clone()));
                        break 'edges;
                    }
                }
            }
            let (edge, dep, arr, tgt) =
                chosen.expect("hop count certified by the layered relaxation");
            journey.push(Hop {
                edge,
                departure: dep,
            });
            at = tgt;
            time = arr;
        }
        Ok(Some(Journey::new(u.clone(), journey)))
    }

    /// Ticks at which a first hop can leave `u`, from `t` on, ascending.
    fn first_hop_departures(&self, u: &NodeId, t: TimePoint) -> Vec<TimePoint> {
        let mut ticks: BTreeSet<TimePoint> = BTreeSet::new();
        for e in self.edges_from(u) {
            if self.traversal_target(u, e).is_none() {
                continue;
            }
            let schedule = self.schedule(e).expect("adjacency edge exists");
            for (piece, _) in schedule.latency_pieces() {
                let mut dep = piece.start().max(t);
                while dep < piece.end() {
                    if schedule.crossing_at(dep, self.crossing_policy()).is_some() {
                        ticks.insert(dep);
                    }
                    dep = dep + Duration(1);
                }
            }
        }
        ticks.into_iter().collect()
    }

    /// A journey `u -> v` departing at or after `t` with the smallest
    /// end-to-end duration; ties prefer the earliest departure.
    ///
    /// Every candidate departure tick of an edge leaving `u` anchors one
    /// earliest-arrival search. The minimum over those anchors of each
    /// returned journey's own duration is exact: the optimum departs at some
    /// crossable tick, and the search anchored there returns a journey of
    /// optimal duration. Anchors inside a waiting plateau are skipped — the
    /// arrival function is flat between an anchor and the departure of the
    /// journey it finds.
    pub fn fastest_journey(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Journey>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Ok(Some(Journey::empty(u.clone())));
        }
        let mut best: Option<(Duration, TimePoint, Journey)> = None;
        let mut resume_from = t;
        for anchor in self.first_hop_departures(u, t) {
            if anchor < resume_from {
                continue;
            }
            let Some(journey) = self.earliest_arrivals(u, anchor).journey_to(v) else {
                break; // arrivals only get later; unreachable stays unreachable
            };
            let dep = journey.departure().expect("reconstructed journey has hops");
            let duration = journey
                .temporal_length(self)
                .expect("reconstructed journey is valid");
            if best
                .as_ref()
                .is_none_or(|(d, bdep, _)| (duration, dep) < (*d, *bdep))
            {
                best = Some((duration, dep, journey));
            }
            if duration == Duration::ZERO {
                break;
            }
            resume_from = dep + Duration(1);
        }
        Ok(best.map(|(_, _, j)| j))
    }

    /// Entry point shared by the three metrics.
    pub fn optimal_journey(
        &self,
        metric: JourneyMetric,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Journey>, TvgError> {
        match metric {
            JourneyMetric::Foremost => self.foremost_journey(u, v, t),
            JourneyMetric::Shortest => self.shortest_journey(u, v, t),
            JourneyMetric::Fastest => self.fastest_journey(u, v, t),
        }
    }

    /// Does a journey `u -> v` departing at or after `t` exist? Reflexively
    /// true for `u == v`.
    pub fn can_reach(&self, u: &NodeId, v: &NodeId, t: TimePoint) -> Result<bool, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Ok(true);
        }
        Ok(self.earliest_arrivals(u, t).arrival.contains_key(v))
    }

    /// Every node reachable from `u` by a journey departing at or after `t`,
    /// including `u` itself.
    pub fn horizon(&self, u: &NodeId, t: TimePoint) -> Result<BTreeSet<NodeId>, TvgError> {
        self.check_node_known(u)?;
        Ok(self.earliest_arrivals(u, t).arrival.into_keys().collect())
    }

    /// The temporal view that `v` has of `u` at `t`: the latest date at
    /// which a message could have left `u` and still reached `v` by `t`.
    /// `None` when no journey `u -> v` arrives by `t`.
    pub fn temporal_view(
        &self,
        v: &NodeId,
        u: &NodeId,
        t: TimePoint,
    ) -> Result<Option<TimePoint>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if u == v {
            return Err(TvgError::SameNode(u.clone()));
        }
        // Backward search with max labels. label(x) = latest instant by
        // which a message must leave x (x = v: arrive by t). Settling the
        // largest label first is sound because relaxation is monotone.
        let mut label: BTreeMap<NodeId, TimePoint> = BTreeMap::new();
        let mut heap: BinaryHeap<(TimePoint, NodeId)> = BinaryHeap::new();
        label.insert(v.clone(), t);
        heap.push((t, v.clone()));
        while let Some((time, node)) = heap.pop() {
            if label.get(&node).is_some_and(|&b| b > time) {
                continue;
            }
            for e in self.edges_into(&node) {
                let from = if self.is_directed() {
                    e.tail()
                } else {
                    let Some(other) = e.other_endpoint(&node) else {
                        continue;
                    };
                    other
                };
                let schedule = self.schedule(e).expect("adjacency edge exists");
                let Some(dep) = schedule.latest_crossing_arriving_by(time, self.crossing_policy())
                else {
                    continue;
                };
                if label.get(from).is_none_or(|&b| dep > b) {
                    label.insert(from.clone(), dep);
                    heap.push((dep, from.clone()));
                }
            }
        }
        Ok(label.get(u).copied())
    }

    /// Exhaustively lists the valid journeys `u -> v` with departure at or
    /// after `t` and at most `max_hops` hops (`u == v` contributes the empty
    /// journey). Hops try every crossable departure tick, so on small graphs
    /// the listing is exact and serves as an oracle for the three metrics.
    ///
    /// Fails with `BoundExceeded` when `max_hops` exceeds
    /// [`MAX_ENUMERATION_HOPS`] or the search outgrows its state budget.
    pub fn enumerate_journeys(
        &self,
        u: &NodeId,
        v: &NodeId,
        t: TimePoint,
        max_hops: usize,
    ) -> Result<Vec<Journey>, TvgError> {
        self.check_node_known(u)?;
        self.check_node_known(v)?;
        if max_hops > MAX_ENUMERATION_HOPS {
            return Err(TvgError::BoundExceeded(format!(
                "max_hops {max_hops} exceeds the ceiling of {MAX_ENUMERATION_HOPS}"
            )));
        }
        let mut out = Vec::new();
        let mut hops: Vec<Hop> = Vec::new();
        let mut budget = ENUMERATION_STATE_BUDGET;
        self.enumerate_from(u, v, t, max_hops, &mut hops, &mut out, &mut budget)?;
        let journeys = out
            .into_iter()
            .map(|hops| Journey::new(u.clone(), hops))
            .collect();
        Ok(journeys)
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate_from(
        &self,
        at: &NodeId,
        v: &NodeId,
        earliest: TimePoint,
        hops_left: usize,
        hops: &mut Vec<Hop>,
        out: &mut Vec<Vec<Hop>>,
        budget: &mut usize,
    ) -> Result<(), TvgError> {
        if *budget == 0 {
            return Err(TvgError::BoundExceeded(
                "journey enumeration exceeded its state budget".into(),
            ));
        }
        *budget -= 1;
        if at == v {
            out.push(hops.clone());
        }
        if hops_left == 0 {
            return Ok(());
        }
        for e in self.edges_from(at) {
            let Some(target) = self.traversal_target(at, e) else {
                continue;
            };
            let schedule = self.schedule(e).expect("adjacency edge exists");
            for (piece, _) in schedule.latency_pieces() {
                let mut dep = piece.start().max(earliest);
                while dep < piece.end() {
                    if let Some(arrival) = schedule.crossing_at(dep, self.crossing_policy()) {
                        hops.push(Hop {
                            edge: e.clone(),
                            departure: dep,
                        });
                        self.enumerate_from(target, v, arrival, hops_left - 1, hops, out, budget)?;
                        hops.pop();
                    }
                    dep = dep + Duration(1);
                }
            }
        }
        Ok(())
    }
}

/// Earliest-arrival labels with parent hops from one anchored search.
struct ArrivalTable {
    source: NodeId,
    arrival: BTreeMap<NodeId, TimePoint>,
    parent: BTreeMap<NodeId, (EdgeId, TimePoint, NodeId)>,
}

impl ArrivalTable {
    fn journey_to(&self, v: &NodeId) -> Option<Journey> {
        if !self.arrival.contains_key(v) {
            return None;
        }
        let mut hops = Vec::new();
        let mut at = v.clone();
        while at != self.source {
            let (edge, dep, prev) = self.parent.get(&at)?;
            hops.push(Hop {
                edge: edge.clone(),
                departure: *dep,
            });
            at = prev.clone();
        }
        hops.reverse();
        Some(Journey::new(self.source.clone(), hops))
    }
}
