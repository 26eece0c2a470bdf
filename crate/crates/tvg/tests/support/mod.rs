#![allow(dead_code)] // each test binary uses a subset

//! Shared helpers for the integration suites: small random instances and a
//! tick-level reachability oracle that is structurally unlike the library's
//! interval-based searches.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

use tvg::{
    CrossingPolicy, Duration, EdgeId, EdgeSchedule, Interval, IntervalSet, NodeId, TimePoint, Tvg,
};

/// A random instance small enough for exhaustive journey enumeration:
/// up to 6 nodes, up to 8 presence intervals in total over a 16-tick
/// horizon, constant latency 0 or 1 per edge, mixed orientations and
/// crossing policies.
pub fn random_small_instance(seed: u64) -> Tvg {
    let mut rng = StdRng::seed_from_u64(seed);
    let names = ["a", "b", "c", "d", "e", "f"];
    let n = rng.random_range(2..=6usize);
    let directed = rng.random_bool(0.25);
    let policy = if rng.random_bool(0.25) {
        CrossingPolicy::ContinuousPresence
    } else {
        CrossingPolicy::AtDeparture
    };
    let horizon = 16u64;

    let interval_budget = rng.random_range(1..=8usize);
    let mut presence: BTreeMap<(usize, usize), IntervalSet> = BTreeMap::new();
    for _ in 0..interval_budget {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let key = if directed {
            (i, j)
        } else {
            (i.min(j), i.max(j))
        };
        let start = rng.random_range(0..horizon - 1);
        let len = rng.random_range(1..=4u64).min(horizon - start);
        presence
            .entry(key)
            .or_default()
            .insert(Interval::new(TimePoint(start), TimePoint(start + len)));
    }

    let mut builder = Tvg::builder(Interval::new(TimePoint(0), TimePoint(horizon)))
        .directed(directed)
        .crossing_policy(policy)
        .nodes(names.iter().take(n).copied());
    for ((i, j), set) in presence {
        let latency = Duration(rng.random_range(0..=1u64));
        builder = builder.edge(
            EdgeId::new(names[i], names[j]),
            EdgeSchedule::with_constant_latency(set, latency),
        );
    }
    builder.build().expect("valid random instance")
}

/// A harsher variant for the crossing-policy logic: latencies up to 3 under
/// ContinuousPresence, where a crossing must fit inside one presence span.
pub fn random_policy_stress_instance(seed: u64) -> Tvg {
    let mut rng = StdRng::seed_from_u64(seed ^ 0xA5A5_5A5A);
    let names = ["a", "b", "c", "d", "e"];
    let n = rng.random_range(2..=5usize);
    let horizon = 18u64;
    let mut presence: BTreeMap<(usize, usize), IntervalSet> = BTreeMap::new();
    for _ in 0..rng.random_range(2..=7usize) {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        if i == j {
            j = (j + 1) % n;
        }
        let key = (i.min(j), i.max(j));
        let start = rng.random_range(0..horizon - 1);
        let len = rng.random_range(1..=6u64).min(horizon - start);
        presence
            .entry(key)
            .or_default()
            .insert(Interval::new(TimePoint(start), TimePoint(start + len)));
    }
    let mut builder = Tvg::builder(Interval::new(TimePoint(0), TimePoint(horizon)))
        .crossing_policy(CrossingPolicy::ContinuousPresence)
        .nodes(names.iter().take(n).copied());
    for ((i, j), set) in presence {
        let latency = Duration([0u64, 2, 3][rng.random_range(0..3)]);
        builder = builder.edge(
            EdgeId::new(names[i], names[j]),
            EdgeSchedule::with_constant_latency(set, latency),
        );
    }
    builder.build().expect("valid stress instance")
}

/// Best journey statistics from exhaustive enumeration: `(min_arrival,
/// min_hops, min_duration)` over non-empty journeys `u -> v` departing at
/// or after `t`, or `None` when no such journey exists.
pub fn enumerated_optima(
    g: &Tvg,
    u: &NodeId,
    v: &NodeId,
    t: TimePoint,
) -> Option<(TimePoint, usize, Duration)> {
    let journeys: Vec<_> = g
        .enumerate_journeys(u, v, t, g.node_count().saturating_sub(1))
        .expect("enumeration within budget")
        .into_iter()
        .filter(|j| !j.is_empty())
        .collect();
    if journeys.is_empty() {
        return None;
    }
    let arrival = journeys
        .iter()
        .map(|j| j.arrival(g).unwrap())
        .min()
        .unwrap();
    let hops = journeys
        .iter()
        .map(|j| j.topological_length())
        .min()
        .unwrap();
    let duration = journeys
        .iter()
        .map(|j| j.temporal_length(g).unwrap())
        .min()
        .unwrap();
    Some((arrival, hops, duration))
}

/// Earliest arrival at every node by per-tick fixpoint iteration: at each
/// tick, repeatedly relax every single-tick crossing until nothing changes,
/// then advance the clock. No priority queue, no interval arithmetic.
pub fn tick_oracle_arrivals(g: &Tvg, source: &NodeId, t: TimePoint) -> BTreeMap<NodeId, TimePoint> {
    let mut reach: BTreeMap<NodeId, TimePoint> = BTreeMap::new();
    reach.insert(source.clone(), t);
    let start = g.lifetime().start().max(t);
    let mut tick = start;
    while tick < g.lifetime().end() {
        loop {
            let mut changed = false;
            let snapshot: Vec<(NodeId, TimePoint)> =
                reach.iter().map(|(n, t)| (n.clone(), *t)).collect();
            for (node, ready) in snapshot {
                if ready > tick {
                    continue;
                }
                for (e, schedule) in g.edges() {
                    let from = if g.is_directed() {
                        (e.tail() == &node).then(|| e.head().clone())
                    } else {
                        e.other_endpoint(&node).cloned()
                    };
                    let Some(target) = from else { continue };
                    let Some(lat) = schedule.latency_at(tick) else {
                        continue;
                    };
                    if g.crossing_policy() == CrossingPolicy::ContinuousPresence
                        && lat > Duration::ZERO
                    {
                        let ok = (0..lat.ticks())
                            .all(|k| schedule.is_present(TimePoint(tick.ticks() + k)));
                        if !ok {
                            continue;
                        }
                    }
                    let arrival = tick + lat;
                    if reach.get(&target).is_none_or(|&b| arrival < b) {
                        reach.insert(target, arrival);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        tick = tick + Duration(1);
    }
    reach
}
