//! Transitive closure of journeys and connected components over time.
//!
//! The closure is a static directed graph with an arc `(u, v)` exactly when
//! `u` can reach `v` by some journey departing at or after the lifetime
//! start. Self-arcs are not stored; reachability is reflexive implicitly.
//!
//! A set of nodes is a connected component over time when every ordered pair
//! inside it is connected by a journey — journeys may relay through nodes
//! outside the set. Finding the largest such component is a maximum-clique
//! problem on the symmetric restriction of the closure, solved here exactly
//! by branch and bound under a node-count cap.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::TvgError;
use crate::model::{NodeId, Tvg};

/// Default node-count cap for [`Tvg::largest_component`].
pub const EXACT_SEARCH_CAP: usize = 32;

/// The static directed graph of the reachability relation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClosureGraph {
    nodes: BTreeSet<NodeId>,
    arcs: BTreeSet<(NodeId, NodeId)>,
}

impl ClosureGraph {
    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn arcs(&self) -> &BTreeSet<(NodeId, NodeId)> {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Reachability including the implicit self-loop.
    pub fn reaches(&self, u: &NodeId, v: &NodeId) -> bool {
        u == v || self.arcs.contains(&(u.clone(), v.clone()))
    }

    /// Everything `u` reaches, including `u`.
    pub fn row(&self, u: &NodeId) -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = self
            .arcs
            .iter()
            .filter(|(a, _)| a == u)
            .map(|(_, b)| b.clone())
            .collect();
        out.insert(u.clone());
        out
    }

    /// Everything that reaches `v`, including `v`.
    pub fn column(&self, v: &NodeId) -> BTreeSet<NodeId> {
        let mut out: BTreeSet<NodeId> = self
            .arcs
            .iter()
            .filter(|(_, b)| b == v)
            .map(|(a, _)| a.clone())
            .collect();
        out.insert(v.clone());
        out
    }

    /// Is every ordered pair an arc?
    pub fn is_complete(&self) -> bool {
        let n = self.nodes.len();
        self.arcs.len() == n * n.saturating_sub(1)
    }

    /// Unordered pairs connected in both directions.
    pub fn symmetric_pairs(&self) -> BTreeSet<(NodeId, NodeId)> {
        self.arcs
            .iter()
            .filter(|(a, b)| a < b && self.arcs.contains(&(b.clone(), a.clone())))
            .cloned()
            .collect()
    }
}

impl Tvg {
    /// The transitive closure of journeys, from one earliest-arrival search
    /// per source node anchored at the lifetime start.
    pub fn transitive_closure(&self) -> ClosureGraph {
        let t = self.lifetime().start();
        let mut arcs = BTreeSet::new();
        for u in self.nodes() {
            let horizon = self.horizon(u, t).expect("known node");
            for v in horizon {
                if &v != u {
                    arcs.insert((u.clone(), v));
                }
            }
        }
        ClosureGraph {
            nodes: self.nodes().clone(),
            arcs,
        }
    }

    /// Is `s` a connected component over time: does every ordered pair in
    /// `s` admit a journey? Relaying through nodes outside `s` is allowed;
    /// singletons are components trivially.
    pub fn is_connected_component(&self, s: &BTreeSet<NodeId>) -> Result<bool, TvgError> {
        for n in s {
            if !self.contains_node(n) {
                return Err(TvgError::UnknownNode(n.clone()));
            }
        }
        let t = self.lifetime().start();
        for u in s {
            let horizon = self.horizon(u, t)?;
            if s.iter().any(|v| !horizon.contains(v)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The largest connected component over time: a maximum clique of the
    /// symmetric restriction of the closure, computed exactly by branch and
    /// bound. Ties resolve to the lexicographically least node set.
    ///
    /// Fails with `TooLargeForExact` above `cap` nodes (`None` uses
    /// [`EXACT_SEARCH_CAP`]).
    pub fn largest_component(&self, cap: Option<usize>) -> Result<BTreeSet<NodeId>, TvgError> {
        let cap = cap.unwrap_or(EXACT_SEARCH_CAP);
        if self.node_count() > cap {
            return Err(TvgError::TooLargeForExact {
                nodes: self.node_count(),
                cap,
            });
        }
        if self.node_count() == 0 {
            return Ok(BTreeSet::new());
        }
        let closure = self.transitive_closure();
        let nodes: Vec<NodeId> = self.nodes().iter().cloned().collect();
        let index: BTreeMap<&NodeId, usize> = nodes.iter().zip(0..).collect();
        let n = nodes.len();
        let mut adj = vec![vec![false; n]; n];
        for (a, b) in closure.symmetric_pairs() {
            let (i, j) = (index[&a], index[&b]);
            adj[i][j] = true;
            adj[j][i] = true;
        }

        let best_size = max_clique_size(&adj);
        let members = lex_least_clique(&adj, best_size).expect("a clique of the found size exists");
        Ok(members.into_iter().map(|i| nodes[i].clone()).collect())
    }
}

/// Maximum clique size by branch and bound with a greedy color bound.
fn max_clique_size(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Descending degree order makes the first colorings tighter.
    order.sort_by_key(|&i| std::cmp::Reverse(adj[i].iter().filter(|&&x| x).count()));
    let mut best = 0usize;
    let mut current = Vec::new();
    expand(adj, &order, &mut current, &mut best);
    best.max(usize::from(n > 0))
}

fn expand(adj: &[Vec<bool>], candidates: &[usize], current: &mut Vec<usize>, best: &mut usize) {
    if candidates.is_empty() {
        *best = (*best).max(current.len());
        return;
    }
    // Candidates sorted by ascending greedy color: a clique within the first
    // i+1 of them has at most color(i) vertices, so once the bound fails at
    // some position it fails for every earlier one too.
    let colored = greedy_coloring(adj, candidates);
    for pos in (0..colored.len()).rev() {
        let (color, v) = colored[pos];
        if current.len() + color <= *best {
            return;
        }
        current.push(v);
        let rest: Vec<usize> = colored[..pos]
            .iter()
            .map(|&(_, w)| w)
            .filter(|&w| adj[v][w])
            .collect();
        expand(adj, &rest, current, best);
        current.pop();
    }
}

/// Greedy coloring of the candidate list, returned as `(color, vertex)`
/// sorted by ascending color (1-based).
fn greedy_coloring(adj: &[Vec<bool>], candidates: &[usize]) -> Vec<(usize, usize)> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in candidates {
        let mut c = 0;
        while classes
            .get(c)
            .is_some_and(|class| class.iter().any(|&w| adj[v][w]))
        {
            c += 1;
        }
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
    }
    let mut out = Vec::with_capacity(candidates.len());
    for (c, class) in classes.into_iter().enumerate() {
        for v in class {
            out.push((c + 1, v));
        }
    }
    out
}

/// The lexicographically least clique of exactly `k` vertices, trying
/// vertices in index order.
fn lex_least_clique(adj: &[Vec<bool>], k: usize) -> Option<Vec<usize>> {
    fn go(adj: &[Vec<bool>], k: usize, from: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return true;
        }
        for v in from..adj.len() {
            if adj.len() - v < k - chosen.len() {
                return false;
            }
            if chosen.iter().all(|&w| adj[w][v]) {
                chosen.push(v);
                if go(adj, k, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if k == 0 {
        return Some(Vec::new());
    }
    let mut chosen = Vec::with_capacity(k);
    go(adj, k, 0, &mut chosen).then_some(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::Tvg;
    use crate::time::{Interval, TimePoint};

    fn n(s: &str) -> NodeId {
        NodeId::from(s)
    }

    fn arcset(pairs: &[(&str, &str)]) -> BTreeSet<(NodeId, NodeId)> {
        pairs.iter().map(|&(a, b)| (n(a), n(b))).collect()
    }

    #[test]
    fn cascade_closure_matches_hand_derivation() {
        let h = fixtures::cascade_tvg().transitive_closure();
        let expected = arcset(&[
            ("a", "b"),
            ("b", "a"),
            ("a", "c"),
            ("c", "a"),
            ("b", "c"),
            ("c", "b"),
            ("b", "d"),
            ("d", "b"),
            ("c", "d"),
            ("d", "c"),
            ("c", "e"),
            ("e", "c"),
            ("d", "e"),
            ("e", "d"),
            ("a", "d"),
            ("a", "e"),
            ("b", "e"),
        ]);
        assert_eq!(h.arcs(), &expected);
        assert_eq!(h.arc_count(), 17);
        assert!(!h.is_complete());
    }

    #[test]
    fn relay_line_closure() {
        let h = fixtures::relay_line_tvg().transitive_closure();
        let expected = arcset(&[
            ("a", "b"),
            ("b", "a"),
            ("b", "c"),
            ("c", "b"),
            ("c", "d"),
            ("d", "c"),
            ("a", "c"),
            ("d", "b"),
        ]);
        assert_eq!(h.arcs(), &expected);
        assert!(!h.reaches(&n("a"), &n("d")));
        assert!(!h.reaches(&n("d"), &n("a")));
        assert!(h.reaches(&n("a"), &n("a")), "reflexivity is implicit");
    }

    #[test]
    fn empty_graph_has_no_arcs() {
        let g = Tvg::builder(Interval::new(TimePoint(0), TimePoint(4)))
            .nodes(["u", "v"])
            .build()
            .unwrap();
        assert!(g.transitive_closure().arcs().is_empty());
    }

    #[test]
    fn closure_agrees_with_journey_enumeration() {
        let g = fixtures::relay_line_tvg();
        let h = g.transitive_closure();
        let t = g.lifetime().start();
        for u in g.nodes() {
            for v in g.nodes() {
                if u == v {
                    continue;
                }
                let listed = !g
                    .enumerate_journeys(u, v, t, g.node_count() - 1)
                    .unwrap()
                    .is_empty();
                assert_eq!(h.reaches(u, v), listed, "{u} ~> {v}");
            }
        }
    }

    #[test]
    fn component_check_may_relay_outside() {
        // a and b only ever talk through c, at alternating times; {a, b} is
        // still a component over time.
        let g = Tvg::builder(Interval::new(TimePoint(0), TimePoint(4)))
            .nodes(["a", "b", "c"])
            .instant_edge("a", "c", [(0, 1), (2, 3)])
            .instant_edge("c", "b", [(1, 2), (3, 4)])
            .build()
            .unwrap();
        let ab: BTreeSet<NodeId> = [n("a"), n("b")].into();
        assert!(g.is_connected_component(&ab).unwrap());

        let line = fixtures::relay_line_tvg();
        let ad: BTreeSet<NodeId> = [n("a"), n("d")].into();
        assert!(!line.is_connected_component(&ad).unwrap());

        let singleton: BTreeSet<NodeId> = [n("a")].into();
        assert!(line.is_connected_component(&singleton).unwrap());

        let stranger: BTreeSet<NodeId> = [n("zz")].into();
        assert!(matches!(
            line.is_connected_component(&stranger),
            Err(TvgError::UnknownNode(_))
        ));
    }

    #[test]
    fn component_check_equals_pairwise_reachability() {
        let g = fixtures::cascade_tvg();
        let t = g.lifetime().start();
        let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
        for mask in 1u32..(1 << nodes.len()) {
            let s: BTreeSet<NodeId> = nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.clone())
                .collect();
            let pairwise = s
                .iter()
                .all(|u| s.iter().all(|v| u == v || g.can_reach(u, v, t).unwrap()));
            assert_eq!(g.is_connected_component(&s).unwrap(), pairwise);
        }
    }

    #[test]
    fn largest_component_on_fixtures() {
        // Symmetric pairs of the cascade closure: ab, ac, bc, bd, cd, ce,
        // de. Three maximum cliques of size 3 exist ({a,b,c}, {b,c,d},
        // {c,d,e}); the lexicographic tie-break selects {a,b,c}.
        let g = fixtures::cascade_tvg();
        let best = g.largest_component(None).unwrap();
        assert_eq!(best, ["a", "b", "c"].map(NodeId::from).into());
        assert!(g.is_connected_component(&best).unwrap());

        // Relay line: symmetric pairs ab, bc, cd; all maximum cliques have
        // size 2 and {a,b} is the least.
        let line = fixtures::relay_line_tvg();
        assert_eq!(
            line.largest_component(None).unwrap(),
            ["a", "b"].map(NodeId::from).into()
        );
    }

    #[test]
    fn largest_component_full_mesh_and_cap() {
        let g = Tvg::builder(Interval::new(TimePoint(0), TimePoint(4)))
            .nodes(["a", "b", "c"])
            .instant_edge("a", "b", [(0, 4)])
            .instant_edge("a", "c", [(0, 4)])
            .instant_edge("b", "c", [(0, 4)])
            .build()
            .unwrap();
        assert_eq!(
            g.largest_component(None).unwrap(),
            ["a", "b", "c"].map(NodeId::from).into()
        );
        assert!(matches!(
            g.largest_component(Some(2)),
            Err(TvgError::TooLargeForExact { nodes: 3, cap: 2 })
        ));
    }

    #[test]
    fn largest_component_matches_subset_enumeration_on_random_graphs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};

        // Giving every edge its own tick keeps the symmetric closure equal
        // to the chosen static graph: an edge makes its endpoints mutually
        // reachable, while multi-hop return journeys would need a
        // non-increasing tick sequence and all ticks are distinct.
        for seed in 0..25u64 {
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.random_range(3..=9usize);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut builder = Tvg::builder(Interval::new(TimePoint(0), TimePoint(100)))
                .nodes(names.iter().map(String::as_str));
            let mut tick = 0u64;
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random_bool(0.4) {
                        builder = builder.instant_edge(&names[i], &names[j], [(tick, tick + 1)]);
                        tick += 2;
                    }
                }
            }
            let g = builder.build().unwrap();
            let reported = g.largest_component(None).unwrap();

            let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
            let mut best: BTreeSet<NodeId> = BTreeSet::new();
            for mask in 1u32..(1 << nodes.len()) {
                let s: BTreeSet<NodeId> = nodes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, n)| n.clone())
                    .collect();
                if g.is_connected_component(&s).unwrap()
                    && (s.len() > best.len() || (s.len() == best.len() && s < best))
                {
                    best = s;
                }
            }
            assert_eq!(reported, best, "seed {seed}");
        }
    }

    #[test]
    fn largest_component_matches_brute_force_on_planted_instance() {
        // Plant a 4-clique {b, d, f, h} via simultaneous contacts and add
        // one-directional noise elsewhere.
        let mut b = Tvg::builder(Interval::new(TimePoint(0), TimePoint(10)))
            .nodes(["a", "b", "c", "d", "e", "f", "g", "h"]);
        for (u, v) in [
            ("b", "d"),
            ("b", "f"),
            ("b", "h"),
            ("d", "f"),
            ("d", "h"),
            ("f", "h"),
        ] {
            b = b.instant_edge(u, v, [(0, 1)]);
        }
        b = b.instant_edge("a", "c", [(1, 2)]);
        b = b.instant_edge("c", "e", [(3, 4)]);
        let g = b.build().unwrap();

        let reported = g.largest_component(None).unwrap();

        // Independent check: enumerate all subsets.
        let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
        let mut best: BTreeSet<NodeId> = BTreeSet::new();
        for mask in 1u32..(1 << nodes.len()) {
            let s: BTreeSet<NodeId> = nodes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, n)| n.clone())
                .collect();
            if g.is_connected_component(&s).unwrap()
                && (s.len() > best.len() || (s.len() == best.len() && s < best))
            {
                best = s;
            }
        }
        assert_eq!(reported, best);
        assert_eq!(reported, ["b", "d", "f", "h"].map(NodeId::from).into());
    }
}
