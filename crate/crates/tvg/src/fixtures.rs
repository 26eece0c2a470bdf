//! Small deterministic graphs shared by the unit tests.

use crate::model::Tvg;
use crate::time::{Interval, TimePoint};

fn iv(a: u64, b: u64) -> Interval {
    Interval::new(TimePoint(a), TimePoint(b))
}

/// Four nodes, four zero-latency edges with the classic interval pattern:
/// a–b [1,3), a–c [2,5), b–c [0,4), c–d [5,6)∪[7,8), lifetime [0,8).
pub fn demo_tvg() -> Tvg {
    Tvg::builder(iv(0, 8))
        .nodes(["a", "b", "c", "d"])
        .instant_edge("a", "b", [(1, 3)])
        .instant_edge("a", "c", [(2, 5)])
        .instant_edge("b", "c", [(0, 4)])
        .instant_edge("c", "d", [(5, 6), (7, 8)])
        .build()
        .expect("valid fixture")
}

/// A line a–b–c–d whose underlying graph is connected but where the edge
/// ordering makes the ends unable to reach each other over time:
/// a–b [0,1), b–c [2,3), c–d [0,1), lifetime [0,4).
pub fn relay_line_tvg() -> Tvg {
    Tvg::builder(iv(0, 4))
        .nodes(["a", "b", "c", "d"])
        .instant_edge("a", "b", [(0, 1)])
        .instant_edge("b", "c", [(2, 3)])
        .instant_edge("c", "d", [(0, 1)])
        .build()
        .expect("valid fixture")
}

/// Five nodes with a staged cascade of one-tick contacts, zero latency:
/// a–b [1,2), b–d [2,3), d–e [3,5), a–c [1,2), b–c [2,3), c–d [2,4),
/// c–e [3,5), lifetime [0,5).
pub fn cascade_tvg() -> Tvg {
    Tvg::builder(iv(0, 5))
        .nodes(["a", "b", "c", "d", "e"])
        .instant_edge("a", "b", [(1, 2)])
        .instant_edge("b", "d", [(2, 3)])
        .instant_edge("d", "e", [(3, 5)])
        .instant_edge("a", "c", [(1, 2)])
        .instant_edge("b", "c", [(2, 3)])
        .instant_edge("c", "d", [(2, 4)])
        .instant_edge("c", "e", [(3, 5)])
        .build()
        .expect("valid fixture")
}
