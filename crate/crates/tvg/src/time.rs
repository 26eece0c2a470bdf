//! Discrete time: tick-valued instants, durations, half-open intervals, and
//! canonical interval sets.
//!
//! All time is measured in non-negative 64-bit integer ticks. What a tick
//! means (a second, a day) is a display-level annotation on the graph, never
//! part of the arithmetic. Every interval is closed-open `[start, end)`.

use std::fmt;
use std::ops::{Add, Sub};

/// An instant, counted in ticks from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TimePoint(pub u64);

/// A non-negative span of ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Duration(pub u64);

impl TimePoint {
    pub const ZERO: TimePoint = TimePoint(0);

    pub fn ticks(self) -> u64 {
        self.0
    }

    /// `self + d`, or `None` on overflow.
    pub fn checked_add(self, d: Duration) -> Option<TimePoint> {
        self.0.checked_add(d.0).map(TimePoint)
    }

    /// `self - earlier`, or `None` if `earlier > self`.
    pub fn checked_since(self, earlier: TimePoint) -> Option<Duration> {
        self.0.checked_sub(earlier.0).map(Duration)
    }
}

impl Duration {
    pub const ZERO: Duration = Duration(0);

    pub fn ticks(self) -> u64 {
        self.0
    }
}

impl Add<Duration> for TimePoint {
    type Output = TimePoint;
    fn add(self, d: Duration) -> TimePoint {
        TimePoint(self.0 + d.0)
    }
}

impl Sub<TimePoint> for TimePoint {
    type Output = Duration;
    /// Panics if `rhs > self`; use [`TimePoint::checked_since`] when the
    /// ordering is not already established.
    fn sub(self, rhs: TimePoint) -> Duration {
        Duration(self.0 - rhs.0)
    }
}

impl Sub<Duration> for TimePoint {
    type Output = TimePoint;
    /// Panics if `rhs` exceeds the time since the origin.
    fn sub(self, rhs: Duration) -> TimePoint {
        TimePoint(self.0 - rhs.0)
    }
}

impl Add<Duration> for Duration {
    type Output = Duration;
    fn add(self, d: Duration) -> Duration {
        Duration(self.0 + d.0)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for TimePoint {
    fn from(v: u64) -> Self {
        TimePoint(v)
    }
}

impl From<u64> for Duration {
    fn from(v: u64) -> Self {
        Duration(v)
    }
}

/// A non-empty half-open interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interval {
    start: TimePoint,
    end: TimePoint,
}

impl Interval {
    /// Panics if `start >= end`; empty intervals are never represented.
    pub fn new(start: TimePoint, end: TimePoint) -> Self {
        assert!(start < end, "interval start {start} must precede end {end}");
        Interval { start, end }
    }

    /// Fallible constructor for input validation paths.
    pub fn checked(start: TimePoint, end: TimePoint) -> Option<Self> {
        (start < end).then_some(Interval { start, end })
    }

    pub fn start(&self) -> TimePoint {
        self.start
    }

    pub fn end(&self) -> TimePoint {
        self.end
    }

    pub fn contains(&self, t: TimePoint) -> bool {
        self.start <= t && t < self.end
    }

    pub fn len(&self) -> Duration {
        self.end - self.start
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.start < other.end && other.start < self.end
    }

    /// The overlap of two intervals, if non-empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let start = self.start.max(other.start);
        let end = self.end.min(other.end);
        Interval::checked(start, end)
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{})", self.start, self.end)
    }
}

/// A set of instants stored as sorted, pairwise disjoint, maximally merged
/// intervals: no stored interval is empty, none overlap, and no interval's
/// end equals the next one's start.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new() -> Self {
        IntervalSet::default()
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet {
            intervals: vec![iv],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Number of maximal intervals after merging.
    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = Interval> + '_ {
        self.intervals.iter().copied()
    }

    pub fn as_slice(&self) -> &[Interval] {
        &self.intervals
    }

    /// Inserts an interval, merging with any overlapping or adjacent ones.
    pub fn insert(&mut self, iv: Interval) {
        // Position of the first stored interval that could touch iv.
        let first = self.intervals.partition_point(|x| x.end < iv.start);
        let mut start = iv.start();
        let mut end = iv.end();
        let mut last = first;
        while last < self.intervals.len() && self.intervals[last].start <= end {
            start = start.min(self.intervals[last].start);
            end = end.max(self.intervals[last].end);
            last += 1;
        }
        self.intervals
            .splice(first..last, std::iter::once(Interval::new(start, end)));
    }

    pub fn contains(&self, t: TimePoint) -> bool {
        self.interval_containing(t).is_some()
    }

    /// The merged interval containing `t`, if any.
    pub fn interval_containing(&self, t: TimePoint) -> Option<Interval> {
        let idx = self.intervals.partition_point(|x| x.end <= t);
        let iv = self.intervals.get(idx)?;
        iv.contains(t).then_some(*iv)
    }

    /// The earliest instant `>= t` covered by the set.
    pub fn next_instant_at_or_after(&self, t: TimePoint) -> Option<TimePoint> {
        let idx = self.intervals.partition_point(|x| x.end <= t);
        let iv = self.intervals.get(idx)?;
        Some(iv.start.max(t))
    }

    /// Restriction to a window; the result keeps the canonical form.
    pub fn clip(&self, w: Interval) -> IntervalSet {
        IntervalSet {
            intervals: self
                .intervals
                .iter()
                .filter_map(|iv| iv.intersect(&w))
                .collect(),
        }
    }

    /// Smallest single interval covering the set, if non-empty.
    pub fn bounds(&self) -> Option<Interval> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some(Interval::new(first.start, last.end))
    }

    /// All interval endpoints, in ascending order. Starts and ends alternate
    /// by construction.
    pub fn endpoints(&self) -> Vec<TimePoint> {
        let mut out = Vec::with_capacity(self.intervals.len() * 2);
        for iv in &self.intervals {
            out.push(iv.start);
            out.push(iv.end);
        }
        out
    }

    /// Every interval translated forward by `d`. `None` on overflow.
    pub fn shifted(&self, d: Duration) -> Option<IntervalSet> {
        let mut intervals = Vec::with_capacity(self.intervals.len());
        for iv in &self.intervals {
            let start = iv.start.checked_add(d)?;
            let end = iv.end.checked_add(d)?;
            intervals.push(Interval::new(start, end));
        }
        Some(IntervalSet { intervals })
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = self.clone();
        for iv in other.iter() {
            out.insert(iv);
        }
        out
    }

    /// Total number of ticks covered.
    pub fn total_ticks(&self) -> u64 {
        self.intervals.iter().map(|iv| iv.len().ticks()).sum()
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        let mut set = IntervalSet::new();
        for iv in iter {
            set.insert(iv);
        }
        set
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: u64, b: u64) -> Interval {
        Interval::new(TimePoint(a), TimePoint(b))
    }

    #[test]
    fn adjacent_intervals_merge() {
        let set: IntervalSet = [iv(1, 2), iv(2, 3)].into_iter().collect();
        assert_eq!(set.as_slice(), &[iv(1, 3)]);
    }

    #[test]
    fn overlapping_and_contained_intervals_merge() {
        let set: IntervalSet = [iv(0, 4), iv(2, 6), iv(1, 3), iv(8, 9)]
            .into_iter()
            .collect();
        assert_eq!(set.as_slice(), &[iv(0, 6), iv(8, 9)]);
    }

    #[test]
    fn disjoint_intervals_stay_sorted() {
        let set: IntervalSet = [iv(7, 8), iv(5, 6)].into_iter().collect();
        assert_eq!(set.as_slice(), &[iv(5, 6), iv(7, 8)]);
        assert!(set.contains(TimePoint(5)));
        assert!(!set.contains(TimePoint(6)));
        assert!(set.contains(TimePoint(7)));
        assert!(!set.contains(TimePoint(8)));
    }

    #[test]
    fn clip_cuts_at_window_edges() {
        let set: IntervalSet = [iv(1, 3), iv(5, 9)].into_iter().collect();
        assert_eq!(set.clip(iv(2, 6)).as_slice(), &[iv(2, 3), iv(5, 6)]);
        assert!(set.clip(iv(3, 5)).is_empty());
    }

    #[test]
    fn next_instant_lookup() {
        let set: IntervalSet = [iv(2, 4), iv(7, 8)].into_iter().collect();
        assert_eq!(
            set.next_instant_at_or_after(TimePoint(0)),
            Some(TimePoint(2))
        );
        assert_eq!(
            set.next_instant_at_or_after(TimePoint(3)),
            Some(TimePoint(3))
        );
        assert_eq!(
            set.next_instant_at_or_after(TimePoint(4)),
            Some(TimePoint(7))
        );
        assert_eq!(set.next_instant_at_or_after(TimePoint(8)), None);
    }

    #[test]
    #[should_panic]
    fn empty_interval_rejected() {
        let _ = iv(3, 3);
    }

    proptest! {
        /// Membership after merging agrees with a linear scan over the raw
        /// inserted intervals, and the canonical form invariants hold.
        #[test]
        fn membership_matches_linear_scan(raw in prop::collection::vec((0u64..40, 1u64..8), 0..12)) {
            let intervals: Vec<Interval> = raw.iter().map(|&(a, l)| iv(a, a + l)).collect();
            let set: IntervalSet = intervals.iter().copied().collect();

            for t in 0..60u64 {
                let expect = intervals.iter().any(|i| i.contains(TimePoint(t)));
                prop_assert_eq!(set.contains(TimePoint(t)), expect, "tick {}", t);
            }
            for w in set.as_slice().windows(2) {
                prop_assert!(w[0].end() < w[1].start(), "sorted, disjoint, non-adjacent");
            }
        }
    }
}
