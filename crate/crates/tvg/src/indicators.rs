//! Temporal and atemporal network indicators, and their coarse-grain
//! evolution over window sequences.
//!
//! Temporal indicators are built on foremost journeys: eccentricity (the
//! longest temporal distance out of a node), temporal diameter, the
//! characteristic temporal path length, and fairness (how evenly the
//! eccentricities are spread). Unreachable pairs make a value undefined;
//! undefined values surface as `None` or as a
//! [`TvgError::NotTemporallyConnected`] error, never as infinity sentinels.
//!
//! Atemporal indicators (density, degree, clustering, hop diameter,
//! component count) apply to any [`Footprint`]. [`Tvg::evolution_series`]
//! tracks either kind across a sequence of time windows, evaluating
//! atemporal indicators on window footprints and temporal indicators on
//! window subgraphs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::TvgError;
use crate::model::{Footprint, NodeId, Tvg};
use crate::time::{Duration, Interval, TimePoint};

impl Tvg {
    /// The temporal eccentricity of `u` at `t`: the largest temporal
    /// distance from `u` to any other node. `None` when some node is
    /// unreachable; zero for a single-node graph.
    pub fn temporal_eccentricity(
        &self,
        u: &NodeId,
        t: TimePoint,
    ) -> Result<Option<Duration>, TvgError> {
        if !self.contains_node(u) {
            return Err(TvgError::UnknownNode(u.clone()));
        }
        let mut worst = Duration::ZERO;
        for v in self.nodes() {
            if v == u {
                continue;
            }
            match self.temporal_distance(u, v, t)? {
                Some(d) => worst = worst.max(d),
                None => return Ok(None),
            }
        }
        Ok(Some(worst))
    }

    /// Largest temporal eccentricity at `t`; `None` when any ordered pair
    /// is unreachable.
    pub fn temporal_diameter(&self, t: TimePoint) -> Option<Duration> {
        let mut worst = Duration::ZERO;
        for u in self.nodes() {
            let d = self.temporal_eccentricity(u, t).expect("known node")?;
            worst = worst.max(d);
        }
        Some(worst)
    }

    /// Largest hop-count distance at `t`; `None` when any ordered pair is
    /// unreachable.
    pub fn topological_diameter(&self, t: TimePoint) -> Option<usize> {
        let mut worst = 0usize;
        for u in self.nodes() {
            for v in self.nodes() {
                if u == v {
                    continue;
                }
                let d = self.topological_distance(u, v, t).expect("known nodes")?;
                worst = worst.max(d);
            }
        }
        Some(worst)
    }

    /// Anchor dates for offset sweeps: the lifetime start plus every
    /// topological event date strictly inside the lifetime.
    pub fn anchor_dates(&self) -> Vec<TimePoint> {
        let mut out = vec![self.lifetime().start()];
        for t in self.characteristic_dates() {
            if t > self.lifetime().start() && t < self.lifetime().end() {
                out.push(t);
            }
        }
        out
    }

    /// Temporal diameter at every anchor date. Exposes how strongly the
    /// metric depends on when the measurement starts.
    pub fn temporal_diameter_over_anchors(&self) -> Vec<(TimePoint, Option<Duration>)> {
        self.anchor_dates()
            .into_iter()
            .map(|t| (t, self.temporal_diameter(t)))
            .collect()
    }

    /// Average temporal distance over all ordered pairs at the lifetime
    /// start, divided by the squared node count (diagonal terms are zero).
    /// Every ordered pair must be reachable.
    pub fn characteristic_temporal_path_length(&self) -> Result<f64, TvgError> {
        if self.node_count() == 0 {
            return Err(TvgError::EmptyGraph);
        }
        let t0 = self.lifetime().start();
        let mut sum = 0u128;
        for u in self.nodes() {
            for v in self.nodes() {
                if u == v {
                    continue;
                }
                let d = self.temporal_distance(u, v, t0)?.ok_or_else(|| {
                    TvgError::NotTemporallyConnected {
                        from: u.clone(),
                        to: v.clone(),
                    }
                })?;
                sum += d.ticks() as u128;
            }
        }
        let n = self.node_count() as f64;
        Ok(sum as f64 / (n * n))
    }

    /// The hop-count small-world test: every ordered pair must be reachable
    /// from the lifetime start, and wherever a pair is reachable from an
    /// anchor date, some journey of at most `h` hops must exist.
    pub fn small_world_hops(&self, h: usize) -> Result<bool, TvgError> {
        if h == 0 {
            return Err(TvgError::BadSpec("hop bound must be >= 1".into()));
        }
        let t0 = self.lifetime().start();
        for u in self.nodes() {
            for v in self.nodes() {
                if u == v {
                    continue;
                }
                if !self.can_reach(u, v, t0)? {
                    return Ok(false);
                }
                for t in self.anchor_dates() {
                    match self.topological_distance(u, v, t)? {
                        Some(d) if d > h => return Ok(false),
                        _ => {}
                    }
                }
            }
        }
        Ok(true)
    }

    /// Population standard deviation of the temporal eccentricities at `t`.
    /// Errors when some eccentricity is undefined.
    pub fn fairness(&self, t: TimePoint) -> Result<f64, TvgError> {
        if self.node_count() == 0 {
            return Err(TvgError::EmptyGraph);
        }
        let mut eccs = Vec::with_capacity(self.node_count());
        for u in self.nodes() {
            let ecc = self.temporal_eccentricity(u, t)?.ok_or_else(|| {
                let v = self
                    .nodes()
                    .iter()
                    .find(|v| *v != u && self.temporal_distance(u, v, t).expect("known").is_none())
                    .expect("some unreachable node");
                TvgError::NotTemporallyConnected {
                    from: u.clone(),
                    to: v.clone(),
                }
            })?;
            eccs.push(ecc.ticks() as f64);
        }
        let n = eccs.len() as f64;
        let mean = eccs.iter().sum::<f64>() / n;
        let var = eccs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Ok(var.sqrt())
    }

    /// How many nodes outside `s` can be reached from inside `s` using only
    /// the window `[t1, t2)`: the collective horizon of `s` there.
    pub fn dynamic_expansion(
        &self,
        s: &BTreeSet<NodeId>,
        t1: TimePoint,
        t2: TimePoint,
    ) -> Result<usize, TvgError> {
        for n in s {
            if !self.contains_node(n) {
                return Err(TvgError::UnknownNode(n.clone()));
            }
        }
        if t1 >= t2 {
            return Err(TvgError::BadWindow(format!(
                "window start {t1} must precede end {t2}"
            )));
        }
        let sub = match self.temporal_subgraph(Interval::new(t1, t2)) {
            Ok(sub) => sub,
            Err(TvgError::WindowOutOfLifetime { .. }) => return Ok(0),
            Err(e) => return Err(e),
        };
        let mut reached: BTreeSet<NodeId> = BTreeSet::new();
        for u in s {
            reached.extend(sub.horizon(u, sub.lifetime().start())?);
        }
        Ok(reached.difference(s).count())
    }
}

/// Atemporal indicators measurable on any static graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FootprintIndicator {
    /// Edges over possible unordered pairs.
    Density,
    /// Mean number of incident edges.
    AverageDegree,
    /// Mean local clustering coefficient (nodes of degree < 2 contribute 0).
    ClusteringCoefficient,
    /// Largest finite hop distance; absent when disconnected.
    Diameter,
    /// Number of connected components.
    ComponentCount,
}

impl FootprintIndicator {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "density" => FootprintIndicator::Density,
            "average-degree" => FootprintIndicator::AverageDegree,
            "clustering" => FootprintIndicator::ClusteringCoefficient,
            "diameter" => FootprintIndicator::Diameter,
            "components" => FootprintIndicator::ComponentCount,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            FootprintIndicator::Density => "density",
            FootprintIndicator::AverageDegree => "average-degree",
            FootprintIndicator::ClusteringCoefficient => "clustering",
            FootprintIndicator::Diameter => "diameter",
            FootprintIndicator::ComponentCount => "components",
        }
    }
}

/// Journey-based indicators for window subgraphs, anchored at the window
/// start.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemporalIndicator {
    TemporalDiameter,
    CharacteristicTemporalPathLength,
    Fairness,
}

impl TemporalIndicator {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "temporal-diameter" => TemporalIndicator::TemporalDiameter,
            "temporal-path-length" => TemporalIndicator::CharacteristicTemporalPathLength,
            "fairness" => TemporalIndicator::Fairness,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            TemporalIndicator::TemporalDiameter => "temporal-diameter",
            TemporalIndicator::CharacteristicTemporalPathLength => "temporal-path-length",
            TemporalIndicator::Fairness => "fairness",
        }
    }
}

/// Evaluates an atemporal indicator on a footprint. `None` marks an
/// undefined value (diameter of a disconnected graph, density below two
/// nodes); an empty node set is an error.
pub fn footprint_indicator(
    f: &Footprint,
    which: FootprintIndicator,
) -> Result<Option<f64>, TvgError> {
    let n = f.nodes.len();
    if n == 0 {
        return Err(TvgError::EmptyGraph);
    }
    let value = match which {
        FootprintIndicator::Density => {
            if n < 2 {
                None
            } else {
                Some(f.edges.len() as f64 / (n as f64 * (n as f64 - 1.0) / 2.0))
            }
        }
        FootprintIndicator::AverageDegree => Some(2.0 * f.edges.len() as f64 / n as f64),
        FootprintIndicator::ClusteringCoefficient => {
            let adj = f.adjacency();
            let mut total = 0.0;
            for nbrs in adj.values() {
                let d = nbrs.len();
                if d < 2 {
                    continue;
                }
                let mut closed = 0usize;
                let list: Vec<_> = nbrs.iter().collect();
                for i in 0..list.len() {
                    for j in (i + 1)..list.len() {
                        if adj[list[i]].contains(list[j]) {
                            closed += 1;
                        }
                    }
                }
                total += closed as f64 / (d * (d - 1) / 2) as f64;
            }
            Some(total / n as f64)
        }
        FootprintIndicator::Diameter => {
            let mut worst = 0usize;
            for u in &f.nodes {
                let dist = f.hop_distances(u);
                if dist.len() != n {
                    return Ok(None);
                }
                worst = worst.max(dist.values().copied().max().unwrap_or(0));
            }
            Some(worst as f64)
        }
        FootprintIndicator::ComponentCount => Some(f.components().len() as f64),
    };
    Ok(value)
}

/// Window length and step for an evolution sweep. `stride == length` gives
/// disjoint consecutive windows; a smaller stride slides them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub length: Duration,
    pub stride: Duration,
}

impl WindowSpec {
    fn validate(&self) -> Result<(), TvgError> {
        if self.length == Duration::ZERO {
            return Err(TvgError::BadWindow("window length must be >= 1".into()));
        }
        if self.stride == Duration::ZERO {
            return Err(TvgError::BadWindow("window stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Which indicator an evolution sweep tracks, and on what view of each
/// window.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesMode {
    /// Aggregate each window into a static footprint.
    Footprint(FootprintIndicator),
    /// Keep each window as a (shorter) time-varying graph.
    Subgraph(TemporalIndicator),
}

/// One indicator sampled across a window sequence. Undefined windows hold
/// `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    indicator: String,
    windows: Vec<Interval>,
    values: Vec<Option<f64>>,
}

impl IndicatorSeries {
    pub fn new(indicator: impl Into<String>) -> Self {
        IndicatorSeries {
            indicator: indicator.into(),
            windows: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn push(&mut self, window: Interval, value: Option<f64>) {
        self.windows.push(window);
        self.values.push(value);
    }

    pub fn indicator(&self) -> &str {
        &self.indicator
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Interval, Option<f64>)> + '_ {
        self.windows
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }
}

impl fmt::Display for IndicatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.indicator)?;
        for (w, v) in self.iter() {
            match v {
                Some(v) => writeln!(f, "  {w} {v}")?,
                None => writeln!(f, "  {w} -")?,
            }
        }
        Ok(())
    }
}

impl Tvg {
    /// Sweeps an indicator across the lifetime in windows of
    /// `windows.length`, advancing by `windows.stride`. The last window is
    /// clipped at the lifetime end. Windows where the indicator is
    /// undefined (e.g. some pair unreachable) yield `None` entries.
    pub fn evolution_series(
        &self,
        windows: WindowSpec,
        mode: SeriesMode,
    ) -> Result<IndicatorSeries, TvgError> {
        windows.validate()?;
        let name = match mode {
            SeriesMode::Footprint(i) => i.name(),
            SeriesMode::Subgraph(i) => i.name(),
        };
        let mut series = IndicatorSeries::new(name);
        let mut start = self.lifetime().start();
        while start < self.lifetime().end() {
            let end = start
                .checked_add(windows.length)
                .unwrap_or(self.lifetime().end())
                .min(self.lifetime().end());
            let window = Interval::new(start, end);
            let value = match mode {
                SeriesMode::Footprint(which) => {
                    footprint_indicator(&self.footprint(window)?, which)?
                }
                SeriesMode::Subgraph(which) => {
                    let sub = self.temporal_subgraph(window)?;
                    let anchor = sub.lifetime().start();
                    match which {
                        TemporalIndicator::TemporalDiameter => {
                            sub.temporal_diameter(anchor).map(|d| d.ticks() as f64)
                        }
                        TemporalIndicator::CharacteristicTemporalPathLength => {
                            match sub.characteristic_temporal_path_length() {
                                Ok(v) => Some(v),
                                Err(TvgError::NotTemporallyConnected { .. }) => None,
                                Err(e) => return Err(e),
                            }
                        }
                        TemporalIndicator::Fairness => match sub.fairness(anchor) {
                            Ok(v) => Some(v),
                            Err(TvgError::NotTemporallyConnected { .. }) => None,
                            Err(e) => return Err(e),
                        },
                    }
                }
            };
            series.push(window, value);
            match start.checked_add(windows.stride) {
                Some(next) => start = next,
                None => break,
            }
        }
        Ok(series)
    }
}
