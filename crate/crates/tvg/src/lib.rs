//! Analysis toolkit for time-varying graphs (TVGs): networks whose edges
//! come and go over a lifetime, carrying an optional crossing latency.
//!
//! The crate covers:
//!
//! - the core model — presence schedules over merged half-open intervals,
//!   snapshots, footprints, temporal subgraphs ([`model`], [`time`]);
//! - journeys (paths over time) and the three optimality metrics — foremost,
//!   shortest, fastest — plus temporal distance, horizons, and temporal
//!   views ([`journey`]);
//! - the transitive closure of journeys, connected components over time,
//!   and recognition of the standard hierarchy of dynamics classes C1–C13
//!   on finite traces ([`closure`], [`classes`]);
//! - temporal network indicators and their coarse-grain evolution over
//!   window sequences ([`indicators`]);
//! - seeded random models and calendar fixtures ([`mod@generate`]);
//! - a line-oriented trace format, snapshot import, and DOT/CSV export
//!   ([`trace`]).
//!
//! Graphs are immutable after construction and all operations are pure
//! reads, so a [`Tvg`] can be shared freely across threads.

pub mod classes;
pub mod closure;
pub mod error;
pub mod generate;
pub mod indicators;
pub mod journey;
pub mod model;
pub mod time;
pub mod trace;

#[cfg(test)]
pub(crate) mod fixtures;

pub use classes::{
    ancestors, class_inclusions, ClassId, ClassVerdict, ClassificationReport, TraceSemantics,
    Verdict, Witness,
};
pub use closure::{ClosureGraph, EXACT_SEARCH_CAP};
pub use error::TvgError;
pub use generate::{fixture_calendar_line, generate, GeneratorSpec, Model};
pub use indicators::{
    footprint_indicator, FootprintIndicator, IndicatorSeries, SeriesMode, TemporalIndicator,
    WindowSpec,
};
pub use journey::{Hop, Journey, JourneyMetric, MAX_ENUMERATION_HOPS};
pub use model::{
    CrossingPolicy, EdgeId, EdgeSchedule, Footprint, Latency, NodeId, Snapshot, SnapshotMode, Tvg,
    TvgBuilder,
};
pub use time::{Duration, Interval, IntervalSet, TimePoint};
pub use trace::{
    export_csv, export_dot_closure, export_dot_footprint, parse_snapshots, parse_tvg,
    serialize_tvg, TraceError,
};
