//! Seeded random graph models and deterministic calendar fixtures.
//!
//! Three stochastic models are provided:
//!
//! - [`Model::ErSnapshots`]: each tick is an independent random graph where
//!   every unordered pair is present with probability `p`;
//! - [`Model::EdgeMarkov`]: every pair follows its own two-state chain with
//!   a birth rate (absent to present) and a death rate (present to absent);
//!   long runs concentrate around the stationary presence frequency
//!   `birth / (birth + death)`;
//! - [`Model::PoissonContacts`]: per pair, gaps between contact openings are
//!   geometric with success probability `1 - exp(-rate)` (the discrete
//!   analogue of exponential inter-arrivals), and every contact stays open
//!   for a fixed number of ticks.
//!
//! Generation is deterministic: the same spec (model, parameters, node
//! count, horizon, seed) produces the same graph bit for bit. Each pair
//! draws from its own substream keyed by `(seed, i, j)`, so adding nodes
//! does not disturb the schedules of existing pairs.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::TvgError;
use crate::model::{EdgeId, EdgeSchedule, Tvg, TvgBuilder};
use crate::time::{Duration, Interval, IntervalSet, TimePoint};

/// The stochastic evolution model and its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Independent per-tick random graphs with edge probability `p`.
    ErSnapshots { p: f64 },
    /// Independent two-state chains per pair.
    EdgeMarkov {
        birth: f64,
        death: f64,
        /// Probability that a pair starts present at the first tick.
        initial_density: f64,
    },
    /// Geometric inter-contact gaps, fixed-length contacts.
    PoissonContacts { rate: f64, contact_length: u64 },
}

/// A complete, reproducible description of one generated graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub model: Model,
    pub nodes: usize,
    /// Lifetime length in ticks; the lifetime is `[0, horizon)`.
    pub horizon: u64,
    pub seed: u64,
}

impl GeneratorSpec {
    fn validate(&self) -> Result<(), TvgError> {
        if self.nodes == 0 {
            return Err(TvgError::BadSpec("node count must be >= 1".into()));
        }
        if self.horizon == 0 {
            return Err(TvgError::BadSpec("horizon must be >= 1".into()));
        }
        let prob_ok = |p: f64| (0.0..=1.0).contains(&p);
        match self.model {
            Model::ErSnapshots { p } => {
                if !prob_ok(p) {
                    return Err(TvgError::BadSpec(format!("p = {p} is not a probability")));
                }
            }
            Model::EdgeMarkov {
                birth,
                death,
                initial_density,
            } => {
                for (name, v) in [
                    ("birth", birth),
                    ("death", death),
                    ("initial density", initial_density),
                ] {
                    if !prob_ok(v) {
                        return Err(TvgError::BadSpec(format!(
                            "{name} = {v} is not a probability"
                        )));
                    }
                }
            }
            Model::PoissonContacts {
                rate,
                contact_length,
            } => {
                if rate <= 0.0 || !rate.is_finite() {
                    return Err(TvgError::BadSpec(format!("rate = {rate} must be > 0")));
                }
                if contact_length == 0 {
                    return Err(TvgError::BadSpec("contact length must be >= 1".into()));
                }
            }
        }
        Ok(())
    }
}

/// Node names `n00`, `n01`, … zero-padded so lexicographic order matches
/// numeric order.
fn node_names(count: usize) -> Vec<String> {
    let width = (count.max(2) - 1).to_string().len();
    (0..count).map(|i| format!("n{i:0width$}")).collect()
}

/// Mixes the spec seed with a pair index into an independent substream key.
fn pair_seed(seed: u64, i: u64, j: u64) -> u64 {
    // splitmix64 over the packed key
    let mut z = seed ^ (i.wrapping_mul(0x9E37_79B9_7F4A_7C15)) ^ (j.rotate_left(32));
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generates the graph described by `spec`. Undirected, zero latency; every
/// presence run of consecutive ticks is stored as one merged interval.
pub fn generate(spec: &GeneratorSpec) -> Result<Tvg, TvgError> {
    spec.validate()?;
    let names = node_names(spec.nodes);
    let lifetime = Interval::new(TimePoint(0), TimePoint(spec.horizon));
    let mut builder = Tvg::builder(lifetime).nodes(names.iter().map(String::as_str));

    for i in 0..spec.nodes {
        for j in (i + 1)..spec.nodes {
            let mut rng = StdRng::seed_from_u64(pair_seed(spec.seed, i as u64, j as u64));
            let presence = match spec.model {
                Model::ErSnapshots { p } => bernoulli_ticks(&mut rng, spec.horizon, p),
                Model::EdgeMarkov {
                    birth,
                    death,
                    initial_density,
                } => markov_ticks(&mut rng, spec.horizon, birth, death, initial_density),
                Model::PoissonContacts {
                    rate,
                    contact_length,
                } => poisson_contacts(&mut rng, spec.horizon, rate, contact_length),
            };
            if !presence.is_empty() {
                builder = builder.edge(
                    EdgeId::new(names[i].as_str(), names[j].as_str()),
                    EdgeSchedule::instant(presence),
                );
            }
        }
    }
    builder.build()
}

fn bernoulli_ticks(rng: &mut StdRng, horizon: u64, p: f64) -> IntervalSet {
    let mut set = IntervalSet::new();
    let mut run_start: Option<u64> = None;
    for t in 0..horizon {
        if rng.random_bool(p) {
            run_start.get_or_insert(t);
        } else if let Some(s) = run_start.take() {
            set.insert(Interval::new(TimePoint(s), TimePoint(t)));
        }
    }
    if let Some(s) = run_start {
        set.insert(Interval::new(TimePoint(s), TimePoint(horizon)));
    }
    set
}

fn markov_ticks(rng: &mut StdRng, horizon: u64, birth: f64, death: f64, init: f64) -> IntervalSet {
    let mut set = IntervalSet::new();
    let mut present = rng.random_bool(init);
    let mut run_start = present.then_some(0u64);
    for t in 1..horizon {
        present = if present {
            !rng.random_bool(death)
        } else {
            rng.random_bool(birth)
        };
        match (present, run_start) {
            (true, None) => run_start = Some(t),
            (false, Some(s)) => {
                set.insert(Interval::new(TimePoint(s), TimePoint(t)));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        set.insert(Interval::new(TimePoint(s), TimePoint(horizon)));
    }
    set
}

fn poisson_contacts(rng: &mut StdRng, horizon: u64, rate: f64, contact_length: u64) -> IntervalSet {
    // Geometric gap on {1, 2, ...} with success probability 1 - exp(-rate),
    // sampled by inversion; the first contact opens gap - 1 ticks in.
    let mut set = IntervalSet::new();
    let next_gap = |rng: &mut StdRng| -> u64 {
        let u: f64 = rng.random();
        1 + (u.ln() / -rate).floor() as u64
    };
    let mut t = next_gap(rng) - 1;
    while t < horizon {
        let end = (t + contact_length).min(horizon);
        set.insert(Interval::new(TimePoint(t), TimePoint(end)));
        t += next_gap(rng);
    }
    set
}

/// Builds a calendar graph: each `(tail, head, weekday)` meets for exactly
/// one tick on its weekday in every period, for `periods` repetitions. The
/// lifetime is `[0, period * periods)` and latency is zero.
pub fn fixture_calendar_line(
    schedule: &[(&str, &str, u64)],
    period: Duration,
    periods: u64,
) -> Result<Tvg, TvgError> {
    if period == Duration::ZERO || periods == 0 {
        return Err(TvgError::BadSpec(
            "period and repetition count must be >= 1".into(),
        ));
    }
    for &(_, _, weekday) in schedule {
        if weekday >= period.ticks() {
            return Err(TvgError::BadSpec(format!(
                "weekday {weekday} outside the period {period}"
            )));
        }
    }
    let lifetime = Interval::new(TimePoint(0), TimePoint(period.ticks() * periods));
    let mut builder = TvgBuilder::new(lifetime);
    for &(u, v, _) in schedule {
        builder = builder.node(u).node(v);
    }
    for &(u, v, weekday) in schedule {
        let presence: IntervalSet = (0..periods)
            .map(|k| {
                let day = weekday + k * period.ticks();
                Interval::new(TimePoint(day), TimePoint(day + 1))
            })
            .collect();
        builder = builder.edge(EdgeId::new(u, v), EdgeSchedule::instant(presence));
    }
    builder.build()
}

/// The six-person weekly calendar with meetings on consecutive days.
pub fn calendar_consecutive_days(periods: u64) -> Tvg {
    fixture_calendar_line(
        &[
            ("a", "b", 0),
            ("b", "c", 1),
            ("c", "d", 2),
            ("d", "e", 3),
            ("e", "f", 4),
        ],
        Duration(7),
        periods,
    )
    .expect("valid fixture")
}

/// The rebalanced six-person weekly calendar alternating two meeting days.
pub fn calendar_alternating_days(periods: u64) -> Tvg {
    fixture_calendar_line(
        &[
            ("a", "b", 0),
            ("b", "c", 3),
            ("c", "d", 0),
            ("d", "e", 3),
            ("e", "f", 0),
        ],
        Duration(7),
        periods,
    )
    .expect("valid fixture")
}
