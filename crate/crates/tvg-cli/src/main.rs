//! Command-line front end for the tvg library: trace inspection, class
//! recognition, journey queries, closure export, temporal metrics,
//! evolution series, and random trace generation.
//!
//! Exit codes: 0 success; 2 parse/validation error (including unreadable
//! input); 3 negative query result (unreachable pair, set that is not a
//! component); 4 bad flags.

use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tvg::{
    export_csv, export_dot_closure, fixture_calendar_line, generate, parse_snapshots, parse_tvg,
    serialize_tvg, Duration, FootprintIndicator, GeneratorSpec, Journey, JourneyMetric, Model,
    NodeId, SeriesMode, TemporalIndicator, TimePoint, TraceSemantics, Tvg, TvgError, Verdict,
    WindowSpec,
};

#[derive(Parser)]
#[command(
    name = "tvg",
    about = "Analyze time-varying graph traces: journeys, dynamics classes, temporal metrics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Foremost,
    Shortest,
    Fastest,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Footprint,
    Subgraph,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Markov,
    Poisson,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tvg,
    Snapshots,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a trace: sizes, lifetime, events, footprint shape.
    Info {
        /// Trace file in TVG/1 format, or `-` for stdin.
        file: String,
        /// Parse the input as a snapshot-sequence document instead.
        #[arg(long, value_enum, default_value = "tvg")]
        format: FormatArg,
        #[arg(long)]
        json: bool,
    },
    /// Recognize the dynamics classes C1-C13.
    Classify {
        file: String,
        /// Declare the trace periodic with this period (in ticks).
        #[arg(long)]
        periodic: Option<u64>,
        /// Window length for the T-interval connectivity class.
        #[arg(long)]
        t_interval: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Compute an optimal journey between two nodes.
    Journey {
        file: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Depart at or after this tick.
        #[arg(long)]
        at: u64,
        #[arg(long, value_enum)]
        metric: MetricArg,
        #[arg(long)]
        json: bool,
    },
    /// Write the transitive closure of journeys as DOT.
    Closure {
        file: String,
        /// Output path, or `-` for stdout.
        #[arg(long)]
        dot: String,
    },
    /// Check a connected component over time, or find the largest one.
    Components {
        file: String,
        /// Comma-separated node set to check.
        #[arg(long)]
        check: Option<String>,
        /// Find the largest component (exact search).
        #[arg(long)]
        largest: bool,
        #[arg(long)]
        json: bool,
    },
    /// Temporal eccentricities, diameters, fairness, path length.
    Metrics {
        file: String,
        /// Anchor tick for the journey-based metrics.
        #[arg(long)]
        at: u64,
        /// Also sweep the temporal diameter over all event-date anchors.
        #[arg(long)]
        all_offsets: bool,
        #[arg(long)]
        json: bool,
    },
    /// Sweep an indicator over a window sequence and write CSV.
    Evolve {
        file: String,
        /// Window length in ticks.
        #[arg(long)]
        window: u64,
        /// Step between window starts in ticks.
        #[arg(long)]
        stride: u64,
        /// footprint: density, average-degree, clustering, diameter,
        /// components; subgraph: temporal-diameter, temporal-path-length,
        /// fairness.
        #[arg(long)]
        indicator: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Output path, or `-` for stdout.
        #[arg(long)]
        csv: String,
    },
    /// Generate a random trace and write it in TVG/1 form.
    Generate {
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Node count.
        #[arg(long)]
        n: usize,
        /// Lifetime length in ticks.
        #[arg(long)]
        horizon: u64,
        #[arg(long)]
        seed: u64,
        /// Edge probability (er).
        #[arg(long)]
        p: Option<f64>,
        /// Birth rate (markov).
        #[arg(long)]
        p_birth: Option<f64>,
        /// Death rate (markov).
        #[arg(long)]
        q_death: Option<f64>,
        /// Initial presence probability (markov); defaults to the
        /// stationary frequency.
        #[arg(long)]
        initial_density: Option<f64>,
        /// Contact opening rate (poisson).
        #[arg(long)]
        rate: Option<f64>,
        /// Contact length in ticks (poisson).
        #[arg(long, default_value = "1")]
        contact_length: u64,
        /// Output path, or `-` for stdout.
        #[arg(long)]
        out: String,
    },
    /// Build one of the bundled weekly calendar fixtures.
    Calendar {
        /// chain: meetings Mon..Fri down the line; balanced: alternating
        /// Monday/Thursday meetings.
        #[arg(long, default_value = "chain")]
        shape: String,
        /// Number of weeks.
        #[arg(long, default_value = "8")]
        weeks: u64,
        /// Output path, or `-` for stdout.
        #[arg(long)]
        out: String,
    },
}

/// Failure paired with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 4,
            message: message.into(),
        }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    fn negative(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<TvgError> for Failure {
    fn from(e: TvgError) -> Self {
        match e {
            TvgError::BadSpec(_) | TvgError::BadWindow(_) => Failure::usage(e.to_string()),
            other => Failure::data(other.to_string()),
        }
    }
}

impl From<tvg::TraceError> for Failure {
    fn from(e: tvg::TraceError) -> Self {
        Failure::data(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(4)
                }
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("tvg: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::data(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::data(format!("cannot read {path}: {e}")))
    }
}

fn write_output(path: &str, content: &str) -> Result<(), Failure> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        std::fs::write(path, content)
            .map_err(|e| Failure::data(format!("cannot write {path}: {e}")))
    }
}

fn load_tvg(path: &str) -> Result<Tvg, Failure> {
    Ok(parse_tvg(&read_input(path)?)?)
}

fn node_of(g: &Tvg, name: &str) -> Result<NodeId, Failure> {
    let id = NodeId::from(name);
    if g.contains_node(&id) {
        Ok(id)
    } else {
        Err(Failure::data(format!("unknown node {name}")))
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Info { file, format, json } => {
            let text = read_input(&file)?;
            let g = match format {
                FormatArg::Tvg => parse_tvg(&text)?,
                FormatArg::Snapshots => parse_snapshots(&text)?,
            };
            info(&g, json)
        }
        Command::Classify {
            file,
            periodic,
            t_interval,
            json,
        } => classify(&load_tvg(&file)?, periodic, t_interval, json),
        Command::Journey {
            file,
            from,
            to,
            at,
            metric,
            json,
        } => journey(&load_tvg(&file)?, &from, &to, at, metric, json),
        Command::Closure { file, dot } => {
            let g = load_tvg(&file)?;
            write_output(&dot, &export_dot_closure(&g.transitive_closure()))
        }
        Command::Components {
            file,
            check,
            largest,
            json,
        } => components(&load_tvg(&file)?, check, largest, json),
        Command::Metrics {
            file,
            at,
            all_offsets,
            json,
        } => metrics(&load_tvg(&file)?, at, all_offsets, json),
        Command::Evolve {
            file,
            window,
            stride,
            indicator,
            mode,
            csv,
        } => evolve(&load_tvg(&file)?, window, stride, &indicator, mode, &csv),
        Command::Generate {
            model,
            n,
            horizon,
            seed,
            p,
            p_birth,
            q_death,
            initial_density,
            rate,
            contact_length,
            out,
        } => {
            let model = build_model(
                model,
                p,
                p_birth,
                q_death,
                initial_density,
                rate,
                contact_length,
            )?;
            let g = generate(&GeneratorSpec {
                model,
                nodes: n,
                horizon,
                seed,
            })?;
            write_output(&out, &serialize_tvg(&g)?)
        }
        Command::Calendar { shape, weeks, out } => {
            let schedule: &[(&str, &str, u64)] = match shape.as_str() {
                "chain" => &[
                    ("a", "b", 0),
                    ("b", "c", 1),
                    ("c", "d", 2),
                    ("d", "e", 3),
                    ("e", "f", 4),
                ],
                "balanced" => &[
                    ("a", "b", 0),
                    ("b", "c", 3),
                    ("c", "d", 0),
                    ("d", "e", 3),
                    ("e", "f", 0),
                ],
                other => {
                    return Err(Failure::usage(format!(
                        "unknown calendar shape `{other}` (chain or balanced)"
                    )))
                }
            };
            let g = fixture_calendar_line(schedule, Duration(7), weeks)?;
            write_output(&out, &serialize_tvg(&g)?)
        }
    }
}

fn info(g: &Tvg, json: bool) -> Result<(), Failure> {
    let under = g.underlying_graph();
    let components = under.components().len();
    if json {
        let value = json!({
            "nodes": g.node_count(),
            "edges": g.edge_count(),
            "lifetime": {"start": g.lifetime().start().ticks(), "end": g.lifetime().end().ticks()},
            "directed": g.is_directed(),
            "tick_scale": g.tick_scale(),
            "characteristic_dates": g.characteristic_dates().len(),
            "underlying_graph": {"edges": under.edges.len(), "components": components},
        });
        println!("{value}");
    } else {
        println!("nodes: {}", g.node_count());
        println!("edges: {}", g.edge_count());
        println!("lifetime: {}", g.lifetime());
        println!("directed: {}", g.is_directed());
        if let Some(scale) = g.tick_scale() {
            println!("tick scale: {scale}");
        }
        println!("characteristic dates: {}", g.characteristic_dates().len());
        println!(
            "underlying graph: {} edges, {} component(s)",
            under.edges.len(),
            components
        );
    }
    Ok(())
}

fn classify(
    g: &Tvg,
    periodic: Option<u64>,
    t_interval: Option<u64>,
    json: bool,
) -> Result<(), Failure> {
    let semantics = match periodic {
        Some(0) => return Err(Failure::usage("--periodic must be >= 1")),
        Some(p) => TraceSemantics::PeriodicExtension(Duration(p)),
        None => TraceSemantics::AsObserved,
    };
    let report = g.classify(semantics, t_interval)?;
    if json {
        let verdicts: serde_json::Map<String, serde_json::Value> = report
            .verdicts()
            .map(|(c, v)| {
                let verdict = match v.verdict {
                    Verdict::Holds => "holds",
                    Verdict::Fails => "fails",
                    Verdict::NotDecidable => "not-decidable",
                };
                (
                    c.to_string(),
                    json!({
                        "name": c.name(),
                        "verdict": verdict,
                        "witness": v.witness.as_ref().map(|w| w.to_string()),
                        "finite_reading": v.finite_reading,
                        "note": v.note,
                    }),
                )
            })
            .collect();
        let value = json!({
            "semantics": match report.semantics() {
                TraceSemantics::AsObserved => "as-observed".to_string(),
                TraceSemantics::PeriodicExtension(p) => format!("periodic:{p}"),
            },
            "period": report.period().map(|d| d.ticks()),
            "t_interval": report.t_interval(),
            "delta": report.discovered_delta().map(|d| d.ticks()),
            "verdicts": verdicts,
        });
        println!("{value}");
    } else {
        print!("{report}");
    }
    Ok(())
}

fn render_journey(g: &Tvg, j: &Journey) -> String {
    let mut out = j.start().to_string();
    let nodes = j.visited_nodes(g).expect("journey returned by a search");
    for (hop, to) in j.hops().iter().zip(nodes.iter().skip(1)) {
        out.push_str(&format!(" -[{} @ {}]-> {to}", hop.edge, hop.departure));
    }
    out
}

fn journey(
    g: &Tvg,
    from: &str,
    to: &str,
    at: u64,
    metric: MetricArg,
    json: bool,
) -> Result<(), Failure> {
    let u = node_of(g, from)?;
    let v = node_of(g, to)?;
    let metric = match metric {
        MetricArg::Foremost => JourneyMetric::Foremost,
        MetricArg::Shortest => JourneyMetric::Shortest,
        MetricArg::Fastest => JourneyMetric::Fastest,
    };
    let t = TimePoint(at);
    let found = g.optimal_journey(metric, &u, &v, t)?;
    let Some(j) = found else {
        if json {
            println!("{}", json!({"reachable": false}));
        } else {
            println!("unreachable");
        }
        return Err(Failure::negative(format!(
            "no journey from {from} to {to} departing at or after {at}"
        )));
    };
    // The empty journey (u == v) departs and arrives at the anchor.
    let departure = j.departure().unwrap_or(t);
    let arrival = j.arrival(g).unwrap_or(t);
    let duration = arrival - departure;
    if json {
        let hops: Vec<serde_json::Value> = j
            .hops()
            .iter()
            .map(|h| {
                json!({
                    "tail": h.edge.tail().to_string(),
                    "head": h.edge.head().to_string(),
                    "label": h.edge.label(),
                    "departure": h.departure.ticks(),
                })
            })
            .collect();
        let value = json!({
            "reachable": true,
            "from": from,
            "to": to,
            "hops": hops,
            "departure": departure.ticks(),
            "arrival": arrival.ticks(),
            "duration": duration.ticks(),
            "hop_count": j.topological_length(),
        });
        println!("{value}");
    } else {
        if j.is_empty() {
            println!("journey: (stay at {from})");
        } else {
            println!("journey: {}", render_journey(g, &j));
        }
        println!("departure: {departure}");
        println!("arrival: {arrival}");
        println!("duration: {duration}");
        println!("hops: {}", j.topological_length());
    }
    Ok(())
}

fn components(g: &Tvg, check: Option<String>, largest: bool, json: bool) -> Result<(), Failure> {
    match (check, largest) {
        (Some(_), true) => Err(Failure::usage("--check and --largest are exclusive")),
        (None, false) => Err(Failure::usage("pass --check a,b,c or --largest")),
        (Some(list), false) => {
            let set: BTreeSet<NodeId> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(NodeId::from)
                .collect();
            if set.is_empty() {
                return Err(Failure::usage("--check needs at least one node"));
            }
            let ok = g.is_connected_component(&set)?;
            if json {
                let nodes: Vec<String> = set.iter().map(|n| n.to_string()).collect();
                println!("{}", json!({"component": ok, "nodes": nodes}));
            } else {
                println!("component: {}", if ok { "yes" } else { "no" });
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::negative("the set is not a component over time"))
            }
        }
        (None, true) => {
            let best = g.largest_component(None)?;
            if json {
                let nodes: Vec<String> = best.iter().map(|n| n.to_string()).collect();
                println!("{}", json!({"largest": nodes, "size": best.len()}));
            } else {
                let names: Vec<String> = best.iter().map(|n| n.to_string()).collect();
                println!(
                    "largest component ({} nodes): {}",
                    best.len(),
                    names.join(" ")
                );
            }
            Ok(())
        }
    }
}

fn opt_ticks(d: Option<Duration>) -> serde_json::Value {
    match d {
        Some(d) => json!(d.ticks()),
        None => serde_json::Value::Null,
    }
}

fn metrics(g: &Tvg, at: u64, all_offsets: bool, json: bool) -> Result<(), Failure> {
    let t = TimePoint(at);
    if !g.lifetime().contains(t) {
        return Err(Failure::data(format!(
            "anchor {t} is outside the lifetime {}",
            g.lifetime()
        )));
    }
    let mut eccs = Vec::new();
    for u in g.nodes() {
        eccs.push((u.clone(), g.temporal_eccentricity(u, t)?));
    }
    let temporal_diameter = g.temporal_diameter(t);
    let topological_diameter = g.topological_diameter(t);
    let fairness = g.fairness(t).ok();
    let ctpl = g.characteristic_temporal_path_length().ok();
    let sweep = all_offsets.then(|| g.temporal_diameter_over_anchors());

    if json {
        let eccentricities: serde_json::Map<String, serde_json::Value> = eccs
            .iter()
            .map(|(u, e)| (u.to_string(), opt_ticks(*e)))
            .collect();
        let mut value = json!({
            "at": at,
            "eccentricities": eccentricities,
            "temporal_diameter": opt_ticks(temporal_diameter),
            "topological_diameter": topological_diameter,
            "fairness": fairness,
            "characteristic_temporal_path_length": ctpl,
        });
        if let Some(sweep) = &sweep {
            let rows: Vec<serde_json::Value> = sweep
                .iter()
                .map(|(anchor, d)| json!({"anchor": anchor.ticks(), "value": opt_ticks(*d)}))
                .collect();
            value["diameter_over_anchors"] = json!(rows);
        }
        println!("{value}");
        return Ok(());
    }

    let show = |d: Option<Duration>| d.map_or("-".into(), |d| d.to_string());
    for (u, e) in &eccs {
        println!("eccentricity {u}: {}", show(*e));
    }
    println!("temporal diameter: {}", show(temporal_diameter));
    println!(
        "topological diameter: {}",
        topological_diameter.map_or("-".into(), |d| d.to_string())
    );
    println!(
        "fairness: {}",
        fairness.map_or("-".into(), |f| format!("{f:.6}"))
    );
    println!(
        "characteristic temporal path length: {}",
        ctpl.map_or("-".into(), |v| format!("{v:.6}"))
    );
    if let Some(sweep) = sweep {
        let defined: Vec<(TimePoint, Duration)> = sweep
            .iter()
            .filter_map(|(a, d)| d.map(|d| (*a, d)))
            .collect();
        match (
            defined.iter().min_by_key(|(_, d)| *d),
            defined.iter().max_by_key(|(_, d)| *d),
        ) {
            (Some((amin, dmin)), Some((amax, dmax))) => {
                let undefined = sweep.len() - defined.len();
                if undefined == 0 {
                    println!(
                        "temporal diameter over anchors: min {dmin} @ {amin}, max {dmax} @ {amax}"
                    );
                } else {
                    println!(
                        "temporal diameter over anchors: min {dmin} @ {amin}, max {dmax} @ {amax} \
                         ({undefined} of {} anchors disconnect)",
                        sweep.len()
                    );
                }
            }
            _ => println!("temporal diameter over anchors: - (every anchor disconnects)"),
        }
    }
    Ok(())
}

fn evolve(
    g: &Tvg,
    window: u64,
    stride: u64,
    indicator: &str,
    mode: ModeArg,
    csv: &str,
) -> Result<(), Failure> {
    let mode = match mode {
        ModeArg::Footprint => match FootprintIndicator::parse(indicator) {
            Some(i) => SeriesMode::Footprint(i),
            None => {
                return Err(Failure::usage(format!(
                    "`{indicator}` is not a footprint indicator (density, \
                     average-degree, clustering, diameter, components)"
                )))
            }
        },
        ModeArg::Subgraph => match TemporalIndicator::parse(indicator) {
            Some(i) => SeriesMode::Subgraph(i),
            None => {
                return Err(Failure::usage(format!(
                    "`{indicator}` is not a temporal indicator \
                     (temporal-diameter, temporal-path-length, fairness)"
                )))
            }
        },
    };
    let series = g.evolution_series(
        WindowSpec {
            length: Duration(window),
            stride: Duration(stride),
        },
        mode,
    )?;
    write_output(csv, &export_csv(&series))
}

#[allow(clippy::too_many_arguments)]
fn build_model(
    model: ModelArg,
    p: Option<f64>,
    p_birth: Option<f64>,
    q_death: Option<f64>,
    initial_density: Option<f64>,
    rate: Option<f64>,
    contact_length: u64,
) -> Result<Model, Failure> {
    match model {
        ModelArg::Er => {
            let p = p.ok_or_else(|| Failure::usage("--model er needs --p"))?;
            Ok(Model::ErSnapshots { p })
        }
        ModelArg::Markov => {
            let birth = p_birth.ok_or_else(|| Failure::usage("--model markov needs --p-birth"))?;
            let death = q_death.ok_or_else(|| Failure::usage("--model markov needs --q-death"))?;
            let initial_density = initial_density.unwrap_or(if birth + death > 0.0 {
                birth / (birth + death)
            } else {
                0.0
            });
            Ok(Model::EdgeMarkov {
                birth,
                death,
                initial_density,
            })
        }
        ModelArg::Poisson => {
            let rate = rate.ok_or_else(|| Failure::usage("--model poisson needs --rate"))?;
            Ok(Model::PoissonContacts {
                rate,
                contact_length,
            })
        }
    }
}
