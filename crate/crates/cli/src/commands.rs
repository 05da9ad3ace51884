//! The five subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use dyncomm::benchgen::{
    generate_events, generate_kawadia, EventBenchConfig, KawadiaConfig,
};
use dyncomm::graph::{ingest_edge_stream, DynamicNetwork, SymbolTable};
use dyncomm::io as dio;
use dyncomm::leader::detect_leaders;
use dyncomm::louvain::cluster_static;
use dyncomm::metrics::{ground_truth_series, persistence_series, smoothness_series};
use dyncomm::pipeline::{
    Community, CommunityId, LifecycleEvent, LifecycleKind, Partition, Tracker,
};

fn write_manifest(out: &Path, body: serde_json::Value) -> Result<()> {
    let manifest = json!({
        "tool": "dyncomm",
        "version": env!("CARGO_PKG_VERSION"),
        "run": body,
    });
    let file = File::create(out.join("manifest.json"))?;
    serde_json::to_writer_pretty(BufWriter::new(file), &manifest)?;
    Ok(())
}

pub fn slice(input: &Path, window: u64, out: &Path) -> Result<()> {
    let records = dio::read_edge_stream(input)
        .with_context(|| format!("reading {}", input.display()))?;
    let ingest = ingest_edge_stream(&records, window)
        .with_context(|| format!("windowing {}", input.display()))?;
    dio::write_snapshot_dir(&ingest.network, out)?;
    write_manifest(
        out,
        json!({
            "command": "slice",
            "input": input.display().to_string(),
            "window": window,
            "snapshots": ingest.network.span(),
            "dropped_self_loops": ingest.dropped_self_loops,
        }),
    )?;
    eprintln!(
        "sliced {} records into {} snapshots ({} self-loops dropped)",
        records.len(),
        ingest.network.span(),
        ingest.dropped_self_loops
    );
    Ok(())
}

pub fn generate(kind: &str, config: &Path, out: &Path) -> Result<()> {
    let raw = std::fs::read_to_string(config)
        .with_context(|| format!("reading {}", config.display()))?;
    let (generated, seed) = match kind {
        "kawadia" => {
            let cfg: KawadiaConfig = toml::from_str(&raw).context("parsing kawadia config")?;
            (generate_kawadia(&cfg)?, cfg.seed)
        }
        "events" => {
            let cfg: EventBenchConfig = toml::from_str(&raw).context("parsing events config")?;
            (generate_events(&cfg)?, cfg.seed)
        }
        other => bail!("unknown benchmark kind {other:?}; expected kawadia or events"),
    };
    dio::write_snapshot_dir(&generated.network, out)?;
    dio::write_truth(&generated.truth, generated.network.symbols(), out)?;
    write_manifest(
        out,
        json!({
            "command": "generate",
            "kind": kind,
            "config": config.display().to_string(),
            "seed": seed,
            "snapshots": generated.network.span(),
            "skipped_events": generated.skipped_events,
        }),
    )?;
    if generated.skipped_events > 0 {
        eprintln!(
            "warning: {} infeasible events were skipped",
            generated.skipped_events
        );
    }
    Ok(())
}

fn write_partition_outputs(
    out: &Path,
    partitions: &[Partition],
    events: &[LifecycleEvent],
    symbols: &SymbolTable,
) -> Result<()> {
    let text = File::create(out.join("partitions.txt"))?;
    dio::write_partitions_text(BufWriter::new(text), partitions, events, symbols)?;
    let jsonl = File::create(out.join("partitions.jsonl"))?;
    dio::write_partitions_jsonl(BufWriter::new(jsonl), partitions, events, symbols)?;
    Ok(())
}

fn write_timing(out: &Path, rows: &[(usize, f64)]) -> Result<()> {
    let mut w = BufWriter::new(File::create(out.join("timing.csv"))?);
    writeln!(w, "t,seconds")?;
    for (t, secs) in rows {
        writeln!(w, "{t},{secs:.6}")?;
    }
    writeln!(w, "total,{:.6}", rows.iter().map(|(_, s)| s).sum::<f64>())?;
    Ok(())
}

pub fn detect(input: &Path, seed: u64, threads: Option<usize>, out: &Path) -> Result<()> {
    let net = dio::read_snapshot_dir(input)
        .with_context(|| format!("reading snapshots from {}", input.display()))?;
    let mut tracker = Tracker::new(seed);
    let mut partitions = Vec::with_capacity(net.span());
    let mut events = Vec::new();
    let mut timing = Vec::with_capacity(net.span());
    for g in net.snapshots() {
        let clock = Instant::now();
        let outcome = tracker.advance(g)?;
        timing.push((g.timestep(), clock.elapsed().as_secs_f64()));
        partitions.push(outcome.partition);
        events.extend(outcome.events);
    }
    let timelines = tracker.into_timelines();

    write_partition_outputs(out, &partitions, &events, net.symbols())?;
    let tl = File::create(out.join("timelines.jsonl"))?;
    dio::write_timelines_jsonl(BufWriter::new(tl), &timelines, net.symbols())?;
    write_timing(out, &timing)?;
    write_manifest(
        out,
        json!({
            "command": "detect",
            "input": input.display().to_string(),
            "seed": seed,
            "threads": threads,
            "snapshots": net.span(),
            "communities_tracked": timelines.len(),
        }),
    )?;
    Ok(())
}

pub fn baseline(input: &Path, seed: u64, out: &Path) -> Result<()> {
    let net = dio::read_snapshot_dir(input)
        .with_context(|| format!("reading snapshots from {}", input.display()))?;
    let mut partitions = Vec::with_capacity(net.span());
    let mut events = Vec::new();
    let mut timing = Vec::with_capacity(net.span());
    let mut next_id = 1u64;
    for g in net.snapshots() {
        let clock = Instant::now();
        let sp = cluster_static(g, seed ^ ((g.timestep() as u64) << 8));
        let mut communities = Vec::new();
        for members in sp.communities {
            let leaders = detect_leaders(g, &members)?;
            let id = CommunityId(next_id);
            next_id += 1;
            events.push(LifecycleEvent {
                t: g.timestep(),
                community: id,
                kind: LifecycleKind::Born,
            });
            communities.push(Community {
                id,
                members,
                leaders,
            });
        }
        timing.push((g.timestep(), clock.elapsed().as_secs_f64()));
        partitions.push(Partition {
            t: g.timestep(),
            communities,
        });
    }
    write_partition_outputs(out, &partitions, &events, net.symbols())?;
    write_timing(out, &timing)?;
    write_manifest(
        out,
        json!({
            "command": "baseline",
            "input": input.display().to_string(),
            "seed": seed,
            "snapshots": net.span(),
        }),
    )?;
    Ok(())
}

pub fn eval(
    partitions_file: &Path,
    snapshots: Option<&Path>,
    truth: Option<&Path>,
    out: &Path,
) -> Result<()> {
    let mut net: Option<DynamicNetwork> = match snapshots {
        Some(dir) => Some(
            dio::read_snapshot_dir(dir)
                .with_context(|| format!("reading snapshots from {}", dir.display()))?,
        ),
        None => None,
    };
    let mut local_symbols = SymbolTable::new();

    let reader = BufReader::new(
        File::open(partitions_file)
            .with_context(|| format!("opening {}", partitions_file.display()))?,
    );
    let (partitions, _events) = {
        let symbols = net
            .as_mut()
            .map(|n| n.symbols_mut())
            .unwrap_or(&mut local_symbols);
        dio::read_partitions_text(reader, symbols)?
    };
    if partitions.is_empty() {
        bail!("no partitions found in {}", partitions_file.display());
    }
    let span = partitions.iter().map(|p| p.t).max().expect("non-empty");

    let ground = match truth {
        Some(path) => {
            let symbols = net
                .as_mut()
                .map(|n| n.symbols_mut())
                .unwrap_or(&mut local_symbols);
            Some(dio::read_truth(path, span, symbols)?)
        }
        None => None,
    };

    let mut w = BufWriter::new(File::create(out.join("metrics.csv"))?);
    writeln!(w, "t,metric,value,universe_size")?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();

    if partitions.len() >= 2 {
        for point in smoothness_series(&partitions)? {
            writeln!(
                w,
                "{},smoothness,{},{}",
                point.t,
                fmt(point.value),
                point.universe
            )?;
        }
    }
    if let Some(ground) = &ground {
        for point in ground_truth_series(&partitions, ground)? {
            writeln!(
                w,
                "{},ground_truth,{},{}",
                point.t,
                fmt(point.value),
                point.universe
            )?;
        }
    }
    if let Some(net) = &net {
        for point in persistence_series(net, &partitions)? {
            writeln!(
                w,
                "{},leader_persistence,{},{}",
                point.t,
                fmt(point.leaders),
                point.leader_count
            )?;
            writeln!(
                w,
                "{},follower_persistence,{},{}",
                point.t,
                fmt(point.followers),
                point.follower_count
            )?;
        }
    }
    w.flush()?;

    write_manifest(
        out,
        json!({
            "command": "eval",
            "partitions": partitions_file.display().to_string(),
            "snapshots": snapshots.map(|p| p.display().to_string()),
            "truth": truth.map(|p| p.display().to_string()),
            "timesteps": span,
            "nmi_normalization": "arithmetic mean of entropies",
        }),
    )?;
    Ok(())
}
