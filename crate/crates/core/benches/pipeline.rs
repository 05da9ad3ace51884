//! Compares the data-parallel expansion phase against the sequential
//! fallback on light and heavy seed workloads, and one full incremental
//! step against re-clustering the snapshot from scratch (both sides
//! producing leader sets, as the detect commands do).

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use dyncomm::benchgen::{generate_events, EventBenchConfig, EventKind};
use dyncomm::expansion::{expand_all, expand_all_sequential};
use dyncomm::graph::{NodeSet, SnapshotGraph};
use dyncomm::leader::detect_leaders;
use dyncomm::louvain::cluster_static;
use dyncomm::pipeline::Tracker;

struct Fixture {
    name: &'static str,
    snapshot: SnapshotGraph,
    seeds: Vec<NodeSet>,
    tracker: Tracker,
}

/// Runs the tracker through all but the last snapshot, so the benched
/// step sees the steady-state regime rather than the cold start.
fn fixture(name: &'static str, cfg: EventBenchConfig) -> Fixture {
    let out = generate_events(&cfg).expect("benchmark generation");
    let last = out.network.span();
    let snapshot = out.network.snapshot(last).unwrap().clone();

    let mut tracker = Tracker::new(7);
    let mut prev = None;
    for g in &out.network.snapshots()[..last - 1] {
        prev = Some(tracker.advance(g).expect("warm-up step").partition);
    }
    let seeds: Vec<NodeSet> = prev
        .expect("at least one warm-up step")
        .communities
        .iter()
        .map(|c| {
            c.leaders
                .nodes
                .iter()
                .filter(|&&v| snapshot.contains(v))
                .copied()
                .collect::<NodeSet>()
        })
        .filter(|s: &NodeSet| !s.is_empty())
        .collect();
    Fixture {
        name,
        snapshot,
        seeds,
        tracker,
    }
}

fn fixtures() -> Vec<Fixture> {
    vec![
        // many small communities: cheap seeds, scheduling overhead shows
        fixture(
            "desk",
            EventBenchConfig {
                communities: 150,
                steps: 6,
                kind: EventKind::BirthDeath,
                event_count: 6,
                seed: 42,
                ..EventBenchConfig::default()
            },
        ),
        // fewer, larger communities: each expansion carries real work
        fixture(
            "heavy",
            EventBenchConfig {
                communities: 60,
                min_size: 40,
                max_size: 150,
                max_degree: 20.0,
                steps: 6,
                kind: EventKind::BirthDeath,
                event_count: 2,
                seed: 42,
                ..EventBenchConfig::default()
            },
        ),
    ]
}

fn expansion_phase(c: &mut Criterion) {
    for fx in fixtures() {
        let mut group = c.benchmark_group(format!("expansion_{}", fx.name));
        group.bench_function("sequential", |b| {
            b.iter(|| expand_all_sequential(&fx.snapshot, &fx.seeds).unwrap())
        });
        #[cfg(feature = "parallel")]
        group.bench_function("parallel", |b| {
            b.iter(|| expand_all(&fx.snapshot, &fx.seeds).unwrap())
        });
        #[cfg(not(feature = "parallel"))]
        let _ = expand_all; // same path as sequential without the feature
        group.finish();
    }
}

fn step_vs_scratch(c: &mut Criterion) {
    for fx in fixtures() {
        let mut group = c.benchmark_group(format!("second_snapshot_{}", fx.name));
        group.bench_function("incremental_step", |b| {
            b.iter_batched(
                || fx.tracker.clone(),
                |mut tr| tr.advance(&fx.snapshot).unwrap(),
                BatchSize::SmallInput,
            )
        });
        group.bench_function("static_recluster_with_leaders", |b| {
            b.iter(|| {
                let sp = cluster_static(&fx.snapshot, 7);
                sp.communities
                    .iter()
                    .map(|members| detect_leaders(&fx.snapshot, members).unwrap())
                    .collect::<Vec<_>>()
            })
        });
        group.finish();
    }
}

criterion_group!(benches, expansion_phase, step_vs_scratch);
criterion_main!(benches);
