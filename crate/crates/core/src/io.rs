//! File formats: edge streams, snapshot directories, ground-truth labels,
//! partition and timeline records.
//!
//! Two graph input formats are supported: a timestamped stream
//! (`src dst timestamp` per line) that gets windowed into snapshots, and a
//! pre-sliced directory of `snapshot_<t>.edges` files (`src dst` per
//! line). `#`-prefixed lines and blank lines are comments in both.

use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::benchgen::GroundTruth;
use crate::error::{Error, Result};
use crate::graph::{
    DynamicNetwork, NodeSet, SnapshotGraphBuilder, SymbolTable, TemporalEdgeRecord,
};
use crate::leader::LeaderSet;
use crate::metrics::LabeledPartition;
use crate::pipeline::{
    Community, CommunityId, CommunityTimeline, LifecycleEvent, LifecycleKind, Partition,
};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Splits a content line into whitespace-separated fields; `None` for
/// blanks and `#` comments.
fn fields(line: &str) -> Option<Vec<&str>> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return None;
    }
    Some(trimmed.split_whitespace().collect())
}

/// Parses format A: `src dst timestamp` per line.
pub fn parse_edge_stream<R: BufRead>(reader: R) -> Result<Vec<TemporalEdgeRecord>> {
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let Some(parts) = fields(&line) else { continue };
        if parts.len() != 3 {
            return Err(parse_err(
                i + 1,
                format!("expected `src dst timestamp`, got {} fields", parts.len()),
            ));
        }
        let timestamp: i64 = parts[2]
            .parse()
            .map_err(|_| parse_err(i + 1, format!("bad timestamp {:?}", parts[2])))?;
        records.push(TemporalEdgeRecord {
            src: parts[0].to_string(),
            dst: parts[1].to_string(),
            timestamp,
        });
    }
    Ok(records)
}

pub fn read_edge_stream(path: &Path) -> Result<Vec<TemporalEdgeRecord>> {
    parse_edge_stream(BufReader::new(File::open(path)?))
}

/// Writes format B: one `snapshot_<t>.edges` file per timestep.
pub fn write_snapshot_dir(net: &DynamicNetwork, dir: &Path) -> Result<()> {
    let symbols = net.symbols();
    for g in net.snapshots() {
        let path = dir.join(format!("snapshot_{}.edges", g.timestep()));
        let mut w = BufWriter::new(File::create(path)?);
        for (u, v) in g.edges() {
            writeln!(
                w,
                "{} {}",
                symbols.label(u).unwrap_or("?"),
                symbols.label(v).unwrap_or("?")
            )?;
        }
        w.flush()?;
    }
    Ok(())
}

/// Reads format B back. Files must be numbered contiguously from 1.
pub fn read_snapshot_dir(dir: &Path) -> Result<DynamicNetwork> {
    let mut indexed: Vec<(usize, std::path::PathBuf)> = Vec::new();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if let Some(t) = name
            .strip_prefix("snapshot_")
            .and_then(|rest| rest.strip_suffix(".edges"))
            .and_then(|t| t.parse::<usize>().ok())
        {
            indexed.push((t, entry.path()));
        }
    }
    if indexed.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    indexed.sort();
    for (i, (t, _)) in indexed.iter().enumerate() {
        if *t != i + 1 {
            return Err(Error::contract(format!(
                "snapshot files must be numbered 1..{}, found gap at {}",
                indexed.len(),
                t
            )));
        }
    }

    let mut symbols = SymbolTable::new();
    let mut snapshots = Vec::with_capacity(indexed.len());
    for (t, path) in indexed {
        let reader = BufReader::new(File::open(&path)?);
        let mut b = SnapshotGraphBuilder::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let Some(parts) = fields(&line) else { continue };
            if parts.len() != 2 {
                return Err(parse_err(
                    i + 1,
                    format!("expected `src dst`, got {} fields", parts.len()),
                ));
            }
            let u = symbols.intern(parts[0]);
            let v = symbols.intern(parts[1]);
            if u != v {
                b.add_edge(u, v);
            }
        }
        snapshots.push(b.build(t));
    }
    DynamicNetwork::from_parts(symbols, snapshots)
}

/// Writes one `truth_<t>.labels` file per timestep: `node community` lines.
pub fn write_truth(truth: &GroundTruth, symbols: &SymbolTable, dir: &Path) -> Result<()> {
    for (i, labels) in truth.steps().iter().enumerate() {
        let path = dir.join(format!("truth_{}.labels", i + 1));
        let mut w = BufWriter::new(File::create(path)?);
        for (&v, &label) in labels {
            writeln!(w, "{} {}", symbols.label(v).unwrap_or("?"), label)?;
        }
        w.flush()?;
    }
    Ok(())
}

fn read_label_file(
    path: &Path,
    symbols: &mut SymbolTable,
    dictionary: &mut HashMap<String, u64>,
) -> Result<LabeledPartition> {
    let reader = BufReader::new(File::open(path)?);
    let mut labels = LabeledPartition::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let Some(parts) = fields(&line) else { continue };
        if parts.len() != 2 {
            return Err(parse_err(
                i + 1,
                format!("expected `node community`, got {} fields", parts.len()),
            ));
        }
        let node = symbols.intern(parts[0]);
        let next = dictionary.len() as u64;
        let label = *dictionary.entry(parts[1].to_string()).or_insert(next);
        labels.insert(node, label);
    }
    Ok(labels)
}

/// Reads ground truth: either a directory of per-step `truth_<t>.labels`
/// files or a single file holding a static membership replicated across
/// all `span` steps.
pub fn read_truth(path: &Path, span: usize, symbols: &mut SymbolTable) -> Result<GroundTruth> {
    let mut dictionary = HashMap::new();
    if path.is_dir() {
        let mut steps = Vec::with_capacity(span);
        for t in 1..=span {
            let file = path.join(format!("truth_{t}.labels"));
            if !file.exists() {
                return Err(Error::contract(format!(
                    "missing ground-truth file {}",
                    file.display()
                )));
            }
            steps.push(read_label_file(&file, symbols, &mut dictionary)?);
        }
        Ok(GroundTruth::new(steps))
    } else {
        let labels = read_label_file(path, symbols, &mut dictionary)?;
        Ok(GroundTruth::new(vec![labels; span]))
    }
}

/// Line-delimited partition records:
/// `t community_id event leader_count member_count leaders... | members...`
/// with one `dissolved` record (no leaders or members) per death.
pub fn write_partitions_text<W: Write>(
    mut w: W,
    partitions: &[Partition],
    events: &[LifecycleEvent],
    symbols: &SymbolTable,
) -> Result<()> {
    let by_step: HashMap<(usize, CommunityId), LifecycleKind> = events
        .iter()
        .map(|e| ((e.t, e.community), e.kind))
        .collect();
    let label = |v| symbols.label(v).unwrap_or("?");
    for p in partitions {
        let mut dissolved: Vec<&LifecycleEvent> = events
            .iter()
            .filter(|e| e.t == p.t && e.kind == LifecycleKind::Dissolved)
            .collect();
        dissolved.sort_by_key(|e| e.community);
        for e in dissolved {
            writeln!(w, "{} {} dissolved 0 0 |", p.t, e.community)?;
        }
        for c in &p.communities {
            let event = match by_step.get(&(p.t, c.id)) {
                Some(LifecycleKind::Born) => "born",
                _ => "cont",
            };
            write!(
                w,
                "{} {} {} {} {}",
                p.t,
                c.id,
                event,
                c.leaders.nodes.len(),
                c.members.len()
            )?;
            for &v in &c.leaders.nodes {
                write!(w, " {}", label(v))?;
            }
            write!(w, " |")?;
            for &v in &c.members {
                write!(w, " {}", label(v))?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Parses the text format back into partitions and lifecycle events.
pub fn read_partitions_text<R: BufRead>(
    reader: R,
    symbols: &mut SymbolTable,
) -> Result<(Vec<Partition>, Vec<LifecycleEvent>)> {
    let mut partitions: Vec<Partition> = Vec::new();
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let Some(parts) = fields(&line) else { continue };
        let lineno = i + 1;
        if parts.len() < 6 {
            return Err(parse_err(lineno, "truncated partition record"));
        }
        let t: usize = parts[0]
            .parse()
            .map_err(|_| parse_err(lineno, "bad timestep"))?;
        let id: u64 = parts[1]
            .parse()
            .map_err(|_| parse_err(lineno, "bad community id"))?;
        let id = CommunityId(id);
        let event = parts[2];
        let leader_count: usize = parts[3]
            .parse()
            .map_err(|_| parse_err(lineno, "bad leader count"))?;
        let member_count: usize = parts[4]
            .parse()
            .map_err(|_| parse_err(lineno, "bad member count"))?;
        let rest = &parts[5..];
        if rest.len() != leader_count + 1 + member_count
            || rest[leader_count] != "|"
        {
            return Err(parse_err(lineno, "leader/member sections out of shape"));
        }

        match event {
            "dissolved" => {
                events.push(LifecycleEvent {
                    t,
                    community: id,
                    kind: LifecycleKind::Dissolved,
                });
                continue;
            }
            "born" => events.push(LifecycleEvent {
                t,
                community: id,
                kind: LifecycleKind::Born,
            }),
            "cont" => {}
            other => return Err(parse_err(lineno, format!("unknown event {other:?}"))),
        }

        let leaders: NodeSet = rest[..leader_count]
            .iter()
            .map(|l| symbols.intern(l))
            .collect();
        let members: NodeSet = rest[leader_count + 1..]
            .iter()
            .map(|l| symbols.intern(l))
            .collect();
        if leaders.is_empty() || !leaders.is_subset(&members) {
            return Err(parse_err(lineno, "leaders must be non-empty members"));
        }
        let anchor = *leaders.first().expect("non-empty");

        if partitions.last().map(|p| p.t) != Some(t) {
            if partitions.iter().any(|p| p.t == t) {
                return Err(parse_err(lineno, "timesteps must be contiguous blocks"));
            }
            partitions.push(Partition {
                t,
                communities: Vec::new(),
            });
        }
        partitions
            .last_mut()
            .expect("pushed above")
            .communities
            .push(Community {
                id,
                members,
                leaders: LeaderSet {
                    anchor,
                    nodes: leaders,
                },
            });
    }
    Ok((partitions, events))
}

#[derive(Serialize, Deserialize)]
struct PartitionRecord {
    t: usize,
    community_id: u64,
    event: String,
    anchor: Option<String>,
    leaders: Vec<String>,
    members: Vec<String>,
}

/// JSON-lines variant of the partition records.
pub fn write_partitions_jsonl<W: Write>(
    mut w: W,
    partitions: &[Partition],
    events: &[LifecycleEvent],
    symbols: &SymbolTable,
) -> Result<()> {
    let by_step: HashMap<(usize, CommunityId), LifecycleKind> = events
        .iter()
        .map(|e| ((e.t, e.community), e.kind))
        .collect();
    let label = |v| symbols.label(v).unwrap_or("?").to_string();
    for p in partitions {
        let mut dissolved: Vec<&LifecycleEvent> = events
            .iter()
            .filter(|e| e.t == p.t && e.kind == LifecycleKind::Dissolved)
            .collect();
        dissolved.sort_by_key(|e| e.community);
        for e in dissolved {
            let record = PartitionRecord {
                t: p.t,
                community_id: e.community.0,
                event: "dissolved".into(),
                anchor: None,
                leaders: Vec::new(),
                members: Vec::new(),
            };
            writeln!(w, "{}", serde_json::to_string(&record)?)?;
        }
        for c in &p.communities {
            let event = match by_step.get(&(p.t, c.id)) {
                Some(LifecycleKind::Born) => "born",
                _ => "cont",
            };
            let record = PartitionRecord {
                t: p.t,
                community_id: c.id.0,
                event: event.into(),
                anchor: Some(label(c.leaders.anchor)),
                leaders: c.leaders.nodes.iter().map(|&v| label(v)).collect(),
                members: c.members.iter().map(|&v| label(v)).collect(),
            };
            writeln!(w, "{}", serde_json::to_string(&record)?)?;
        }
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TimelineRecord {
    community_id: u64,
    birth_t: usize,
    death_t: Option<usize>,
    steps: Vec<TimelineStepRecord>,
}

#[derive(Serialize, Deserialize)]
struct TimelineStepRecord {
    t: usize,
    leaders: Vec<String>,
    members: Vec<String>,
}

/// JSON-lines lifecycle records, one per community id.
pub fn write_timelines_jsonl<W: Write>(
    mut w: W,
    timelines: &[CommunityTimeline],
    symbols: &SymbolTable,
) -> Result<()> {
    let label = |v| symbols.label(v).unwrap_or("?").to_string();
    for tl in timelines {
        let record = TimelineRecord {
            community_id: tl.id.0,
            birth_t: tl.birth,
            death_t: tl.death,
            steps: tl
                .steps
                .iter()
                .map(|s| TimelineStepRecord {
                    t: s.t,
                    leaders: s.leaders.iter().map(|&v| label(v)).collect(),
                    members: s.members.iter().map(|&v| label(v)).collect(),
                })
                .collect(),
        };
        writeln!(w, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(())
}
