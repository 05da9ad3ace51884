//! Incremental detection across snapshots.
//!
//! The first snapshot is bootstrapped with static clustering. Every later
//! snapshot reuses the previous partition: surviving leader sets seed local
//! expansions, multi-claimed nodes are resolved, leftovers are clustered
//! into newborn communities, and leaders are recomputed fresh. A community
//! dissolves when none of its leaders appear in the new snapshot (or when
//! hub resolution empties it).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{expand_all, resolve_memberships};
use crate::graph::{DynamicNetwork, NodeSet, SnapshotGraph};
use crate::leader::{detect_leaders, LeaderSet};
use crate::louvain::{cluster_leftovers, cluster_static};
use crate::metrics::LabeledPartition;

/// Stable community identifier; never reused within one run.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct CommunityId(pub u64);

impl fmt::Display for CommunityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One community of one snapshot's partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Community {
    pub id: CommunityId,
    pub members: NodeSet,
    pub leaders: LeaderSet,
}

/// Disjoint cover of one snapshot's node set, communities in ascending id
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub t: usize,
    pub communities: Vec<Community>,
}

impl Partition {
    pub fn node_set(&self) -> NodeSet {
        self.communities
            .iter()
            .flat_map(|c| c.members.iter().copied())
            .collect()
    }

    /// Node -> community id map.
    pub fn labeled(&self) -> LabeledPartition {
        self.communities
            .iter()
            .flat_map(|c| c.members.iter().map(|&v| (v, c.id.0)))
            .collect()
    }

    /// Checks the partition invariants against its snapshot: disjoint,
    /// covering, every community led by a non-empty leader set drawn from
    /// its own members.
    pub fn validate_cover(&self, g: &SnapshotGraph) -> Result<()> {
        let mut seen = NodeSet::new();
        for c in &self.communities {
            if c.members.is_empty() {
                return Err(Error::contract(format!("community {} is empty", c.id)));
            }
            if c.leaders.nodes.is_empty() || !c.leaders.nodes.is_subset(&c.members) {
                return Err(Error::contract(format!(
                    "community {} has an invalid leader set",
                    c.id
                )));
            }
            for &v in &c.members {
                if !seen.insert(v) {
                    return Err(Error::contract(format!(
                        "node {v} assigned to more than one community"
                    )));
                }
            }
        }
        if seen != g.node_set() {
            return Err(Error::contract("partition does not cover the snapshot"));
        }
        Ok(())
    }
}

/// Lifecycle event kind. Communities are only ever born or dissolved;
/// merges and splits stay observable through the timelines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LifecycleKind {
    Born,
    Dissolved,
}

impl fmt::Display for LifecycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LifecycleKind::Born => write!(f, "born"),
            LifecycleKind::Dissolved => write!(f, "dissolved"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LifecycleEvent {
    pub t: usize,
    pub community: CommunityId,
    pub kind: LifecycleKind,
}

/// Membership and leadership of one community at one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimelineStep {
    pub t: usize,
    pub members: NodeSet,
    pub leaders: NodeSet,
}

/// Birth-to-death record of one community id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityTimeline {
    pub id: CommunityId,
    pub birth: usize,
    /// First step at which the community no longer exists; `None` while
    /// alive.
    pub death: Option<usize>,
    pub steps: Vec<TimelineStep>,
}

/// Partition plus the events that produced it.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub partition: Partition,
    pub events: Vec<LifecycleEvent>,
}

/// Drives the incremental algorithm one snapshot at a time, allocating
/// community ids and maintaining timelines.
#[derive(Debug, Clone)]
pub struct Tracker {
    master_seed: u64,
    next_id: u64,
    expected_t: usize,
    prev: Option<Partition>,
    timelines: Vec<CommunityTimeline>,
    timeline_index: HashMap<CommunityId, usize>,
}

impl Tracker {
    pub fn new(seed: u64) -> Self {
        Tracker {
            master_seed: seed,
            next_id: 1,
            expected_t: 1,
            prev: None,
            timelines: Vec::new(),
            timeline_index: HashMap::new(),
        }
    }

    fn allocate(&mut self) -> CommunityId {
        let id = CommunityId(self.next_id);
        self.next_id += 1;
        id
    }

    fn record_birth(&mut self, id: CommunityId, t: usize) {
        let idx = self.timelines.len();
        self.timelines.push(CommunityTimeline {
            id,
            birth: t,
            death: None,
            steps: Vec::new(),
        });
        self.timeline_index.insert(id, idx);
    }

    fn record_death(&mut self, id: CommunityId, t: usize) {
        let idx = self.timeline_index[&id];
        self.timelines[idx].death = Some(t);
    }

    /// Consumes the next snapshot. The first call bootstraps with static
    /// clustering; later calls run the incremental step. Snapshots must
    /// arrive in timestep order.
    pub fn advance(&mut self, g: &SnapshotGraph) -> Result<StepOutcome> {
        let t = self.expected_t;
        if g.timestep() != t {
            return Err(Error::contract(format!(
                "expected snapshot {t}, got {}",
                g.timestep()
            )));
        }
        let seed = step_seed(self.master_seed, t);
        let mut events = Vec::new();
        let mut assembled: Vec<(CommunityId, NodeSet)> = Vec::new();

        match self.prev.take() {
            None => {
                for members in cluster_static(g, seed).communities {
                    let id = self.allocate();
                    events.push(LifecycleEvent {
                        t,
                        community: id,
                        kind: LifecycleKind::Born,
                    });
                    self.record_birth(id, t);
                    assembled.push((id, members));
                }
            }
            Some(prev) => {
                // (1) survival: a community whose leaders all vanished
                // dissolves before any expansion happens
                let mut survivors: Vec<(CommunityId, NodeSet)> = Vec::new();
                for c in &prev.communities {
                    let seed_set: NodeSet = c
                        .leaders
                        .nodes
                        .iter()
                        .filter(|&&v| g.contains(v))
                        .copied()
                        .collect();
                    if seed_set.is_empty() {
                        events.push(LifecycleEvent {
                            t,
                            community: c.id,
                            kind: LifecycleKind::Dissolved,
                        });
                        self.record_death(c.id, t);
                    } else {
                        survivors.push((c.id, seed_set));
                    }
                }

                // (2) independent expansions over the immutable snapshot
                let seeds: Vec<NodeSet> =
                    survivors.iter().map(|(_, s)| s.clone()).collect();
                let states = expand_all(g, &seeds)?;

                // (3) hub resolution; emptied communities dissolve
                let claims: Vec<NodeSet> =
                    states.into_iter().map(|s| s.into_members()).collect();
                let (resolved, unassigned) = resolve_memberships(g, &claims);
                for ((id, _), members) in survivors.into_iter().zip(resolved) {
                    if members.is_empty() {
                        events.push(LifecycleEvent {
                            t,
                            community: id,
                            kind: LifecycleKind::Dissolved,
                        });
                        self.record_death(id, t);
                    } else {
                        assembled.push((id, members));
                    }
                }

                // (4) leftovers become newborn communities
                for members in cluster_leftovers(g, &unassigned, seed)? {
                    let id = self.allocate();
                    events.push(LifecycleEvent {
                        t,
                        community: id,
                        kind: LifecycleKind::Born,
                    });
                    self.record_birth(id, t);
                    assembled.push((id, members));
                }
            }
        }

        // (5) leadership is recomputed fresh on every snapshot
        let mut communities = Vec::with_capacity(assembled.len());
        for (id, members) in assembled {
            let leaders = detect_leaders(g, &members)?;
            communities.push(Community {
                id,
                members,
                leaders,
            });
        }
        communities.sort_by_key(|c| c.id);

        let partition = Partition { t, communities };
        partition.validate_cover(g)?;
        for c in &partition.communities {
            let idx = self.timeline_index[&c.id];
            self.timelines[idx].steps.push(TimelineStep {
                t,
                members: c.members.clone(),
                leaders: c.leaders.nodes.clone(),
            });
        }

        self.prev = Some(partition.clone());
        self.expected_t = t + 1;
        Ok(StepOutcome { partition, events })
    }

    pub fn into_timelines(self) -> Vec<CommunityTimeline> {
        self.timelines
    }
}

/// Everything a full run produces.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub partitions: Vec<Partition>,
    pub events: Vec<LifecycleEvent>,
    pub timelines: Vec<CommunityTimeline>,
}

/// Bootstraps on the first snapshot, then steps through the rest.
/// Deterministic for a fixed seed, independent of the worker pool size.
pub fn run(net: &DynamicNetwork, seed: u64) -> Result<RunOutput> {
    let mut tracker = Tracker::new(seed);
    let mut partitions = Vec::with_capacity(net.span());
    let mut events = Vec::new();
    for g in net.snapshots() {
        let outcome = tracker.advance(g)?;
        partitions.push(outcome.partition);
        events.extend(outcome.events);
    }
    Ok(RunOutput {
        partitions,
        events,
        timelines: tracker.into_timelines(),
    })
}

/// SplitMix-style derivation of one per-step seed from the run seed.
fn step_seed(master: u64, t: usize) -> u64 {
    let mut z = master ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
