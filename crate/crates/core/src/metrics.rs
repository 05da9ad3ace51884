//! Evaluation measures: NMI, temporal smoothness, ground-truth similarity
//! and leader/follower persistence.

use std::collections::{BTreeMap, HashMap};

use crate::benchgen::GroundTruth;
use crate::error::{Error, Result};
use crate::graph::{DynamicNetwork, NodeId, NodeSet};
use crate::pipeline::Partition;

/// Node -> community label over some universe. Every node carries exactly
/// one label.
pub type LabeledPartition = BTreeMap<NodeId, u64>;

/// Normalized mutual information with arithmetic-mean normalization:
/// `2·I(A;B) / (H(A) + H(B))`, natural-log entropies over the label
/// contingency table.
///
/// 1.0 for identical partitions up to relabeling, 0.0 for independent
/// labelings. When both partitions are single-cluster (both entropies
/// zero) the value is defined as 1.0. Both arguments must label exactly
/// the same non-empty universe.
pub fn nmi(a: &LabeledPartition, b: &LabeledPartition) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::contract("nmi on an empty universe"));
    }
    if a.len() != b.len() || !a.keys().eq(b.keys()) {
        return Err(Error::contract("nmi arguments label different universes"));
    }
    let n = a.len() as f64;

    let mut counts_a: HashMap<u64, usize> = HashMap::new();
    let mut counts_b: HashMap<u64, usize> = HashMap::new();
    let mut joint: HashMap<(u64, u64), usize> = HashMap::new();
    for (node, &la) in a {
        let lb = b[node];
        *counts_a.entry(la).or_insert(0) += 1;
        *counts_b.entry(lb).or_insert(0) += 1;
        *joint.entry((la, lb)).or_insert(0) += 1;
    }

    let entropy = |counts: &HashMap<u64, usize>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let h_a = entropy(&counts_a);
    let h_b = entropy(&counts_b);
    if h_a == 0.0 && h_b == 0.0 {
        return Ok(1.0);
    }

    let mut info = 0.0;
    for (&(la, lb), &c) in &joint {
        let p_joint = c as f64 / n;
        let p_a = counts_a[&la] as f64 / n;
        let p_b = counts_b[&lb] as f64 / n;
        info += p_joint * (p_joint / (p_a * p_b)).ln();
    }

    Ok(2.0 * info / (h_a + h_b))
}

/// One entry of a per-timestep metric series. `value` is `None` when the
/// restricted universe was empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesPoint {
    pub t: usize,
    pub value: Option<f64>,
    pub universe: usize,
}

fn restricted(p: &Partition, universe: &NodeSet) -> LabeledPartition {
    p.labeled()
        .into_iter()
        .filter(|(v, _)| universe.contains(v))
        .collect()
}

/// NMI between each pair of consecutive partitions, restricted to the
/// nodes present in both. Entry `t` compares the partitions at `t` and
/// `t+1`.
pub fn smoothness_series(partitions: &[Partition]) -> Result<Vec<SeriesPoint>> {
    if partitions.len() < 2 {
        return Err(Error::contract("smoothness needs at least two partitions"));
    }
    let mut out = Vec::with_capacity(partitions.len() - 1);
    for pair in partitions.windows(2) {
        let (cur, next) = (&pair[0], &pair[1]);
        let shared: NodeSet = cur
            .node_set()
            .intersection(&next.node_set())
            .copied()
            .collect();
        let value = if shared.is_empty() {
            None
        } else {
            Some(nmi(&restricted(cur, &shared), &restricted(next, &shared))?)
        };
        out.push(SeriesPoint {
            t: cur.t,
            value,
            universe: shared.len(),
        });
    }
    Ok(out)
}

/// NMI of every partition against the ground truth of its timestep,
/// restricted to nodes both sides label.
pub fn ground_truth_series(
    partitions: &[Partition],
    truth: &GroundTruth,
) -> Result<Vec<SeriesPoint>> {
    let mut out = Vec::with_capacity(partitions.len());
    for p in partitions {
        let Some(step_truth) = truth.step(p.t) else {
            return Err(Error::contract(format!(
                "ground truth missing for timestep {}",
                p.t
            )));
        };
        let labels = p.labeled();
        let shared: NodeSet = labels
            .keys()
            .filter(|v| step_truth.contains_key(v))
            .copied()
            .collect();
        let value = if shared.is_empty() {
            None
        } else {
            let detected: LabeledPartition = labels
                .into_iter()
                .filter(|(v, _)| shared.contains(v))
                .collect();
            let reference: LabeledPartition = step_truth
                .iter()
                .filter(|(v, _)| shared.contains(v))
                .map(|(&v, &l)| (v, l))
                .collect();
            Some(nmi(&detected, &reference)?)
        };
        out.push(SeriesPoint {
            t: p.t,
            value,
            universe: shared.len(),
        });
    }
    Ok(out)
}

/// Survival ratios of leaders and followers into the next snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePoint {
    pub t: usize,
    /// `|leaders(t) ∩ V(t+1)| / |leaders(t)|`, `None` without leaders.
    pub leaders: Option<f64>,
    /// Same ratio over non-leader members.
    pub followers: Option<f64>,
    pub leader_count: usize,
    pub follower_count: usize,
}

/// Computes leader/follower persistence for every consecutive snapshot
/// pair. Partitions must align with the network's timesteps.
pub fn persistence_series(
    net: &DynamicNetwork,
    partitions: &[Partition],
) -> Result<Vec<PersistencePoint>> {
    for p in partitions {
        if net.snapshot(p.t).is_none() {
            return Err(Error::contract(format!(
                "partition timestep {} outside the network",
                p.t
            )));
        }
    }
    let mut out = Vec::new();
    for p in partitions {
        let Some(next) = net.snapshot(p.t + 1) else {
            continue;
        };
        let mut leaders = NodeSet::new();
        let mut followers = NodeSet::new();
        for c in &p.communities {
            leaders.extend(c.leaders.nodes.iter().copied());
            followers.extend(c.members.difference(&c.leaders.nodes).copied());
        }
        let ratio = |group: &NodeSet| {
            if group.is_empty() {
                None
            } else {
                let surviving = group.iter().filter(|&&v| next.contains(v)).count();
                Some(surviving as f64 / group.len() as f64)
            }
        };
        out.push(PersistencePoint {
            t: p.t,
            leaders: ratio(&leaders),
            followers: ratio(&followers),
            leader_count: leaders.len(),
            follower_count: followers.len(),
        });
    }
    Ok(out)
}
