//! Greedy local expansion around seed node sets.
//!
//! A community grows by repeatedly admitting the frontier node that
//! maximizes the index of connectivity, as long as the objective strictly
//! improves. Multi-claimed nodes are afterwards resolved to their most
//! similar community, leaving a disjoint partial partition.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, SnapshotGraph};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Index of connectivity `(intra − cut) / sqrt(intra + cut)`.
///
/// `intra` counts edges between members, `cut` counts edges leaving the
/// community. Errors when the community has no incident edges at all.
pub fn connectivity_index(intra: usize, cut: usize) -> Result<f64> {
    if intra + cut == 0 {
        return Err(Error::UndefinedObjective);
    }
    Ok(score(intra, cut))
}

/// Same ratio with the `0/0` case pinned to `0.0`, so expansion from an
/// isolated singleton seed terminates immediately.
fn score(intra: usize, cut: usize) -> f64 {
    if intra + cut == 0 {
        return 0.0;
    }
    (intra as f64 - cut as f64) / ((intra + cut) as f64).sqrt()
}

/// Edge counts after admitting one candidate, per the incremental update:
/// `intra' = intra + in`, `cut' = cut + degree − 2·in`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admission {
    pub intra: usize,
    pub cut: usize,
    pub score: f64,
}

/// Incremental rescoring of a candidate with the given total degree and
/// in-community degree. Errors when `in_degree > degree`.
pub fn admit(intra: usize, cut: usize, degree: usize, in_degree: usize) -> Result<Admission> {
    if in_degree > degree {
        return Err(Error::contract(
            "in-community degree exceeds total degree",
        ));
    }
    let intra = intra + in_degree;
    let cut = cut + degree - 2 * in_degree;
    Ok(Admission {
        intra,
        cut,
        score: score(intra, cut),
    })
}

/// A community mid-expansion: members plus cached edge counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityState {
    members: NodeSet,
    intra: usize,
    cut: usize,
}

impl CommunityState {
    /// Counts `intra` and `cut` from scratch over the seed-induced subgraph.
    pub fn seeded(g: &SnapshotGraph, seed: &NodeSet) -> Result<Self> {
        if seed.is_empty() {
            return Err(Error::contract("expansion seed is empty"));
        }
        let mut intra = 0;
        let mut cut = 0;
        for &v in seed {
            for w in g.neighbors(v)? {
                if seed.contains(w) {
                    intra += 1;
                } else {
                    cut += 1;
                }
            }
        }
        Ok(CommunityState {
            members: seed.clone(),
            intra: intra / 2,
            cut,
        })
    }

    pub fn members(&self) -> &NodeSet {
        &self.members
    }

    pub fn into_members(self) -> NodeSet {
        self.members
    }

    pub fn intra_edges(&self) -> usize {
        self.intra
    }

    pub fn cut_edges(&self) -> usize {
        self.cut
    }

    /// Current objective value (0.0 for an edge-less singleton).
    pub fn connectivity(&self) -> f64 {
        score(self.intra, self.cut)
    }
}

/// One accepted addition in an expansion trace.
#[derive(Debug, Clone, Copy)]
pub struct ExpansionStep {
    pub added: NodeId,
    pub intra: usize,
    pub cut: usize,
    pub score: f64,
}

/// Grows a community around `seed`, admitting at each round the frontier
/// node with the best incremental score, while the score strictly improves.
/// Ties break toward higher in-community degree, then smaller node id.
pub fn expand(g: &SnapshotGraph, seed: &NodeSet) -> Result<CommunityState> {
    Ok(expand_traced(g, seed)?.0)
}

/// [`expand`] plus the per-step trace, for oracle checks on the incremental
/// edge counts.
pub fn expand_traced(
    g: &SnapshotGraph,
    seed: &NodeSet,
) -> Result<(CommunityState, Vec<ExpansionStep>)> {
    let seeded = CommunityState::seeded(g, seed)?;
    let mut members: HashSet<NodeId> = seed.iter().copied().collect();
    let (mut intra, mut cut) = (seeded.intra, seeded.cut);
    let mut trace = Vec::new();

    // frontier candidate -> (cached in-community degree, total degree);
    // in-degrees are maintained incrementally as members join.
    let mut frontier: HashMap<NodeId, (usize, usize)> = HashMap::new();
    for &v in seed {
        for &w in g.neighbors(v)? {
            if !members.contains(&w) {
                let entry = frontier.entry(w).or_insert((0, g.degree(w)?));
                entry.0 += 1;
            }
        }
    }

    loop {
        let current = score(intra, cut);
        let mut best: Option<(NodeId, usize, Admission)> = None;
        // full rescan of cached counts; cheap because in-degrees are cached
        for (&cand, &(in_deg, deg)) in &frontier {
            let adm = admit(intra, cut, deg, in_deg)?;
            let better = match &best {
                None => true,
                Some((bn, bin, badm)) => {
                    adm.score > badm.score
                        || (adm.score == badm.score
                            && (in_deg > *bin || (in_deg == *bin && cand < *bn)))
                }
            };
            if better {
                best = Some((cand, in_deg, adm));
            }
        }
        let Some((node, _, adm)) = best else { break };
        if adm.score <= current {
            break;
        }
        debug_assert!(adm.score > current, "objective must strictly improve");
        members.insert(node);
        intra = adm.intra;
        cut = adm.cut;
        frontier.remove(&node);
        for &w in g.neighbors(node)? {
            if !members.contains(&w) {
                let entry = frontier.entry(w).or_insert((0, g.degree(w)?));
                entry.0 += 1;
            }
        }
        trace.push(ExpansionStep {
            added: node,
            intra,
            cut,
            score: adm.score,
        });
    }
    Ok((
        CommunityState {
            members: members.into_iter().collect(),
            intra,
            cut,
        },
        trace,
    ))
}

/// Expands every seed independently over the shared snapshot, in input
/// order. Runs the seeds on the rayon pool when the `parallel` feature is
/// enabled; results are identical either way.
pub fn expand_all(g: &SnapshotGraph, seeds: &[NodeSet]) -> Result<Vec<CommunityState>> {
    #[cfg(feature = "parallel")]
    {
        seeds.par_iter().map(|s| expand(g, s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        expand_all_sequential(g, seeds)
    }
}

/// Sequential expansion over all seeds, always available for comparison
/// benchmarks and as the fallback path.
pub fn expand_all_sequential(g: &SnapshotGraph, seeds: &[NodeSet]) -> Result<Vec<CommunityState>> {
    seeds.iter().map(|s| expand(g, s)).collect()
}

/// Neighborhood similarity between node `u` and a community:
/// `|N(u) ∩ members| / |N(u) ∪ members|`.
pub fn hub_similarity(g: &SnapshotGraph, u: NodeId, members: &NodeSet) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::contract("hub similarity against an empty community"));
    }
    let (inter, union) = similarity_counts(g, u, members)?;
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}

fn similarity_counts(g: &SnapshotGraph, u: NodeId, members: &NodeSet) -> Result<(usize, usize)> {
    let neighbors = g.neighbors(u)?;
    let inter = neighbors.iter().filter(|v| members.contains(v)).count();
    let union = neighbors.len() + members.len() - inter;
    Ok((inter, union))
}

/// Assigns every multi-claimed node to its most similar claimant and
/// returns the now-disjoint communities (aligned with the input; possibly
/// empty) plus the nodes no expansion reached.
///
/// Similarity is evaluated with the node itself excluded from the member
/// set. Ties break toward the larger community, then the earlier claim
/// (claims arrive in ascending community-id order).
pub fn resolve_memberships(
    g: &SnapshotGraph,
    claims: &[NodeSet],
) -> (Vec<NodeSet>, NodeSet) {
    let mut claimed_by: HashMap<NodeId, Vec<usize>> = HashMap::new();
    for (i, c) in claims.iter().enumerate() {
        for &v in c {
            claimed_by.entry(v).or_default().push(i);
        }
    }

    let mut resolved: Vec<NodeSet> = claims.to_vec();
    for (&node, owners) in &claimed_by {
        if owners.len() < 2 {
            continue;
        }
        // argmax of |N∩(C\{u})| / |N∪(C\{u})| via exact cross-multiplication
        let mut best = owners[0];
        let mut best_ratio = (0usize, 1usize);
        let mut first = true;
        for &i in owners {
            let mut members = claims[i].clone();
            members.remove(&node);
            let (inter, union) = similarity_counts(g, node, &members)
                .expect("claims are subsets of the snapshot");
            let ratio = if union == 0 { (0, 1) } else { (inter, union) };
            let better = if first {
                true
            } else {
                let lhs = (ratio.0 as u64) * (best_ratio.1 as u64);
                let rhs = (best_ratio.0 as u64) * (ratio.1 as u64);
                lhs > rhs
                    || (lhs == rhs
                        && (claims[i].len() > claims[best].len()
                            || (claims[i].len() == claims[best].len() && i < best)))
            };
            if better {
                best = i;
                best_ratio = ratio;
                first = false;
            }
        }
        for &i in owners {
            if i != best {
                resolved[i].remove(&node);
            }
        }
    }

    let unassigned: NodeSet = g
        .nodes()
        .filter(|v| !claimed_by.contains_key(v))
        .collect();
    (resolved, unassigned)
}
