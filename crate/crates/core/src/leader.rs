//! Community leader detection.
//!
//! The leaders of a community are the nodes shared by every maximal clique
//! (within the community) that contains the community's best-connected
//! member. They form the cohesive core that seeds the next timestep's
//! expansion.

use crate::clique::{maximal_cliques_dense, Bits};
use crate::error::{Error, Result};
use crate::graph::{NodeId, NodeSet, SnapshotGraph};

/// A community's leader core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderSet {
    /// Member with the maximum in-community degree (smallest id on ties).
    pub anchor: NodeId,
    /// Intersection of all maximal cliques containing the anchor, taken in
    /// the community-induced subgraph. Always contains the anchor.
    pub nodes: NodeSet,
}

/// Computes the leader set of `members` on `g`.
///
/// The clique search runs on the subgraph induced by `members`, so leaders
/// never reach outside their community; within that subgraph only the
/// anchor's ego network is enumerated.
pub fn detect_leaders(g: &SnapshotGraph, members: &NodeSet) -> Result<LeaderSet> {
    if members.is_empty() {
        return Err(Error::contract("detect_leaders on an empty member set"));
    }
    // tiny communities have closed-form leader sets
    if members.len() == 1 {
        let anchor = *members.first().expect("non-empty");
        if !g.contains(anchor) {
            return Err(Error::UnknownNode(anchor));
        }
        return Ok(LeaderSet {
            anchor,
            nodes: members.clone(),
        });
    }
    if members.len() == 2 {
        let mut it = members.iter();
        let (a, b) = (*it.next().expect("two"), *it.next().expect("two"));
        if !g.contains(a) {
            return Err(Error::UnknownNode(a));
        }
        if !g.contains(b) {
            return Err(Error::UnknownNode(b));
        }
        let connected = g.has_edge(a, b);
        return Ok(LeaderSet {
            anchor: a,
            nodes: if connected {
                members.clone()
            } else {
                NodeSet::from([a])
            },
        });
    }

    let mut anchor = None;
    let mut best = 0usize;
    for &v in members {
        let d = g.in_community_degree(v, members)?;
        if anchor.is_none() || d > best {
            anchor = Some(v);
            best = d;
        }
    }
    let anchor = anchor.expect("non-empty members");

    // dense ego of the anchor inside the community; index 0 is the anchor
    let mut ego: Vec<NodeId> = vec![anchor];
    ego.extend(
        g.neighbors(anchor)?
            .iter()
            .filter(|v| members.contains(v))
            .copied(),
    );
    let k = ego.len();
    let mut adj = vec![Bits::empty(k); k];
    for i in 1..k {
        adj[0].insert(i);
        adj[i].insert(0);
    }
    for i in 1..k {
        let nbrs = g.neighbors(ego[i])?;
        for (j, w) in ego.iter().enumerate().skip(i + 1) {
            if nbrs.binary_search(w).is_ok() {
                adj[i].insert(j);
                adj[j].insert(i);
            }
        }
    }

    // intersect the maximal cliques containing the anchor
    let mut shared: Option<Vec<bool>> = None;
    for clique in maximal_cliques_dense(&adj) {
        if !clique.contains(&0) {
            continue;
        }
        match shared.as_mut() {
            None => {
                let mut mask = vec![false; k];
                for i in clique {
                    mask[i] = true;
                }
                shared = Some(mask);
            }
            Some(mask) => {
                let mut keep = vec![false; k];
                for i in clique {
                    keep[i] = mask[i];
                }
                *mask = keep;
            }
        }
    }
    let mask = shared.expect("anchor always lies in one maximal clique");
    let nodes: NodeSet = mask
        .iter()
        .enumerate()
        .filter(|&(_, &kept)| kept)
        .map(|(i, _)| ego[i])
        .collect();
    debug_assert!(nodes.contains(&anchor));
    Ok(LeaderSet { anchor, nodes })
}
