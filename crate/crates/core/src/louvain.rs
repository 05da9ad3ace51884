//! Modularity and greedy modularity clustering.
//!
//! One static method backs all three roles that need it: bootstrapping the
//! first snapshot, clustering leftover nodes into newborn communities, and
//! the independent per-snapshot baseline. It is the usual two-phase scheme:
//! seeded node-move sweeps until no single move helps, then aggregation,
//! repeated until quality stops improving.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{NodeSet, SnapshotGraph};

/// A disjoint covering partition plus its modularity.
#[derive(Debug, Clone)]
pub struct StaticPartition {
    /// Communities ordered by smallest member id.
    pub communities: Vec<NodeSet>,
    /// Newman modularity of `communities`; 0.0 on an edge-less graph.
    pub modularity: f64,
}

/// Newman modularity `Q = Σ_c [e_c/m − (d_c/(2m))²]`.
///
/// `partition` must cover the node set of `g` disjointly; a graph without
/// edges has no defined modularity.
pub fn modularity(g: &SnapshotGraph, partition: &[NodeSet]) -> Result<f64> {
    let mut seen = NodeSet::new();
    for c in partition {
        for &v in c {
            if !seen.insert(v) {
                return Err(Error::contract("partition communities overlap"));
            }
        }
    }
    if seen != g.node_set() {
        return Err(Error::contract("partition does not cover the node set"));
    }
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::UndefinedModularity);
    }
    let m = m as f64;
    let mut q = 0.0;
    for c in partition {
        let mut internal2 = 0usize; // intra-edge endpoints, i.e. 2·e_c
        let mut degree_sum = 0usize;
        for &v in c {
            internal2 += g.in_community_degree(v, c)?;
            degree_sum += g.degree(v)?;
        }
        let e_c = internal2 as f64 / 2.0;
        let d_c = degree_sum as f64;
        q += e_c / m - (d_c / (2.0 * m)).powi(2);
    }
    Ok(q)
}

/// Weighted multigraph for one aggregation level. Edge weights start at 1
/// on the input graph and stay integral through aggregation, so the scaled
/// move gains below are computed exactly.
struct LevelGraph {
    adj: Vec<Vec<(usize, f64)>>,
    /// Collapsed internal weight per node, counted once.
    self_w: Vec<f64>,
    /// Total edge weight m (self-loops counted once).
    total_w: f64,
}

impl LevelGraph {
    fn degree(&self, v: usize) -> f64 {
        self.adj[v].iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * self.self_w[v]
    }
}

/// One node-move phase. Returns the final community label per node and
/// whether any move was accepted.
fn move_phase(g: &LevelGraph, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = g.adj.len();
    let two_m = 2.0 * g.total_w;
    let degrees: Vec<f64> = (0..n).map(|v| g.degree(v)).collect();
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot = degrees.clone();
    let mut order: Vec<usize> = (0..n).collect();
    // scratch accumulator of edge weight toward each touched community
    let mut weight_to: Vec<f64> = vec![0.0; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut improved_ever = false;

    loop {
        let mut moved = false;
        order.shuffle(rng);
        for &v in &order {
            let c_old = comm[v];
            let k_v = degrees[v];
            tot[c_old] -= k_v;

            for &(w, wt) in &g.adj[v] {
                let c = comm[w];
                if weight_to[c] == 0.0 {
                    touched.push(c);
                }
                weight_to[c] += wt;
            }

            // scaled gain 2m·w(v→c) − k_v·tot(c); integral, hence exact
            let stay = two_m * weight_to[c_old] - k_v * tot[c_old];
            let mut best_c = c_old;
            let mut best_gain = stay;
            for &c in &touched {
                if c == c_old {
                    continue;
                }
                let gn = two_m * weight_to[c] - k_v * tot[c];
                if gn > best_gain {
                    best_gain = gn;
                    best_c = c;
                }
            }
            for &c in &touched {
                weight_to[c] = 0.0;
            }
            touched.clear();

            comm[v] = best_c;
            tot[best_c] += k_v;
            if best_c != c_old {
                moved = true;
                improved_ever = true;
            }
        }
        if !moved {
            break;
        }
    }
    (comm, improved_ever)
}

/// Collapses communities into single nodes, summing edge weights.
fn aggregate(g: &LevelGraph, comm: &[usize]) -> (LevelGraph, Vec<usize>) {
    let mut relabel: HashMap<usize, usize> = HashMap::new();
    let mut dense = Vec::new();
    for &c in comm {
        let next = relabel.len();
        let id = *relabel.entry(c).or_insert(next);
        dense.push(id);
    }
    let k = relabel.len();
    let mut self_w = vec![0.0; k];
    let mut cross: Vec<HashMap<usize, f64>> = vec![HashMap::new(); k];
    for (v, &cv) in dense.iter().enumerate() {
        self_w[cv] += g.self_w[v];
        for &(w, wt) in &g.adj[v] {
            let cw = dense[w];
            if cv == cw {
                if v < w {
                    self_w[cv] += wt;
                }
            } else {
                *cross[cv].entry(cw).or_insert(0.0) += wt;
            }
        }
    }
    let adj: Vec<Vec<(usize, f64)>> = cross
        .into_iter()
        .map(|row| {
            let mut edges: Vec<(usize, f64)> = row.into_iter().collect();
            edges.sort_by_key(|&(w, _)| w);
            edges
        })
        .collect();
    (
        LevelGraph {
            adj,
            self_w,
            total_w: g.total_w,
        },
        dense,
    )
}

/// Modularity of a level graph's singleton partition; equals the composed
/// partition's modularity on the original graph.
#[cfg(debug_assertions)]
fn level_singleton_q(g: &LevelGraph) -> f64 {
    let m = g.total_w;
    (0..g.adj.len())
        .map(|v| g.self_w[v] / m - (g.degree(v) / (2.0 * m)).powi(2))
        .sum()
}

/// Move-and-aggregate loop over a dense adjacency; returns the final
/// community label of every input node.
fn louvain_assign(adj: Vec<Vec<(usize, f64)>>, total_w: f64, seed: u64) -> Vec<usize> {
    let n = adj.len();
    let mut level = LevelGraph {
        adj,
        self_w: vec![0.0; n],
        total_w,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut position: Vec<usize> = (0..n).collect();
    #[cfg(debug_assertions)]
    let mut last_q = f64::NEG_INFINITY;

    loop {
        let (comm, improved) = move_phase(&level, &mut rng);
        if !improved {
            break;
        }
        let (next, dense) = aggregate(&level, &comm);
        for p in position.iter_mut() {
            *p = dense[*p];
        }
        level = next;

        #[cfg(debug_assertions)]
        {
            // quality must be non-decreasing level over level
            let q = level_singleton_q(&level);
            debug_assert!(q >= last_q - 1e-9, "modularity regressed: {q} < {last_q}");
            last_q = q;
        }

        if level.adj.len() == 1 {
            break;
        }
    }
    position
}

/// Groups nodes by assignment label, communities ordered by smallest
/// member id.
fn grouped(nodes: &[crate::graph::NodeId], position: &[usize]) -> Vec<NodeSet> {
    let mut groups: HashMap<usize, NodeSet> = HashMap::new();
    for (i, &v) in nodes.iter().enumerate() {
        groups.entry(position[i]).or_default().insert(v);
    }
    let mut communities: Vec<NodeSet> = groups.into_values().collect();
    communities.sort_by_key(|c| *c.first().expect("non-empty group"));
    communities
}

/// Greedy modularity clustering with a seeded node visit order.
///
/// The output partition always scores at least as well as the singleton
/// partition, and identical seeds give identical partitions. Edge-less
/// graphs fall back to all-singletons with modularity 0.0.
pub fn cluster_static(g: &SnapshotGraph, seed: u64) -> StaticPartition {
    let nodes: Vec<_> = g.nodes().collect();
    if nodes.is_empty() {
        return StaticPartition {
            communities: Vec::new(),
            modularity: 0.0,
        };
    }
    if g.edge_count() == 0 {
        return StaticPartition {
            communities: nodes.iter().map(|&v| NodeSet::from([v])).collect(),
            modularity: 0.0,
        };
    }

    let index: HashMap<_, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<(usize, f64)>> = nodes
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .expect("node from iteration")
                .iter()
                .map(|w| (index[w], 1.0))
                .collect()
        })
        .collect();
    let position = louvain_assign(adj, g.edge_count() as f64, seed);
    let communities = grouped(&nodes, &position);
    let q = modularity(g, &communities).expect("cover by construction");
    StaticPartition {
        communities,
        modularity: q,
    }
}

/// Clusters the subgraph induced by `unassigned`; isolated nodes become
/// singletons. The returned sets partition `unassigned`.
pub fn cluster_leftovers(
    g: &SnapshotGraph,
    unassigned: &NodeSet,
    seed: u64,
) -> Result<Vec<NodeSet>> {
    if unassigned.is_empty() {
        return Ok(Vec::new());
    }
    let nodes: Vec<_> = unassigned.iter().copied().collect();
    let index: HashMap<_, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut endpoints = 0usize;
    let mut adj: Vec<Vec<(usize, f64)>> = Vec::with_capacity(nodes.len());
    for &v in &nodes {
        let row: Vec<(usize, f64)> = g
            .neighbors(v)?
            .iter()
            .filter_map(|w| index.get(w).map(|&j| (j, 1.0)))
            .collect();
        endpoints += row.len();
        adj.push(row);
    }
    if endpoints == 0 {
        return Ok(nodes.iter().map(|&v| NodeSet::from([v])).collect());
    }
    let position = louvain_assign(adj, (endpoints / 2) as f64, seed);
    Ok(grouped(&nodes, &position))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::NodeId;
    use rand::{Rng, SeedableRng};

    fn nid(raw: u32) -> NodeId {
        NodeId::new(raw)
    }

    fn set(ids: &[u32]) -> NodeSet {
        ids.iter().map(|&i| nid(i)).collect()
    }

    fn complete(ids: &[u32]) -> Vec<(NodeId, NodeId)> {
        let mut edges = Vec::new();
        for (i, &u) in ids.iter().enumerate() {
            for &v in &ids[i + 1..] {
                edges.push((nid(u), nid(v)));
            }
        }
        edges
    }

    #[test]
    fn whole_graph_as_one_community_scores_zero() {
        let g = SnapshotGraph::from_edges(1, complete(&[0, 1, 2, 3]));
        let q = modularity(&g, &[g.node_set()]).unwrap();
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn two_disjoint_triangles_score_half() {
        let mut edges = complete(&[0, 1, 2]);
        edges.extend(complete(&[3, 4, 5]));
        let g = SnapshotGraph::from_edges(1, edges);
        let q = modularity(&g, &[set(&[0, 1, 2]), set(&[3, 4, 5])]).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn modularity_rejects_bad_partitions() {
        let g = SnapshotGraph::from_edges(1, [(nid(0), nid(1))]);
        assert!(modularity(&g, &[set(&[0])]).is_err()); // not a cover
        assert!(modularity(&g, &[set(&[0, 1]), set(&[1])]).is_err()); // overlap
        let mut b = SnapshotGraph::builder();
        b.add_node(nid(0));
        let lonely = b.build(1);
        assert!(matches!(
            modularity(&lonely, &[set(&[0])]),
            Err(Error::UndefinedModularity)
        ));
    }

    /// Independent pair-based recount:
    /// Q = (1/2m) Σ_uv [A_uv − d_u d_v / (2m)] δ(c_u, c_v).
    fn pairwise_modularity(g: &SnapshotGraph, partition: &[NodeSet]) -> f64 {
        let m2 = 2.0 * g.edge_count() as f64;
        let mut label: HashMap<NodeId, usize> = HashMap::new();
        for (i, c) in partition.iter().enumerate() {
            for &v in c {
                label.insert(v, i);
            }
        }
        let nodes: Vec<_> = g.nodes().collect();
        let mut q = 0.0;
        for &u in &nodes {
            for &v in &nodes {
                if label[&u] != label[&v] {
                    continue;
                }
                let a = if g.has_edge(u, v) { 1.0 } else { 0.0 };
                let du = g.degree(u).unwrap() as f64;
                let dv = g.degree(v).unwrap() as f64;
                q += a - du * dv / m2;
            }
        }
        q / m2
    }

    #[test]
    fn modularity_matches_pairwise_recount() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let n = 4 + rng.random_range(0..16u32);
            let mut b = SnapshotGraph::builder();
            for v in 0..n {
                b.add_node(nid(v));
            }
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.4) {
                        b.add_edge(nid(u), nid(v));
                    }
                }
            }
            let g = b.build(1);
            if g.edge_count() == 0 {
                continue;
            }
            let k = 1 + rng.random_range(0..4usize);
            let mut parts: Vec<NodeSet> = vec![NodeSet::new(); k];
            for v in g.nodes() {
                parts[rng.random_range(0..k)].insert(v);
            }
            let parts: Vec<NodeSet> = parts.into_iter().filter(|c| !c.is_empty()).collect();
            let fast = modularity(&g, &parts).unwrap();
            let slow = pairwise_modularity(&g, &parts);
            assert!((fast - slow).abs() < 1e-9);
            assert!((-0.5..1.0).contains(&fast));
        }
    }

    /// Enumerates every set partition of the given nodes (restricted growth
    /// strings) and returns one with maximum pairwise modularity.
    fn exhaustive_best_partition(g: &SnapshotGraph) -> Vec<NodeSet> {
        let nodes: Vec<_> = g.nodes().collect();
        let n = nodes.len();
        assert!(n <= 10, "Bell number blow-up");
        let mut best: Option<(f64, Vec<NodeSet>)> = None;
        let mut rgs = vec![0usize; n];
        loop {
            let k = rgs.iter().copied().max().unwrap() + 1;
            let mut parts = vec![NodeSet::new(); k];
            for (i, &b) in rgs.iter().enumerate() {
                parts[b].insert(nodes[i]);
            }
            let q = pairwise_modularity(g, &parts);
            if best.as_ref().map_or(true, |(bq, _)| q > *bq) {
                best = Some((q, parts));
            }
            // next restricted growth string
            let mut i = n;
            loop {
                if i == 1 {
                    return best.unwrap().1;
                }
                i -= 1;
                let cap = rgs[..i].iter().copied().max().unwrap() + 1;
                if rgs[i] < cap {
                    rgs[i] += 1;
                    for r in rgs.iter_mut().skip(i + 1) {
                        *r = 0;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn recovers_bridged_cliques_and_matches_exhaustive_optimum() {
        let mut edges = complete(&[0, 1, 2, 3, 4]);
        edges.extend(complete(&[5, 6, 7, 8, 9]));
        edges.push((nid(4), nid(5)));
        let g = SnapshotGraph::from_edges(1, edges);

        let best = exhaustive_best_partition(&g);
        let expected = vec![set(&[0, 1, 2, 3, 4]), set(&[5, 6, 7, 8, 9])];
        let mut best_sorted = best.clone();
        best_sorted.sort_by_key(|c| *c.first().unwrap());
        assert_eq!(best_sorted, expected);

        for seed in 0..5 {
            let part = cluster_static(&g, seed);
            assert_eq!(part.communities, expected, "seed {seed}");
        }
    }

    #[test]
    fn single_clique_is_one_community() {
        let g = SnapshotGraph::from_edges(1, complete(&[0, 1, 2, 3, 4, 5]));
        let part = cluster_static(&g, 0);
        assert_eq!(part.communities.len(), 1);
        assert!(part.modularity.abs() < 1e-12);
    }

    #[test]
    fn planted_partition_recovery() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        let blocks = 10usize;
        let size = 20usize;
        let mut b = SnapshotGraph::builder();
        let n = (blocks * size) as u32;
        for v in 0..n {
            b.add_node(nid(v));
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let same = u as usize / size == v as usize / size;
                let p = if same { 0.8 } else { 0.02 };
                if rng.random_bool(p) {
                    b.add_edge(nid(u), nid(v));
                }
            }
        }
        let g = b.build(1);
        let part = cluster_static(&g, 1);
        let mut detected = crate::metrics::LabeledPartition::new();
        for (i, c) in part.communities.iter().enumerate() {
            for &v in c {
                detected.insert(v, i as u64);
            }
        }
        let truth: crate::metrics::LabeledPartition = g
            .nodes()
            .map(|v| (v, (v.index() / size) as u64))
            .collect();
        let score = crate::metrics::nmi(&detected, &truth).unwrap();
        assert!(score >= 0.9, "nmi {score}");
    }

    #[test]
    fn output_is_a_disjoint_cover_and_beats_singletons() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for case in 0..20 {
            let n = 5 + rng.random_range(0..40u32);
            let mut b = SnapshotGraph::builder();
            for v in 0..n {
                b.add_node(nid(v));
            }
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.15) {
                        b.add_edge(nid(u), nid(v));
                    }
                }
            }
            let g = b.build(1);
            let part = cluster_static(&g, case);
            let mut seen = NodeSet::new();
            for c in &part.communities {
                assert!(seen.is_disjoint(c));
                seen.extend(c.iter().copied());
            }
            assert_eq!(seen, g.node_set());
            if g.edge_count() > 0 {
                let singles: Vec<NodeSet> =
                    g.nodes().map(|v| NodeSet::from([v])).collect();
                let q0 = modularity(&g, &singles).unwrap();
                assert!(part.modularity >= q0 - 1e-12);
            }
        }
    }

    #[test]
    fn deterministic_for_a_fixed_seed() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        let mut b = SnapshotGraph::builder();
        for u in 0..50u32 {
            for v in (u + 1)..50 {
                if rng.random_bool(0.1) {
                    b.add_edge(nid(u), nid(v));
                }
            }
        }
        let g = b.build(1);
        let a = cluster_static(&g, 9).communities;
        let b2 = cluster_static(&g, 9).communities;
        assert_eq!(a, b2);
    }

    #[test]
    fn leftovers_cluster_within_their_induced_subgraph() {
        // whole graph: K4 on 0..4, K4 on 4..8 sharing node 4, and leftovers
        // {8,9,10,11} forming a disconnected K4, plus isolated leftover 12
        let mut edges = complete(&[0, 1, 2, 3]);
        edges.extend(complete(&[8, 9, 10, 11]));
        edges.push((nid(3), nid(8))); // tie leftovers to the rest of g
        let mut b = SnapshotGraph::builder();
        for (u, v) in edges {
            b.add_edge(u, v);
        }
        b.add_node(nid(12));
        let g = b.build(1);

        assert_eq!(
            cluster_leftovers(&g, &NodeSet::new(), 0).unwrap(),
            Vec::<NodeSet>::new()
        );

        let unassigned = set(&[8, 9, 10, 11, 12]);
        let parts = cluster_leftovers(&g, &unassigned, 0).unwrap();
        let mut covered = NodeSet::new();
        for c in &parts {
            covered.extend(c.iter().copied());
        }
        assert_eq!(covered, unassigned);
        assert!(parts.contains(&set(&[8, 9, 10, 11])));
        assert!(parts.contains(&set(&[12])));
    }
}
