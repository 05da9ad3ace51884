//! Snapshot graphs and dynamic networks.
//!
//! A dynamic network is an ordered sequence of immutable snapshot graphs,
//! one per timestep. Node identities are stable across snapshots: external
//! string labels are interned once per network, and the same label always
//! maps to the same [`NodeId`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense, stable node identifier. The original label lives in the
/// network's [`SymbolTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(u32);

impl NodeId {
    pub fn new(raw: u32) -> Self {
        NodeId(raw)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Ordered node set; ordering keeps every downstream iteration deterministic.
pub type NodeSet = BTreeSet<NodeId>;

/// Bidirectional label <-> id map. Interning is append-only, so ids handed
/// out earlier stay valid when more labels arrive.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> Option<&str> {
        self.labels.get(id.index()).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// One timestamped interaction before windowing. Labels are raw strings;
/// interning happens at ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalEdgeRecord {
    pub src: String,
    pub dst: String,
    pub timestamp: i64,
}

/// Immutable undirected simple graph for one timestep.
///
/// Invariants: no self-loops, no parallel edges, symmetric sorted adjacency,
/// edge count equals half the degree sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotGraph {
    timestep: usize,
    adj: BTreeMap<NodeId, Vec<NodeId>>,
    edge_count: usize,
}

impl SnapshotGraph {
    pub fn builder() -> SnapshotGraphBuilder {
        SnapshotGraphBuilder::new()
    }

    /// Convenience constructor for tests and generators. Self-loops and
    /// duplicate edges are ignored.
    pub fn from_edges(timestep: usize, edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        let mut b = Self::builder();
        for (u, v) in edges {
            b.add_edge(u, v);
        }
        b.build(timestep)
    }

    /// 1-based position of this snapshot in its network.
    pub fn timestep(&self) -> usize {
        self.timestep
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.adj.contains_key(&v)
    }

    /// Nodes in ascending id order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.adj.keys().copied()
    }

    pub fn node_set(&self) -> NodeSet {
        self.adj.keys().copied().collect()
    }

    /// Sorted neighbor slice of `v`.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.adj
            .get(&v)
            .map(|n| n.as_slice())
            .ok_or(Error::UnknownNode(v))
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        match self.adj.get(&u) {
            Some(n) => n.binary_search(&v).is_ok(),
            None => false,
        }
    }

    /// Number of neighbors of `v` inside `members`. `v` itself never
    /// counts (no self-loops).
    pub fn in_community_degree(&self, v: NodeId, members: &NodeSet) -> Result<usize> {
        Ok(self
            .neighbors(v)?
            .iter()
            .filter(|n| members.contains(n))
            .count())
    }

    /// Edges as `(u, v)` pairs with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `{v} ∪ N(v)`.
    pub fn ego_network(&self, v: NodeId) -> Result<SnapshotGraph> {
        let mut set: NodeSet = self.neighbors(v)?.iter().copied().collect();
        set.insert(v);
        Ok(self.induced(&set))
    }

    /// Induced subgraph on `set`. Nodes of `set` absent from the snapshot
    /// are silently skipped; present nodes are kept even when isolated
    /// within `set`.
    pub fn induced(&self, set: &NodeSet) -> SnapshotGraph {
        let mut b = Self::builder();
        for &v in set {
            if let Some(nbrs) = self.adj.get(&v) {
                b.add_node(v);
                for &w in nbrs {
                    if v < w && set.contains(&w) {
                        b.add_edge(v, w);
                    }
                }
            }
        }
        b.build(self.timestep)
    }
}

/// Accumulates nodes and edges, then freezes them into a [`SnapshotGraph`].
#[derive(Debug, Default)]
pub struct SnapshotGraphBuilder {
    adj: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

impl SnapshotGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a node, possibly isolated.
    pub fn add_node(&mut self, v: NodeId) {
        self.adj.entry(v).or_default();
    }

    /// Adds an undirected edge. Self-loops are ignored; duplicates collapse.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) {
        if u == v {
            return;
        }
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn build(self, timestep: usize) -> SnapshotGraph {
        let mut edge_count = 0;
        let adj: BTreeMap<NodeId, Vec<NodeId>> = self
            .adj
            .into_iter()
            .map(|(v, nbrs)| {
                edge_count += nbrs.len();
                (v, nbrs.into_iter().collect())
            })
            .collect();
        SnapshotGraph {
            timestep,
            adj,
            edge_count: edge_count / 2,
        }
    }
}

/// Ordered sequence of snapshots sharing one symbol table.
#[derive(Debug, Clone)]
pub struct DynamicNetwork {
    symbols: SymbolTable,
    snapshots: Vec<SnapshotGraph>,
}

impl DynamicNetwork {
    /// Assembles a network, renumbering snapshot timesteps to 1..=Δ in the
    /// given order.
    pub fn from_parts(symbols: SymbolTable, snapshots: Vec<SnapshotGraph>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let snapshots = snapshots
            .into_iter()
            .enumerate()
            .map(|(i, mut g)| {
                g.timestep = i + 1;
                g
            })
            .collect();
        Ok(DynamicNetwork { symbols, snapshots })
    }

    /// Number of snapshots (Δ).
    pub fn span(&self) -> usize {
        self.snapshots.len()
    }

    /// 1-based snapshot lookup.
    pub fn snapshot(&self, t: usize) -> Option<&SnapshotGraph> {
        if t == 0 {
            return None;
        }
        self.snapshots.get(t - 1)
    }

    pub fn snapshots(&self) -> &[SnapshotGraph] {
        &self.snapshots
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    /// Mutable access for appending labels (reading auxiliary files that
    /// mention nodes outside the edge set). Interning is append-only, so
    /// existing snapshots stay valid.
    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        &mut self.symbols
    }
}

/// Outcome of [`ingest_edge_stream`]: the network plus counters for records
/// dropped on the way in.
#[derive(Debug)]
pub struct Ingest {
    pub network: DynamicNetwork,
    pub dropped_self_loops: usize,
}

/// Aggregates timestamped records into fixed-width, half-open windows
/// aligned at the earliest timestamp. Snapshot k (1-based) holds the union
/// of all edges whose timestamp falls in window k; duplicates collapse.
/// A node is present in a snapshot iff it has at least one incident edge
/// in that window. Windows without edges yield empty snapshots so the
/// timeline stays aligned.
pub fn ingest_edge_stream(records: &[TemporalEdgeRecord], window: u64) -> Result<Ingest> {
    if window == 0 {
        return Err(Error::contract("window must be positive"));
    }
    let mut symbols = SymbolTable::new();
    let mut kept: Vec<(NodeId, NodeId, i64)> = Vec::with_capacity(records.len());
    let mut dropped_self_loops = 0;
    for r in records {
        let src = symbols.intern(&r.src);
        let dst = symbols.intern(&r.dst);
        if src == dst {
            dropped_self_loops += 1;
            continue;
        }
        kept.push((src, dst, r.timestamp));
    }
    if kept.is_empty() {
        return Err(Error::EmptyNetwork);
    }

    let t0 = kept.iter().map(|&(_, _, ts)| ts).min().expect("non-empty");
    let t_max = kept.iter().map(|&(_, _, ts)| ts).max().expect("non-empty");
    let span = (t_max - t0) as u64;
    let windows = (span / window) as usize + 1;

    let mut builders: Vec<SnapshotGraphBuilder> =
        (0..windows).map(|_| SnapshotGraphBuilder::new()).collect();
    for (src, dst, ts) in kept {
        let k = ((ts - t0) as u64 / window) as usize;
        builders[k].add_edge(src, dst);
    }
    let snapshots = builders
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.build(i + 1))
        .collect();

    Ok(Ingest {
        network: DynamicNetwork::from_parts(symbols, snapshots)?,
        dropped_self_loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn nid(raw: u32) -> NodeId {
        NodeId::new(raw)
    }

    fn rec(src: &str, dst: &str, ts: i64) -> TemporalEdgeRecord {
        TemporalEdgeRecord {
            src: src.into(),
            dst: dst.into(),
            timestamp: ts,
        }
    }

    #[test]
    fn windowing_splits_on_boundaries() {
        let records = vec![rec("a", "b", 0), rec("a", "b", 10), rec("b", "c", 90)];
        let ingest = ingest_edge_stream(&records, 60).unwrap();
        let net = ingest.network;
        assert_eq!(net.span(), 2);
        let s = net.symbols();
        let (a, b, c) = (
            s.get("a").unwrap(),
            s.get("b").unwrap(),
            s.get("c").unwrap(),
        );
        let g1 = net.snapshot(1).unwrap();
        assert_eq!(g1.edge_count(), 1);
        assert!(g1.has_edge(a, b));
        assert!(!g1.contains(c));
        let g2 = net.snapshot(2).unwrap();
        assert_eq!(g2.edge_count(), 1);
        assert!(g2.has_edge(b, c));
        assert!(!g2.contains(a));
    }

    #[test]
    fn single_edge_any_window() {
        let ingest = ingest_edge_stream(&[rec("x", "y", 42)], 1000).unwrap();
        assert_eq!(ingest.network.span(), 1);
        assert_eq!(ingest.network.snapshot(1).unwrap().edge_count(), 1);
    }

    #[test]
    fn self_loops_dropped_with_counter() {
        let records = vec![rec("a", "a", 0), rec("a", "b", 1)];
        let ingest = ingest_edge_stream(&records, 10).unwrap();
        assert_eq!(ingest.dropped_self_loops, 1);
        assert_eq!(ingest.network.snapshot(1).unwrap().edge_count(), 1);
    }

    #[test]
    fn all_records_filtered_is_an_error() {
        let records = vec![rec("a", "a", 0)];
        assert!(matches!(
            ingest_edge_stream(&records, 10),
            Err(Error::EmptyNetwork)
        ));
    }

    #[test]
    fn desk_scale_call_log_snapshot_count() {
        // 10 months of ticks sliced by 24h windows over 400 labels: the
        // snapshot count must equal floor(span/window) + 1.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let day = 86_400i64;
        let horizon = 300 * day;
        let mut records = Vec::new();
        for _ in 0..9834 {
            let a = rng.random_range(0..400u32);
            let mut b = rng.random_range(0..400u32);
            while b == a {
                b = rng.random_range(0..400u32);
            }
            records.push(rec(&a.to_string(), &b.to_string(), rng.random_range(0..horizon)));
        }
        let ingest = ingest_edge_stream(&records, day as u64).unwrap();
        let span = records.iter().map(|r| r.timestamp).max().unwrap()
            - records.iter().map(|r| r.timestamp).min().unwrap();
        let expected = (span as u64 / day as u64) as usize + 1;
        assert_eq!(ingest.network.span(), expected);
        assert!(ingest.network.symbols().len() <= 400);
        // every node of every snapshot has at least one incident edge
        for g in ingest.network.snapshots() {
            for v in g.nodes() {
                assert!(g.degree(v).unwrap() >= 1);
            }
        }
    }

    #[test]
    fn ingest_is_deterministic() {
        let records: Vec<_> = (0..200)
            .map(|i| rec(&format!("n{}", i % 40), &format!("n{}", (i * 7) % 40), i))
            .collect();
        let a = ingest_edge_stream(&records, 50).unwrap().network;
        let b = ingest_edge_stream(&records, 50).unwrap().network;
        assert_eq!(a.span(), b.span());
        for (ga, gb) in a.snapshots().iter().zip(b.snapshots()) {
            assert_eq!(ga, gb);
        }
    }

    #[test]
    fn degree_cases() {
        let mut b = SnapshotGraph::builder();
        b.add_node(nid(9)); // isolated
        for leaf in 1..=4 {
            b.add_edge(nid(0), nid(leaf));
        }
        let g = b.build(1);
        assert_eq!(g.degree(nid(9)).unwrap(), 0);
        assert_eq!(g.degree(nid(0)).unwrap(), 4);
        assert!(matches!(g.degree(nid(77)), Err(Error::UnknownNode(_))));
    }

    #[test]
    fn degree_matches_edge_list_recount() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut edges = Vec::new();
        for u in 0..30u32 {
            for v in (u + 1)..30 {
                if rng.random_bool(0.2) {
                    edges.push((nid(u), nid(v)));
                }
            }
        }
        let g = SnapshotGraph::from_edges(1, edges.iter().copied());
        for v in g.nodes() {
            let brute = edges.iter().filter(|&&(a, b)| a == v || b == v).count();
            assert_eq!(g.degree(v).unwrap(), brute);
        }
        let degree_sum: usize = g.nodes().map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn in_community_degree_cases() {
        // K4 on 0..4
        let mut edges = Vec::new();
        for u in 0..4u32 {
            for v in (u + 1)..4 {
                edges.push((nid(u), nid(v)));
            }
        }
        let g = SnapshotGraph::from_edges(1, edges);
        let whole: NodeSet = g.node_set();
        assert_eq!(
            g.in_community_degree(nid(0), &whole).unwrap(),
            g.degree(nid(0)).unwrap()
        );
        let only_self: NodeSet = [nid(0)].into_iter().collect();
        assert_eq!(g.in_community_degree(nid(0), &only_self).unwrap(), 0);
        let three: NodeSet = [nid(0), nid(1), nid(2)].into_iter().collect();
        assert_eq!(g.in_community_degree(nid(0), &three).unwrap(), 2);
        for v in g.nodes() {
            assert!(
                g.in_community_degree(v, &three).unwrap() <= g.degree(v).unwrap()
            );
        }
    }

    #[test]
    fn ego_network_examples() {
        let g = SnapshotGraph::from_edges(1, [(nid(0), nid(1)), (nid(1), nid(2)), (nid(0), nid(2))]);
        let ego = g.ego_network(nid(0)).unwrap();
        assert_eq!(ego.node_count(), 3);
        assert_eq!(ego.edge_count(), 3);

        let mut b = SnapshotGraph::builder();
        for leaf in 1..=5 {
            b.add_edge(nid(0), nid(leaf));
        }
        let star = b.build(1);
        let ego = star.ego_network(nid(0)).unwrap();
        assert_eq!(ego.node_count(), 6);
        assert_eq!(ego.edge_count(), 5);
        let leaf_ego = star.ego_network(nid(3)).unwrap();
        assert_eq!(leaf_ego.node_count(), 2);
        assert_eq!(leaf_ego.edge_count(), 1);
    }

    #[test]
    fn ego_network_matches_bruteforce_induction() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for case in 0..20 {
            let n = 10 + case % 30;
            let mut edges = Vec::new();
            for u in 0..n as u32 {
                for v in (u + 1)..n as u32 {
                    if rng.random_bool(0.15) {
                        edges.push((nid(u), nid(v)));
                    }
                }
            }
            let g = SnapshotGraph::from_edges(1, edges.iter().copied());
            for v in g.nodes() {
                let ego = g.ego_network(v).unwrap();
                let mut closed: NodeSet = g.neighbors(v).unwrap().iter().copied().collect();
                closed.insert(v);
                assert_eq!(ego.node_set(), closed);
                let expected: Vec<_> = edges
                    .iter()
                    .filter(|(a, b)| closed.contains(a) && closed.contains(b))
                    .copied()
                    .collect();
                assert_eq!(ego.edge_count(), expected.len());
                for (a, b) in expected {
                    assert!(ego.has_edge(a, b));
                }
            }
        }
    }
}
