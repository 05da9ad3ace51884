//! Maximal clique enumeration.
//!
//! Bron–Kerbosch with pivoting, driven by a degeneracy ordering of the
//! outer loop. The intended inputs are small ego networks, where the
//! ordering keeps the recursion shallow even on locally dense subgraphs.

use crate::error::Result;
use crate::graph::{NodeId, NodeSet, SnapshotGraph};

/// Fixed-capacity bitset over the dense local indices of one enumeration.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub(crate) fn empty(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn count_and(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }
}

/// Graph recompiled to dense indices with bitset adjacency rows.
struct DenseGraph {
    nodes: Vec<NodeId>,
    adj: Vec<Bits>,
}

impl DenseGraph {
    fn build(g: &SnapshotGraph) -> Self {
        let nodes: Vec<NodeId> = g.nodes().collect();
        let index: std::collections::HashMap<NodeId, usize> =
            nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Bits::empty(nodes.len()); nodes.len()];
        for (i, &v) in nodes.iter().enumerate() {
            for w in g.neighbors(v).expect("node from iteration") {
                adj[i].insert(index[w]);
            }
        }
        DenseGraph { nodes, adj }
    }
}

/// Degeneracy ordering by repeated minimum-degree removal
/// (bucket queue, O(n + m)).
fn degeneracy_order(adj: &[Bits]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(|b| b.count_and(b)).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for (v, &d) in degree.iter().enumerate() {
        buckets[d].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut floor = 0;
    while order.len() < n {
        let Some(v) = buckets[floor].pop() else {
            floor += 1;
            continue;
        };
        if removed[v] || degree[v] != floor {
            continue; // stale entry; the fresh one sits in a lower bucket
        }
        removed[v] = true;
        order.push(v);
        for w in adj[v].iter_ones() {
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
                if degree[w] < floor {
                    floor = degree[w];
                }
            }
        }
    }
    order
}

fn bron_kerbosch_pivot(
    adj: &[Bits],
    r: &mut Vec<usize>,
    p: Bits,
    x: Bits,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // pivot: vertex of P ∪ X covering the most of P
    let pivot = p
        .iter_ones()
        .chain(x.iter_ones())
        .max_by_key(|&u| adj[u].count_and(&p))
        .expect("P ∪ X non-empty");
    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = p
        .iter_ones()
        .filter(|&v| !adj[pivot].contains(v))
        .collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch_pivot(adj, r, p.and(&adj[v]), x.and(&adj[v]), out);
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// Degeneracy-ordered enumeration over a prebuilt dense adjacency
/// (symmetric rows, no self-bits). Returns cliques as local index lists.
pub(crate) fn maximal_cliques_dense(adj: &[Bits]) -> Vec<Vec<usize>> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let order = degeneracy_order(adj);
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut out = Vec::new();
    for &v in &order {
        let mut p = Bits::empty(n);
        let mut x = Bits::empty(n);
        for w in adj[v].iter_ones() {
            if position[w] > position[v] {
                p.insert(w);
            } else {
                x.insert(w);
            }
        }
        let mut r = vec![v];
        bron_kerbosch_pivot(adj, &mut r, p, x, &mut out);
    }
    out
}

/// Enumerates every maximal clique of `g`. Isolated nodes yield singleton
/// cliques; an empty graph yields an empty set. The result is sorted for
/// deterministic downstream iteration.
pub fn maximal_cliques(g: &SnapshotGraph) -> Vec<NodeSet> {
    let dense = DenseGraph::build(g);
    let mut cliques: Vec<NodeSet> = maximal_cliques_dense(&dense.adj)
        .into_iter()
        .map(|c| c.into_iter().map(|i| dense.nodes[i]).collect())
        .collect();
    cliques.sort();
    cliques
}

/// Maximal cliques of the ego network of `v` that contain `v`.
pub fn maximal_cliques_containing(g: &SnapshotGraph, v: NodeId) -> Result<Vec<NodeSet>> {
    let ego = g.ego_network(v)?;
    Ok(maximal_cliques(&ego)
        .into_iter()
        .filter(|c| c.contains(&v))
        .collect())
}
