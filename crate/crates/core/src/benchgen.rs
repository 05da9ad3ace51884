//! Synthetic dynamic networks with embedded ground truth.
//!
//! Two families:
//!
//! * a Markovian-evolution benchmark: static planted communities over a
//!   fixed random background, with intra-community edges dying at rate `p`
//!   and reappearing at the rate that keeps the intra density stationary;
//! * event benchmarks: a planted partition with power-law community sizes
//!   whose ground truth is rewritten each step by one configured event
//!   kind (intermittent hiding, expansion/contraction, birth/death,
//!   merge/split), plus a low level of membership churn in which weakly
//!   attached members drift out of the network and newcomers take their
//!   place. Every member carries a degree weight drawn from a power law,
//!   and intra-community pairs connect with probability proportional to
//!   the weight product, giving each community the few well-connected
//!   hubs and many weakly attached members that real interaction networks
//!   show. Edge state is latent and persistent: a node pair keeps its
//!   sampled edge until its sampling probability changes (a membership
//!   move, merge, split or birth), when it is resampled. The events and
//!   the churn therefore carry all of the temporal signal.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DynamicNetwork, NodeId, SnapshotGraph, SnapshotGraphBuilder, SymbolTable};
use crate::metrics::LabeledPartition;

/// Per-timestep node -> community label map, defined for every node
/// present in the corresponding snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    steps: Vec<LabeledPartition>,
}

impl GroundTruth {
    pub fn new(steps: Vec<LabeledPartition>) -> Self {
        GroundTruth { steps }
    }

    /// 1-based lookup, aligned with snapshot timesteps.
    pub fn step(&self, t: usize) -> Option<&LabeledPartition> {
        if t == 0 {
            return None;
        }
        self.steps.get(t - 1)
    }

    pub fn span(&self) -> usize {
        self.steps.len()
    }

    pub fn steps(&self) -> &[LabeledPartition] {
        &self.steps
    }
}

/// A generated benchmark instance.
#[derive(Debug)]
pub struct Generated {
    pub network: DynamicNetwork,
    pub truth: GroundTruth,
    /// Events that could not be applied (for example splitting a
    /// singleton); counted instead of failing the run.
    pub skipped_events: usize,
}

/// Parameters of the Markovian-evolution benchmark.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KawadiaConfig {
    /// Total node count; must divide evenly into `communities`.
    pub nodes: usize,
    /// Number of equal-size planted communities.
    pub communities: usize,
    /// Existence probability of each background (inter-community) edge;
    /// background edges are sampled once and held fixed.
    pub background_p: f64,
    /// Initial (and stationary) intra-community edge probability.
    pub intra_p: f64,
    /// Per-step death probability of a present intra-community edge.
    pub death_p: f64,
    /// Number of snapshots.
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
}

impl KawadiaConfig {
    /// Per-step birth probability of an absent intra-community pair,
    /// `p·p_c/(1−p_c)`, the rate that preserves the initial density.
    pub fn birth_p(&self) -> f64 {
        self.death_p * self.intra_p / (1.0 - self.intra_p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.communities == 0 || self.nodes == 0 || self.steps == 0 {
            return Err(Error::Config("counts must be positive".into()));
        }
        if self.nodes % self.communities != 0 {
            return Err(Error::Config(
                "node count must be divisible by the community count".into(),
            ));
        }
        if !(0.0 < self.intra_p && self.intra_p < 1.0) {
            return Err(Error::Config("intra_p must lie in (0, 1)".into()));
        }
        if !(0.0..=1.0).contains(&self.death_p) {
            return Err(Error::Config("death_p must lie in [0, 1]".into()));
        }
        if !(0.0..1.0).contains(&self.background_p) {
            return Err(Error::Config("background_p must lie in [0, 1)".into()));
        }
        if self.birth_p() > 1.0 {
            return Err(Error::Config(format!(
                "derived birth probability {} exceeds 1",
                self.birth_p()
            )));
        }
        Ok(())
    }
}

/// Generates the Markovian benchmark: snapshot 1 draws each intra pair
/// with `intra_p` on top of a fixed inter-community background; every
/// following snapshot evolves only the intra pairs. Ground truth is the
/// constant block assignment, restricted per step to present nodes.
pub fn generate_kawadia(cfg: &KawadiaConfig) -> Result<Generated> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let block_size = cfg.nodes / cfg.communities;
    let block_of = |v: usize| (v / block_size) as u64;

    let mut symbols = SymbolTable::new();
    for v in 0..cfg.nodes {
        symbols.intern(&v.to_string());
    }

    let mut background: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..cfg.nodes {
        for v in (u + 1)..cfg.nodes {
            if block_of(u) != block_of(v) && rng.random_bool(cfg.background_p) {
                background.push((NodeId::new(u as u32), NodeId::new(v as u32)));
            }
        }
    }

    let mut intra_pairs: Vec<(NodeId, NodeId)> = Vec::new();
    for u in 0..cfg.nodes {
        for v in (u + 1)..cfg.nodes {
            if block_of(u) == block_of(v) {
                intra_pairs.push((NodeId::new(u as u32), NodeId::new(v as u32)));
            }
        }
    }
    let mut present: Vec<bool> = intra_pairs
        .iter()
        .map(|_| rng.random_bool(cfg.intra_p))
        .collect();

    let birth_p = cfg.birth_p();
    let mut snapshots = Vec::with_capacity(cfg.steps);
    let mut truth_steps = Vec::with_capacity(cfg.steps);
    for t in 1..=cfg.steps {
        if t > 1 {
            for slot in present.iter_mut() {
                *slot = if *slot {
                    !rng.random_bool(cfg.death_p)
                } else {
                    rng.random_bool(birth_p)
                };
            }
        }
        let mut b = SnapshotGraphBuilder::new();
        for &(u, v) in &background {
            b.add_edge(u, v);
        }
        for (&(u, v), &on) in intra_pairs.iter().zip(&present) {
            if on {
                b.add_edge(u, v);
            }
        }
        let g = b.build(t);
        let labels: LabeledPartition = g.nodes().map(|v| (v, block_of(v.index()))).collect();
        truth_steps.push(labels);
        snapshots.push(g);
    }

    Ok(Generated {
        network: DynamicNetwork::from_parts(symbols, snapshots)?,
        truth: GroundTruth::new(truth_steps),
        skipped_events: 0,
    })
}

/// Headline event applied each step to an event benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A fraction of communities goes absent for one step, then returns
    /// with identical membership.
    Intermittent,
    /// Selected communities grow or shrink by a quarter of their size,
    /// trading members with the absent pool.
    ExpandContract,
    /// New communities assemble from departed nodes while others are
    /// removed outright.
    BirthDeath,
    /// Pairs of communities merge while others split in half.
    MergeSplit,
}

/// Parameters of the event benchmarks.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EventBenchConfig {
    /// Initial community count.
    pub communities: usize,
    /// Power-law exponent of the community size distribution.
    pub size_exponent: f64,
    pub min_size: usize,
    pub max_size: usize,
    /// Power-law exponent of the member degree weights.
    pub degree_exponent: f64,
    /// Smallest expected intra-community degree of a member.
    pub min_degree: f64,
    /// Largest expected intra-community degree (the community hubs).
    pub max_degree: f64,
    /// Inter-community edge probability.
    pub inter_p: f64,
    pub steps: usize,
    pub kind: EventKind,
    /// Intermittent only: fraction of communities hidden per step.
    pub event_fraction: f64,
    /// Other kinds: communities (or merge/split pairs) touched per step.
    pub event_count: usize,
    /// Fraction of each community's membership replaced per step; the
    /// departing members are the most weakly attached ones.
    pub churn_fraction: f64,
    /// Size of the initial absent-node pool relative to the seated nodes.
    pub pool_fraction: f64,
    pub seed: u64,
}

impl Default for EventBenchConfig {
    fn default() -> Self {
        EventBenchConfig {
            communities: 50,
            size_exponent: 2.5,
            min_size: 10,
            max_size: 50,
            degree_exponent: 2.0,
            min_degree: 3.0,
            max_degree: 12.0,
            inter_p: 0.0006,
            steps: 15,
            kind: EventKind::Intermittent,
            event_fraction: 0.10,
            event_count: 2,
            churn_fraction: 0.05,
            pool_fraction: 0.10,
            seed: 0,
        }
    }
}

impl EventBenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.communities == 0 || self.steps == 0 {
            return Err(Error::Config("counts must be positive".into()));
        }
        if self.min_size < 1 || self.max_size < self.min_size {
            return Err(Error::Config("invalid size bounds".into()));
        }
        if self.size_exponent <= 1.0 || self.degree_exponent <= 1.0 {
            return Err(Error::Config("power-law exponents must exceed 1".into()));
        }
        if self.min_degree < 1.0 || self.max_degree < self.min_degree {
            return Err(Error::Config("invalid degree-weight bounds".into()));
        }
        for (name, p) in [
            ("inter_p", self.inter_p),
            ("event_fraction", self.event_fraction),
            ("churn_fraction", self.churn_fraction),
            ("pool_fraction", self.pool_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        if self.event_count > self.communities {
            return Err(Error::Config(
                "event_count exceeds the community count".into(),
            ));
        }
        Ok(())
    }
}

struct TruthCommunity {
    label: u64,
    members: Vec<NodeId>,
    /// Chung-Lu normalizer, frozen when the community forms, so ordinary
    /// membership churn leaves existing pair probabilities untouched.
    norm: f64,
}

/// Latent edge state of one node pair: the probability it was last
/// sampled under, and whether the edge is present.
#[derive(Clone, Copy)]
struct PairState {
    p: f64,
    present: bool,
}

/// Mutable ground-truth state threaded through the event steps.
struct EventState {
    rng: ChaCha8Rng,
    communities: Vec<TruthCommunity>,
    /// Absent nodes available to expansions, births and churn.
    pool: Vec<NodeId>,
    /// Communities hidden for the current step only.
    hidden: Vec<TruthCommunity>,
    /// Labels created or restored this step; exempt from churn.
    fresh: Vec<u64>,
    /// Degree weight of every seated node. The weight belongs to the
    /// seat: leaving to the pool clears it, rejoining draws a fresh one.
    weights: HashMap<NodeId, f64>,
    /// Persistent edge states keyed by packed node pair. Pairs with an
    /// absent endpoint stay dormant and keep their state.
    pair_states: HashMap<u64, PairState>,
    next_label: u64,
    skipped: usize,
    size_weights: Vec<f64>,
    degree_weights: Vec<f64>,
    min_size: usize,
    min_degree: usize,
}

fn pair_key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a.index() as u64) << 32) | b.index() as u64
}

impl EventState {
    fn sample_size(&mut self) -> usize {
        sample_weighted(&mut self.rng, &self.size_weights) + self.min_size
    }

    fn sample_degree_weight(&mut self) -> f64 {
        (sample_weighted(&mut self.rng, &self.degree_weights) + self.min_degree) as f64
    }

    fn sample_indices(&mut self, len: usize, amount: usize) -> Vec<usize> {
        let mut picked = rand::seq::index::sample(&mut self.rng, len, amount).into_vec();
        picked.sort_unstable();
        picked
    }

    /// Draws `amount` nodes out of the pool.
    fn draw_from_pool(&mut self, amount: usize) -> Vec<NodeId> {
        let picked = self.sample_indices(self.pool.len(), amount);
        let mut taken = Vec::with_capacity(amount);
        for &i in picked.iter().rev() {
            taken.push(self.pool.swap_remove(i));
        }
        self.pool.sort_unstable();
        taken.sort_unstable();
        taken
    }

    fn allocate_label(&mut self) -> u64 {
        let label = self.next_label;
        self.next_label += 1;
        label
    }

    /// Draws a degree weight for every member that does not hold one yet.
    fn seat_weights(&mut self, members: &[NodeId]) {
        for &v in members {
            if !self.weights.contains_key(&v) {
                let w = self.sample_degree_weight();
                self.weights.insert(v, w);
            }
        }
    }

    /// Builds a community around `members`, freezing its normalizer.
    fn form_community(&mut self, label: u64, members: Vec<NodeId>) -> TruthCommunity {
        self.seat_weights(&members);
        let norm: f64 = members.iter().map(|v| self.weights[v]).sum();
        TruthCommunity {
            label,
            members,
            norm,
        }
    }

    /// Returns nodes to the pool, clearing the weights of their seats.
    fn retire_to_pool(&mut self, nodes: Vec<NodeId>) {
        for v in &nodes {
            self.weights.remove(v);
        }
        self.pool.extend(nodes);
        self.pool.sort_unstable();
    }
}

fn sample_weighted(rng: &mut ChaCha8Rng, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut draw = rng.random_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        if draw < *w {
            return i;
        }
        draw -= w;
    }
    weights.len() - 1
}

/// Members ranked weakest-first: ascending intra-degree on the previous
/// snapshot, ties toward smaller ids. Newcomers (absent last step) rank
/// weakest of all.
fn weakest_members(prev: Option<&SnapshotGraph>, members: &[NodeId], take: usize) -> Vec<NodeId> {
    let mut ranked: Vec<(usize, NodeId)> = members
        .iter()
        .map(|&v| {
            let deg = prev
                .filter(|g| g.contains(v))
                .map(|g| {
                    g.neighbors(v)
                        .expect("checked containment")
                        .iter()
                        .filter(|w| members.binary_search(w).is_ok())
                        .count()
                })
                .unwrap_or(0);
            (deg, v)
        })
        .collect();
    ranked.sort_unstable();
    ranked.into_iter().take(take).map(|(_, v)| v).collect()
}

fn apply_event(state: &mut EventState, cfg: &EventBenchConfig, prev: Option<&SnapshotGraph>) {
    match cfg.kind {
        EventKind::Intermittent => {
            // communities restored this step must stay visible, so a hidden
            // community always returns for at least one step
            let eligible: Vec<usize> = state
                .communities
                .iter()
                .enumerate()
                .filter(|(_, c)| !state.fresh.contains(&c.label))
                .map(|(i, _)| i)
                .collect();
            let k = state.communities.len();
            let hide = ((cfg.event_fraction * k as f64).round() as usize).min(eligible.len());
            let picked = state.sample_indices(eligible.len(), hide);
            for &slot in picked.iter().rev() {
                state.hidden.push(state.communities.remove(eligible[slot]));
            }
        }
        EventKind::ExpandContract => {
            let k = state.communities.len();
            let count = cfg.event_count.min(k);
            state.skipped += cfg.event_count - count;
            let picked = state.sample_indices(k, count);
            for &i in &picked {
                let size = state.communities[i].members.len();
                let delta = ((0.25 * size as f64).round() as usize).max(1);
                if state.rng.random_bool(0.5) {
                    // expand from the pool
                    if state.pool.len() >= delta {
                        let joiners = state.draw_from_pool(delta);
                        state.seat_weights(&joiners);
                        state.communities[i].members.extend(joiners);
                        state.communities[i].members.sort_unstable();
                    } else {
                        state.skipped += 1;
                    }
                } else {
                    // contract: the most weakly attached members leave
                    if size > delta && size - delta >= 2 {
                        let leaving =
                            weakest_members(prev, &state.communities[i].members, delta);
                        state.communities[i]
                            .members
                            .retain(|v| !leaving.contains(v));
                        state.retire_to_pool(leaving);
                    } else {
                        state.skipped += 1;
                    }
                }
            }
        }
        EventKind::BirthDeath => {
            // deaths: whole communities leave the network
            let k = state.communities.len();
            let deaths = cfg.event_count.min(k.saturating_sub(1));
            state.skipped += cfg.event_count - deaths;
            let picked = state.sample_indices(k, deaths);
            for &i in picked.iter().rev() {
                let dead = state.communities.remove(i);
                state.retire_to_pool(dead.members);
            }
            // births: departed nodes regroup into new communities
            for _ in 0..cfg.event_count {
                let size = state.sample_size();
                if state.pool.len() < size {
                    state.skipped += 1;
                    continue;
                }
                let members = state.draw_from_pool(size);
                let label = state.allocate_label();
                state.fresh.push(label);
                let community = state.form_community(label, members);
                state.communities.push(community);
            }
        }
        EventKind::MergeSplit => {
            let k = state.communities.len();
            let pairs = cfg.event_count.min(k / 2);
            state.skipped += cfg.event_count - pairs;
            let picked = state.sample_indices(k, pairs * 2);
            // merge consecutive picks; remove from the back to keep indices valid
            let mut merged = Vec::new();
            for pair in picked.chunks(2) {
                let mut members = state.communities[pair[0]].members.clone();
                members.extend(state.communities[pair[1]].members.iter().copied());
                members.sort_unstable();
                merged.push(members);
            }
            for &i in picked.iter().rev() {
                state.communities.remove(i);
            }
            for members in merged {
                let label = state.allocate_label();
                state.fresh.push(label);
                let community = state.form_community(label, members);
                state.communities.push(community);
            }

            for _ in 0..cfg.event_count {
                let eligible: Vec<usize> = state
                    .communities
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.members.len() >= 2)
                    .map(|(i, _)| i)
                    .collect();
                if eligible.is_empty() {
                    state.skipped += 1;
                    continue;
                }
                let slot = state.rng.random_range(0..eligible.len());
                let victim = state.communities.remove(eligible[slot]);
                let mut members = victim.members;
                members.shuffle(&mut state.rng);
                let (left, right) = members.split_at(members.len() / 2);
                for half in [left, right] {
                    let mut m = half.to_vec();
                    m.sort_unstable();
                    let label = state.allocate_label();
                    state.fresh.push(label);
                    let community = state.form_community(label, m);
                    state.communities.push(community);
                }
            }
        }
    }
}

/// Background membership churn: in every established community, the most
/// weakly attached members drift out to the pool and the same number of
/// pool nodes take their place.
fn apply_churn(state: &mut EventState, cfg: &EventBenchConfig, prev: Option<&SnapshotGraph>) {
    if cfg.churn_fraction == 0.0 {
        return;
    }
    let fresh = std::mem::take(&mut state.fresh);
    let mut departures: Vec<NodeId> = Vec::new();
    for i in 0..state.communities.len() {
        if fresh.contains(&state.communities[i].label) {
            continue;
        }
        let size = state.communities[i].members.len();
        let turnover = (cfg.churn_fraction * size as f64).round() as usize;
        if turnover == 0 || size <= turnover {
            continue;
        }
        let leaving = weakest_members(prev, &state.communities[i].members, turnover);
        state.communities[i].members.retain(|v| !leaving.contains(v));
        departures.extend(leaving);
        let joiners = state.draw_from_pool(turnover.min(state.pool.len()));
        state.seat_weights(&joiners);
        state.communities[i].members.extend(joiners);
        state.communities[i].members.sort_unstable();
    }
    state.retire_to_pool(departures);
}

/// Intra-pair edge probability: the Chung-Lu weight product against the
/// community's frozen normalizer, capped below certainty.
fn intra_probability(w_u: f64, w_v: f64, norm: f64) -> f64 {
    (w_u * w_v / norm).min(0.9)
}

/// Materializes one snapshot from the latent edge states. A pair sampled
/// earlier keeps its edge while its sampling probability is unchanged;
/// probability changes (a membership move, merge, split, birth) resample
/// it. Pairs never seen together are sampled on first sight.
fn sample_snapshot(state: &mut EventState, cfg: &EventBenchConfig, t: usize) -> SnapshotGraph {
    let mut seated: Vec<(NodeId, usize)> = Vec::new();
    for (ci, c) in state.communities.iter().enumerate() {
        seated.extend(c.members.iter().map(|&v| (v, ci)));
    }
    seated.sort_unstable();

    let mut b = SnapshotGraphBuilder::new();
    for (i, &(u, cu)) in seated.iter().enumerate() {
        let w_u = state.weights[&u];
        for &(v, cv) in &seated[i + 1..] {
            let p = if cu != cv {
                cfg.inter_p
            } else {
                intra_probability(w_u, state.weights[&v], state.communities[cu].norm)
            };
            let key = pair_key(u, v);
            let present = match state.pair_states.get_mut(&key) {
                Some(st) if st.p == p => st.present,
                Some(st) => {
                    st.p = p;
                    st.present = state.rng.random_bool(p);
                    st.present
                }
                None => {
                    let present = state.rng.random_bool(p);
                    state.pair_states.insert(key, PairState { p, present });
                    present
                }
            };
            if present {
                b.add_edge(u, v);
            }
        }
    }
    b.build(t)
}

/// Generates one event benchmark: a planted partition with power-law
/// community sizes at t = 1, then per-step ground-truth rewrites followed
/// by full edge resampling.
pub fn generate_events(cfg: &EventBenchConfig) -> Result<Generated> {
    cfg.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let size_weights: Vec<f64> = (cfg.min_size..=cfg.max_size)
        .map(|s| (s as f64).powf(-cfg.size_exponent))
        .collect();
    let min_degree = cfg.min_degree.round() as usize;
    let max_degree = cfg.max_degree.round() as usize;
    let degree_weights: Vec<f64> = (min_degree..=max_degree)
        .map(|w| (w as f64).powf(-cfg.degree_exponent))
        .collect();
    let mut state = EventState {
        rng,
        communities: Vec::new(),
        pool: Vec::new(),
        hidden: Vec::new(),
        fresh: Vec::new(),
        weights: HashMap::new(),
        pair_states: HashMap::new(),
        next_label: 0,
        skipped: 0,
        size_weights,
        degree_weights,
        min_size: cfg.min_size,
        min_degree,
    };

    let sizes: Vec<usize> = (0..cfg.communities).map(|_| state.sample_size()).collect();
    let seated: usize = sizes.iter().sum();
    let pool_n = (cfg.pool_fraction * seated as f64).ceil() as usize;

    let mut symbols = SymbolTable::new();
    for v in 0..seated + pool_n {
        symbols.intern(&v.to_string());
    }
    let mut cursor = 0u32;
    for size in sizes {
        let label = state.allocate_label();
        let members: Vec<NodeId> = (cursor..cursor + size as u32).map(NodeId::new).collect();
        cursor += size as u32;
        let community = state.form_community(label, members);
        state.communities.push(community);
    }
    state.pool = (cursor..(seated + pool_n) as u32).map(NodeId::new).collect();

    let mut snapshots: Vec<SnapshotGraph> = Vec::with_capacity(cfg.steps);
    let mut truth_steps: Vec<LabeledPartition> = Vec::with_capacity(cfg.steps);
    for t in 1..=cfg.steps {
        if t > 1 {
            // restore last step's hidden communities untouched
            let restored = std::mem::take(&mut state.hidden);
            for c in restored {
                state.fresh.push(c.label);
                state.communities.push(c);
            }
            state.communities.sort_by_key(|c| c.label);
            let prev = snapshots.last().cloned();
            apply_event(&mut state, cfg, prev.as_ref());
            apply_churn(&mut state, cfg, prev.as_ref());
            state.fresh.clear();
        }
        let g = sample_snapshot(&mut state, cfg, t);
        let mut labels: LabeledPartition = BTreeMap::new();
        for c in &state.communities {
            for &v in &c.members {
                if g.contains(v) {
                    labels.insert(v, c.label);
                }
            }
        }
        truth_steps.push(labels);
        snapshots.push(g);
    }

    Ok(Generated {
        network: DynamicNetwork::from_parts(symbols, snapshots)?,
        truth: GroundTruth::new(truth_steps),
        skipped_events: state.skipped,
    })
}
