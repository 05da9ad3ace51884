//! Detection and tracking of communities in dynamic networks.
//!
//! A dynamic network is a sequence of graph snapshots. The first snapshot
//! is clustered statically; afterwards each community's leader core —
//! the intersection of the maximal cliques around its best-connected
//! member — seeds a greedy local expansion on the next snapshot, so
//! communities are updated incrementally instead of being recomputed from
//! scratch. Leftover nodes are clustered into newborn communities and a
//! community dissolves when all of its leaders leave the network.
//!
//! The crate also ships the synthetic benchmarks (Markovian edge
//! evolution and four event-driven scenarios) and the evaluation metrics
//! (NMI, temporal smoothness, ground-truth similarity, leader/follower
//! persistence) used to exercise the tracker, plus the file formats the
//! command-line tool speaks.
//!
//! Seed expansions within one step are independent; with the default
//! `parallel` feature they run on the rayon pool, and disabling the
//! feature falls back to an identical sequential pass.

pub mod benchgen;
pub mod clique;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod io;
pub mod leader;
pub mod louvain;
pub mod metrics;
pub mod pipeline;

pub use error::{Error, Result};
pub use graph::{DynamicNetwork, NodeId, NodeSet, SnapshotGraph, SymbolTable};
pub use pipeline::{CommunityId, Partition, Tracker};
