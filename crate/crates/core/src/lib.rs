//! Compressed bit-vector indexes and label-order-constrained reachability
//! (LOCR) queries over edge-labeled directed graphs.
//!
//! A LOCR query `(x, y, [l1, .., lk])` asks whether some walk from `x` to `y`
//! carries the labels `l1, .., lk` in order, with arbitrary edges in between.

pub mod baselines;
pub mod bitvec;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod index;
pub mod query;

pub use baselines::Method;
pub use bitvec::{CompressedBitVector, Representation};
pub use engine::{evaluate, Engine, SplitPolicy};
pub use error::{Error, Result};
pub use graph::{parse_edge_list, parse_edge_str, CollapsedGraph, Edge, LabelId, LabeledGraph, NodeId};
pub use index::{load_index, save_index, BitPathIndex};
pub use query::{Answer, Deadline, LocrQuery, Polarity, QueryEntry, QueryResult, QuerySet};
