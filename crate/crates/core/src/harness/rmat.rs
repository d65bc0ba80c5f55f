//! R-MAT graph generation and Zipf label assignment.

use std::collections::{HashMap, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

pub const DEFAULT_QUADRANTS: [f64; 4] = [0.45, 0.15, 0.15, 0.25];
pub const DEFAULT_ZIPF_S: f64 = 2.95;

/// Label given to every edge of a freshly generated R-MAT graph.
pub const UNLABELED: &str = "_";

/// Samples `edge_budget` distinct directed edges by recursive quadrant
/// descent over a `node_budget × node_budget` adjacency matrix. Only nodes
/// touched by some edge appear, named `n<index>` in order of first use.
pub fn gen_rmat(node_budget: u64, edge_budget: u64, quadrants: [f64; 4], seed: u64) -> Result<LabeledGraph> {
    if node_budget == 0 || !node_budget.is_power_of_two() || node_budget > 1 << 32 {
        return Err(Error::InvalidParameter(format!(
            "node budget {node_budget} must be a power of two no larger than 2^32"
        )));
    }
    if edge_budget > node_budget.saturating_mul(node_budget) {
        return Err(Error::InvalidParameter(format!(
            "edge budget {edge_budget} exceeds {node_budget}^2 possible edges"
        )));
    }
    let sum: f64 = quadrants.iter().sum();
    if quadrants.iter().any(|p| *p < 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "quadrant probabilities {quadrants:?} must be non-negative and sum to 1"
        )));
    }
    let quadrant =
        WeightedIndex::new(quadrants).map_err(|e| Error::InvalidParameter(format!("quadrant probabilities: {e}")))?;
    let levels = node_budget.trailing_zeros();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(edge_budget as usize);
    let mut g = LabeledGraph::new();
    let label = g.labels.intern(UNLABELED);
    let mut ids: HashMap<u64, u32> = HashMap::new();
    while (seen.len() as u64) < edge_budget {
        let (mut row, mut col) = (0u64, 0u64);
        for _ in 0..levels {
            let q = quadrant.sample(&mut rng) as u64;
            row = row << 1 | q >> 1;
            col = col << 1 | q & 1;
        }
        if !seen.insert((row, col)) {
            continue;
        }
        let mut id = |v: u64| *ids.entry(v).or_insert_with(|| g.nodes.intern(&format!("n{v}")));
        let (t, h) = (id(row), id(col));
        g.add_edge_ids(t, h, label);
    }
    Ok(g)
}

/// Rebuilds `g` with each edge labeled `l<k>`, `k ∈ 1..=label_count` drawn
/// with probability proportional to `k^-s`. Labels are interned in rank order.
pub fn assign_zipf_labels(g: &LabeledGraph, label_count: usize, s: f64, seed: u64) -> Result<LabeledGraph> {
    if label_count == 0 {
        return Err(Error::InvalidParameter("label count must be at least 1".into()));
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("zipf exponent {s} must be positive")));
    }
    let weights = (1..=label_count).map(|k| (k as f64).powf(-s));
    let rank = WeightedIndex::new(weights).map_err(|e| Error::InvalidParameter(format!("zipf weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = LabeledGraph::new();
    out.nodes = g.nodes.clone();
    for k in 1..=label_count {
        out.labels.intern(&format!("l{k}"));
    }
    for e in g.edges() {
        let l = rank.sample(&mut rng) as u32;
        out.add_edge_ids(e.tail, e.head, l);
    }
    Ok(out)
}

/// Edge count per label, most frequent first (ties by name).
pub fn label_frequencies(g: &LabeledGraph) -> Vec<(String, usize)> {
    let mut counts = vec![0usize; g.label_count()];
    for e in g.edges() {
        counts[e.label as usize] += 1;
    }
    let mut rows: Vec<(String, usize)> = g.labels.names().iter().cloned().zip(counts).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

/// `label,frequency` CSV of [`label_frequencies`].
pub fn label_frequency_csv(rows: &[(String, usize)]) -> String {
    let mut s = String::from("label,frequency\n");
    for (l, f) in rows {
        s.push_str(&format!("{l},{f}\n"));
    }
    s
}
