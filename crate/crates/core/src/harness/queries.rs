//! Backward path sampling and positive/negative query synthesis.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine;
use crate::error::{Error, Result};
use crate::graph::{CollapsedGraph, LabelId, NodeId};
use crate::harness::oracle::{collapsed_oracle, ORACLE_EDGE_LIMIT};
use crate::index::BitPathIndex;
use crate::query::{LocrQuery, Polarity, QueryEntry, QuerySet};

pub const DEFAULT_KEEP_PROB: f64 = 0.5;
pub const DEFAULT_MAX_LEN: usize = 30;

/// How a backward walk picks the next parent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PathStrategy {
    #[default]
    Uniform,
    /// Parent chosen with probability proportional to its depth plus one.
    TopoWeighted,
}

impl fmt::Display for PathStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Uniform => "uniform",
            Self::TopoWeighted => "topo",
        })
    }
}

impl FromStr for PathStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "uniform" => Ok(Self::Uniform),
            "topo" | "topo-weighted" => Ok(Self::TopoWeighted),
            _ => Err(format!("unknown path strategy `{s}` (expected uniform or topo)")),
        }
    }
}

/// A walk in the collapsed graph, labels in forward order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledPath {
    pub source: NodeId,
    pub destination: NodeId,
    pub labels: Vec<LabelId>,
}

impl SampledPath {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn start_leaves(cg: &CollapsedGraph) -> Result<Vec<NodeId>> {
    let leaves: Vec<NodeId> = cg.leaves().iter().copied().filter(|&v| cg.in_degree(v) > 0).collect();
    if leaves.is_empty() {
        Err(Error::NoPaths)
    } else {
        Ok(leaves)
    }
}

fn walk_back<R: Rng>(
    cg: &CollapsedGraph,
    leaf: NodeId,
    strategy: PathStrategy,
    max_len: usize,
    rng: &mut R,
) -> SampledPath {
    let mut v = leaf;
    let mut labels = Vec::new();
    let mut parents = Vec::new();
    while labels.len() < max_len {
        parents.clear();
        parents.extend(
            cg.in_edges(v)
                .iter()
                .map(|&ei| cg.edge(ei))
                .filter(|e| !e.is_self_edge()),
        );
        let Some(&first) = parents.first() else {
            break;
        };
        let e = match strategy {
            PathStrategy::Uniform => *parents.choose(rng).unwrap_or(&first),
            PathStrategy::TopoWeighted => {
                let w = WeightedIndex::new(parents.iter().map(|e| cg.depth(e.tail) + 1)).expect("positive weights");
                parents[w.sample(rng)]
            }
        };
        labels.push(e.label);
        v = e.tail;
    }
    labels.reverse();
    SampledPath {
        source: v,
        destination: leaf,
        labels,
    }
}

/// Samples `count` backward walks, each from a uniformly chosen leaf that has
/// a parent, stopping at a root or after `max_len` edges.
pub fn sample_paths(
    cg: &CollapsedGraph,
    count: usize,
    strategy: PathStrategy,
    max_len: usize,
    seed: u64,
) -> Result<Vec<SampledPath>> {
    let leaves = start_leaves(cg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| {
            let leaf = *leaves.choose(&mut rng).expect("non-empty");
            walk_back(cg, leaf, strategy, max_len, &mut rng)
        })
        .collect())
}

fn check_keep_prob(keep_prob: f64) -> Result<()> {
    if keep_prob > 0.0 && keep_prob <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "keep probability {keep_prob} not in (0, 1]"
        )))
    }
}

fn subsequence<R: Rng>(labels: &[LabelId], keep_prob: f64, rng: &mut R) -> Vec<LabelId> {
    labels.iter().copied().filter(|_| rng.gen_bool(keep_prob)).collect()
}

fn to_query(cg: &CollapsedGraph, path: &SampledPath, labels: &[LabelId]) -> LocrQuery {
    LocrQuery {
        source: cg.name(path.source).to_owned(),
        destination: cg.name(path.destination).to_owned(),
        labels: labels.iter().map(|&l| cg.labels().name(l).to_owned()).collect(),
    }
}

/// Keeps each path label independently with `keep_prob`; an empty result is
/// re-rolled once and then accepted.
pub fn make_positive<R: Rng>(
    cg: &CollapsedGraph,
    path: &SampledPath,
    keep_prob: f64,
    rng: &mut R,
) -> Result<LocrQuery> {
    check_keep_prob(keep_prob)?;
    let mut kept = subsequence(&path.labels, keep_prob, rng);
    if kept.is_empty() {
        kept = subsequence(&path.labels, keep_prob, rng);
    }
    Ok(to_query(cg, path, &kept))
}

/// Unverified negative: a kept subsequence plus one label used in the graph
/// but absent from the path, shuffled. `None` when every used label is on
/// the path.
pub fn negative_candidate<R: Rng>(
    cg: &CollapsedGraph,
    path: &SampledPath,
    keep_prob: f64,
    rng: &mut R,
) -> Result<Option<LocrQuery>> {
    check_keep_prob(keep_prob)?;
    let mut used = vec![false; cg.label_count()];
    for e in cg.edges() {
        used[e.label as usize] = true;
    }
    for &l in &path.labels {
        used[l as usize] = false;
    }
    let absent: Vec<LabelId> = (0..cg.label_count() as LabelId).filter(|&l| used[l as usize]).collect();
    let Some(&extra) = absent.choose(rng) else {
        return Ok(None);
    };
    let mut labels = subsequence(&path.labels, keep_prob, rng);
    labels.push(extra);
    labels.shuffle(rng);
    Ok(Some(to_query(cg, path, &labels)))
}

/// Decides satisfiability while generating negatives: exhaustive search on
/// small graphs, the engine otherwise.
#[derive(Clone, Copy)]
pub enum Verifier<'a> {
    Oracle(&'a CollapsedGraph),
    Engine(&'a BitPathIndex),
}

impl<'a> Verifier<'a> {
    pub fn for_index(idx: &'a BitPathIndex) -> Self {
        if idx.edge_count() <= ORACLE_EDGE_LIMIT {
            Self::Oracle(idx.graph())
        } else {
            Self::Engine(idx)
        }
    }

    pub fn satisfiable(&self, q: &LocrQuery) -> Result<bool> {
        match self {
            Self::Oracle(cg) => {
                let r = q.resolve(cg)?;
                Ok(r.labels
                    .is_some_and(|seq| collapsed_oracle(cg, r.source, r.destination, &seq)))
            }
            Self::Engine(idx) => Ok(engine::evaluate(idx, q)?.answer.is_yes()),
        }
    }
}

/// [`negative_candidate`] kept only if `verifier` finds it unsatisfiable.
pub fn make_negative<R: Rng>(
    cg: &CollapsedGraph,
    path: &SampledPath,
    keep_prob: f64,
    rng: &mut R,
    verifier: &Verifier<'_>,
) -> Result<Option<LocrQuery>> {
    match negative_candidate(cg, path, keep_prob, rng)? {
        Some(q) if !verifier.satisfiable(&q)? => Ok(Some(q)),
        _ => Ok(None),
    }
}

#[derive(Clone, Debug)]
pub struct QueryGenConfig {
    pub positives: usize,
    pub negatives: usize,
    pub strategy: PathStrategy,
    pub max_len: usize,
    pub keep_prob: f64,
    pub seed: u64,
}

impl Default for QueryGenConfig {
    fn default() -> Self {
        Self {
            positives: 100,
            negatives: 100,
            strategy: PathStrategy::Uniform,
            max_len: DEFAULT_MAX_LEN,
            keep_prob: DEFAULT_KEEP_PROB,
            seed: 0,
        }
    }
}

/// Positives first, then negatives. Negative generation gives up after
/// `50 * negatives + 100` attempts, so fewer may be returned.
pub fn generate_queries(idx: &BitPathIndex, cfg: &QueryGenConfig) -> Result<QuerySet> {
    check_keep_prob(cfg.keep_prob)?;
    let cg = idx.graph();
    let leaves = start_leaves(cg)?;
    let verifier = Verifier::for_index(idx);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut entries = Vec::with_capacity(cfg.positives + cfg.negatives);
    let path = |rng: &mut ChaCha8Rng| {
        let leaf = *leaves.choose(rng).expect("non-empty");
        walk_back(cg, leaf, cfg.strategy, cfg.max_len, rng)
    };
    for _ in 0..cfg.positives {
        let p = path(&mut rng);
        entries.push(QueryEntry {
            query: make_positive(cg, &p, cfg.keep_prob, &mut rng)?,
            polarity: Polarity::Positive,
            path_len: p.len(),
        });
    }
    let mut kept = 0;
    let mut attempts = 50 * cfg.negatives + 100;
    while kept < cfg.negatives && attempts > 0 {
        attempts -= 1;
        let p = path(&mut rng);
        if let Some(query) = make_negative(cg, &p, cfg.keep_prob, &mut rng, &verifier)? {
            entries.push(QueryEntry {
                query,
                polarity: Polarity::Negative,
                path_len: p.len(),
            });
            kept += 1;
        }
    }
    Ok(QuerySet { entries })
}
