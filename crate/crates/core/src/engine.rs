//! LOCR query evaluation over a [`BitPathIndex`]: greedy pruning picks the
//! most selective label position, divide-and-conquer splits the label
//! sequence around each candidate edge carrying that label.

use std::time::Instant;

use crate::bitvec::CompressedBitVector;
use crate::error::Result;
use crate::graph::{LabelId, NodeId};
use crate::index::BitPathIndex;
use crate::query::{Answer, Deadline, LocrQuery, QueryResult};

/// How divide-and-conquer chooses the split position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SplitPolicy {
    /// Position whose candidate edge set is smallest (ties: leftmost).
    #[default]
    Greedy,
    /// Always the first position. Same answers, usually more work.
    Leftmost,
}

/// True iff `x == y` or `y` is reachable from `x`.
pub fn reachable(idx: &BitPathIndex, x: NodeId, y: NodeId) -> Result<bool> {
    idx.graph().check_node(x)?;
    idx.graph().check_node(y)?;
    Ok(x == y || idx.successors(x).intersects(idx.predecessors(y))?)
}

/// Candidate edges for the most selective position of `seq` and that
/// position. `seq` must be non-empty.
pub fn greedy_pruning(
    idx: &BitPathIndex,
    x: NodeId,
    y: NodeId,
    seq: &[LabelId],
) -> Result<(CompressedBitVector, usize)> {
    Engine::new(idx).greedy_pruning(x, y, seq)
}

pub fn divide_and_conquer(idx: &BitPathIndex, x: NodeId, y: NodeId, seq: &[LabelId]) -> Result<bool> {
    idx.graph().check_node(x)?;
    idx.graph().check_node(y)?;
    Engine::new(idx).divide_and_conquer(x, y, seq)
}

pub fn evaluate(idx: &BitPathIndex, q: &LocrQuery) -> Result<QueryResult> {
    Engine::new(idx).evaluate(q)
}

/// Query evaluator carrying instrumentation counters.
pub struct Engine<'a> {
    index: &'a BitPathIndex,
    policy: SplitPolicy,
    deadline: Deadline,
    dnc_calls: u64,
    intersections: u64,
}

impl<'a> Engine<'a> {
    pub fn new(index: &'a BitPathIndex) -> Self {
        Self {
            index,
            policy: SplitPolicy::Greedy,
            deadline: Deadline::none(),
            dnc_calls: 0,
            intersections: 0,
        }
    }

    pub fn with_policy(mut self, policy: SplitPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_deadline(mut self, deadline: Deadline) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn dnc_calls(&self) -> u64 {
        self.dnc_calls
    }

    pub fn intersections(&self) -> u64 {
        self.intersections
    }

    /// Resolves names, applies the same-SCC self-edge rule, otherwise runs
    /// divide-and-conquer. Returns [`crate::Error::Timeout`] past the deadline.
    pub fn evaluate(&mut self, q: &LocrQuery) -> Result<QueryResult> {
        let start = Instant::now();
        self.dnc_calls = 0;
        self.intersections = 0;
        let cg = self.index.graph();
        let r = q.resolve(cg)?;
        let yes = match &r.labels {
            None => false,
            Some(seq) if r.source == r.destination => seq.iter().all(|&l| cg.has_self_label(r.source, l)),
            Some(seq) => self.divide_and_conquer(r.source, r.destination, seq)?,
        };
        Ok(QueryResult {
            answer: Answer::from_bool(yes),
            dnc_calls: self.dnc_calls,
            intersections: self.intersections,
            elapsed: start.elapsed(),
        })
    }

    pub fn greedy_pruning(&mut self, x: NodeId, y: NodeId, seq: &[LabelId]) -> Result<(CompressedBitVector, usize)> {
        debug_assert!(!seq.is_empty());
        let idx = self.index;
        let between = idx.successors(x).intersect(idx.predecessors(y))?;
        if between.is_empty() {
            return Ok((between, 0));
        }
        let positions: &[LabelId] = match self.policy {
            SplitPolicy::Greedy => seq,
            SplitPolicy::Leftmost => &seq[..1],
        };
        let mut cache: Vec<(LabelId, CompressedBitVector)> = Vec::new();
        let mut best: Option<usize> = None;
        let mut best_at = 0;
        for (pos, &l) in positions.iter().enumerate() {
            let slot = match cache.iter().position(|(cl, _)| *cl == l) {
                Some(i) => i,
                None => {
                    self.intersections += 1;
                    cache.push((l, between.intersect(idx.label_edges(l))?));
                    cache.len() - 1
                }
            };
            let count = cache[slot].1.count_ones();
            if best.is_none_or(|b| count < cache[b].1.count_ones()) {
                best = Some(slot);
                best_at = pos;
                if count == 0 {
                    break;
                }
            }
        }
        let slot = best.expect("non-empty sequence");
        Ok((cache.swap_remove(slot).1, best_at))
    }

    pub fn divide_and_conquer(&mut self, x: NodeId, y: NodeId, seq: &[LabelId]) -> Result<bool> {
        self.dnc_calls += 1;
        self.deadline.check()?;
        let cg = self.index.graph();
        // Longest-path bound; only sound when no self-loop can repeat labels
        // on the way to y.
        if !cg.loops_upstream(y) && cg.depth(y) < cg.depth(x) + seq.len() as u64 {
            return Ok(false);
        }
        if seq.is_empty() {
            return reachable(self.index, x, y);
        }
        let (candidates, split) = self.greedy_pruning(x, y, seq)?;
        if candidates.is_empty() {
            return Ok(false);
        }
        if seq.len() == 1 {
            return Ok(true);
        }
        let (before, after) = (&seq[..split], &seq[split + 1..]);
        for pos in candidates.iter_ones() {
            let e = self.index.edge_by_id(pos as u32 + 1);
            // e lies between x and y, so empty halves are already satisfied
            if !before.is_empty() && !self.divide_and_conquer(x, e.tail, before)? {
                continue;
            }
            if after.is_empty() || self.divide_and_conquer(e.head, y, after)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
