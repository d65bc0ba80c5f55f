//! Exhaustive ground truth for small graphs.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{CollapsedGraph, LabelId, LabeledGraph, NodeId};
use crate::query::{Answer, LocrQuery};

/// Largest graph (in edges) the oracles accept.
pub const ORACLE_EDGE_LIMIT: usize = 500;

fn guard(edges: usize) -> Result<()> {
    if edges > ORACLE_EDGE_LIMIT {
        Err(Error::OracleTooLarge {
            edges,
            limit: ORACLE_EDGE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Breadth-first search over `(node, consumed)` states. `step` reports, for
/// a state, the successor states.
fn search<F>(nodes: usize, len: usize, start: NodeId, goal: NodeId, mut step: F) -> bool
where
    F: FnMut(NodeId, usize, &mut Vec<(NodeId, usize)>),
{
    let width = len + 1;
    let mut seen = vec![false; nodes * width];
    let mut queue = VecDeque::new();
    seen[start as usize * width] = true;
    queue.push_back((start, 0));
    let mut next = Vec::new();
    while let Some((v, c)) = queue.pop_front() {
        if v == goal && c == len {
            return true;
        }
        next.clear();
        step(v, c, &mut next);
        for &(w, d) in &next {
            let slot = w as usize * width + d;
            if !seen[slot] {
                seen[slot] = true;
                queue.push_back((w, d));
            }
        }
    }
    false
}

/// Answers `q` on the collapsed graph by exploring every `(node, consumed)`
/// state. Each non-self edge may be taken with or without consuming the next
/// label; self-edge labels may be consumed at their node any number of times.
pub fn brute_force_oracle(cg: &CollapsedGraph, q: &LocrQuery) -> Result<Answer> {
    guard(cg.edge_count())?;
    let r = q.resolve(cg)?;
    Ok(match r.labels {
        None => Answer::No,
        Some(seq) => Answer::from_bool(collapsed_oracle(cg, r.source, r.destination, &seq)),
    })
}

/// [`brute_force_oracle`] on resolved IDs, without the size guard.
pub fn collapsed_oracle(cg: &CollapsedGraph, x: NodeId, y: NodeId, seq: &[LabelId]) -> bool {
    search(cg.node_count(), seq.len(), x, y, |v, c, out| {
        if c < seq.len() && cg.has_self_label(v, seq[c]) {
            out.push((v, c + 1));
        }
        for &ei in cg.out_edges(v) {
            let e = cg.edge(ei);
            if e.is_self_edge() {
                continue;
            }
            out.push((e.head, c));
            if c < seq.len() && e.label == seq[c] {
                out.push((e.head, c + 1));
            }
        }
    })
}

/// Answers `q` on an uncollapsed graph by walk enumeration: every edge,
/// including self-loops, may be taken with or without consuming a label.
pub fn walk_oracle(g: &LabeledGraph, q: &LocrQuery) -> Result<Answer> {
    guard(g.edge_count())?;
    let node = |name: &str| g.nodes.get(name).ok_or_else(|| Error::UnknownNode(name.to_owned()));
    let (x, y) = (node(&q.source)?, node(&q.destination)?);
    let Some(seq) = q.labels.iter().map(|l| g.labels.get(l)).collect::<Option<Vec<_>>>() else {
        return Ok(Answer::No);
    };
    let mut out: Vec<Vec<(NodeId, LabelId)>> = vec![Vec::new(); g.node_count()];
    for e in g.edges() {
        out[e.tail as usize].push((e.head, e.label));
    }
    Ok(Answer::from_bool(search(
        g.node_count(),
        seq.len(),
        x,
        y,
        |v, c, next| {
            for &(h, l) in &out[v as usize] {
                next.push((h, c));
                if c < seq.len() && l == seq[c] {
                    next.push((h, c + 1));
                }
            }
        },
    )))
}
