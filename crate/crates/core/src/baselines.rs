//! Traversal baselines answering the same queries as the engine: depth-first
//! search over `(node, consumed)` states, the same search focused by index
//! reachability tests, and bidirectional breadth-first search.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::engine::{self, Engine};
use crate::error::Result;
use crate::graph::{CollapsedGraph, LabelId, NodeId};
use crate::index::BitPathIndex;
use crate::query::{Answer, Deadline, LocrQuery, QueryResult};

const DEADLINE_STRIDE: u64 = 256;

/// Query evaluation method.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Method {
    #[default]
    BitPath,
    Dfs,
    Fdfs,
    Bbfs,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::BitPath, Method::Dfs, Method::Fdfs, Method::Bbfs];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::BitPath => "bitpath",
            Self::Dfs => "dfs",
            Self::Fdfs => "fdfs",
            Self::Bbfs => "bbfs",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected bitpath, dfs, fdfs or bbfs)"))
    }
}

/// Evaluates `q` with `method`. Baselines report zero engine counters.
pub fn run_query(method: Method, idx: &BitPathIndex, q: &LocrQuery, deadline: Deadline) -> Result<QueryResult> {
    if method == Method::BitPath {
        return Engine::new(idx).with_deadline(deadline).evaluate(q);
    }
    let start = Instant::now();
    let cg = idx.graph();
    let outcome = match method {
        Method::Dfs => dfs_query(cg, q, deadline)?,
        Method::Fdfs => fdfs_query(idx, q, deadline)?,
        _ => bbfs_query(cg, q, deadline)?,
    };
    Ok(QueryResult {
        answer: outcome.answer,
        dnc_calls: 0,
        intersections: 0,
        elapsed: start.elapsed(),
    })
}

/// Answer plus the number of states expanded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraversalOutcome {
    pub answer: Answer,
    pub visits: u64,
}

impl TraversalOutcome {
    fn no() -> Self {
        Self {
            answer: Answer::No,
            visits: 0,
        }
    }
}

/// Advances `consumed` past the longest run of upcoming labels of `seq` that
/// are self-edge labels of `node`.
pub fn consume_self_loops(cg: &CollapsedGraph, node: NodeId, seq: &[LabelId], consumed: usize) -> usize {
    let own = cg.self_edge_labels(node);
    if own.is_empty() {
        return consumed;
    }
    consumed
        + seq[consumed..]
            .iter()
            .take_while(|l| own.binary_search(l).is_ok())
            .count()
}

/// Periodic deadline polling.
struct Ticker {
    deadline: Deadline,
    count: u64,
}

impl Ticker {
    fn new(deadline: Deadline) -> Self {
        Self { deadline, count: 0 }
    }

    fn tick(&mut self) -> Result<()> {
        self.count += 1;
        if self.count.is_multiple_of(DEADLINE_STRIDE) {
            self.deadline.check()?;
        }
        Ok(())
    }
}

/// One search direction: forward walks out-edges matching `seq`, backward
/// walks in-edges matching `seq` reversed.
struct Direction<'a> {
    cg: &'a CollapsedGraph,
    forward: bool,
    seq: Vec<LabelId>,
}

impl<'a> Direction<'a> {
    fn new(cg: &'a CollapsedGraph, forward: bool, seq: &[LabelId]) -> Self {
        let mut seq = seq.to_vec();
        if !forward {
            seq.reverse();
        }
        Self { cg, forward, seq }
    }

    fn start(&self, v: NodeId) -> usize {
        consume_self_loops(self.cg, v, &self.seq, 0)
    }

    /// Calls `f(neighbor, consumed)` for each non-self edge leaving `v` in
    /// this direction.
    fn expand(&self, v: NodeId, consumed: usize, mut f: impl FnMut(NodeId, usize)) {
        let edges = if self.forward {
            self.cg.out_edges(v)
        } else {
            self.cg.in_edges(v)
        };
        for &ei in edges {
            let e = self.cg.edge(ei);
            if e.is_self_edge() {
                continue;
            }
            let w = if self.forward { e.head } else { e.tail };
            let matched = consumed < self.seq.len() && self.seq[consumed] == e.label;
            f(
                w,
                consume_self_loops(self.cg, w, &self.seq, consumed + matched as usize),
            );
        }
    }
}

/// Direction by the degree rule: forward from `x` when its out-degree is
/// below the in-degree of `y`, else backward from `y`.
fn orient(cg: &CollapsedGraph, x: NodeId, y: NodeId) -> (bool, NodeId, NodeId) {
    if cg.out_degree(x) < cg.in_degree(y) {
        (true, x, y)
    } else {
        (false, y, x)
    }
}

/// Depth-first search; a state is skipped when its node was already reached
/// with at least as many labels consumed. `keep` filters nodes before they
/// are pushed.
fn dfs_core(
    dir: &Direction<'_>,
    from: NodeId,
    to: NodeId,
    deadline: Deadline,
    mut keep: impl FnMut(NodeId) -> bool,
) -> Result<TraversalOutcome> {
    let len = dir.seq.len();
    let mut ticker = Ticker::new(deadline);
    let mut best: HashMap<NodeId, usize> = HashMap::new();
    let mut stack = Vec::new();
    if keep(from) {
        let c = dir.start(from);
        best.insert(from, c);
        stack.push((from, c));
    }
    let mut visits = 0;
    let mut next = Vec::new();
    while let Some((v, c)) = stack.pop() {
        if best[&v] > c {
            continue;
        }
        visits += 1;
        ticker.tick()?;
        if v == to && c == len {
            return Ok(TraversalOutcome {
                answer: Answer::Yes,
                visits,
            });
        }
        next.clear();
        dir.expand(v, c, |w, d| next.push((w, d)));
        for &(w, d) in next.iter().rev() {
            if best.get(&w).is_some_and(|&b| b >= d) || !keep(w) {
                continue;
            }
            best.insert(w, d);
            stack.push((w, d));
        }
    }
    Ok(TraversalOutcome {
        answer: Answer::No,
        visits,
    })
}

fn resolve(cg: &CollapsedGraph, q: &LocrQuery) -> Result<Option<(NodeId, NodeId, Vec<LabelId>)>> {
    let r = q.resolve(cg)?;
    Ok(r.labels.map(|seq| (r.source, r.destination, seq)))
}

/// Degree-oriented depth-first search over `(node, consumed)` states.
pub fn dfs_query(cg: &CollapsedGraph, q: &LocrQuery, deadline: Deadline) -> Result<TraversalOutcome> {
    let Some((x, y, seq)) = resolve(cg, q)? else {
        return Ok(TraversalOutcome::no());
    };
    let (forward, from, to) = orient(cg, x, y);
    dfs_core(&Direction::new(cg, forward, &seq), from, to, deadline, |_| true)
}

/// [`dfs_query`] that never enters a node from which the target is
/// unreachable, caching the index reachability test per node.
pub fn fdfs_query(idx: &BitPathIndex, q: &LocrQuery, deadline: Deadline) -> Result<TraversalOutcome> {
    let cg = idx.graph();
    let Some((x, y, seq)) = resolve(cg, q)? else {
        return Ok(TraversalOutcome::no());
    };
    let (forward, from, to) = orient(cg, x, y);
    let mut cache: HashMap<NodeId, bool> = HashMap::new();
    let live = |v: NodeId| {
        *cache.entry(v).or_insert_with(|| {
            let (a, b) = if forward { (v, to) } else { (to, v) };
            engine::reachable(idx, a, b).unwrap_or(false)
        })
    };
    dfs_core(&Direction::new(cg, forward, &seq), from, to, deadline, live)
}

/// Bidirectional breadth-first search keeping the best matched prefix per
/// node going forward and the best matched suffix going backward. The two
/// meet at a node whose prefix and suffix together cover the sequence.
pub fn bbfs_query(cg: &CollapsedGraph, q: &LocrQuery, deadline: Deadline) -> Result<TraversalOutcome> {
    let Some((x, y, seq)) = resolve(cg, q)? else {
        return Ok(TraversalOutcome::no());
    };
    let len = seq.len();
    let dirs = [Direction::new(cg, true, &seq), Direction::new(cg, false, &seq)];
    let mut best: [HashMap<NodeId, usize>; 2] = [HashMap::new(), HashMap::new()];
    let mut queues: [VecDeque<NodeId>; 2] = [VecDeque::new(), VecDeque::new()];
    let mut ticker = Ticker::new(deadline);
    let mut visits = 0;
    let yes = |visits| -> Result<TraversalOutcome> {
        Ok(TraversalOutcome {
            answer: Answer::Yes,
            visits,
        })
    };

    for (side, v) in [(0, x), (1, y)] {
        let c = dirs[side].start(v);
        best[side].insert(v, c);
        queues[side].push_back(v);
        if best[1 - side].get(&v).is_some_and(|&o| o + c >= len) {
            return yes(visits);
        }
    }

    let mut next = Vec::new();
    loop {
        let side = match (queues[0].is_empty(), queues[1].is_empty()) {
            (true, true) => break,
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => (queues[1].len() < queues[0].len()) as usize,
        };
        let other = 1 - side;
        for _ in 0..queues[side].len() {
            let v = queues[side].pop_front().expect("level size counted");
            visits += 1;
            ticker.tick()?;
            let c = best[side][&v];
            next.clear();
            dirs[side].expand(v, c, |w, d| next.push((w, d)));
            for &(w, d) in &next {
                if best[side].get(&w).is_some_and(|&b| b >= d) {
                    continue;
                }
                best[side].insert(w, d);
                if best[other].get(&w).is_some_and(|&o| o + d >= len) {
                    return yes(visits);
                }
                queues[side].push_back(w);
            }
        }
    }
    Ok(TraversalOutcome {
        answer: Answer::No,
        visits,
    })
}

/// Wall-clock budget helper for callers that take a plain duration.
pub fn deadline_from(timeout: Option<Duration>) -> Deadline {
    timeout.map_or_else(Deadline::none, Deadline::after)
}
