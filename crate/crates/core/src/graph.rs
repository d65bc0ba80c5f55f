//! Edge-labeled directed graphs, SCC condensation and topological depth.

use std::collections::{HashMap, HashSet};
use std::io::BufRead;

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type LabelId = u32;

/// Dense string ↔ ID dictionary; IDs are handed out in first-appearance order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dictionary {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Dictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I: IntoIterator<Item = String>>(names: I) -> Result<Self> {
        let mut d = Self::new();
        for n in names {
            let before = d.len();
            if d.intern(&n) as usize != before {
                return Err(Error::Corrupt(format!("duplicate dictionary entry `{n}`")));
            }
        }
        Ok(d)
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub tail: NodeId,
    pub head: NodeId,
    pub label: LabelId,
}

impl Edge {
    pub fn new(tail: NodeId, head: NodeId, label: LabelId) -> Self {
        Self { tail, head, label }
    }

    pub fn is_self_edge(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Clone, Debug, Default)]
pub struct LabeledGraph {
    pub nodes: Dictionary,
    pub labels: Dictionary,
    edges: Vec<Edge>,
    seen: HashSet<Edge>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `tail -label-> head`, interning names. Returns false for a
    /// duplicate triple.
    pub fn add_edge(&mut self, tail: &str, label: &str, head: &str) -> bool {
        let t = self.nodes.intern(tail);
        let l = self.labels.intern(label);
        let h = self.nodes.intern(head);
        self.add_edge_ids(t, h, l)
    }

    pub fn add_edge_ids(&mut self, tail: NodeId, head: NodeId, label: LabelId) -> bool {
        debug_assert!((tail as usize) < self.nodes.len() && (head as usize) < self.nodes.len());
        debug_assert!((label as usize) < self.labels.len());
        let e = Edge::new(tail, head, label);
        if self.seen.insert(e) {
            self.edges.push(e);
            true
        } else {
            false
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Writes the `tail<TAB>label<TAB>head` edge-list form.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(self.nodes.name(e.tail));
            s.push('\t');
            s.push_str(self.labels.name(e.label));
            s.push('\t');
            s.push_str(self.nodes.name(e.head));
            s.push('\n');
        }
        s
    }
}

/// Parses `tail<TAB>label<TAB>head` lines. `#` lines and blank lines are skipped.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<LabeledGraph> {
    let mut g = LabeledGraph::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected 3 tab-separated fields, found {}", fields.len()),
            });
        }
        g.add_edge(fields[0], fields[1], fields[2]);
    }
    Ok(g)
}

pub fn parse_edge_str(text: &str) -> Result<LabeledGraph> {
    parse_edge_list(text.as_bytes())
}

/// Compressed adjacency: `items[offsets[v]..offsets[v+1]]`.
#[derive(Clone, Debug, Default)]
pub struct Csr {
    offsets: Vec<usize>,
    items: Vec<u32>,
}

impl Csr {
    /// Groups `(key, item)` pairs by key; within a key, items keep input order.
    fn build(n: usize, pairs: impl Iterator<Item = (u32, u32)> + Clone) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for (k, _) in pairs.clone() {
            offsets[k as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut items = vec![0u32; offsets[n]];
        for (k, item) in pairs {
            items[fill[k as usize]] = item;
            fill[k as usize] += 1;
        }
        Self { offsets, items }
    }

    pub fn get(&self, v: NodeId) -> &[u32] {
        &self.items[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }
}

/// Component assignment from [`find_sccs`].
#[derive(Clone, Debug)]
pub struct SccAssignment {
    pub component: Vec<u32>,
    pub count: usize,
}

impl SccAssignment {
    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.count];
        for &c in &self.component {
            s[c as usize] += 1;
        }
        s
    }
}

/// Tarjan's algorithm with an explicit call stack.
pub fn find_sccs(g: &LabeledGraph) -> SccAssignment {
    let n = g.node_count();
    let out = Csr::build(n, g.edges().iter().map(|e| (e.tail, e.head)));
    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut component = vec![UNSEEN; n];
    let mut count = 0u32;
    let mut next_index = 0u32;
    // (node, position in its adjacency list)
    let mut calls: Vec<(u32, usize)> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;

        while let Some(&mut (v, ref mut pos)) = calls.last_mut() {
            let succ = out.get(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w as usize] == UNSEEN {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    calls.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent as usize] = low[parent as usize].min(low[v as usize]);
            }
            if low[v as usize] == index[v as usize] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w as usize] = false;
                    component[w as usize] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    SccAssignment {
        component,
        count: count as usize,
    }
}

/// SCC-condensed graph: acyclic except for label-preserving self-edges.
#[derive(Clone, Debug)]
pub struct CollapsedGraph {
    /// Collapsed nodes are named after their smallest original member.
    pub base: LabeledGraph,
    pub original_nodes: Dictionary,
    scc_map: Vec<NodeId>,
    component_size: Vec<u32>,
    self_edge_labels: Vec<Vec<LabelId>>,
    topo_depth: Vec<u64>,
    loops_upstream: Vec<bool>,
    roots: Vec<NodeId>,
    leaves: Vec<NodeId>,
    /// Edge indices by tail, ordered by (label, head); self-edges included.
    out: Csr,
    /// Edge indices by head, ordered by (label, tail); self-edges included.
    inc: Csr,
    out_degree: Vec<u32>,
    in_degree: Vec<u32>,
}

impl CollapsedGraph {
    /// Condenses `g` and computes depths.
    pub fn from_graph(g: &LabeledGraph) -> Result<Self> {
        let sccs = find_sccs(g);
        collapse_sccs(g, &sccs)
    }

    /// Rebuilds a collapsed graph from its stored parts (used by index loading).
    pub fn from_parts(
        original_nodes: Dictionary,
        labels: Dictionary,
        scc_map: Vec<NodeId>,
        node_count: usize,
        edges: Vec<Edge>,
    ) -> Result<Self> {
        if scc_map.len() != original_nodes.len() {
            return Err(Error::Corrupt("scc map length differs from node dictionary".into()));
        }
        let mut rep: Vec<Option<NodeId>> = vec![None; node_count];
        let mut size = vec![0u32; node_count];
        for (orig, &c) in scc_map.iter().enumerate() {
            let slot = rep
                .get_mut(c as usize)
                .ok_or_else(|| Error::Corrupt(format!("scc map target {c} out of range")))?;
            slot.get_or_insert(orig as NodeId);
            size[c as usize] += 1;
        }
        let mut base = LabeledGraph::new();
        for r in &rep {
            let r = r.ok_or_else(|| Error::Corrupt("collapsed node without members".into()))?;
            base.nodes.intern(original_nodes.name(r));
        }
        base.labels = labels;
        for e in edges {
            if e.tail as usize >= node_count || e.head as usize >= node_count || e.label as usize >= base.labels.len() {
                return Err(Error::Corrupt("edge references unknown node or label".into()));
            }
            if !base.add_edge_ids(e.tail, e.head, e.label) {
                return Err(Error::Corrupt("duplicate edge".into()));
            }
        }
        Self::finish(base, original_nodes, scc_map, size)
    }

    fn finish(
        mut base: LabeledGraph,
        original_nodes: Dictionary,
        scc_map: Vec<NodeId>,
        component_size: Vec<u32>,
    ) -> Result<Self> {
        let n = base.node_count();
        base.edges.sort_unstable();
        let edges = base.edges();
        let mut self_edge_labels = vec![Vec::new(); n];
        let mut out_degree = vec![0u32; n];
        let mut in_degree = vec![0u32; n];
        for e in edges {
            if e.is_self_edge() {
                self_edge_labels[e.tail as usize].push(e.label);
            } else {
                out_degree[e.tail as usize] += 1;
                in_degree[e.head as usize] += 1;
            }
        }
        for s in &mut self_edge_labels {
            s.sort_unstable();
        }
        let mut by_tail: Vec<u32> = (0..edges.len() as u32).collect();
        by_tail.sort_by_key(|&i| {
            let e = edges[i as usize];
            (e.tail, e.label, e.head)
        });
        let mut by_head: Vec<u32> = (0..edges.len() as u32).collect();
        by_head.sort_by_key(|&i| {
            let e = edges[i as usize];
            (e.head, e.label, e.tail)
        });
        let out = Csr::build(n, by_tail.iter().map(|&i| (edges[i as usize].tail, i)));
        let inc = Csr::build(n, by_head.iter().map(|&i| (edges[i as usize].head, i)));
        let roots = (0..n as u32).filter(|&v| in_degree[v as usize] == 0).collect();
        let leaves = (0..n as u32).filter(|&v| out_degree[v as usize] == 0).collect();
        let mut cg = Self {
            base,
            original_nodes,
            scc_map,
            component_size,
            self_edge_labels,
            topo_depth: Vec::new(),
            loops_upstream: Vec::new(),
            roots,
            leaves,
            out,
            inc,
            out_degree,
            in_degree,
        };
        let (depth, loops) = depth_sweep(&cg)?;
        cg.topo_depth = depth;
        cg.loops_upstream = loops;
        Ok(cg)
    }

    pub fn node_count(&self) -> usize {
        self.base.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.base.edge_count()
    }

    pub fn label_count(&self) -> usize {
        self.base.label_count()
    }

    pub fn labels(&self) -> &Dictionary {
        &self.base.labels
    }

    /// Edges sorted by (tail, head, label).
    pub fn edges(&self) -> &[Edge] {
        self.base.edges()
    }

    pub fn edge(&self, idx: u32) -> Edge {
        self.base.edges()[idx as usize]
    }

    /// Index of an edge in [`Self::edges`], if present.
    pub fn edge_index(&self, e: &Edge) -> Option<u32> {
        self.base.edges().binary_search(e).ok().map(|i| i as u32)
    }

    pub fn scc_map(&self) -> &[NodeId] {
        &self.scc_map
    }

    /// Collapsed node of an original node name.
    pub fn resolve(&self, name: &str) -> Option<NodeId> {
        self.original_nodes.get(name).map(|o| self.scc_map[o as usize])
    }

    pub fn name(&self, v: NodeId) -> &str {
        self.base.nodes.name(v)
    }

    pub fn component_size(&self, v: NodeId) -> u32 {
        self.component_size[v as usize]
    }

    /// Number of collapsed nodes that stand for more than one original node.
    pub fn nontrivial_scc_count(&self) -> usize {
        self.component_size.iter().filter(|&&s| s > 1).count()
    }

    pub fn self_edge_labels(&self, v: NodeId) -> &[LabelId] {
        &self.self_edge_labels[v as usize]
    }

    pub fn has_self_label(&self, v: NodeId, l: LabelId) -> bool {
        self.self_edge_labels[v as usize].binary_search(&l).is_ok()
    }

    pub fn topo_depth(&self) -> &[u64] {
        &self.topo_depth
    }

    pub fn depth(&self, v: NodeId) -> u64 {
        self.topo_depth[v as usize]
    }

    /// True if `v` or any ancestor of `v` carries self-edges.
    pub fn loops_upstream(&self, v: NodeId) -> bool {
        self.loops_upstream[v as usize]
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn leaves(&self) -> &[NodeId] {
        &self.leaves
    }

    /// Outgoing edge indices ordered by (label, head), self-edges included.
    pub fn out_edges(&self, v: NodeId) -> &[u32] {
        self.out.get(v)
    }

    /// Incoming edge indices ordered by (label, tail), self-edges included.
    pub fn in_edges(&self, v: NodeId) -> &[u32] {
        self.inc.get(v)
    }

    /// Out-degree ignoring self-edges.
    pub fn out_degree(&self, v: NodeId) -> u32 {
        self.out_degree[v as usize]
    }

    /// In-degree ignoring self-edges.
    pub fn in_degree(&self, v: NodeId) -> u32 {
        self.in_degree[v as usize]
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.node_count() {
            Ok(())
        } else {
            Err(Error::InvalidNodeId(v))
        }
    }
}

/// Replaces each component by one node, keeping intra-component labels as
/// self-edges (one per label) and deduplicating re-targeted edges.
pub fn collapse_sccs(g: &LabeledGraph, sccs: &SccAssignment) -> Result<CollapsedGraph> {
    let mut new_id = vec![u32::MAX; sccs.count];
    let mut scc_map = Vec::with_capacity(g.node_count());
    let mut base = LabeledGraph::new();
    let mut sizes = Vec::new();
    for v in 0..g.node_count() as u32 {
        let c = sccs.component[v as usize] as usize;
        if new_id[c] == u32::MAX {
            new_id[c] = base.nodes.intern(g.nodes.name(v));
            sizes.push(0u32);
        }
        sizes[new_id[c] as usize] += 1;
        scc_map.push(new_id[c]);
    }
    base.labels = g.labels.clone();
    let mut mapped: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge::new(scc_map[e.tail as usize], scc_map[e.head as usize], e.label))
        .collect();
    mapped.sort_unstable();
    mapped.dedup();
    for e in mapped {
        base.add_edge_ids(e.tail, e.head, e.label);
    }
    CollapsedGraph::finish(base, g.nodes.clone(), scc_map, sizes)
}

/// Longest-path depth with self-edge inflation, recomputed from scratch.
pub fn compute_topo_depth(cg: &CollapsedGraph) -> Result<Vec<u64>> {
    depth_sweep(cg).map(|(d, _)| d)
}

/// One Kahn sweep: depth[v] = max over non-self parents (depth[u] + 1), plus
/// the number of self-edge labels at v. Also propagates the "some ancestor
/// has self-edges" flag.
fn depth_sweep(cg: &CollapsedGraph) -> Result<(Vec<u64>, Vec<bool>)> {
    let n = cg.node_count();
    let mut remaining: Vec<u32> = (0..n as u32).map(|v| cg.in_degree(v)).collect();
    let mut base_depth = vec![0u64; n];
    let mut depth = vec![0u64; n];
    let mut loops = vec![false; n];
    let mut ready: Vec<NodeId> = cg.roots().to_vec();
    let mut done = 0usize;
    while let Some(v) = ready.pop() {
        done += 1;
        let own = cg.self_edge_labels(v).len() as u64;
        depth[v as usize] = base_depth[v as usize] + own;
        loops[v as usize] |= own > 0;
        for &ei in cg.out_edges(v) {
            let e = cg.edge(ei);
            if e.is_self_edge() {
                continue;
            }
            let h = e.head as usize;
            base_depth[h] = base_depth[h].max(depth[v as usize] + 1);
            loops[h] |= loops[v as usize];
            remaining[h] -= 1;
            if remaining[h] == 0 {
                ready.push(e.head);
            }
        }
    }
    if done != n {
        let node = (0..n).find(|&v| remaining[v] > 0).unwrap_or(0) as u32;
        return Err(Error::Cycle { node });
    }
    Ok((depth, loops))
}

/// Size and shape summary of a graph and its condensation.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphStats {
    pub edges: usize,
    pub nodes: usize,
    pub labels: usize,
    pub max_indeg: usize,
    pub max_outdeg: usize,
    pub avg_degree: f64,
    pub largest_depth: u64,
    /// Components with more than one node.
    pub sccs: usize,
    pub collapsed_nodes: usize,
    pub collapsed_edges: usize,
}

impl GraphStats {
    pub fn compute(g: &LabeledGraph, cg: &CollapsedGraph) -> Self {
        let mut indeg = vec![0usize; g.node_count()];
        let mut outdeg = vec![0usize; g.node_count()];
        for e in g.edges() {
            outdeg[e.tail as usize] += 1;
            indeg[e.head as usize] += 1;
        }
        Self {
            edges: g.edge_count(),
            nodes: g.node_count(),
            labels: g.label_count(),
            max_indeg: indeg.into_iter().max().unwrap_or(0),
            max_outdeg: outdeg.into_iter().max().unwrap_or(0),
            avg_degree: if g.node_count() == 0 {
                0.0
            } else {
                g.edge_count() as f64 / g.node_count() as f64
            },
            largest_depth: cg.topo_depth().iter().copied().max().unwrap_or(0),
            sccs: cg.nontrivial_scc_count(),
            collapsed_nodes: cg.node_count(),
            collapsed_edges: cg.edge_count(),
        }
    }
}

impl std::fmt::Display for GraphStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "edges={} nodes={} labels={} max_indeg={} max_outdeg={} avg_degree={:.2} largest_depth={} sccs={} collapsed_nodes={} collapsed_edges={}",
            self.edges,
            self.nodes,
            self.labels,
            self.max_indeg,
            self.max_outdeg,
            self.avg_degree,
            self.largest_depth,
            self.sccs,
            self.collapsed_nodes,
            self.collapsed_edges
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn parse_single_edge() {
        let g = parse_edge_str("a\tp\tb\n").unwrap();
        assert_eq!((g.node_count(), g.label_count(), g.edge_count()), (2, 1, 1));
    }

    #[test]
    fn parse_dedups_and_skips_comments() {
        let g = parse_edge_str("# header\na\tp\tb\n\na\tp\tb\na\tq\tb\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn parse_reports_line_number() {
        let err = parse_edge_str("a\tp\tb\nbroken line\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn parse_empty_stream() {
        let g = parse_edge_str("").unwrap();
        assert_eq!(g.node_count(), 0);
        let cg = CollapsedGraph::from_graph(&g).unwrap();
        assert_eq!(cg.node_count(), 0);
    }

    #[test]
    fn movies_fixture_counts() {
        let g = fixtures::movies();
        assert_eq!((g.node_count(), g.label_count(), g.edge_count()), (5, 4, 6));
    }

    #[test]
    fn dag_components_are_singletons() {
        let g = parse_edge_str("a\tp\tb\nb\tp\tc\na\tq\tc\n").unwrap();
        let s = find_sccs(&g);
        assert_eq!(s.count, 3);
        let cg = collapse_sccs(&g, &s).unwrap();
        assert_eq!(cg.scc_map(), &[0, 1, 2]);
        assert_eq!(cg.edge_count(), 3);
        assert_eq!(cg.nontrivial_scc_count(), 0);
    }

    #[test]
    fn three_cycle_is_one_component() {
        let g = parse_edge_str("a\tp\tb\nb\tp\tc\nc\tp\ta\n").unwrap();
        let s = find_sccs(&g);
        assert_eq!(s.count, 1);
        assert_eq!(s.sizes(), vec![3]);
    }

    #[test]
    fn two_cycle_collapses_to_self_edges() {
        let g = parse_edge_str("a\tp\tb\nb\tq\ta\n").unwrap();
        let cg = CollapsedGraph::from_graph(&g).unwrap();
        assert_eq!(cg.node_count(), 1);
        let labels: Vec<&str> = cg.self_edge_labels(0).iter().map(|&l| cg.labels().name(l)).collect();
        assert_eq!(labels, vec!["p", "q"]);
        assert_eq!(cg.edge_count(), 2);
        assert!(cg.edges().iter().all(Edge::is_self_edge));
    }

    #[test]
    fn cyclic_scc_and_collapse() {
        let g = fixtures::cyclic();
        let s = find_sccs(&g);
        let comp = |n: &str| s.component[g.nodes.get(n).unwrap() as usize];
        assert!(["4", "9", "10"].iter().all(|n| comp(n) == comp("3")));
        assert_eq!(s.sizes().iter().filter(|&&x| x > 1).count(), 1);
        let cg = collapse_sccs(&g, &s).unwrap();
        assert_eq!(cg.node_count(), 8);
        let z = cg.resolve("3").unwrap();
        // labels on 3->4, 4->9, 9->10, 10->3 in the transcription
        let mut cycle_labels: Vec<&str> = ["b", "d", "a", "d"].to_vec();
        cycle_labels.sort();
        cycle_labels.dedup();
        let mut got: Vec<&str> = cg.self_edge_labels(z).iter().map(|&l| cg.labels().name(l)).collect();
        got.sort();
        assert_eq!(got, cycle_labels);
        assert_eq!(cg.nontrivial_scc_count(), 1);
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 1_000_000u32;
        let mut g = LabeledGraph::new();
        let l = g.labels.intern("p");
        for i in 0..=n {
            g.nodes.intern(&i.to_string());
        }
        for i in 0..n {
            g.add_edge_ids(i, i + 1, l);
        }
        g.add_edge_ids(n, 0, l);
        let s = find_sccs(&g);
        assert_eq!(s.count, 1);
    }

    #[test]
    fn depth_examples() {
        let single = CollapsedGraph::from_graph(&{
            let mut g = LabeledGraph::new();
            g.nodes.intern("a");
            g
        })
        .unwrap();
        assert_eq!(single.topo_depth(), &[0]);

        let chain = CollapsedGraph::from_graph(&parse_edge_str("a\tp\tb\nb\tp\tc\n").unwrap()).unwrap();
        assert_eq!(chain.topo_depth(), &[0, 1, 2]);

        // a -> {z1,z2} -> c, where z1/z2 form a 2-cycle with labels q, r
        let g = parse_edge_str("a\tp\tz1\nz1\tq\tz2\nz2\tr\tz1\nz2\tp\tc\n").unwrap();
        let cg = CollapsedGraph::from_graph(&g).unwrap();
        let d = |n: &str| cg.depth(cg.resolve(n).unwrap());
        assert_eq!((d("a"), d("z1"), d("c")), (0, 3, 4));
        assert_eq!(compute_topo_depth(&cg).unwrap(), cg.topo_depth());
        assert!(!cg.loops_upstream(cg.resolve("a").unwrap()));
        assert!(cg.loops_upstream(cg.resolve("c").unwrap()));
    }

    #[test]
    fn depth_respects_edges_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let mut g = LabeledGraph::new();
            let n = rng.gen_range(1..30);
            for i in 0..n {
                g.nodes.intern(&i.to_string());
            }
            for l in 0..4 {
                g.labels.intern(&format!("l{l}"));
            }
            for _ in 0..rng.gen_range(0..60) {
                g.add_edge_ids(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..4));
            }
            let s = find_sccs(&g);
            let cg = collapse_sccs(&g, &s).unwrap();
            // components are exactly mutual reachability classes
            let reach = reach_matrix(&g);
            for (u, row) in reach.iter().enumerate() {
                for (v, &forward) in row.iter().enumerate() {
                    let same = s.component[u] == s.component[v];
                    assert_eq!(same, forward && reach[v][u]);
                }
            }
            for e in cg.edges() {
                if !e.is_self_edge() {
                    assert!(cg.depth(e.head) > cg.depth(e.tail));
                }
            }
            // self-edge labels equal intra-component edge labels
            for z in 0..cg.node_count() as u32 {
                let mut want: Vec<u32> = g
                    .edges()
                    .iter()
                    .filter(|e| cg.scc_map()[e.tail as usize] == z && cg.scc_map()[e.head as usize] == z)
                    .map(|e| e.label)
                    .collect();
                want.sort_unstable();
                want.dedup();
                assert_eq!(cg.self_edge_labels(z), want.as_slice());
            }
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn reach_matrix(g: &LabeledGraph) -> Vec<Vec<bool>> {
        let n = g.node_count();
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for e in g.edges() {
            r[e.tail as usize][e.head as usize] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }

    #[test]
    fn movies_stats_line() {
        let g = fixtures::movies();
        let cg = CollapsedGraph::from_graph(&g).unwrap();
        let st = GraphStats::compute(&g, &cg);
        assert_eq!((st.edges, st.nodes, st.labels, st.sccs), (6, 5, 4, 0));
        assert_eq!((st.max_outdeg, st.max_indeg), (3, 2));
        assert!(st.to_string().starts_with("edges=6 nodes=5 labels=4 "));
    }
}
