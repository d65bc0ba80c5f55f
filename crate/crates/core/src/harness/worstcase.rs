//! A family of acyclic graphs on which divide-and-conquer must try every
//! candidate edge at each split before failing.
//!
//! For a query of length `L` with labels `l0 .. l{L-1}`:
//!
//! ```text
//! x -l0-> h1
//! h_m -f-> s_m_j -l_m-> t_m_j -f-> h_{m+1}     m = 1 .. L-2, j < e
//! h_{L-1} -f-> y
//! h_{L-2} -l{L-1}-> u_j -f-> y                 j < e
//! ```
//!
//! Every `l{L-1}` edge lies between `x` and `y` but precedes the last
//! `l{L-2}` layer, so the query fails only after the recursion has visited
//! each combination of earlier candidates. The satisfiable variant adds one
//! `l{L-1}` edge after the last layer.

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::query::LocrQuery;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorstCaseVariant {
    Fail,
    Satisfiable,
}

#[derive(Clone, Debug)]
pub struct WorstCase {
    pub graph: LabeledGraph,
    pub source: String,
    pub destination: String,
    pub labels: Vec<String>,
}

impl WorstCase {
    pub fn query(&self) -> LocrQuery {
        LocrQuery {
            source: self.source.clone(),
            destination: self.destination.clone(),
            labels: self.labels.clone(),
        }
    }
}

const FILLER: &str = "f";

/// Builds the family member with `e_param` candidate edges per label and a
/// query of `seq_len` labels (at least 3).
pub fn gen_worstcase(e_param: usize, seq_len: usize, variant: WorstCaseVariant) -> Result<WorstCase> {
    if e_param == 0 {
        return Err(Error::InvalidParameter("e must be at least 1".into()));
    }
    if seq_len < 3 {
        return Err(Error::InvalidParameter(format!(
            "query length {seq_len} too short; the family needs at least 3 labels"
        )));
    }
    let labels: Vec<String> = (0..seq_len).map(|i| format!("l{i}")).collect();
    let hub = |m: usize| format!("h{m}");
    let mut g = LabeledGraph::new();
    g.add_edge("x", &labels[0], &hub(1));
    for (m, label) in labels.iter().enumerate().take(seq_len - 1).skip(1) {
        for j in 0..e_param {
            let (s, t) = (format!("s{m}_{j}"), format!("t{m}_{j}"));
            g.add_edge(&hub(m), FILLER, &s);
            g.add_edge(&s, label, &t);
            g.add_edge(&t, FILLER, &hub(m + 1));
        }
    }
    g.add_edge(&hub(seq_len - 1), FILLER, "y");
    let last = &labels[seq_len - 1];
    for j in 0..e_param {
        let u = format!("u{j}");
        g.add_edge(&hub(seq_len - 2), last, &u);
        g.add_edge(&u, FILLER, "y");
    }
    if variant == WorstCaseVariant::Satisfiable {
        g.add_edge(&hub(seq_len - 1), last, "w");
        g.add_edge("w", FILLER, "y");
    }
    Ok(WorstCase {
        graph: g,
        source: "x".into(),
        destination: "y".into(),
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::evaluate;
    use crate::graph::CollapsedGraph;
    use crate::harness::oracle::walk_oracle;
    use crate::index::BitPathIndex;

    fn run(e: usize, len: usize, v: WorstCaseVariant) -> (bool, u64) {
        let wc = gen_worstcase(e, len, v).unwrap();
        let idx = BitPathIndex::from_graph(&wc.graph).unwrap();
        let r = evaluate(&idx, &wc.query()).unwrap();
        (r.answer.is_yes(), r.dnc_calls)
    }

    #[test]
    fn answers_match_oracle() {
        for len in 3..=5 {
            for e in 1..=4 {
                for v in [WorstCaseVariant::Fail, WorstCaseVariant::Satisfiable] {
                    let wc = gen_worstcase(e, len, v).unwrap();
                    let want = walk_oracle(&wc.graph, &wc.query()).unwrap().is_yes();
                    assert_eq!(want, v == WorstCaseVariant::Satisfiable);
                    assert_eq!(run(e, len, v).0, want);
                }
            }
        }
    }

    #[test]
    fn single_candidate_is_cheap() {
        let (yes, calls) = run(1, 4, WorstCaseVariant::Satisfiable);
        assert!(yes);
        assert!(calls <= 6, "{calls}");
    }

    #[test]
    fn acyclic() {
        let wc = gen_worstcase(5, 4, WorstCaseVariant::Fail).unwrap();
        let cg = CollapsedGraph::from_graph(&wc.graph).unwrap();
        assert_eq!(cg.node_count(), wc.graph.node_count());
    }

    #[test]
    fn fail_side_grows_superlinearly() {
        let (_, c8) = run(8, 4, WorstCaseVariant::Fail);
        let (_, c16) = run(16, 4, WorstCaseVariant::Fail);
        assert!(c16 > 2 * c8, "{c8} -> {c16}");
    }

    #[test]
    fn rejects_short_queries() {
        assert!(gen_worstcase(3, 2, WorstCaseVariant::Fail).is_err());
        assert!(gen_worstcase(0, 4, WorstCaseVariant::Fail).is_err());
    }
}
