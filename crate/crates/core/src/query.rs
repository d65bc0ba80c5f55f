//! Query values and their line-oriented text formats.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{CollapsedGraph, LabelId, NodeId};

/// Source, destination and the ordered labels that must appear on the path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocrQuery {
    pub source: String,
    pub destination: String,
    pub labels: Vec<String>,
}

impl LocrQuery {
    pub fn new<S: Into<String>>(source: S, destination: S, labels: &[&str]) -> Self {
        Self {
            source: source.into(),
            destination: destination.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Maps names onto collapsed node and label IDs. An unknown label makes
    /// the query unsatisfiable (`labels` is `None`); an unknown node is an error.
    pub fn resolve(&self, cg: &CollapsedGraph) -> Result<ResolvedQuery> {
        let source = cg
            .resolve(&self.source)
            .ok_or_else(|| Error::UnknownNode(self.source.clone()))?;
        let destination = cg
            .resolve(&self.destination)
            .ok_or_else(|| Error::UnknownNode(self.destination.clone()))?;
        let labels = self
            .labels
            .iter()
            .map(|l| cg.labels().get(l))
            .collect::<Option<Vec<_>>>();
        Ok(ResolvedQuery {
            source,
            destination,
            labels,
        })
    }

    /// `source<TAB>destination<TAB>l1,l2,…`
    pub fn to_line(&self) -> String {
        format!("{}\t{}\t{}", self.source, self.destination, self.labels.join(","))
    }
}

impl FromStr for LocrQuery {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(format!("expected 3 tab-separated fields, found {}", fields.len()));
        }
        Ok(Self {
            source: fields[0].to_owned(),
            destination: fields[1].to_owned(),
            labels: split_labels(fields[2]),
        })
    }
}

fn split_labels(field: &str) -> Vec<String> {
    if field.is_empty() {
        Vec::new()
    } else {
        field.split(',').map(str::to_owned).collect()
    }
}

/// A query in collapsed-graph IDs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedQuery {
    pub source: NodeId,
    pub destination: NodeId,
    /// `None` when some label is absent from the graph.
    pub labels: Option<Vec<LabelId>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Self::Yes
        } else {
            Self::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Self::Yes
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Yes => "YES",
            Self::No => "NO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    pub answer: Answer,
    pub dnc_calls: u64,
    pub intersections: u64,
    pub elapsed: Duration,
}

impl QueryResult {
    /// `YES|NO<TAB>elapsed_ns<TAB>dnc_calls<TAB>intersections`
    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}",
            self.answer,
            self.elapsed.as_nanos(),
            self.dnc_calls,
            self.intersections
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Positive => "pos",
            Self::Negative => "neg",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryEntry {
    pub query: LocrQuery,
    pub polarity: Polarity,
    /// Number of edges of the sampled path the query came from.
    pub path_len: usize,
}

/// Generated queries with their polarity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuerySet {
    pub entries: Vec<QueryEntry>,
}

impl QuerySet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, polarity: Polarity) -> usize {
        self.entries.iter().filter(|e| e.polarity == polarity).count()
    }

    /// Query lines plus a 4th `pos|neg` column.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&e.query.to_line());
            s.push('\t');
            s.push_str(e.polarity.as_str());
            s.push('\n');
        }
        s
    }
}

/// Reads query lines; a 4th `pos|neg` column is accepted and ignored.
pub fn parse_queries<R: BufRead>(reader: R) -> Result<Vec<LocrQuery>> {
    Ok(parse_query_set(reader)?.entries.into_iter().map(|e| e.query).collect())
}

/// Reads a query-set file. Lines without a polarity column are taken as
/// positive.
pub fn parse_query_set<R: BufRead>(reader: R) -> Result<QuerySet> {
    let mut entries = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: i + 1, message };
        let fields: Vec<&str> = line.split('\t').collect();
        let (query, polarity) = match fields.len() {
            3 => (line.parse::<LocrQuery>().map_err(parse_err)?, Polarity::Positive),
            4 => {
                let polarity = match fields[3] {
                    "pos" => Polarity::Positive,
                    "neg" => Polarity::Negative,
                    other => return Err(parse_err(format!("unknown polarity `{other}`"))),
                };
                let q = LocrQuery {
                    source: fields[0].to_owned(),
                    destination: fields[1].to_owned(),
                    labels: split_labels(fields[2]),
                };
                (q, polarity)
            }
            n => return Err(parse_err(format!("expected 3 or 4 tab-separated fields, found {n}"))),
        };
        let path_len = query.len();
        entries.push(QueryEntry {
            query,
            polarity,
            path_len,
        });
    }
    Ok(QuerySet { entries })
}

/// Cooperative deadline checked from inside traversal loops.
#[derive(Clone, Copy, Debug)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Self(None)
    }

    pub fn after(d: Duration) -> Self {
        Self(Instant::now().checked_add(d))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::Timeout)
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_line_round_trip() {
        let q: LocrQuery = "a\tb\tx,y,x".parse().unwrap();
        assert_eq!(q.labels, vec!["x", "y", "x"]);
        assert_eq!(q.to_line(), "a\tb\tx,y,x");
        let r: LocrQuery = "a\tb\t".parse().unwrap();
        assert!(r.labels.is_empty());
        assert!("a\tb".parse::<LocrQuery>().is_err());
    }

    #[test]
    fn query_set_reads_polarity() {
        let text = "a\tb\tx\tpos\nc\td\t\tneg\ne\tf\ty\n";
        let qs = parse_query_set(text.as_bytes()).unwrap();
        assert_eq!(qs.count(Polarity::Positive), 2);
        assert_eq!(qs.count(Polarity::Negative), 1);
        assert!(parse_query_set("a\tb\tx\tmaybe\n".as_bytes()).is_err());
    }

    #[test]
    fn result_line_format() {
        let r = QueryResult {
            answer: Answer::Yes,
            dnc_calls: 3,
            intersections: 4,
            elapsed: Duration::from_nanos(1234),
        };
        assert_eq!(r.to_line(), "YES\t1234\t3\t4");
    }
}
