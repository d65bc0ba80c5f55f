//! Per-length timing statistics over a query set.

use std::collections::BTreeMap;
use std::time::Duration;

use crate::baselines::{run_query, Method};
use crate::error::{Error, Result};
use crate::index::BitPathIndex;
use crate::query::{Deadline, QueryResult, QuerySet};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub length: usize,
    /// Queries of this length, timed-out ones included.
    pub count: usize,
    pub mean_ns: f64,
    pub stddev_ns: f64,
    pub timeouts: usize,
}

#[derive(Clone, Debug)]
pub struct BenchReport {
    pub method: Method,
    pub timeout: Option<Duration>,
    pub rows: Vec<BenchRow>,
    /// One entry per query in input order; `None` for timeouts.
    pub results: Vec<Option<QueryResult>>,
}

impl BenchReport {
    pub fn total_count(&self) -> usize {
        self.rows.iter().map(|r| r.count).sum()
    }

    pub fn total_timeouts(&self) -> usize {
        self.rows.iter().map(|r| r.timeouts).sum()
    }

    /// Mean over all completed queries, or `None` if none completed.
    pub fn overall_mean_ns(&self) -> Option<f64> {
        let done: Vec<f64> = self
            .results
            .iter()
            .flatten()
            .map(|r| r.elapsed.as_nanos() as f64)
            .collect();
        (!done.is_empty()).then(|| done.iter().sum::<f64>() / done.len() as f64)
    }

    /// `method,length,count,mean_ns,stddev_ns,timeouts`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,length,count,mean_ns,stddev_ns,timeouts\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{:.1},{:.1},{}\n",
                self.method, r.length, r.count, r.mean_ns, r.stddev_ns, r.timeouts
            ));
        }
        s
    }
}

/// Mean and population standard deviation.
fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Runs every query with `method`, abandoning any that exceed `timeout`.
/// Timed-out queries are counted but excluded from the statistics.
pub fn run_benchmark(
    method: Method,
    idx: &BitPathIndex,
    queries: &QuerySet,
    timeout: Option<Duration>,
) -> Result<BenchReport> {
    let mut by_len: BTreeMap<usize, (Vec<f64>, usize)> = BTreeMap::new();
    let mut results = Vec::with_capacity(queries.len());
    for entry in &queries.entries {
        let deadline = timeout.map_or_else(Deadline::none, Deadline::after);
        let slot = by_len.entry(entry.query.len()).or_default();
        match run_query(method, idx, &entry.query, deadline) {
            Ok(r) => {
                slot.0.push(r.elapsed.as_nanos() as f64);
                results.push(Some(r));
            }
            Err(Error::Timeout) => {
                slot.1 += 1;
                results.push(None);
            }
            Err(e) => return Err(e),
        }
    }
    let rows = by_len
        .into_iter()
        .map(|(length, (times, timeouts))| {
            let (mean_ns, stddev_ns) = mean_stddev(&times);
            BenchRow {
                length,
                count: times.len() + timeouts,
                mean_ns,
                stddev_ns,
                timeouts,
            }
        })
        .collect();
    Ok(BenchReport {
        method,
        timeout,
        rows,
        results,
    })
}
