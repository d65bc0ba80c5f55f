use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bitpath::fixtures::{CYCLIC_TSV, MOVIES_TSV};

fn bitpath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitpath"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_then_query_movies() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("movies.tsv");
    let index = dir.path().join("movies.bpi");
    fs::write(&graph, MOVIES_TSV).unwrap();

    let out = bitpath(&["build-index", p(&graph), "-o", p(&index)]);
    assert!(out.status.success());
    let line = stdout(&out);
    assert!(line.starts_with("edges=6 nodes=5 labels=4 "), "{line}");
    assert!(line.contains("index_bytes="));

    let out = bitpath(&[
        "query",
        p(&index),
        "--source",
        ":the_thirteenth_floor",
        "--dest",
        ":movie",
        "--labels",
        "rdf:type",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("YES\t"));

    let out = bitpath(&["query", p(&index), "--source", ":movie", "--dest", ":the_matrix"]);
    assert!(stdout(&out).starts_with("NO\t"));
}

#[test]
fn query_file_with_every_method() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("cyclic.tsv");
    let queries = dir.path().join("q.tsv");
    fs::write(&graph, CYCLIC_TSV).unwrap();
    fs::write(&queries, "3\t8\ta,b,c\n3\t8\ta,c,b\n# comment\n1\t11\t\tpos\n").unwrap();
    for method in ["bitpath", "dfs", "fdfs", "bbfs"] {
        let out = bitpath(&["query", p(&graph), "--queries", p(&queries), "--method", method]);
        assert!(out.status.success(), "{method}");
        let answers: Vec<String> = stdout(&out)
            .lines()
            .map(|l| l.split('\t').next().unwrap().to_owned())
            .collect();
        assert_eq!(answers, ["YES", "NO", "YES"], "{method}");
    }
}

#[test]
fn errors_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("movies.tsv");
    fs::write(&graph, MOVIES_TSV).unwrap();

    let out = bitpath(&["query", p(&graph), "--source", ":nobody", "--dest", ":movie"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":nobody"));

    let out = bitpath(&[
        "query",
        p(&graph),
        "--source",
        ":movie",
        "--dest",
        ":movie",
        "--timeout",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));

    assert_eq!(bitpath(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bitpath(&["query", p(&graph)]).status.code(), Some(1));
    assert_eq!(bitpath(&["--help"]).status.code(), Some(0));

    let bogus = dir.path().join("bogus.bpi");
    fs::write(&bogus, b"BPTH\x01\x00").unwrap();
    assert_eq!(bitpath(&["stats", p(&bogus)]).status.code(), Some(2));
}

#[test]
fn generate_benchmark_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("rmat.tsv");
    let labels = dir.path().join("labels.csv");
    let index = dir.path().join("rmat.bpi");
    let queries = dir.path().join("q.tsv");
    let csv = dir.path().join("bench.csv");

    let out = bitpath(&[
        "gen-rmat",
        "--nodes",
        "1024",
        "--edges",
        "3000",
        "--labels",
        "8",
        "--seed",
        "3",
        "-o",
        p(&graph),
        "--label-csv",
        p(&labels),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(&graph).unwrap().lines().count(), 3000);
    assert!(fs::read_to_string(&labels).unwrap().contains("l1,"));

    assert!(bitpath(&["build-index", p(&graph), "-o", p(&index)]).status.success());
    let out = bitpath(&[
        "gen-queries",
        p(&index),
        "--positives",
        "20",
        "--negatives",
        "20",
        "--seed",
        "1",
        "-o",
        p(&queries),
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&queries).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("\tpos")).count(), 20);

    let out = bitpath(&["bench", p(&index), p(&queries), "--method", "bbfs", "-o", p(&csv)]);
    assert!(out.status.success());
    let report = fs::read_to_string(&csv).unwrap();
    assert!(report.starts_with("method,length,count,mean_ns,stddev_ns,timeouts\n"));
    let total: usize = report
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(total, text.lines().count());

    let out = bitpath(&["stats", p(&index)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("compression_ratio="));
}

#[test]
fn worstcase_graph_answers_no() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("wc.tsv");
    let query = dir.path().join("wc.q");
    let out = bitpath(&[
        "gen-worstcase",
        "-e",
        "6",
        "--len",
        "4",
        "-o",
        p(&graph),
        "--query-output",
        p(&query),
    ]);
    assert!(out.status.success());
    let out = bitpath(&["query", p(&graph), "--queries", p(&query)]);
    let fields: Vec<String> = stdout(&out).trim_end().split('\t').map(str::to_owned).collect();
    assert_eq!(fields[0], "NO");
    assert!(fields[2].parse::<u64>().unwrap() > 6);

    let out = bitpath(&["gen-worstcase", "-e", "2", "--len", "2"]);
    assert_eq!(out.status.code(), Some(2));
}
