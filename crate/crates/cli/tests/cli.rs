use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn kradius(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kradius"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kradius_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kradius"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn construct_optimal_2p() {
    let o = kradius(&["construct", "--n", "10", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 31);
    assert!(out.starts_with("# n=10 k=2\n"));
    let err = stderr(&o);
    assert!(err.contains("length: 30"), "{err}");
    assert!(err.contains("optimal_2p"), "{err}");
    assert!(err.contains("lower bound: 30"), "{err}");
}

#[test]
fn construct_underlines() {
    let o = kradius(&["construct", "--n", "10", "--k", "2", "--show-underlines"]);
    let ids: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert_eq!(&ids[..6], &["0", "_1", "3", "_0", "2", "_4"]);
}

#[test]
fn construct_large_k() {
    let o = kradius(&["construct", "--n", "3", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# n=3 k=5\n0\n1\n2\n");
}

#[test]
fn construct_json_2000() {
    let o = kradius(&["construct", "--n", "2000", "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let length = v["length"].as_u64().unwrap();
    assert!(length <= 1_200_000, "{length}");
    assert_eq!(v["symbols"].as_array().unwrap().len() as u64, length);
    assert_eq!(v["n"], 2000);
    assert_eq!(v["k"], 2);
}

#[test]
fn construct_rejects_bad_flags() {
    for args in [
        &["construct", "--n", "0", "--k", "2"][..],
        &["construct", "--n", "5", "--k", "0"],
        &["construct", "--n", "5"],
        &["construct", "--n", "5", "--k", "2", "--strategy", "fastest"],
        &[
            "construct",
            "--n",
            "7",
            "--k",
            "2",
            "--strategy",
            "main_recursive",
        ],
    ] {
        assert_eq!(kradius(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_intro_example() {
    let ids = [
        0, 1, 6, 4, 3, 7, 8, 0, 4, 2, 5, 0, 3, 2, 1, 8, 5, 6, 7, 2, 1,
    ];
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "# n=9 k=2").unwrap();
    for id in ids {
        writeln!(file, "{id}").unwrap();
    }
    let path = file.path().to_str().unwrap();
    let o = kradius(&["verify", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("covered pairs: 36/36"));
    assert_eq!(
        kradius(&["verify", path, "--k", "1"]).status.code(),
        Some(1)
    );
}

#[test]
fn verify_reports_witness() {
    let o = kradius_stdin(&["verify", "-"], "# n=4 k=2\n0\n1\n2\n3\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("uncovered: 0 3"));

    let o = kradius_stdin(
        &["verify", "-", "--format", "json"],
        "# n=4 k=2\n0\n1\n2\n3\n",
    );
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["is_k_radius"], false);
    assert_eq!(v["uncovered_witnesses"], serde_json::json!([[0, 3]]));
}

#[test]
fn verify_parse_errors() {
    assert_eq!(
        kradius_stdin(&["verify", "-"], "# n=4 k=2\n0\nx\n")
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kradius_stdin(&["verify", "-"], "0\n1\n").status.code(),
        Some(2)
    );
    assert_eq!(
        kradius(&["verify", "/nonexistent/seq.txt"]).status.code(),
        Some(2)
    );
}

#[test]
fn construct_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    for (n, k, format) in [
        ("10", "2", "text"),
        ("57", "3", "json"),
        ("120", "2", "text"),
        ("31", "1", "json"),
    ] {
        let path = dir.path().join(format!("{n}_{k}.{format}"));
        let path = path.to_str().unwrap();
        let o = kradius(&[
            "construct",
            "--n",
            n,
            "--k",
            k,
            "--format",
            format,
            "--out",
            path,
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).is_empty());
        assert_eq!(
            kradius(&["verify", path]).status.code(),
            Some(0),
            "n={n} k={k}"
        );
    }
    let o = kradius(&["construct", "--n", "10", "--k", "2", "--show-underlines"]);
    assert_eq!(
        kradius_stdin(&["verify", "-"], &stdout(&o)).status.code(),
        Some(0)
    );
}

#[test]
fn bound_mod4() {
    let o = kradius(&["bound", "--n", "10", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "mod4_lower 30"));
    let o = kradius(&["bound", "--n", "10", "--k", "2", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mod4_lower"], 30);
    assert_eq!(v["best_lower"], 30);
}

#[test]
fn search_small() {
    let o = kradius(&["search", "--n", "4", "--k", "2", "--budget", "1e6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: optimal"));
    assert!(stdout(&o).contains("best_length: 5"));

    let o = kradius(&["search", "--n", "5", "--k", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["best_length"], 11);
}

#[test]
fn search_guards() {
    assert_eq!(
        kradius(&["search", "--n", "12", "--k", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        kradius(&["search", "--n", "17", "--k", "2", "--allow-long"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kradius(&["search", "--n", "4", "--k", "2", "--budget", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        kradius(&["search", "--n", "4", "--k", "2", "--budget", "1.5"])
            .status
            .code(),
        Some(2)
    );
    let o = kradius(&["search", "--n", "8", "--k", "2", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("budget_exhausted"));
}

#[test]
fn bench_csv_ratios_decrease() {
    let o = kradius(&["bench", "--k", "2", "--n-list", "200,500,1000,2000"]);
    assert_eq!(o.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "n",
            "k",
            "strategy",
            "q_used",
            "length",
            "lower_bound",
            "ratio",
            "build_time",
            "verify_time",
            "error"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let ratios: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    for r in &rows {
        assert!(r[4].parse::<u64>().unwrap() >= r[5].parse::<u64>().unwrap());
        assert!(r[9].is_empty());
    }
}

#[test]
fn bench_keeps_going_after_a_failed_row() {
    let o = kradius(&[
        "bench",
        "--k",
        "2",
        "--n-list",
        "7,50",
        "--strategies",
        "main_recursive",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let rows: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["n"], 7);
    assert!(rows[0]["error"].is_string());
    assert_eq!(rows[1]["n"], 50);
    assert!(rows[1]["error"].is_null());
    assert_eq!(rows[1]["q_used"], 7);
}
