use std::process::{Command, Output};
use std::time::{Duration, Instant};

use fsig_core::fsig::PiecewiseFn;

fn fsig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsig"))
        .args(args)
        .env_remove("FSIG_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = fsig(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn closed_and_buchberger_bases_share_the_initial_ideal() {
    let closed = json(&ok(&[
        "basis", "--m", "2", "--n", "2", "--k", "3", "--json",
    ]));
    let oracle = json(&ok(&[
        "basis", "--m", "2", "--n", "2", "--k", "3", "--oracle", "--field", "p=31", "--json",
    ]));
    assert_eq!(closed["lt_ideal"], oracle["lt_ideal"]);
    assert_eq!(closed["route"], "closed");
    assert_eq!(oracle["route"], "buchberger");
}

#[test]
fn bad_field_and_failed_hypothesis_exit_two() {
    assert_eq!(
        fsig(&["basis", "--m", "2", "--k", "3", "--field", "p=33"])
            .status
            .code(),
        Some(2)
    );
    let out = fsig(&["basis", "--m", "9", "--k", "9", "--field", "p=7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hypothesis"));
    assert_eq!(
        fsig(&["length", "--k", "9", "--m", "9", "--n", "9", "--field", "p=7"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn length_routes() {
    let all = ok(&[
        "length", "--k", "3", "--m", "2", "--n", "2", "--route", "all",
    ]);
    assert_eq!(all, "formula: 4\nwlp: 4\noracle: 4\nlength: 4\n");
    let general = ok(&[
        "length", "--M", "5", "--K", "1", "--a", "1", "--b", "1", "--c", "1",
    ]);
    assert!(general.starts_with("13\n"), "{general}");
    let oracle = ok(&[
        "length", "--M", "5", "--K", "1", "--a", "1", "--b", "1", "--c", "1", "--route", "oracle",
    ]);
    assert!(oracle.starts_with("13\n"), "{oracle}");
    // Over F_7 the hypothesis fails, but the oracle route still answers.
    ok(&[
        "length", "--k", "9", "--m", "9", "--n", "9", "--field", "p=7", "--route", "oracle",
    ]);
}

#[test]
fn fsig_limit_and_nvol_values() {
    assert_eq!(
        ok(&["fsig", "--a", "1", "--b", "1", "--c", "1", "--p", "7", "--r", "3"]),
        "6/49\n"
    );
    assert_eq!(
        fsig(&["fsig", "--a", "1", "--b", "1", "--c", "1", "--p", "7", "--r", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fsig(&[
            "fsig", "--a", "1", "--b", "0", "--c", "1", "--u", "2", "--v", "3", "--p", "31", "--r",
            "5"
        ])
        .status
        .code(),
        Some(2)
    );
    let limit = ok(&[
        "limit", "--a", "1", "--b", "0", "--c", "1", "--u", "2", "--v", "3",
    ]);
    let f = PiecewiseFn::from_json_str(&limit).unwrap();
    let bps: Vec<String> = f.breakpoints().iter().map(ToString::to_string).collect();
    assert_eq!(bps, ["0", "1/9", "5/9"]);
    assert_eq!(
        ok(&["limit", "--a", "1", "--b", "1", "--c", "1", "--t", "0.5"]),
        "1/16\n"
    );
    assert_eq!(
        ok(&[
            "nvol",
            "--a",
            "1",
            "--b",
            "1",
            "--c",
            "1",
            "--t",
            "1/2",
            "--check-corollary"
        ]),
        "1/4\ncorollary_b: true\n"
    );
}

#[test]
fn sweep_formats_agree_and_are_deterministic() {
    let base = [
        "sweep",
        "--a",
        "1",
        "--b",
        "1",
        "--c",
        "1",
        "--primes",
        "31,37,41,43,47",
    ];
    let csv_args: Vec<&str> = base.iter().copied().chain(["--format", "csv"]).collect();
    let csv_text = ok(&csv_args);
    assert_eq!(csv_text, ok(&csv_args));
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 50);
    let json_args: Vec<&str> = base.iter().copied().chain(["--format", "json"]).collect();
    let doc = json(&ok(&json_args));
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), 50);
    for (row, obj) in rows.iter().zip(json_rows) {
        for (key, cell) in header.iter().zip(row.iter()) {
            let v = match &obj[key] {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(v, cell, "{key}");
        }
        let p: f64 = row[0].parse().unwrap();
        let diff: f64 = row[6].parse().unwrap();
        assert!((0.0..=10.0 / p).contains(&diff));
    }
}

#[test]
fn sweep_rejects_bad_configs() {
    assert_eq!(
        fsig(&["sweep", "--a", "1", "--b", "1", "--c", "1", "--primes", "33"])
            .status
            .code(),
        Some(2)
    );
    let out = fsig(&[
        "sweep", "--a", "1", "--b", "1", "--c", "1", "--primes", "31", "--to", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_clean_and_fails_mutated() {
    let report = ok(&[
        "verify",
        "--suite",
        "length",
        "--max-size",
        "10",
        "--primes",
        "31,101",
    ]);
    assert!(report.lines().all(|l| l.starts_with("PASS")), "{report}");
    let out = fsig(&[
        "verify",
        "--suite",
        "length",
        "--max-size",
        "5",
        "--mutate",
        "simple-a",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL length.simple at (k,m,n)="));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected"));
}

#[test]
fn full_verify_fits_its_budget() {
    let start = Instant::now();
    ok(&["verify", "--suite", "all", "--max-size", "6"]);
    assert!(start.elapsed() < Duration::from_secs(60));
}

#[test]
fn thread_count_comes_from_the_environment() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_fsig"))
            .args([
                "fsig", "--a", "1", "--b", "1", "--c", "1", "--p", "7", "--r", "3",
            ])
            .env("FSIG_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    assert_eq!(run("0").status.code(), Some(2));
    assert_eq!(run("many").status.code(), Some(2));
}
