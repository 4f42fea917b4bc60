use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf"))
        .args(args)
        .output()
        .expect("run pcf")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Header line, then CSV records.
fn csv_records(text: &str) -> (Value, Vec<String>, Vec<Vec<String>>) {
    let (first, rest) = text.split_once('\n').unwrap();
    let meta: Value = serde_json::from_str(first.strip_prefix("# ").unwrap()).unwrap();
    let mut r = csv::Reader::from_reader(rest.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (meta, header, rows)
}

#[test]
fn equidist_table_has_one_row_per_period() {
    let o = pcf(&[
        "equidist",
        "--d",
        "2",
        "--alpha",
        "1",
        "--n-max",
        "10",
        "--place",
        "inf",
        "--no-timestamp",
    ]);
    assert!(o.status.success());
    let (meta, header, rows) = csv_records(&stdout(&o));
    assert_eq!(header, ["d", "n", "Dn", "place", "average", "target", "gap"]);
    assert_eq!(rows.len(), 10);
    let target: f64 = rows[0][5].parse().unwrap();
    let gap: f64 = rows[0][6].parse().unwrap();
    assert_eq!(gap, -target);
    assert_eq!(meta["config"]["n_max"], 10);
    assert_eq!(meta["log_base"], "e");
    assert!(meta.get("generated_unix").is_none());
}

#[test]
fn finite_place_gaps_are_zero() {
    let o = pcf(&["equidist", "--d", "2", "--alpha", "1/3", "--n-max", "8", "--place", "3"]);
    let (meta, _, rows) = csv_records(&stdout(&o));
    assert!(meta["generated_unix"].is_u64());
    assert!(rows.iter().all(|r| r[6].parse::<f64>().unwrap() == 0.0));
}

#[test]
fn height_of_pcf_parameter_is_zero() {
    let v = json(&pcf(&["height", "--d", "2", "--alpha", "-1/1"]));
    assert_eq!(v["total"], 0.0);
    assert_eq!(v["is_pcf"], true);
}

#[test]
fn certify_gleason_pair() {
    let v = json(&pcf(&["certify", "--a", "gleason(2,2)", "--b", "gleason(2,3)"]));
    assert_eq!(v["resultant"], "1");
    assert_eq!(v["is_unit"], true);
    assert_eq!(v["integral"], true);
}

#[test]
fn polynomial_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("phi22.txt");
    let b = dir.path().join("m221.txt");
    assert!(pcf(&["gleason", "--d", "2", "--n", "1", "--out", a.to_str().unwrap()])
        .status
        .success());
    assert!(pcf(&[
        "misiurewicz",
        "--d",
        "2",
        "--m",
        "2",
        "--n",
        "1",
        "--out",
        b.to_str().unwrap()
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&b).unwrap();
    assert!(text.starts_with("# {"));
    assert!(text.ends_with("deg 1\n2\n1\n"));

    let v = json(&pcf(&[
        "certify",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
    ]));
    assert_eq!(v["resultant"], "2");
    assert_eq!(v["integral"], false);
    assert_eq!(v["violating_primes"][0]["prime"], "2");
    let v = json(&pcf(&[
        "certify",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
        "--s-primes",
        "2",
    ]));
    assert_eq!(v["integral"], true);

    let g = dir.path().join("phi24.txt");
    assert!(pcf(&["gleason", "--d", "2", "--n", "4", "--out", g.to_str().unwrap()])
        .status
        .success());
    let o = pcf(&["roots", "--poly", g.to_str().unwrap()]);
    let (_, header, rows) = csv_records(&stdout(&o));
    assert_eq!(header, ["index", "re", "im", "residual"]);
    assert_eq!(rows.len(), 6);
}

#[test]
fn json_outputs_round_trip() {
    let v = json(&pcf(&["roots", "--d", "2", "--n", "5", "--format", "json"]));
    let set: pcf_core::rootfind::ComplexRootSet = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(set.roots.len(), 15);
    let v = json(&pcf(&[
        "equidist", "--d", "2", "--alpha", "3", "--n-max", "4", "--format", "json",
    ]));
    let t: pcf_core::equidist::EquidistTable = serde_json::from_value(v).unwrap();
    assert_eq!(t.rows.len(), 4);
    let v = json(&pcf(&["gleason-table", "--d", "2", "--n-max", "4", "--format", "json"]));
    let cells: Vec<pcf_core::integrality::GleasonPairCell> = serde_json::from_value(v["cells"].clone()).unwrap();
    assert_eq!(cells.len(), 6);
}

#[test]
fn identical_runs_are_byte_identical() {
    let runs: &[&[&str]] = &[
        &["equidist", "--d", "2", "--alpha", "1", "--n-max", "9", "--no-timestamp"],
        &[
            "mass",
            "--d",
            "2",
            "--alpha",
            "1/3",
            "--n-max",
            "7",
            "--s-primes",
            "3",
            "--no-timestamp",
        ],
        &[
            "gleason-table",
            "--d",
            "2",
            "--n-max",
            "6",
            "--m-max",
            "2",
            "--no-timestamp",
        ],
        &["roots", "--d", "2", "--n", "7", "--no-timestamp"],
        &[
            "pcf-scan",
            "--d",
            "2",
            "--num-max",
            "20",
            "--den-max",
            "3",
            "--no-timestamp",
        ],
    ];
    for args in runs {
        let a = pcf(args);
        let b = pcf(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn tables() {
    let (_, header, rows) = csv_records(&stdout(&pcf(&["gleason-table", "--d", "2", "--n-max", "5"])));
    assert_eq!(header.last().unwrap(), "violation");
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r[4] == "false"));

    let (_, _, rows) = csv_records(&stdout(&pcf(&["pcf-scan", "--d", "2"])));
    let hits: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(hits, ["-2", "-1", "0"]);

    let (_, header, rows) = csv_records(&stdout(&pcf(&["mass", "--d", "2", "--alpha", "1", "--n-max", "6"])));
    assert_eq!(header[2], "s_term_sum");
    for r in rows {
        assert_eq!(r[2].parse::<f64>().unwrap(), -r[3].parse::<f64>().unwrap());
        assert_eq!(r[6], "true");
    }
}

#[test]
fn green_record() {
    let v = json(&pcf(&["green", "--d", "2", "--c", "1,0"]));
    assert!((v["value"].as_f64().unwrap() - 0.4073545227).abs() < 1e-9);
    assert_eq!(v["membership"]["verdict"], "exterior");
    let v = json(&pcf(&["green", "--d", "2", "--c", "-1,0"]));
    assert_eq!(v["value"], 0.0);
    assert_eq!(v["membership"]["verdict"], "bounded_at_budget");
}

#[test]
fn exit_codes() {
    let o = pcf(&["equidist", "--d", "2", "--alpha", "1", "--n-max", "3", "--place", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcf(&["height", "--d", "1", "--alpha", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = pcf(&["green", "--d", "2", "--c", "1,0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "usage");

    let o = pcf(&["certify", "--a", "gleason(2,1)", "--b", "gleason(2,1)"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(v["error"], "common_root");
    assert!(v["detail"].is_string());

    let o = pcf(&["misiurewicz", "--d", "2", "--m", "1", "--n", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let missing = Path::new("/nonexistent/poly.txt");
    let o = pcf(&["roots", "--poly", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
