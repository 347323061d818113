use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orthoforms"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (serde_json::Value, i32) {
    let o = run(args);
    (
        serde_json::from_slice(&o.stdout).expect("valid JSON"),
        o.status.code().unwrap(),
    )
}

#[test]
fn weights_of_a1() {
    let o = run(&["tables", "weights", "--lattice", "0:A1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("jacobi: 10,12\n"), "{s}");
    assert!(s.contains("jacobian: 35\n"), "{s}");
    let (v, _) = json(&["tables", "weights", "--lattice", "0:A1", "--format", "json"]);
    assert_eq!(v["jacobi"], serde_json::json!([10, 12]));
    assert_eq!(v["jacobian_weight"], 35);
}

#[test]
fn theta_identity_for_d2() {
    let (v, code) = json(&[
        "lift",
        "verify-theta",
        "--family",
        "D",
        "--n",
        "2",
        "--qmax",
        "3",
        "--ximax",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["equal"], true);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);
    assert!(v["compared"].as_u64().unwrap() > 0);
}

#[test]
fn arrangement_certificates() {
    let (v, code) = json(&["arrange", "check", "--lattice", "0:D9"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["margin"], 8);
    assert_eq!(v["weighted_sum"], 1);
    assert_eq!(v["bound"], 9);

    let (v, code) = json(&["arrange", "check", "--lattice", "9A1:A1", "--allow-nonfamily"]);
    assert_eq!(code, 1);
    assert_eq!(v["verdict"], "fail");

    assert_eq!(run(&["arrange", "check", "--lattice", "9A1:A1"]).status.code(), Some(2));
}

#[test]
fn full_table_row_counts() {
    let rows = |extra: &[&str]| {
        let mut args = vec!["tables", "weights", "--all", "--format", "csv"];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        let mut r = csv::Reader::from_reader(o.stdout.as_slice());
        assert_eq!(r.headers().unwrap().len(), 7);
        r.records().map(|x| x.unwrap()).collect::<Vec<_>>()
    };
    let base = rows(&[]);
    assert_eq!(base.len(), 147);
    assert!(base.iter().all(|r| &r[6] == "pass"));
    assert_eq!(rows(&["--include-predicted"]).len(), 164);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["tables", "weights", "--all", "--format", "json"][..],
        &["lattice", "info", "--lattice", "A2+D4"],
        &[
            "lift", "grit", "--family", "A", "--n", "2", "--qmax", "2", "--ximax", "2",
        ],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn paramodular_generators() {
    let (v, code) = json(&["tables", "generators", "--paramodular", "3", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["weights"], serde_json::json!([4, 6, 6, 8, 9, 10, 11, 12]));
    assert_eq!(v["stabilized"], true);
}

#[test]
fn theta_block_report() {
    let (v, code) = json(&[
        "jacobi",
        "theta-block",
        "--classical",
        "4,4,3,2,1",
        "--qmax",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["weight"], "2");
    assert_eq!(v["index"], "25");
    assert_eq!(v["q_order"], "1");
    assert_eq!(v["class"], "holomorphic");
}

#[test]
fn hecke_and_products() {
    let (v, code) = json(&[
        "jacobi", "hecke", "--family", "D", "--n", "2", "--m", "2", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["index"], "2");
    let (v, code) = json(&[
        "lift", "borch", "--family", "D", "--n", "3", "--qmax", "3", "--ximax", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["weight"], "9");
    assert_eq!(v["terms"][0]["xi"], 1);
}

#[test]
fn norm2_and_hilbert() {
    let (v, _) = json(&["tables", "norm2", "--format", "json"]);
    assert_eq!(v.as_array().unwrap().len(), 40);
    let (v, _) = json(&[
        "tables",
        "hilbert",
        "--lattice",
        "2A1",
        "--order",
        "12",
        "--format",
        "json",
    ]);
    let dims: Vec<i64> = v["dimensions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect();
    assert_eq!(dims, vec![1, 0, 0, 0, 1, 0, 1, 0, 2, 0, 3, 0, 4]);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["lattice", "info", "--lattice", "B3"]).status.code(), Some(2));
    assert_eq!(
        run(&["lattice", "info", "--lattice", "A2", "--format", "csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["tables", "weights"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "weights", "--lattice", "0:E8"]).status.code(), Some(2));
    assert_eq!(run(&["lift", "grit", "--qmax", "2"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}
