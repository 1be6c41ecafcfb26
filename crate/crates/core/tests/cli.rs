use std::process::Command;

fn cuspcur(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cuspcur")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn table(s: &str) -> Vec<&str> {
    s.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn converge_closed_is_deterministic_with_provenance() {
    let (c1, a) = cuspcur(&["converge-closed", "--n-max", "6", "--seed", "3"]);
    let (c2, b) = cuspcur(&["converge-closed", "--n-max", "6", "--seed", "3"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("# cuspcur "));
    assert!(a.lines().any(|l| l.starts_with("# preset gamma2 sha256 ")));
    assert!(a.lines().any(|l| l == "# params n_min=1 n_max=6"));
    assert!(a.lines().any(|l| l.starts_with("# stabilized box=B0 N=")));
    assert_eq!(table(&a)[0], "n,box_id,count,twice_target,delta");
    assert_eq!(table(&a).len(), 1 + 6 * 5);
}

#[test]
fn single_n_gives_one_row_per_box() {
    let (_, a) = cuspcur(&["converge-closed", "--n-min", "1", "--n-max", "1"]);
    let rows = table(&a);
    assert_eq!(rows.len(), 1 + 5);
    assert!(rows[1..].iter().all(|r| r.starts_with("1,")));
}

#[test]
fn empty_blowup_range_is_header_only() {
    let (c, a) = cuspcur(&["blowup", "--n-max", "0"]);
    assert_eq!(c, 0);
    assert_eq!(table(&a), vec!["n,count,lower_bound_family"]);
    assert!(a.contains("# self_intersection {0,inf} = 0"));
}

#[test]
fn blowup_counts_grow() {
    let (_, a) = cuspcur(&["blowup", "--n-max", "5"]);
    for (k, row) in table(&a)[1..].iter().enumerate() {
        let f: Vec<&str> = row.split(',').collect();
        assert!(f[1].parse::<usize>().unwrap() >= k + 2, "{row}");
    }
}

#[test]
fn limitset_table_decreases() {
    let (_, a) = cuspcur(&["limitset", "--depth", "6", "--n-max", "8"]);
    let v: Vec<f64> = table(&a)[1..].iter().map(|r| r.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(v.len(), 3);
    assert!(v[0] > v[1] && v[1] > v[2]);
}

#[test]
fn densify_and_eval_round_trip() {
    let dir = std::env::temp_dir().join(format!("cuspcur-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("mu.json");
    std::fs::write(&input, r#"{"atoms":[{"weight":1.0,"kind":"closed","word":"ab"}]}"#).unwrap();
    let (nu, rep) = (dir.join("nu.json"), dir.join("report.json"));
    let (c, _) = cuspcur(&[
        "densify",
        "--input",
        input.to_str().unwrap(),
        "--eps",
        "exact",
        "--report",
        rep.to_str().unwrap(),
        "--out",
        nu.to_str().unwrap(),
    ]);
    assert_eq!(c, 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["max_discrepancy"], 0.0);
    assert_eq!(report["exact"], true);
    let (_, a) = cuspcur(&["eval", "--input", input.to_str().unwrap()]);
    let (_, b) = cuspcur(&["eval", "--input", nu.to_str().unwrap()]);
    assert_eq!(table(&a), table(&b));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let dir = std::env::temp_dir().join(format!("cuspcur-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("parabolic.json");
    std::fs::write(&bad, r#"{"atoms":[{"weight":1.0,"kind":"closed","word":"aB"}]}"#).unwrap();
    assert_eq!(cuspcur(&["eval", "--input", bad.to_str().unwrap()]).0, 2);
    assert_eq!(cuspcur(&["densify", "--input", bad.to_str().unwrap(), "--eps", "zero"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
