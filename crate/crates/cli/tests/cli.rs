use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubic-sudoku"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("spawn")
}

fn summary(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 1, "one summary line: {text}");
    serde_json::from_str(text.trim()).expect("summary is JSON")
}

#[test]
fn gen_round_trips_through_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--n", "200", "--seed", "3", "--out", "g.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("g.json")).unwrap();
    let g = cubic_sudoku::io::graph_from_json(&text).unwrap();
    assert_eq!(g.n(), 200);
    assert_eq!(cubic_sudoku::io::graph_to_json(&g), text);
    assert_eq!(g, cubic_sudoku::generate_graph(200, 3).unwrap());

    let out = run(&["pipeline", "--graph", "g.json", "--seed", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(summary(&out)["result"]["n"], 200);
}

#[test]
fn pipeline_is_byte_identical_across_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "pipeline".to_string(),
            "--n".into(),
            "5000".into(),
            "--seed".into(),
            "11".into(),
            "--out".into(),
            format!("{name}.json"),
            "--trajectory".into(),
            format!("{name}.csv"),
        ]
    };
    let a = bin().args(args("a")).current_dir(dir.path()).output().unwrap();
    let b = bin().args(args("b")).current_dir(dir.path()).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    for ext in ["json", "csv"] {
        let x = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
        let y = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{ext} differs");
    }
}

#[test]
fn verify_accepts_pipeline_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["pipeline", "--n", "500", "--seed", "2", "--out", "r.json", "--colouring", "c.json", "--set", "s.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let out = run(&["verify", "--graph", "r.json", "--colouring", "c.json", "--set", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    assert_eq!(s["status"], "UniqueByPropagation");
    assert_eq!(s["proper"], true);
}

#[test]
fn verify_rejects_a_set_that_is_too_small() {
    let dir = tempfile::tempdir().unwrap();
    run(&["pipeline", "--n", "300", "--seed", "4", "--out", "r.json", "--colouring", "c.json"], dir.path());
    std::fs::write(dir.path().join("s.json"), r#"{"version":"set-v1","vertices":[1]}"#).unwrap();
    let out = run(&["verify", "--graph", "r.json", "--colouring", "c.json", "--set", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_ne!(summary(&out)["status"], "UniqueByPropagation");
}

#[test]
fn usage_and_file_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["pipeline", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    let out = run(&["verify", "--graph", "missing.json", "--colouring", "c.json", "--set", "s.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["gen", "--n", "7", "--out", "g.json"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn chain_reports_balanced_law() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["chain", "--q1", "0.1", "--q2", "0.1", "--q3", "0.1", "--power", "6"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    for key in ["params", "pi", "t_mix", "alpha", "kappa", "c_cond"] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    let pi: Vec<f64> = serde_json::from_value(s["pi"].clone()).unwrap();
    let expect = cubic_sudoku::chain::pi_bal(0.3);
    for (a, b) in pi.iter().zip(expect) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn min_sudoku_on_k4() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("k4.json"),
        r#"{"version":"cubic-v1","n":4,"matching":[[1,3],[2,4]]}"#,
    )
    .unwrap();
    let out = run(&["min-sudoku", "--graph", "k4.json", "--colours", "4"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    // K4 with four colours: fixing three vertices forces the fourth and no fewer suffice.
    assert_eq!(summary(&out)["size"], 3);
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["sweep", "--ns", "1000,2000", "--trials", "2", "--jobs", "2", "--out", "s.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
}
