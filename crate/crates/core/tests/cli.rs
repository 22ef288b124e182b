use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use leaper_tour::sweep::free_leapers;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_leaper-tour"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn generate_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_owned();
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", &p]);
    let o = run(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn generate_then_verify_each_format() {
    let dir = tempfile::tempdir().unwrap();
    for fmt in ["text", "json"] {
        let path = generate_to(
            dir.path(),
            fmt,
            &["--p", "2", "--q", "5", "--seed", "3", "--format", fmt],
        );
        let o = run(&["verify", &path]);
        assert_eq!(o.status.code(), Some(0), "{fmt}: {}", stdout(&o));
        assert!(stdout(&o).contains("valid: yes"));
    }
    let grid = generate_to(
        dir.path(),
        "grid",
        &["--p", "1", "--q", "2", "--format", "grid"],
    );
    let o = run(&["verify", &grid, "--p", "1", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn grid_without_leaper_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let grid = generate_to(
        dir.path(),
        "grid",
        &["--p", "1", "--q", "2", "--format", "grid"],
    );
    assert_eq!(run(&["verify", &grid]).status.code(), Some(2));
}

#[test]
fn truncated_tour_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_to(dir.path(), "t.txt", &["--p", "1", "--q", "2"]);
    let text = fs::read_to_string(&path).unwrap();
    let kept: Vec<&str> = text.lines().take(20).collect();
    fs::write(&path, kept.join("\n") + "\n").unwrap();
    let o = run(&["verify", &path]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn wrong_leaper_reports_illegal_moves() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_to(dir.path(), "t.txt", &["--p", "2", "--q", "5"]);
    let o = run(&["verify", &path, "--q", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("all moves legal:     no"));
}

#[test]
fn symmetric_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_to(
        dir.path(),
        "s.txt",
        &["--p", "2", "--q", "7", "--symmetric"],
    );
    let o = run(&["verify", &path, "--require-symmetry"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn non_free_leaper_is_usage_error() {
    let o = run(&["generate", "--p", "1", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not relatively prime"));
    assert_eq!(
        run(&["generate", "--p", "3", "--q", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["fold", "--p", "2", "--q", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn seed_conflicts_with_symmetric() {
    let o = run(&[
        "generate",
        "--p",
        "1",
        "--q",
        "2",
        "--symmetric",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fold_prints_match_line() {
    let o = run(&["fold", "--p", "2", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "r=3 m=2 n=1 h=0 expect R(2,1): MATCH, O acyclic, F connected"
    );
    let o = run(&["fold", "--p", "5", "--q", "8"]);
    assert!(stdout(&o).contains("expect R(1,2): MATCH"));
}

#[test]
fn fold_dump_is_json() {
    let o = run(&["fold", "--p", "2", "--q", "7", "--dump", "-"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let json = &text[text.find('{').unwrap()..];
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(
        v["folding"].as_array().unwrap().len(),
        v["crisscross"].as_array().unwrap().len()
    );
}

#[test]
fn sweep_smallest_range() {
    let o = run(&["sweep", "--max-sum", "3", "--halvings", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("( 1, 2)"));
    assert!(text.trim_end().ends_with("1/1 instances passed"));
}

#[test]
fn sweep_rows_match_free_leapers() {
    let o = run(&[
        "sweep",
        "--max-sum",
        "13",
        "--halvings",
        "2",
        "--sequential",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = stdout(&o).lines().filter(|l| l.ends_with("PASS")).count();
    assert_eq!(rows, free_leapers(13).len());
    assert_eq!(run(&["sweep", "--max-sum", "2"]).status.code(), Some(2));
}

#[test]
fn svg_is_closed_polygon() {
    for extra in [&[][..], &["--symmetric"][..]] {
        let mut args = vec!["generate", "--p", "1", "--q", "2", "--format", "svg"];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0));
        let svg = stdout(&o);
        assert!(svg.trim_start().starts_with("<svg"));
        assert!(svg.contains("<polygon"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn tiled_output_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = generate_to(
        dir.path(),
        "tiled.json",
        &[
            "--p", "1", "--q", "2", "--tile-k", "2", "--tile-l", "3", "--format", "json",
        ],
    );
    let o = run(&["verify", &path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(
        (v["width"].as_i64(), v["height"].as_i64()),
        (Some(12), Some(18))
    );
}
