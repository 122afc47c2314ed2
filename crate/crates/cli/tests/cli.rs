use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_robust-summary"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn gen_instance(dir: &Path) {
    ok(
        dir,
        &["gen", "--spec", "coverage(60,80,0.05)", "--matroid", "partition(5,1)", "--seed", "3", "-o", "inst.txt"],
    );
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = ok(dir.path(), &["gen", "--spec", "cut(8,0.5,1,3)", "--matroid", "uniform(2)", "--seed", "7"]);
    let b = ok(dir.path(), &["gen", "--spec", "cut(8,0.5,1,3)", "--matroid", "uniform(2)", "--seed", "7"]);
    assert_eq!(a, b);
    assert!(a.starts_with("n=8\nobjective=graph-cut\n"));
}

#[test]
fn malformed_spec_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["gen", "--spec", "coverage(3,4)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("takes 3 arguments"));
}

#[test]
fn summarize_verify_solve_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gen_instance(d);
    ok(d, &["summarize", "--instance", "inst.txt", "--epsilon", "0.15", "-d", "1", "--seed", "2", "-o", "c.txt"]);
    ok(
        d,
        &[
            "summarize", "--instance", "inst.txt", "--mode", "streaming", "--epsilon", "0.5", "-d", "1", "--seed", "2",
            "--order", "shuffle:4", "--audit", "-o", "s.txt",
        ],
    );
    for summary in ["c.txt", "s.txt"] {
        let report = ok(d, &["verify", "--summary", summary]);
        assert!(report.trim_end().ends_with("PASS"), "{report}");
    }
    assert!(ok(d, &["verify", "--summary", "s.txt"]).contains("swapped-mass"));

    let out = ok(d, &["solve", "--summary", "s.txt", "--delete", "top:1", "--solver", "exhaustive"]);
    assert!(out.contains("deleted = [") && out.contains("value = "));
    let out = run(d, &["solve", "--summary", "c.txt", "--delete-ids", "0,1,2", "--solver", "greedy"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no guarantee applies"));
}

#[test]
fn summaries_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gen_instance(d);
    for (mode, out) in [("centralized", "a"), ("centralized", "b"), ("streaming", "c"), ("streaming", "e")] {
        ok(
            d,
            &["summarize", "--instance", "inst.txt", "--mode", mode, "--epsilon", "0.3", "-d", "2", "--seed", "9", "--audit", "-o", out],
        );
    }
    let read = |f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read("a"), read("b"));
    assert_eq!(read("c"), read("e"));
}

#[test]
fn lazy_and_literal_summaries_agree_on_selection() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gen_instance(d);
    ok(d, &["summarize", "--instance", "inst.txt", "--epsilon", "0.3", "-d", "1", "-o", "lazy"]);
    ok(d, &["summarize", "--instance", "inst.txt", "--epsilon", "0.3", "-d", "1", "--literal", "-o", "literal"]);
    let strip = |f: &str| -> String {
        std::fs::read_to_string(d.join(f))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("counter.oracle_calls"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip("lazy"), strip("literal"));
}

#[test]
fn corrupted_summary_fails_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    gen_instance(d);
    ok(d, &["summarize", "--instance", "inst.txt", "--epsilon", "0.5", "-d", "1", "-o", "c.txt"]);
    let text = std::fs::read_to_string(d.join("c.txt")).unwrap();
    let first_a = text
        .lines()
        .find_map(|l| l.strip_prefix("a="))
        .and_then(|rest| rest.split_whitespace().next())
        .expect("summary has a solution element")
        .to_string();
    let corrupted: String = text
        .lines()
        .map(|l| match l.strip_prefix("vd=") {
            Some("") => format!("vd={first_a}"),
            Some(ids) => format!("vd={ids},{first_a}"),
            None => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(d.join("bad.txt"), corrupted).unwrap();
    let out = run(d, &["verify", "--summary", "bad.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL disjointness") || stdout.contains("FAIL protected-size"), "{stdout}");
}

#[test]
fn bound_prints_value_and_warnings() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bound", "--mode", "centralized", "--beta", "1", "--epsilon", "0.3"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let v = ok(dir.path(), &["bound", "--mode", "streaming", "--beta", "2.5974025974", "--epsilon", "1e-12"]);
    assert_eq!(v.trim(), "9.434764");
}

#[test]
fn experiment_writes_versioned_csv_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("exp.ini"),
        "\
[instance]
generator = cut(12,0.5,1,3)
matroid = uniform(3)
seed = 2

[algorithm]
mode = streaming
epsilon = 0.1
d = 2

[phase2]
solver = exhaustive

[adversary]
strategies = top:2, rand:2:5, maxdmg:2

[trials]
count = 20

[output]
dir = runs
",
    )
    .unwrap();
    let report = ok(d, &["experiment", "--config", "exp.ini"]);
    assert!(report.contains("theoretical bound") && report.contains("invariants: ok"), "{report}");
    let threaded = bin()
        .current_dir(d)
        .env("ROBUST_SUMMARY_THREADS", "1")
        .args(["experiment", "--config", "exp.ini"])
        .output()
        .unwrap();
    assert!(threaded.status.success());
    let a = std::fs::read_to_string(d.join("runs/run-000/results.csv")).unwrap();
    let b = std::fs::read_to_string(d.join("runs/run-001/results.csv")).unwrap();
    assert_eq!(a, b);
    let mut lines = a.lines();
    assert_eq!(lines.next(), Some("# robust-summary results v1"));
    assert_eq!(
        lines.next(),
        Some("strategy,seed,fS,fAprime,opt,method,ratio_ensemble,summary_size,peak_mem,oracle_calls,invariants_ok")
    );
    assert_eq!(lines.count(), 60);
}

#[test]
fn experiment_config_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.ini"), "[instance]\nfile = missing.txt\n[algorithm]\nepsilon = 0.1\n").unwrap();
    let out = run(d, &["experiment", "--config", "bad.ini"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not exist"));
}
