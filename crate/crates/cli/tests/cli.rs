use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn maskit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maskit"))
        .args(args)
        .output()
        .expect("run maskit")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn oct_checks_in_domain() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "oct.txt");
    assert_eq!(code(&maskit(&["oct", "--out", &file])), 0);
    let out = maskit(&["check", "--in", &file]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "group,lhs,rhs_label,lhs_len,rhs_len,margin");
    assert_eq!(lines.len(), 1 + 27 + 1);
    assert_eq!(lines[28], "in_domain,true");
}

#[test]
fn exceptional_is_minimal() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "e.txt");
    assert_eq!(code(&maskit(&["exceptional", "--out", &file])), 0);
    let out = maskit(&["minimality", "--in", &file]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .ends_with("verified,true\n"));
}

#[test]
fn reduce_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let raw = path(dir.path(), "raw.txt");
    let reduced = path(dir.path(), "reduced.txt");
    for seed in ["1", "2", "5"] {
        assert_eq!(
            code(&maskit(&[
                "random",
                "--seed",
                seed,
                "--scrambled",
                "--out",
                &raw
            ])),
            0
        );
        assert_eq!(
            code(&maskit(&["reduce", "--in", &raw, "--out", &reduced])),
            0
        );
        assert_eq!(
            code(&maskit(&["check", "--in", &reduced])),
            0,
            "seed {seed}"
        );
    }
}

#[test]
fn lengths_table() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "oct.txt");
    maskit(&["oct", "--out", &file]);
    let out = maskit(&["lengths", "--in", &file]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 28);
    assert!(text.contains("gamma2,1.52857091948\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&maskit(&["lengths"])), 2);
    assert_eq!(code(&maskit(&["check", "--in", "x", "--bogus"])), 2);
    assert_eq!(code(&maskit(&["check", "--in", "/nonexistent/file"])), 2);

    let dir = tempfile::tempdir().unwrap();
    let bad = path(dir.path(), "bad.txt");
    fs::write(&bad, "format=maskit2/1\nkind=params\na1=1\n").unwrap();
    let out = maskit(&["check", "--in", &bad]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("line"));

    let degenerate = path(dir.path(), "deg.txt");
    fs::write(
        &degenerate,
        "format=maskit2/1\nkind=params\na1=1e-9\na3=1\na5=1\nt1=0\nt3=0\nt5=0\n",
    )
    .unwrap();
    assert_eq!(code(&maskit(&["check", "--in", &degenerate])), 3);

    let raw = path(dir.path(), "raw.txt");
    maskit(&["random", "--seed", "3", "--scrambled", "--out", &raw]);
    assert_eq!(code(&maskit(&["check", "--in", &raw])), 1);
}

#[test]
fn render_is_wellformed_svg() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "oct.txt");
    maskit(&["oct", "--out", &file]);
    let arcs = "beta24,betabar15^6,beta36^1";
    let a = maskit(&["render", "--in", &file, "--arcs", arcs]);
    assert_eq!(code(&a), 0);
    let svg = String::from_utf8(a.stdout.clone()).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let paths = doc.descendants().filter(|n| n.has_tag_name("path")).count();
    assert_eq!(paths, 3);

    let b = maskit(&["render", "--in", &file, "--arcs", arcs]);
    assert_eq!(a.stdout, b.stdout);

    let plain = maskit(&["render", "--in", &file]);
    let svg = String::from_utf8(plain.stdout).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(
        doc.descendants().filter(|n| n.has_tag_name("path")).count(),
        0
    );
}

#[test]
fn lemma_csv_is_deterministic() {
    let args = ["verify-lemmas", "--count", "4", "--seed", "11"];
    let a = maskit(&args);
    let b = maskit(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
}
