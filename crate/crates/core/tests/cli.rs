use std::path::{Path, PathBuf};

use matching_morse::cli::run;
use matching_morse::fixtures::F_STAR_LOCAL;
use matching_morse::{build_matching_complex, OptimalityCertificate};

fn morse(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("morse").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_complex(dir: &Path, n: usize) -> PathBuf {
    let p = dir.join(format!("m{n}.cx"));
    std::fs::write(&p, build_matching_complex(n).unwrap().to_text()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_prints_f_vector_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m7.cx");
    let (code, stdout, _) = morse(&["build", "-n", "7", "--out", s(&out)]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "f = (21, 105, 105), chi = 21\n");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), build_matching_complex(7).unwrap().to_text());
    assert_eq!(morse(&["build", "-n", "3"]).1, "f = (3), chi = 3\n");
}

#[test]
fn build_rejects_small_order() {
    let (code, _, err) = morse(&["build", "-n", "1"]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(morse(&[]).0, 1);
    assert_eq!(morse(&["frobnicate"]).0, 1);
    assert_eq!(morse(&["optimize", "-n", "4", "--strategy", "best"]).0, 1);
    assert_eq!(morse(&["--help"]).0, 0);
}

#[test]
fn homology_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = morse(&["homology", s(&write_complex(dir.path(), 7))]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "H_0=Z, H_1=Z/3, H_2=Z^20; lower_bounds=(1,1,21)");
    assert!(out.contains("H_1 = Z/3\n"));
    assert!(out.contains("lower_bounds = (1, 1, 21)\n"));
    let (_, out, _) = morse(&["homology", s(&write_complex(dir.path(), 5))]);
    assert_eq!(out.lines().next().unwrap(), "H_0=Z, H_1=Z^6; lower_bounds=(1,6)");
}

#[test]
fn homology_parse_error_names_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.cx");
    let text = build_matching_complex(5).unwrap().to_text();
    let mut lines: Vec<&str> = text.lines().collect();
    lines[3] = "1-2,2-";
    std::fs::write(&p, lines.join("\n")).unwrap();
    let (code, _, err) = morse(&["homology", s(&p)]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4"), "{err}");
    assert_eq!(morse(&["homology", "/nonexistent/file"]).0, 1);
}

#[test]
fn optimize_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let m4 = write_complex(dir.path(), 4);
    let cert = dir.path().join("c4.txt");
    let (code, _, _) = morse(&["optimize", s(&m4), "--out", s(&cert)]);
    assert_eq!(code, 0);
    let c = OptimalityCertificate::from_text(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(c.critical.0, vec![3, 0]);

    let (code, _, err) = morse(&["optimize", "-n", "7", "--max-restarts", "0", "--out", s(&cert)]);
    assert_eq!(code, 2);
    assert!(err.contains("budget exhausted"));
}

#[test]
fn optimize_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        assert_eq!(morse(&["optimize", "-n", "6", "--seed", "11", "--out", s(p)]).0, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn paths_on_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let m7 = write_complex(dir.path(), 7);
    let gvf = dir.path().join("f.gvf");
    std::fs::write(&gvf, F_STAR_LOCAL).unwrap();
    let (code, out, _) = morse(&["paths", s(&m7), s(&gvf), "2-5,3-6,4-7"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 paths from 2-5,3-6,4-7\n"), "{out}");
    assert!(out.ends_with("endpoints:\n  1-2,4-5: 1\n  1-3,4-6: 1\n"), "{out}");
    let (code, out, _) = morse(&["paths", s(&m7), s(&gvf), "1-5,2-4,6-7"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("endpoints:\n  1-2,4-6: 1\n  1-3,4-5: 1\n"), "{out}");

    let (code, _, err) = morse(&["paths", s(&m7), s(&gvf), "banana"]);
    assert_eq!(code, 1);
    assert!(err.contains("banana"));
    let (code, _, err) = morse(&["paths", s(&m7), s(&gvf), "1-7,2-5,3-6"]);
    assert_eq!(code, 1);
    assert!(err.contains("not critical"), "{err}");
}

#[test]
fn export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let m4 = write_complex(dir.path(), 4);
    let (code, dot, _) = morse(&["export-dot", s(&m4)]);
    assert_eq!(code, 0);
    assert_eq!(dot.lines().filter(|l| l.contains("[dim=")).count(), 9);
    assert_eq!(dot.lines().filter(|l| l.contains("[dir=down]")).count(), 6);
    assert!(!dot.contains("dir=up"));

    let m7 = write_complex(dir.path(), 7);
    let gvf = dir.path().join("f.gvf");
    std::fs::write(&gvf, F_STAR_LOCAL).unwrap();
    let (a, b) = (dir.path().join("a.dot"), dir.path().join("b.dot"));
    for p in [&a, &b] {
        assert_eq!(morse(&["export-dot", s(&m7), s(&gvf), "--out", s(p)]).0, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
