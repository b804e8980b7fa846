use std::io::Write;
use std::process::{Command, Output, Stdio};

use citor_cli::{run_example, FieldChoice, CATALOG};

const EXAMPLE_314: &str = "\
ring R = quotient(vars=[x, y, z, u], ideal=[x*y, z*u], primes=[[x, z], [x, u], [y, z], [y, u]])
module M = coker(R, matrix=[[x]])
module N = coker(R, matrix=[[x*z]])
tor(M, N, bound=3)
";

fn citor(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_citor"))
        .args(args)
        .env_remove("CITOR_FORMAT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tor_rows_for_the_periodic_pair() {
    let out = citor(&["--script", "-"], Some(EXAMPLE_314));
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("i=1, vanishes=false, depth=1, HF=(1,1,1,1"), "{text}");
    assert!(text.contains("i=2, vanishes=true"), "{text}");
}

#[test]
fn json_is_byte_stable() {
    let tour = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scripts/tour.citor");
    let a = citor(&["--script", tour, "--format", "json"], None);
    let b = citor(&["--script", tour, "--format", "json"], None);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["field_tag"], "F32003");
}

#[test]
fn every_catalog_entry_passes_over_both_fields() {
    for e in CATALOG {
        for field in [FieldChoice::F32003, FieldChoice::Rational] {
            let outcome = run_example(e.id, field).unwrap();
            let failed: Vec<_> = outcome.checks.iter().filter(|c| !c.pass).map(|c| c.label.clone()).collect();
            assert!(outcome.pass, "{} over {:?}: {failed:?}", e.id, field);
        }
    }
}

#[test]
fn example_flag_accepts_long_names() {
    let out = citor(&["--example", "Example 3.14"], None);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("— PASS"));
}

#[test]
fn parse_errors_point_at_the_source() {
    let script = "ring R = quotient(vars=[x, y], ideal=[x*y])\nmodule M = coker(R, matrix=[[x, ]])\n";
    let out = citor(&["--script", "-"], Some(script));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2:"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(citor(&["--example", "9.99"], None).status.code(), Some(2));
    let script = "ring R = quotient(vars=[x, y], ideal=[x*y])\nsearch R4.10 with (ring=R, generators=9)\n";
    assert_eq!(citor(&["--script", "-"], Some(script)).status.code(), Some(3));
}
