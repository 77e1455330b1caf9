use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn autdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_autdual")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn emitted(dir: &Path, name: &str, params: &[&str]) -> PathBuf {
    let mut args = vec!["catalog", name];
    args.extend_from_slice(params);
    args.push("--emit");
    let o = autdual(&args);
    assert!(o.status.success());
    write(dir, &format!("{name}{}.alg", params.join("_")), &stdout(&o))
}

#[test]
fn classify_b_as_json() {
    let dir = TempDir::new().unwrap();
    let b =
        write(dir.path(), "b.alg", "# Boozer\nstates q r s\nletters a b c\ntrans q a r\ntrans r b r\ntrans r c s\n");
    let o = autdual(&["classify", b.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "non_dualizable");
    assert_eq!(v["rule"], "whiskery");
    // field order is part of the format
    let text = stdout(&o);
    let top: Vec<&str> =
        text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    assert_eq!(top, ["verdict", "rule", "certificate", "trace"]);
}

#[test]
fn chain_alternates() {
    let o = autdual(&["chain", "4"]);
    assert!(o.status.success());
    let tags: Vec<String> = stdout(&o).lines().map(|l| l.split_whitespace().nth(1).unwrap().to_string()).collect();
    assert_eq!(tags, ["ND", "D", "ND", "D"]);
}

#[test]
fn catalog_c3_emits_the_cycle() {
    let o = autdual(&["catalog", "C", "3", "--emit"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("states "));
    assert_eq!(text.lines().filter(|l| l.starts_with("trans ")).count(), 6);
}

#[test]
fn lyndon_note_is_separate_from_the_verdict() {
    let dir = TempDir::new().unwrap();
    let l = emitted(dir.path(), "L", &[]);
    let o = autdual(&["classify", l.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("verdict: ? (Unknown)"));
    assert!(text.lines().last().unwrap().starts_with("reported elsewhere (not derived here)"));
    let b = emitted(dir.path(), "B", &[]);
    assert!(!stdout(&autdual(&["classify", b.to_str().unwrap()])).contains("reported elsewhere"));
}

#[test]
fn certificates_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let n4 = emitted(dir.path(), "N", &["4"]);
    let o = autdual(&["classify", n4.to_str().unwrap(), "--json"]);
    let cert = write(dir.path(), "n4.json", &stdout(&o));
    let ok = autdual(&["verify-cert", n4.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    // the same certificate against a different algebra
    let n5 = emitted(dir.path(), "N", &["5"]);
    let bad = autdual(&["verify-cert", n5.to_str().unwrap(), cert.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    let junk = write(dir.path(), "junk.json", "{\"verdict\": 1}");
    assert_eq!(autdual(&["verify-cert", n4.to_str().unwrap(), junk.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(autdual(&["nonsense"]).status.code(), Some(1));
    assert_eq!(autdual(&["classify", "/no/such/file"]).status.code(), Some(1));
    let conflict = write(dir.path(), "c.alg", "states q r s\nletters a\ntrans q a r\ntrans q a s\n");
    assert_eq!(autdual(&["classify", conflict.to_str().unwrap()]).status.code(), Some(2));
    let reserved = write(dir.path(), "z.alg", "states 0 r\nletters a\n");
    assert_eq!(autdual(&["classify", reserved.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(autdual(&["catalog", "Nope"]).status.code(), Some(3));
    assert_eq!(autdual(&["witness", "thm_wc", "1", "--size", "2"]).status.code(), Some(3));
    assert_eq!(autdual(&["--help"]).status.code(), Some(0));
}

#[test]
fn analyze_has_every_section() {
    let dir = TempDir::new().unwrap();
    let c3 = emitted(dir.path(), "Cid", &["3"]);
    let o = autdual(&["analyze", c3.to_str().unwrap()]);
    assert!(o.status.success());
    let headers: Vec<String> = stdout(&o).lines().filter(|l| l.starts_with("== ")).map(String::from).collect();
    assert_eq!(
        headers,
        [
            "== algebra",
            "== components",
            "== letter sets",
            "== whiskery",
            "== range/kill",
            "== order sensitivity",
            "== permutation profile",
            "== letter-affine"
        ]
    );
    assert!(stdout(&o).contains("group of order 3"));
}

#[test]
fn check_eq_and_embed() {
    let dir = TempDir::new().unwrap();
    let t2 = emitted(dir.path(), "T", &["2"]);
    let holds = autdual(&["check-eq", t2.to_str().unwrap(), "x*y = x*y*y*y"]);
    assert_eq!(stdout(&holds).trim(), "holds");
    let quasi = autdual(&["check-eq", t2.to_str().unwrap(), "v*x*x = w*x*x => v*x = w*x"]);
    assert_eq!(stdout(&quasi).trim(), "holds");
    let bad = autdual(&["check-eq", t2.to_str().unwrap(), "x * = y"]);
    assert_eq!(bad.status.code(), Some(2));

    let b = emitted(dir.path(), "B", &[]);
    let f0 = emitted(dir.path(), "F", &["0"]);
    assert!(stdout(&autdual(&["embed", f0.to_str().unwrap(), b.to_str().unwrap()])).starts_with("embedding found"));
    assert_eq!(stdout(&autdual(&["embed", f0.to_str().unwrap(), t2.to_str().unwrap()])).trim(), "no embedding");
}

#[test]
fn normalize_round_trips() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.alg", "states q r\nletters a b c\ntrans q a r\ntrans q c r\n");
    let o = autdual(&["normalize", m.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# dropped")));
    let n = write(dir.path(), "n.alg", &text);
    let again = autdual(&["normalize", n.to_str().unwrap()]);
    assert!(!stdout(&again).contains("# dropped"));
}

#[test]
fn witness_report_has_machine_block() {
    let o = autdual(&["witness", "lem_2state2_N4", "--size", "4", "--kernels", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let machine: Vec<&str> = text.lines().skip_while(|l| *l != "--- machine").skip(1).collect();
    assert!(machine.iter().filter(|l| l.starts_with("identity\t")).all(|l| l.ends_with("\tpass")));
    assert!(text.contains("violations: 0"));
}

#[test]
fn suite_prints_its_seed() {
    let o = autdual(&["suite", "1", "2", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("seed 7\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);
    assert_eq!(autdual(&["suite", "13"]).status.code(), Some(1));
}
