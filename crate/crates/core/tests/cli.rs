//! Command-line behaviour: golden outputs, exit codes and error lines.

use std::path::PathBuf;
use std::process::Command;

use padic_wavelet::cli::{
    run, EXIT_CHARACTERISTIC, EXIT_OK, EXIT_PARSE, EXIT_PRECISION, EXIT_SUITE_FAILURE,
};

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir =
            std::env::temp_dir().join(format!("padic-wavelet-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let path = self.0.join(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.0).ok();
    }
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("padic-wavelet").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

const X: &str = "field zp p=3\nlevel 1 depth 0\nterm r=0 j=1 c=1\n";
const G: &str =
    "field zp p=3\nlevel 1 depth 1\nterm r=0 j=1 c=1\nterm r=1 j=0 c=1\nterm r=2 j=0 c=-1/2\n";
const EMPTY: &str = "field zp p=3\nlevel 0 depth 0\n";

#[test]
fn expand_identity_is_a_single_entry() {
    let s = Scratch::new("expand");
    let x = s.file("x.fn", X);
    let (code, out, err) = cli(&["--n", "1", "expand", &x]);
    assert_eq!((code, err.as_str()), (EXIT_OK, ""));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[..2], ["field zp p=3 prec=39", "level 1 depth 0"]);
    assert_eq!(lines.len(), 3);
    assert!(
        lines[2].starts_with("b r=0 j=1 v=v:0 u:1,0,"),
        "{}",
        lines[2]
    );
}

#[test]
fn expand_empty_function_is_an_empty_table() {
    let s = Scratch::new("empty");
    let e = s.file("e.fn", EMPTY);
    let (code, out, _) = cli(&["expand", &e]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "field zp p=3 prec=39\nlevel 0 depth 0\n");
}

#[test]
fn expanded_table_reparses() {
    let s = Scratch::new("reparse");
    let g = s.file("g.fn", G);
    let (code, out, _) = cli(&["--n", "1", "--depth", "3", "expand", &g]);
    assert_eq!(code, EXIT_OK);
    let t = padic_wavelet::text::parse_table(&out).unwrap();
    assert_eq!(padic_wavelet::text::write_table(&t), out);
}

#[test]
fn characteristic_violation_exits_3() {
    let s = Scratch::new("char");
    let c = s.file("c.fn", "field fpt p=3\nlevel 0 depth 0\nterm r=0 j=0 c=1\n");
    let (code, out, err) = cli(&["--n", "3", "expand", &c]);
    assert_eq!(code, EXIT_CHARACTERISTIC);
    assert!(out.is_empty());
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: kind=characteristic msg="), "{err}");
    let header = s.file("h.fn", "field fpt p=3\nlevel 3 depth 0\n");
    assert_eq!(cli(&["expand", &header]).0, EXIT_CHARACTERISTIC);
    assert_eq!(
        cli(&["--field", "fpt", "--p", "3", "--n", "3", "verify"]).0,
        EXIT_CHARACTERISTIC
    );
}

#[test]
fn norm_lipschitz_and_classify_examples() {
    let s = Scratch::new("norms");
    let (x, g, e) = (s.file("x.fn", X), s.file("g.fn", G), s.file("e.fn", EMPTY));
    assert_eq!(cli(&["--n", "1", "norm", &x]).1, "1\n");
    assert_eq!(cli(&["--n", "1", "lipschitz", &e]).1, "0\n");
    assert_eq!(cli(&["--n", "1", "lipschitz", &x]).1, "1\n");
    assert_eq!(
        cli(&["classify", "--kind", "isometry", &g]).1,
        "answer=yes witness=none depth=2\n"
    );
    assert_eq!(
        cli(&["classify", "--kind", "increasing", &g]).1,
        "answer=no witness=[1] depth=2\n"
    );
    assert_eq!(
        cli(&["--n", "1", "--probe", "3", "norm", &x]).1,
        "1\nbruteforce=1 probe=3 exhaustive=true tuples=378\n"
    );
}

#[test]
fn classify_f_is_not_an_isometry() {
    let s = Scratch::new("classify");
    let f = s.file(
        "f.fn",
        "field zp p=3\nlevel 1 depth 1\nterm r=0 j=1 c=1\nterm r=1 j=0 c=1\n",
    );
    assert_eq!(
        cli(&["classify", "--kind", "isometry", &f]).1,
        "answer=no witness=[1];[2] depth=2\n"
    );
    let (code, _, err) = cli(&["classify", "--kind", "monotone", &f]);
    assert_ne!(code, EXIT_OK);
    assert!(err.contains("--s"));
    assert_eq!(
        cli(&["classify", "--kind", "monotone", "--s", "1", &f]).1,
        "answer=no witness=[1] depth=2\n"
    );
}

#[test]
fn antiderive_identity() {
    let s = Scratch::new("antiderive");
    let one = s.file(
        "one.fn",
        "field zp p=3\nlevel 0 depth 0\nterm r=0 j=0 c=1\n",
    );
    let (code, out, _) = cli(&["antiderive", &one]);
    assert_eq!(code, EXIT_OK);
    let f = padic_wavelet::text::parse_function(&out).unwrap();
    assert_eq!(f, padic_wavelet::CnCombo::identity(f.params()).unwrap());
}

#[test]
fn parse_errors_exit_2_with_location() {
    let s = Scratch::new("parse");
    let dup = s.file(
        "d.fn",
        "field zp p=3\nlevel 1 depth 0\nterm r=0 j=1 c=1\nterm r=0 j=1 c=2\n",
    );
    let (code, _, err) = cli(&["expand", &dup]);
    assert_eq!(code, EXIT_PARSE);
    assert!(
        err.contains("kind=parse") && err.contains("line 4"),
        "{err}"
    );
    assert_eq!(cli(&["--bogus"]).0, EXIT_PARSE);
}

#[test]
fn precision_errors_exit_4() {
    let s = Scratch::new("prec");
    let x = s.file(
        "x.fn",
        "field zp p=3 prec=6\nlevel 1 depth 0\nterm r=0 j=1 c=1\n",
    );
    let (code, _, err) = cli(&["--n", "1", "--probe", "6", "norm", &x]);
    assert_eq!(code, EXIT_PRECISION, "{err}");
    assert!(err.starts_with("error: kind=precision"));
}

#[test]
fn field_flags_must_match_the_header() {
    let s = Scratch::new("flags");
    let x = s.file("x.fn", X);
    let (code, _, err) = cli(&["--p", "5", "norm", &x]);
    assert_eq!(code, 1);
    assert!(err.contains("--p disagrees"));
}

#[test]
fn verify_reports_and_mutation() {
    let (code, out, _) = cli(&["verify", "--trials", "5"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verify field zp p=3 prec=39 seed=0 trials=5\n"));
    assert!(out.ends_with("summary suites=15 failed=0 ok\n"));

    let (code, out, _) = cli(&["verify", "--trials", "0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("warning: no trials"));

    let (code, out, _) = cli(&["verify", "--trials", "10", "--mutate", "lower-basis-sign"]);
    assert_eq!(code, EXIT_SUITE_FAILURE);
    assert!(
        out.lines()
            .any(|l| l.starts_with("suite basis_change") && l.contains("FAIL trial=")),
        "{out}"
    );
}

#[test]
fn verify_is_identical_across_thread_counts() {
    let one = cli(&["--seed", "3", "--threads", "1", "verify", "--trials", "10"]);
    let eight = cli(&["--seed", "3", "--threads", "8", "verify", "--trials", "10"]);
    assert_eq!(one, eight);
}

#[test]
fn process_exit_code_matches() {
    let out = Command::new(env!("CARGO_BIN_EXE_padic-wavelet"))
        .args(["--field", "fpt", "--p", "2", "--n", "2", "verify"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CHARACTERISTIC));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
}
