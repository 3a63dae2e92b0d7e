use std::path::PathBuf;

use super::run_with;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn gkm(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("gkm").chain(args.iter().copied()), &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

/// Exit 1 exactly when some report row is FAIL.
fn assert_consistent(r: &Run) {
    let failed = r.stdout.lines().skip(1).any(|l| l.split('\t').nth(3) == Some("FAIL"));
    assert_eq!(r.code, i32::from(failed), "{}", r.stdout);
}

#[test]
fn validate() {
    let ok = gkm(&["validate", &fixture("a2.mat")]);
    assert_eq!((ok.code, ok.stdout.as_str()), (0, "valid\n"));
    let bad = gkm(&["validate", &fixture("zero_pattern.mat")]);
    assert_eq!(bad.code, 1);
    assert_eq!(bad.stdout, "condition\trow\tcol\nBC3\t1\t2\n");
    let malformed = gkm(&["validate", &fixture("short_row.mat")]);
    assert_eq!(malformed.code, 2);
    assert!(malformed.stderr.contains("line 3"), "{}", malformed.stderr);
}

#[test]
fn symmetrize() {
    let ok = gkm(&["symmetrize", &fixture("a2.mat")]);
    assert_eq!((ok.code, ok.stdout.as_str()), (0, "1 1\n"));
    let none = gkm(&["symmetrize", &fixture("no_symmetrizer.mat")]);
    assert_eq!((none.code, none.stdout.as_str()), (1, "none\n"));
    assert_eq!(gkm(&["symmetrize", &fixture("zero_pattern.mat")]).code, 2);
}

#[test]
fn double() {
    let ok = gkm(&["double", &fixture("sl2.mat")]);
    assert_eq!((ok.code, ok.stdout.as_str()), (0, "2\n2 -2\n-2 2\n"));
    assert_eq!(gkm(&["double", &fixture("short_row.mat")]).code, 2);
}

#[test]
fn product_quiver() {
    let ok = gkm(&["product-quiver", &fixture("a2.quiver")]);
    assert_eq!(ok.code, 0);
    assert_eq!(ok.stdout.lines().filter(|l| l.starts_with("v ")).count(), 4);
    assert_eq!(ok.stdout.lines().filter(|l| l.starts_with("a ")).count(), 6);
    let bad = gkm(&["product-quiver", &fixture("missing_target.quiver")]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("line 3") && bad.stderr.contains("unknown vertex 3"), "{}", bad.stderr);
}

#[test]
fn dims() {
    let ok = gkm(&["dims", &fixture("a2.mat"), "--cutoff", "4"]);
    assert_eq!(ok.code, 0);
    let lines: Vec<&str> = ok.stdout.lines().collect();
    assert_eq!(lines[0], "deg.1\tdeg.2\tdim\tstable");
    assert!(lines.contains(&"1\t1\t1\tstable"));
    assert!(lines.contains(&"2\t1\t0\tstable"));
    assert_eq!(gkm(&["dims", &fixture("zero_pattern.mat")]).code, 2);
}

#[test]
fn verify_thm33() {
    let ok = gkm(&["verify-thm33", &fixture("a2.mat"), "--cutoff", "6"]);
    assert_eq!(ok.code, 0);
    assert!(ok.stdout.contains("(0,0)\t2\t2\tMATCH"));
    let unstable = gkm(&["verify-thm33", &fixture("a2.mat"), "--cutoff", "2"]);
    assert_eq!(unstable.code, 1);
    assert!(unstable.stdout.contains("UNSTABLE"));
    assert_eq!(gkm(&["verify-thm33", &fixture("a2.mat"), "--cutoff", "1"]).code, 2);
}

#[test]
fn hall_product() {
    let q = fixture("kronecker.quiver");
    let sp_sm = gkm(&["hall-product", &q, &fixture("s_plus.elt"), &fixture("s_minus.elt")]);
    assert_eq!(sp_sm.code, 0);
    // every (1,1) representation is an extension of S+ by S-
    assert_eq!(sp_sm.stdout.lines().count(), 5);
    let sm_sp = gkm(&["hall-product", &q, &fixture("s_minus.elt"), &fixture("s_plus.elt")]);
    assert_eq!(sm_sp.stdout, "1\t1,1:00\n");
    let classes = gkm(&["hall-product", &q, "--dim", "1,1", "--field", "2^1"]);
    assert_eq!(classes.code, 0);
    assert_eq!(classes.stdout.lines().count(), 5);
    let bad = gkm(&["hall-product", &q, &fixture("bad_key.elt"), &fixture("s_plus.elt")]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("line 2"), "{}", bad.stderr);
    assert_eq!(gkm(&["hall-product", &q, "--dim", "9,9"]).code, 2);
}

#[test]
fn hall_bialgebra() {
    let ok = gkm(&["hall-bialgebra", &fixture("kronecker.quiver"), "--field", "3"]);
    assert_eq!(ok.code, 0);
    assert_consistent(&ok);
    let f2 = gkm(&["hall-bialgebra", &fixture("kronecker.quiver"), "--field", "2"]);
    assert_eq!(f2.code, 0);
    assert!(f2.stdout.contains("VACUOUS") && !f2.stdout.contains("PASS"));
    assert_eq!(gkm(&["hall-bialgebra", &fixture("missing_target.quiver")]).code, 2);
}

#[test]
fn serre_probe() {
    let ok = gkm(&["serre-probe", &fixture("a2.quiver"), "--field", "5"]);
    assert_eq!(ok.code, 0);
    assert_consistent(&ok);
    assert_eq!(gkm(&["serre-probe", &fixture("a2.quiver"), "--field", "6"]).code, 2);
}

#[test]
fn kronecker_suites_report_consistently() {
    for cmd in ["kronecker-q", "kronecker-q1", "kronecker-loop"] {
        for field in ["2", "3"] {
            let r = gkm(&[cmd, "--field", field]);
            assert!(r.stdout.starts_with("relation-id\tfield\tparams\tverdict\twitness\n"));
            assert_consistent(&r);
        }
        assert_eq!(gkm(&[cmd, "--field", "3", "--n", "0"]).code, 2);
    }
}

#[test]
fn q1_suite_is_vacuous_over_f2() {
    let r = gkm(&["kronecker-q1", "--field", "2^1"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().skip(1).all(|l| l.split('\t').nth(3) == Some("VACUOUS")));
}

#[test]
fn usage_errors() {
    assert_eq!(gkm(&[]).code, 2);
    assert_eq!(gkm(&["frobnicate"]).code, 2);
    assert_eq!(gkm(&["double", &fixture("sl2.mat"), "--cutoff", "3"]).code, 2);
    assert_eq!(gkm(&["kronecker-q", "--bogus"]).code, 2);
    assert_eq!(gkm(&["kronecker-q", "--field", "4"]).code, 2);
    assert_eq!(gkm(&["--help"]).code, 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("gkm-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("double.txt");
    let r = gkm(&["double", &fixture("a2.mat"), "--out", path.to_str().unwrap()]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, gkm(&["double", &fixture("a2.mat"), "--out", "-"]).stdout);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["kronecker-loop", "--field", "3"];
    assert_eq!(gkm(&args).stdout, gkm(&args).stdout);
}
