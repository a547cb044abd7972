use std::path::PathBuf;
use std::process::{Command, Output};

fn pdgca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdgca")).args(args).output().expect("run binary")
}

fn machine(args: &[&str]) -> (i32, Vec<(String, String)>) {
    let mut all = args.to_vec();
    all.extend(["--report", "machine"]);
    let out = pdgca(&all);
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let entries = text
        .lines()
        .map(|l| {
            let (k, v) = l.split_once(": ").unwrap_or_else(|| panic!("bad report line {l:?}"));
            (k.to_string(), v.to_string())
        })
        .collect();
    (out.status.code().expect("exit code"), entries)
}

fn value<'a>(entries: &'a [(String, String)], key: &str) -> Option<&'a str> {
    entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pdgca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn repo_catalog() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog")
}

#[test]
fn validate_and_cohomology() {
    let (code, r) = machine(&["validate", "--catalog", "torus-2"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "betti"), Some("1,2,1"));
    assert_eq!(value(&r, "status"), Some("success"));
    let (code, r) = machine(&["cohomology", "--catalog", "cp2"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "betti"), Some("1,0,1,0,1"));
}

#[test]
fn hodge_obstruction_exits_one() {
    let (code, r) = machine(&["hodge", "--catalog", "nonhodge-4"]);
    assert_eq!(code, 1);
    assert_eq!(value(&r, "reason"), Some("obstruction"));
    assert_eq!(value(&r, "null-ideal"), Some("x3"));
    assert_eq!(value(&r, "null-ideal-betti"), Some("0,0,0,1,0"));
}

#[test]
fn hodge_sidecar_is_reused() {
    let path = scratch("nf7-hodge.json");
    let (code, _) = machine(&["hodge", "--catalog", "nonformal-7", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, r) = machine(&["formality", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(value(&r, "decomposition"), Some("from file"));
    assert_eq!(value(&r, "formality"), Some("non-formal"));
    assert_eq!(value(&r, "certificate-verified"), Some("true"));
}

#[test]
fn formality_exit_codes() {
    let (code, r) = machine(&["formality", "--catalog", "formal-6"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "formality"), Some("formal"));
    let (code, _) = machine(&["formality", "--catalog", "nonformal-7"]);
    assert_eq!(code, 1);
}

#[test]
fn small_reports_support() {
    let (code, r) = machine(&["small", "--catalog", "nonformal-7"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "differential-support"), Some("4"));
    assert!(r.iter().filter(|(k, _)| k.starts_with("check ")).all(|(_, v)| v == "pass"));
    let (code, r) = machine(&["small", "--catalog", "torus-2"]);
    assert_eq!(code, 2);
    assert!(value(&r, "reason").is_some());
}

#[test]
fn transfer_and_mu3() {
    let (code, r) = machine(&["transfer", "--catalog", "nonformal-7", "--kmax", "5"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "m4-zero"), Some("true"));
    assert_eq!(value(&r, "m5-zero"), Some("true"));
    assert_eq!(value(&r, "stasheff relations"), Some("pass through arity 5"));
    let (_, m) = machine(&["mu3", "--catalog", "nonformal-7"]);
    let from_mu3: Vec<&str> = m.iter().filter(|(k, _)| k == "mu3").map(|(_, v)| v.as_str()).collect();
    let from_trees: Vec<&str> = r.iter().filter(|(k, _)| k == "m3").map(|(_, v)| v.as_str()).collect();
    assert_eq!(from_mu3, from_trees);
    assert_eq!(from_mu3.len(), 4);
}

#[test]
fn massey_and_screen() {
    let (code, r) = machine(&["massey", "--catalog", "nonformal-7", "--elements", "x,y,y"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "trivial"), Some("no"));
    assert_eq!(value(&r, "degree"), Some("5"));
    let (code, r) = machine(&["screen", "--degrees", "2,2,3", "--r", "2", "--n", "7"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "screen"), Some("trivial"));
    let (code, r) = machine(&["screen", "--degrees", "2,2,2", "--r", "2", "--n", "7"]);
    assert_eq!(code, 2);
    assert_eq!(value(&r, "screen"), Some("unscreened"));
    let (code, r) = machine(&["massey", "--l", "3", "--r", "2", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "rule"), Some("below-window"));
    let (code, _) = machine(&["screen", "--degrees", "2,2,2", "--n", "7"]);
    assert_eq!(code, 3);
}

#[test]
fn extend_writes_a_loadable_algebra() {
    let path = scratch("nf7-t.json");
    let (code, r) = machine(&["extend", "--catalog", "nonformal-7", "--vars", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "kunneth"), Some("pass"));
    let (code, r) = machine(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "betti"), Some("1,1,2,3,2,3,2,1,1"));
}

#[test]
fn compare_with_identity_and_phi() {
    let (code, r) = machine(&["compare", "--catalog", "nonformal-7", "--other", "nonformal-7-padded"]);
    assert_eq!(code, 0);
    assert_eq!(value(&r, "comparison"), Some("equivalent"));
    // Swapping x and y is not a ring isomorphism of this cohomology ring.
    let phi = scratch("swap.txt");
    let mut lines = String::new();
    for (s, t) in [("[1]", "[1]"), ("[x]", "[y]"), ("[y]", "[x]"), ("[z]", "[z]"), ("[w]", "[w]"), ("[a]", "[a]"), ("[b]", "[b]"), ("[o]", "[o]")] {
        lines.push_str(&format!("1; {s}; {t}; 1\n"));
    }
    std::fs::write(&phi, lines).unwrap();
    let (code, r) = machine(&["compare", "--catalog", "nonformal-7", "--other", "nonformal-7", "--phi", phi.to_str().unwrap()]);
    assert_eq!(code, 3, "{r:?}");
}

#[test]
fn input_errors_exit_three() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\n  \"name\": \"bad\",\n  oops\n}\n").unwrap();
    let (code, r) = machine(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(value(&r, "error").unwrap().contains("line 3"));
    let (code, _) = machine(&["validate", "--catalog", "no-such-entry"]);
    assert_eq!(code, 3);
    let (code, _) = machine(&["validate"]);
    assert_eq!(code, 3);
}

#[test]
fn report_file_matches_machine_output() {
    let path = scratch("report.txt");
    let out = pdgca(&["cohomology", "--catalog", "heisenberg-3", "--report", "machine", "--report-file", path.to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn catalog_export_matches_repository() {
    let dir = scratch("export");
    let (code, _) = machine(&["catalog", "--output", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let stored = repo_catalog();
    let mut count = 0;
    for entry in std::fs::read_dir(&dir).unwrap().chain(std::fs::read_dir(dir.join("transcripts")).unwrap()) {
        let path = entry.unwrap().path();
        if path.is_dir() {
            continue;
        }
        let rel = path.strip_prefix(&dir).unwrap();
        let fresh = std::fs::read(&path).unwrap();
        let kept = std::fs::read(stored.join(rel)).unwrap_or_else(|_| panic!("missing {}", rel.display()));
        assert_eq!(fresh, kept, "{} differs", rel.display());
        count += 1;
    }
    assert_eq!(count, 36);
}
