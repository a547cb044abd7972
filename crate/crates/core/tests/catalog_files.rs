//! The algebras and transcripts stored under `catalog/` are regenerated
//! and compared byte for byte.

use pdgca::catalog;
use pdgca::format;
use std::path::PathBuf;

fn stored(rel: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../catalog").join(rel);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn stored_algebras_match_emission() {
    for e in catalog::catalog() {
        let text = stored(&format!("{}.json", e.name));
        assert_eq!(text, format::emit(&e.algebra), "{}", e.name);
        let parsed = format::parse(&text).unwrap();
        assert_eq!(format::emit(&parsed), text, "{}", e.name);
    }
}

#[test]
fn stored_transcripts_reverify() {
    for e in catalog::catalog() {
        let text = stored(&format!("transcripts/{}.txt", e.name));
        assert_eq!(text, catalog::transcript(&e), "{}", e.name);
    }
}

#[test]
fn transcript_contents() {
    let nf = stored("transcripts/nonformal-7.txt");
    assert!(nf.lines().any(|l| l == "formality: non-formal"));
    assert!(nf.lines().any(|l| l == "certificate-verified: true"));
    let f6 = stored("transcripts/formal-6.txt");
    assert!(f6.lines().any(|l| l == "formality: formal"));
    let nh = stored("transcripts/nonhodge-4.txt");
    assert!(nh.lines().any(|l| l == "hodge: not-found (obstruction)"));
}

#[test]
fn required_entries_present() {
    let names = catalog::names();
    for n in ["nonhodge-4", "torus-1", "torus-2", "cp2", "formal-6", "nonformal-7"] {
        assert!(names.iter().any(|x| x == n), "{n}");
    }
    for n in 1..=8 {
        assert!(names.contains(&format!("sphere-{n}")));
    }
    assert_eq!(catalog::lookup("nonhodge-4").unwrap().algebra.top_degree(), 4);
}
