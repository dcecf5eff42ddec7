//! Frozen outputs. Regenerate with `qshuf --regen-fixtures` only after an
//! intended change of output format or conventions.

use std::path::Path;

use quiver_shuffle::verify;

#[test]
fn fixtures_match() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let generated = verify::fixtures().expect("fixture generation");
    assert_eq!(generated.len(), 7);
    for (name, text) in generated {
        let stored = std::fs::read_to_string(dir.join(&name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(text, stored, "fixture {name} changed");
    }
}

#[test]
fn jordan1_cubic_vanishing_report_is_all_pass() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let report = std::fs::read_to_string(dir.join("jordan1_cubic_vanishing.txt")).unwrap();
    assert!(!report.is_empty());
    assert!(report.lines().all(|l| l.starts_with("PASS ")));
}
