use std::path::PathBuf;

use trackcoh::fixtures::{corruption_corpus, fixture_documents, structural_corruptions};
use trackcoh::io;
use trackcoh::jobs;

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn shipped_files_match_the_builtin_fixtures() {
    let regen = std::env::var_os("TRACKCOH_REGEN").is_some();
    for (rel, doc) in fixture_documents() {
        let path = fixture_dir().join(&rel);
        let text = io::to_json(&doc);
        if regen {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{rel}: {e}"));
        assert_eq!(on_disk, text, "{rel} is stale; rerun with TRACKCOH_REGEN=1");
        assert_eq!(io::parse(&on_disk).unwrap(), doc, "{rel} does not parse back");
    }
}

#[test]
fn good_fixtures_validate_and_corruptions_are_refused() {
    let mut refused = 0;
    for (rel, _) in fixture_documents() {
        let o = jobs::validate(&fixture_dir().join(&rel));
        if rel.starts_with("corrupt/") {
            assert_eq!(o.exit_code, 1, "{rel} was accepted:\n{}", o.summary);
            refused += 1;
        } else {
            assert_eq!(o.exit_code, 0, "{rel} was refused:\n{}", o.summary);
        }
    }
    assert_eq!(refused, corruption_corpus().len() + structural_corruptions().len());
    assert!(corruption_corpus().len() >= 10);
}

#[test]
fn corrupted_files_name_a_witness() {
    for (name, _, _) in corruption_corpus() {
        let o = jobs::validate(&fixture_dir().join(format!("corrupt/{name}.json")));
        let failed: Vec<_> = o.report["audit"].as_array().unwrap().iter().filter(|c| c["ok"] == false).collect();
        assert!(!failed.is_empty() && failed.iter().all(|c| c["witness"].is_string()), "{name}");
    }
}
