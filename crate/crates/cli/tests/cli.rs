use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibred"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fibred-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn sweep_corpus_exits_zero() {
    let out = bin().args(["sweep-corpus", "--format", "text"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stdout: {}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn corpus_documents_roundtrip_through_the_binary() {
    let dir = tmpdir("roundtrip");
    let corpus_path = dir.join("corpus.ffib");
    let out = bin()
        .args(["sweep-corpus"])
        .arg("--emit-documents")
        .arg(&corpus_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // validate accepts the emitted documents
    let out = bin().arg("validate").arg(&corpus_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    // byte fixed point under an external reprint
    let text = std::fs::read_to_string(&corpus_path).unwrap();
    let reparsed = fibred::format::parse(&text).unwrap();
    assert_eq!(fibred::format::print(&reparsed), text);
}

#[test]
fn corrupted_composition_entry_is_located_and_nonzero() {
    let dir = tmpdir("corrupt");
    let corpus_path = dir.join("corpus.ffib");
    bin().args(["sweep-corpus"]).arg("--emit-documents").arg(&corpus_path).output().unwrap();
    let text = std::fs::read_to_string(&corpus_path).unwrap();
    let corrupted = text.replace("compose 1 1 2", "compose 1 1 3");
    assert_ne!(text, corrupted, "corruption applies");
    let bad = dir.join("bad.fcat");
    std::fs::write(&bad, corrupted).unwrap();
    let out = bin().arg("validate").arg(&bad).output().unwrap();
    assert_ne!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("associativity"), "error is located: {stdout}");
}

#[test]
fn seeded_sweep_rejects_bad_documents() {
    let dir = tmpdir("seed");
    std::fs::write(dir.join("bad.fcat"), "category broken\n  objects 1\nend\n").unwrap();
    let out = bin().args(["sweep-corpus", "--seed-corpus"]).arg(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_reports_are_byte_stable() {
    let run = || {
        bin()
            .args(["check", "locally-small", "--name", "fund_n5"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn classify_gm_runs_on_the_corpus_adjunctions() {
    for name in ["adj_id_d2", "adj_incl", "adj_proj"] {
        let out = bin().args(["classify-gm", "--name", name]).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn construct_emits_a_parsable_document() {
    let out = bin()
        .args(["construct", "karoubi", "--name", "z4", "--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let doc_text = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["property"] == "construction")
        .and_then(|c| c["witnesses"].as_array())
        .and_then(|w| w.last())
        .and_then(|w| w.as_str())
        .unwrap()
        .to_string();
    let doc = fibred::format::parse(&doc_text).unwrap();
    assert!(doc.category("karoubi").is_some());
}

#[test]
fn usage_error_exits_one() {
    let out = bin().args(["check", "no-such-property", "--name", "pmod"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
