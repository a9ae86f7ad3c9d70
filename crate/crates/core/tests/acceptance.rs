//! The acceptance suite: every corpus-wide criterion, one pass/fail line
//! each. The CLI's `sweep-corpus` runs the same battery.

use fibred::corpus::{run_criterion, CRITERIA};

const CAP: usize = 1_000_000;

fn run(name: &str) {
    let (check, ok) = run_criterion(name, CAP);
    println!(
        "criterion {:>2} ({}): {}",
        CRITERIA.iter().position(|&c| c == name).unwrap() + 1,
        name,
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion `{name}` failed: {}", serde_json::to_string_pretty(&check).unwrap());
}

#[test]
fn criterion_01_laws() {
    run("laws");
}

#[test]
fn criterion_02_cartesian_lemmas() {
    run("cartesian-lemmas");
}

#[test]
fn criterion_03_splitting() {
    run("splitting");
}

#[test]
fn criterion_04_fibred_yoneda() {
    run("fibred-yoneda");
}

#[test]
fn criterion_05_biconditionals() {
    run("biconditionals");
}

#[test]
fn criterion_06_heyting_correlation() {
    run("heyting-correlation");
}

#[test]
fn criterion_07_well_poweredness() {
    run("well-poweredness");
}

#[test]
fn criterion_08_moens() {
    run("moens");
}

#[test]
fn criterion_09_geometric_profiles() {
    run("geometric-profiles");
}

#[test]
fn criterion_10_opposite_involution() {
    run("opposite-involution");
}

#[test]
fn criterion_11_fam_monad() {
    run("fam-monad");
}

#[test]
fn criterion_12_formats() {
    run("formats");
}
