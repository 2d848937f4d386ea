//! Integration tests for the command surface: report determinism, the JSON
//! schema, suite behavior on documents, and generator reproducibility.

use std::path::{Path, PathBuf};
use std::process::Command;

use polaritykit::canonical::CanonicalFrame;
use polaritykit_cli::doc::{parse_lattice_doc, serialize_lattice_doc, ParsedLattice};
use polaritykit_cli::random::random_lattice;
use polaritykit_cli::run::{frame_suite, lattice_suite, Suite};
use proptest::prelude::*;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polaritykit"))
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let run = || {
        bin()
            .arg("check")
            .arg(corpus("c3-godel.lat"))
            .args(["--suite", "all"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn json_reports_carry_the_schema_version() {
    let out = bin()
        .arg("complete")
        .arg(corpus("p2.frame"))
        .args(["--format", "json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["schema"], 1);
    assert_eq!(value["name"], "completion");
    assert!(
        value.get("elapsed_micros").is_none(),
        "timing leaks into untimed output"
    );
}

#[test]
fn timing_is_opt_in() {
    let out = bin()
        .arg("complete")
        .arg(corpus("p2.frame"))
        .args(["--format", "json", "--timings"])
        .output()
        .unwrap();
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value.get("elapsed_micros").is_some());
}

#[test]
fn random_documents_are_reproducible() {
    let emit = |seed: &str| {
        bin()
            .args([
                "random", "--kind", "polarity", "--seed", seed, "--nx", "4", "--ny", "3",
            ])
            .args(["--relations", "2", "--arity", "2"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(emit("9"), emit("9"));
    assert_ne!(emit("9"), emit("10"));
}

#[test]
fn all_suites_pass_on_the_residuated_chain_corpus() {
    for name in [
        "c3-godel.lat",
        "c3-luk.lat",
        "c4-godel.lat",
        "demorgan-c3.lat",
        "m3-blur.lat",
    ] {
        let doc = parse_lattice_doc(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap();
        let frame = CanonicalFrame::new(doc.expansion).unwrap();
        for suite in [
            Suite::Lemmas,
            Suite::Additivity,
            Suite::Conjugates,
            Suite::All,
        ] {
            let report = lattice_suite(&frame, suite).unwrap();
            assert!(report.passed(), "{name} {suite:?}: {:?}", report.failures());
        }
    }
}

#[test]
fn guard_env_var_caps_exhaustive_checks() {
    let out = bin()
        .arg("check")
        .arg(corpus("c3-godel.lat"))
        .args(["--suite", "additivity"])
        .env("POLARITYKIT_GUARD", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("guard"), "{err}");
}

#[test]
fn frame_suites_flag_the_bad_relation() {
    let text = std::fs::read_to_string(corpus("bad.frame")).unwrap();
    let doc = polaritykit_cli::doc::parse_frame_doc(&text).unwrap();
    let lemmas = frame_suite(&doc.polarity, &doc.relations, Suite::Lemmas).unwrap();
    assert!(!lemmas.passed(), "section stability should fail");
    let additivity = frame_suite(&doc.polarity, &doc.relations, Suite::Additivity).unwrap();
    assert!(!additivity.passed(), "additivity should fail");
    let conjugates = frame_suite(&doc.polarity, &doc.relations, Suite::Conjugates).unwrap();
    assert!(!conjugates.passed(), "conjugate construction should fail");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Serializing any generated lattice document is a fixed point of
    /// parse-then-serialize.
    #[test]
    fn generated_lattice_docs_round_trip(seed in 0u64..500, n in 1usize..7) {
        let lattice = match random_lattice(seed, n) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        let doc = ParsedLattice {
            name: format!("gen-{seed}"),
            element_names: None,
            expansion: polaritykit::LatticeExpansion::bare(lattice),
        };
        let once = serialize_lattice_doc(&doc);
        let parsed = parse_lattice_doc(&once).unwrap();
        prop_assert_eq!(&parsed.expansion.lattice, &doc.expansion.lattice);
        let twice = serialize_lattice_doc(&parsed);
        prop_assert_eq!(once, twice);
    }
}
