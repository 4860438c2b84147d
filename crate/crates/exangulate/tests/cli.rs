//! End-to-end coverage for the command line interface and the document
//! formats: round-trip identity over the bundled corpus, the exit code
//! contract, determinism of reports, and the malformed-input gallery.

use exangulate::cli::{
    catalog_document, parse_document, run_args, serialize_document, twmorphism_document,
    twobject_document,
};
use exangulate::fixtures;
use exangulate::twisted::{random_complex, random_raw_morphism};
use exangulate::verifier::SequenceCatalog;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> String {
    fixture_root().join(name).display().to_string()
}

/// Runs the interface in process and captures (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["exangulate"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_args(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).expect("stdout utf8"),
        String::from_utf8(err).expect("stderr utf8"),
    )
}

const CORPUS: &[&str] = &[
    "fixC.pres",
    "fixA1.pres",
    "fixA2.pres",
    "fixA3.pres",
    "fixQ.pres",
    "fixA2-eps.tw",
    "fixC-id.twm",
    "fixC.cat",
    "fixA1-chain.certs",
    "fixC-chain.certs",
];

const MALFORMED: &[(&str, &str)] = &[
    ("malformed/truncated.json", "line 1"),
    ("malformed/unknown-kind.json", "unknown document kind"),
    ("malformed/bad-version.json", "unsupported format version"),
    ("malformed/wrong-degree.json", "must have degree -2"),
    ("malformed/bad-scalar.json", "cannot parse scalar"),
    ("malformed/ragged-matrix.json", "matrix needs"),
    ("malformed/unknown-generator.json", "generator index 9 out of range"),
];

/// Parsing a serialized document and serializing it again reproduces the
/// bytes on disk, for every bundled fixture.
#[test]
fn corpus_round_trips_byte_identically() {
    for name in CORPUS {
        let path = fixture_root().join(name);
        let text = std::fs::read_to_string(&path).expect("read fixture");
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = serialize_document(&doc);
        assert_eq!(again, text, "{name} is not in canonical form");
        let doc2 = parse_document(&again).expect("reparse");
        assert_eq!(doc2, doc, "{name} does not round trip structurally");
    }
}

/// Freshly generated documents survive serialize-then-parse without loss:
/// random complexes, random morphisms between them, and a whole catalog.
#[test]
fn random_documents_round_trip() {
    let p = fixtures::dual_numbers(1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    while seen < 20 {
        let Some(x) = random_complex(&p, &mut rng, 0, 2, 2, 8) else {
            continue;
        };
        let Some(y) = random_complex(&p, &mut rng, 0, 2, 2, 8) else {
            continue;
        };
        seen += 1;
        let dx = twobject_document(&p, &x);
        assert_eq!(parse_document(&serialize_document(&dx)).unwrap(), dx);
        let f = random_raw_morphism(&p, &mut rng, &x, &y, 0);
        let df = twmorphism_document(&p, &f);
        assert_eq!(parse_document(&serialize_document(&df)).unwrap(), df);
    }
    let p2 = fixtures::dual_numbers(2);
    let cat = SequenceCatalog::enumerate(&p2, 2, 1).expect("catalog");
    let dc = catalog_document(&p2, &cat);
    assert_eq!(parse_document(&serialize_document(&dc)).unwrap(), dc);
}

/// Exit code 0: a checked property that holds.
#[test]
fn passing_checks_exit_zero() {
    let (code, out, _) = run(&["nexact", &fixture("fixA2-eps.tw"), "--n", "2", "--field", "fp:2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("pass"), "{out}");
    assert!(!out.contains("fail"), "{out}");

    let (code, _, _) = run(&[
        "axioms",
        &fixture("fixC.pres"),
        &fixture("fixC.cat"),
        "--n",
        "2",
        "--bound",
        "2",
    ]);
    assert_eq!(code, 0);
}

/// Exit code 1: a checked property that fails. The nontrivial extension is
/// not split, so asking whether it splits reports failures.
#[test]
fn failing_checks_exit_one() {
    let (code, out, _) = run(&["split", &fixture("fixA2-eps.tw"), "--n", "2"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("fail"), "{out}");
}

/// Exit code 2: strict mode escalates clauses that are not checkable at the
/// chosen bound. A complex that is not left exact has no corner map, so its
/// long exact row is not defined.
#[test]
fn strict_mode_exits_two_on_unfinished_checks() {
    let dir = tempfile::tempdir().expect("tempdir");
    let conc = dir.path().join("conc.tw");
    let conc = conc.display().to_string();
    let (code, _, _) = run(&[
        "truncate",
        &fixture("fixA2-eps.tw"),
        "--le",
        "0",
        "--format",
        "json",
        "--out",
        &conc,
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["les", &conc, "--n", "2"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("not-checkable-at-bound"), "{out}");
    let (code, _, _) = run(&["les", &conc, "--n", "2", "--strict"]);
    assert_eq!(code, 2);
}

/// Exit code 3: malformed input, with a diagnostic naming the offending
/// line or field.
#[test]
fn malformed_gallery_exits_three_with_diagnostics() {
    for (name, needle) in MALFORMED {
        let (code, _, err) = run(&["validate", &fixture(name)]);
        assert_eq!(code, 3, "{name}: {err}");
        assert!(err.contains("parse error"), "{name}: {err}");
        assert!(err.contains(needle), "{name}: {err}");
    }
}

/// Exit code 3 also covers unknown commands, unknown flags, missing files,
/// and flags that contradict the input document.
#[test]
fn usage_errors_exit_three() {
    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = run(&["validate", &fixture("fixC.pres"), "--frob"]);
    assert_eq!(code, 3);
    let (code, _, err) = run(&["validate", "no-such-file.pres"]);
    assert_eq!(code, 3);
    assert!(err.contains("no-such-file.pres"), "{err}");
    // fixC lives over fp:2, not the rationals
    let (code, _, err) = run(&["validate", &fixture("fixC.pres"), "--field", "q"]);
    assert_eq!(code, 3);
    assert!(err.contains("field"), "{err}");
    // the catalog was built at n = 2
    let (code, _, err) = run(&["ext", &fixture("fixC.cat"), "--n", "1"]);
    assert_eq!(code, 3);
    assert!(err.contains("n = 2"), "{err}");
}

/// Help and version requests leave through stdout with exit code 0. The
/// help subcommand is disabled, so a bare `help` is an unknown command.
#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("nexact"), "{out}");
    let (code, _, _) = run(&["--version"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["help"]);
    assert_eq!(code, 3);
}

/// The same invocation twice produces byte-identical reports, in both text
/// and document form.
#[test]
fn reports_are_deterministic() {
    for format in ["text", "json"] {
        let args = [
            "axioms",
            &fixture("fixA2.pres"),
            "--n",
            "2",
            "--bound",
            "1",
            "--seed",
            "7",
            "--format",
            format,
        ];
        let (c1, o1, _) = run(&args);
        let (c2, o2, _) = run(&args);
        assert_eq!(c1, 0);
        assert_eq!(c1, c2);
        assert_eq!(o1, o2, "{format} report differs between runs");
    }
}

/// A report rendered as a document parses back under the shared schema.
#[test]
fn report_documents_parse_back() {
    let (code, out, _) = run(&[
        "validate",
        &fixture("fixQ.pres"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let doc = parse_document(&out).expect("report parses");
    assert_eq!(doc.kind(), "report");
    assert_eq!(serialize_document(&doc), out);
}

/// Artifact-producing commands emit documents that feed back into the other
/// commands: truncation, cones, and spliced chains re-validate on ingestion.
#[test]
fn artifacts_feed_back_into_the_pipeline() {
    let dir = tempfile::tempdir().expect("tempdir");

    let cone = dir.path().join("cone.tw").display().to_string();
    let (code, _, err) = run(&[
        "cone",
        &fixture("fixC-id.twm"),
        "--format",
        "json",
        "--out",
        &cone,
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["validate", &cone]);
    assert_eq!(code, 0, "{out}");
    // the cone of an identity splits
    let (code, out, _) = run(&["split", &cone, "--n", "1"]);
    assert_eq!(code, 0, "{out}");

    let spliced = dir.path().join("spliced.tw").display().to_string();
    let (code, _, err) = run(&[
        "splice",
        &fixture("fixA1-chain.certs"),
        "--n",
        "1",
        "--format",
        "json",
        "--out",
        &spliced,
    ]);
    assert_eq!(code, 0, "{err}");
    let (code, out, _) = run(&["nexact", &spliced, "--n", "2"]);
    assert_eq!(code, 0, "{out}");
}

/// The bundled chain with a certificate pool passes all four descriptions
/// of spliced exactness.
#[test]
fn certified_chain_passes_all_four_conditions() {
    let (code, out, _) = run(&["splice", &fixture("fixC-chain.certs"), "--n", "1"]);
    assert_eq!(code, 0, "{out}");
    for needle in ["(1)", "(2)", "(3)", "(4)", "(agreement)"] {
        assert!(out.contains(needle), "missing {needle}: {out}");
    }
    assert!(!out.contains("fail"), "{out}");
}

/// The installed binary wires the same entry point to the process exit code.
#[test]
fn binary_smoke_test() {
    let exe = env!("CARGO_BIN_EXE_exangulate");
    let ok = std::process::Command::new(exe)
        .args(["validate", &fixture("fixC.pres")])
        .output()
        .expect("run binary");
    assert!(ok.status.success());
    let bad = std::process::Command::new(exe)
        .args(["validate", &fixture("malformed/truncated.json")])
        .output()
        .expect("run binary");
    assert_eq!(bad.status.code(), Some(3));
}
