//! Regenerates the bundled fixture corpus under `fixtures/` at the
//! workspace root. Run after changing the document format or the fixture
//! presentations:
//!
//! ```text
//! cargo run -p exangulate --example regen_fixtures
//! ```
//!
//! Every file is written in canonical form, so committing the output keeps
//! the corpus byte-identical with what the serializer produces.

use exangulate::cli::{
    certificates_document, catalog_document, presentation_document, serialize_document,
    twmorphism_document, twobject_document,
};
use exangulate::dgcat::{DgMorphism, DgPresentation, SumObject};
use exangulate::fixtures;
use exangulate::splice::Conflation;
use exangulate::twisted::{split_sequence, TwMorphism, TwObject};
use exangulate::verifier::SequenceCatalog;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn write(path: &str, text: String) {
    let full = root().join(path);
    if let Some(dir) = full.parent() {
        fs::create_dir_all(dir).expect("create fixture directory");
    }
    fs::write(&full, text).expect("write fixture");
    println!("wrote {}", full.display());
}

/// The nontrivial 2-extension of the generator by itself: two empty middle
/// terms bridged by the degree -2 twist.
fn eps_extension(p: &DgPresentation) -> TwObject {
    let t = SumObject::generator(0);
    let mut terms = BTreeMap::new();
    terms.insert(0, t.clone());
    terms.insert(3, t.clone());
    let eps = DgMorphism {
        source: t.clone(),
        target: t,
        degree: -2,
        coords: vec![p.field().one()],
    };
    let mut diffs = BTreeMap::new();
    diffs.insert((0, 3), eps);
    TwObject::new(p, terms, diffs).expect("eps extension")
}

/// A conflation with a nonzero homotopy entry: the split three-term sequence
/// on (t, t) with the degree -1 twist inserted at the corner.
fn eps_link(p: &DgPresentation) -> Conflation {
    let t = SumObject::generator(0);
    let split = split_sequence(p, &t, &t, 1).expect("split sequence");
    let mut diffs = split.diffs().clone();
    diffs.insert(
        (0, 2),
        DgMorphism {
            source: t.clone(),
            target: t,
            degree: -1,
            coords: vec![p.field().one()],
        },
    );
    let x = TwObject::new(p, split.terms().clone(), diffs).expect("linked complex");
    Conflation::new(p, x, true).expect("eps link")
}

fn main() {
    let fixc = fixtures::semisimple_point();
    let fixa1 = fixtures::dual_numbers(1);
    let fixa2 = fixtures::dual_numbers(2);
    let fixa3 = fixtures::dual_numbers(3);
    let fixq = fixtures::two_vertex_quiver();

    write("fixC.pres", serialize_document(&presentation_document(&fixc)));
    write("fixA1.pres", serialize_document(&presentation_document(&fixa1)));
    write("fixA2.pres", serialize_document(&presentation_document(&fixa2)));
    write("fixA3.pres", serialize_document(&presentation_document(&fixa3)));
    write("fixQ.pres", serialize_document(&presentation_document(&fixq)));

    let eps = eps_extension(&fixa2);
    write("fixA2-eps.tw", serialize_document(&twobject_document(&fixa2, &eps)));

    // based in degree 1 so the cone lands on the window [0, 1]
    let k = SumObject::generator(0);
    let conc = TwObject::concentrated(&k, 1);
    let idm = TwMorphism::identity(&fixc, &conc);
    write("fixC-id.twm", serialize_document(&twmorphism_document(&fixc, &idm)));

    let cat = SequenceCatalog::enumerate(&fixc, 2, 2).expect("fixC catalog");
    write("fixC.cat", serialize_document(&catalog_document(&fixc, &cat)));

    // a chain with homotopy entries over the degree -1 dual numbers
    let link = eps_link(&fixa1);
    write(
        "fixA1-chain.certs",
        serialize_document(&certificates_document(
            &fixa1,
            1,
            &[],
            &[],
            &[link.clone(), link],
        )),
    );

    // a split chain over the point together with a certificate pool
    let split_link = Conflation::split(&fixc, &k, &k).expect("split link");
    let pool = vec![
        Conflation::split(&fixc, &k, &k).expect("pool kk"),
        Conflation::split(&fixc, &SumObject::zero(), &k).expect("pool 0k"),
        Conflation::split(&fixc, &k, &SumObject::zero()).expect("pool k0"),
    ];
    write(
        "fixC-chain.certs",
        serialize_document(&certificates_document(
            &fixc,
            1,
            &[],
            &pool,
            &[split_link.clone(), split_link],
        )),
    );

    // malformed gallery: each file fails to parse with a diagnostic
    write(
        "malformed/truncated.json",
        "{ \"kind\": \"presentation\", \"version\": \"1\",".to_string(),
    );
    write(
        "malformed/unknown-kind.json",
        "{ \"kind\": \"complex\", \"version\": \"1\", \"body\": {} }\n".to_string(),
    );
    write(
        "malformed/bad-version.json",
        "{ \"kind\": \"report\", \"version\": \"99\", \"body\": { \"title\": \"t\", \"context\": {}, \"clauses\": [] } }\n".to_string(),
    );
    let mut doc = serialize_document(&twobject_document(&fixa2, &eps));
    doc = doc.replace("\"degree\": -2", "\"degree\": 0");
    write("malformed/wrong-degree.json", doc);
    let mut doc = serialize_document(&presentation_document(&fixc));
    doc = doc.replace("\"1\"\n", "\"one\"\n");
    write("malformed/bad-scalar.json", doc);
    let mut doc = serialize_document(&presentation_document(&fixq));
    doc = doc.replace("\"rows\": 1", "\"rows\": 2");
    write("malformed/ragged-matrix.json", doc);
    let mut doc = serialize_document(&twobject_document(&fixa2, &eps));
    doc = doc.replace("[\n          0\n        ]", "[\n          9\n        ]");
    write("malformed/unknown-generator.json", doc);
}
