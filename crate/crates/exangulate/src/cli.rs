//! Command-line surface: structured JSON documents for every value the
//! engine works with, a small set of subcommands wiring them to the checkers,
//! and deterministic report rendering.
//!
//! Every file is a [`Document`]: a `kind` tag, a format `version`, and a
//! kind-specific body. All scalars are serialized exactly as strings
//! (rationals as `p/q`, prime-field elements as residues), matrices as
//! row-major arrays, and graded data as degree-indexed maps, so that files
//! are diffable and round-trip byte-identically.
//!
//! Exit codes: `0` all checks passed, `1` a checked property failed, `2`
//! not-checkable-at-bound items present under `--strict`, `3` input error.

use crate::dgcat::{validate_presentation, DgMorphism, DgPresentation, HomLayout, PresentationBuilder, SumObject};
use crate::exactness::{is_n_sparse, les_ladder, les_row, split_characterizations};
use crate::homotopy::hom_complex;
use crate::linalg::{Field, FieldElem, Matrix};
use crate::report::{AxiomReport, Clause, Verdict};
use crate::splice::{splice_chain, spliced_exactness, Conflation, ConflationCertificates, SpliceChain};
use crate::twisted::{
    cone, is_closed as morphism_is_closed, random_raw_morphism, tw_compose, tw_differential,
    truncate_ge, truncate_le, validate_tw, TwMorphism, TwObject,
};
use crate::verifier::{
    axiom_clause_pairs, check_dg_axioms, exactness_flags, ext_group, n_stable_check,
    ordinary_axioms, realization_check, Certificates, SequenceCatalog,
};
use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

pub const FORMAT_VERSION: &str = "1";

/// An error surfaced to the user with exit code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InputError {}

impl From<crate::twisted::TwError> for InputError {
    fn from(e: crate::twisted::TwError) -> InputError {
        InputError(e.to_string())
    }
}

impl From<crate::dgcat::DgError> for InputError {
    fn from(e: crate::dgcat::DgError) -> InputError {
        InputError(e.to_string())
    }
}

type Res<T> = Result<T, InputError>;

fn err<T>(msg: impl Into<String>) -> Res<T> {
    Err(InputError(msg.into()))
}

// ---------------------------------------------------------------------------
// Document model
// ---------------------------------------------------------------------------

/// Dense matrix with entries rendered as exact scalar strings, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

/// A finitely presented dg-category: generator names, hom space dimensions
/// by degree, differential matrices, composition tensors, and identity
/// coordinates. Zero blocks are omitted everywhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub name: String,
    pub field: String,
    pub objects: Vec<String>,
    /// `"a,b"` (generator indices) -> degree -> dimension
    pub homs: BTreeMap<String, BTreeMap<String, usize>>,
    /// `"a,b"` -> degree -> matrix of the hom differential in that degree
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diffs: BTreeMap<String, BTreeMap<String, MatrixDoc>>,
    /// `"a,b,c"` -> `"p,q"` -> composition tensor on basis pairs; the column
    /// for (f in degree p slot i, g in degree q slot j) is `j * dim_p + i`
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub comps: BTreeMap<String, BTreeMap<String, MatrixDoc>>,
    /// generator index -> coordinates of the identity in degree 0
    pub identities: BTreeMap<String, Vec<String>>,
}

/// One component of a twisted differential or morphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub degree: i64,
    pub coords: Vec<String>,
}

/// A twisted complex relative to an ambient presentation: terms by position
/// (lists of generator indices) and differential components keyed `"i,j"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwObjectBody {
    pub terms: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub diffs: BTreeMap<String, ComponentDoc>,
}

/// A morphism of twisted complexes with its components keyed `"i,j"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwMorphismBody {
    pub source: TwObjectBody,
    pub target: TwObjectBody,
    pub degree: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub comps: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwObjectDoc {
    pub presentation: PresentationDoc,
    pub object: TwObjectBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwMorphismDoc {
    pub presentation: PresentationDoc,
    pub morphism: TwMorphismBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub presentation: PresentationDoc,
    pub n: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    pub entries: Vec<TwObjectBody>,
}

/// Witness data: morphism certificates for the axiom checkers, a conflation
/// pool for extensional admissibility, and an ordered chain for splicing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificatesDoc {
    pub presentation: PresentationDoc,
    pub n: i64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<TwMorphismBody>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflations: Vec<TwObjectBody>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chain: Vec<TwObjectBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub title: String,
    pub context: BTreeMap<String, String>,
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Presentation(PresentationDoc),
    Twobject(TwObjectDoc),
    Twmorphism(TwMorphismDoc),
    Catalog(CatalogDoc),
    Certificates(CertificatesDoc),
    Report(ReportDoc),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub version: String,
    pub body: Body,
}

impl Document {
    pub fn new(body: Body) -> Document {
        Document {
            version: FORMAT_VERSION.to_string(),
            body,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.body {
            Body::Presentation(_) => "presentation",
            Body::Twobject(_) => "twobject",
            Body::Twmorphism(_) => "twmorphism",
            Body::Catalog(_) => "catalog",
            Body::Certificates(_) => "certificates",
            Body::Report(_) => "report",
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum BodyOut<'a> {
    Presentation(&'a PresentationDoc),
    Twobject(&'a TwObjectDoc),
    Twmorphism(&'a TwMorphismDoc),
    Catalog(&'a CatalogDoc),
    Certificates(&'a CertificatesDoc),
    Report(&'a ReportDoc),
}

#[derive(Serialize)]
struct RawOut<'a> {
    kind: &'a str,
    version: &'a str,
    body: BodyOut<'a>,
}

#[derive(Deserialize)]
struct RawIn {
    kind: String,
    version: String,
    body: serde_json::Value,
}

/// Canonical text of a document: two-space pretty JSON, keys sorted within
/// each map, one trailing newline. Serializing twice is byte-identical.
pub fn serialize_document(doc: &Document) -> String {
    let body = match &doc.body {
        Body::Presentation(b) => BodyOut::Presentation(b),
        Body::Twobject(b) => BodyOut::Twobject(b),
        Body::Twmorphism(b) => BodyOut::Twmorphism(b),
        Body::Catalog(b) => BodyOut::Catalog(b),
        Body::Certificates(b) => BodyOut::Certificates(b),
        Body::Report(b) => BodyOut::Report(b),
    };
    let raw = RawOut {
        kind: match doc.body {
            Body::Presentation(_) => "presentation",
            Body::Twobject(_) => "twobject",
            Body::Twmorphism(_) => "twmorphism",
            Body::Catalog(_) => "catalog",
            Body::Certificates(_) => "certificates",
            Body::Report(_) => "report",
        },
        version: &doc.version,
        body,
    };
    let mut text = serde_json::to_string_pretty(&raw).expect("document serialization");
    text.push('\n');
    text
}

fn typed_body<T: for<'de> Deserialize<'de>>(value: serde_json::Value) -> Res<T> {
    let de = value;
    serde_path_to_error::deserialize(de).map_err(|e| {
        InputError(format!("parse error in field 'body.{}': {}", e.path(), e.inner()))
    })
}

/// Parses a document from its JSON text. Syntax errors carry line and column
/// positions; schema errors name the offending field path.
pub fn parse_document(text: &str) -> Res<Document> {
    let raw: RawIn = serde_json::from_str(text).map_err(|e| {
        InputError(format!(
            "parse error at line {} column {}: {}",
            e.line(),
            e.column(),
            e
        ))
    })?;
    if raw.version != FORMAT_VERSION {
        return err(format!(
            "parse error in field 'version': unsupported format version '{}', expected '{}'",
            raw.version, FORMAT_VERSION
        ));
    }
    let body = match raw.kind.as_str() {
        "presentation" => Body::Presentation(typed_body(raw.body)?),
        "twobject" => Body::Twobject(typed_body(raw.body)?),
        "twmorphism" => Body::Twmorphism(typed_body(raw.body)?),
        "catalog" => Body::Catalog(typed_body(raw.body)?),
        "certificates" => Body::Certificates(typed_body(raw.body)?),
        "report" => Body::Report(typed_body(raw.body)?),
        other => {
            return err(format!(
                "parse error in field 'kind': unknown document kind '{other}'"
            ))
        }
    };
    Ok(Document {
        version: raw.version,
        body,
    })
}

// ---------------------------------------------------------------------------
// Scalar, matrix, and key codecs
// ---------------------------------------------------------------------------

pub fn parse_field_name(s: &str) -> Res<Field> {
    if s == "q" {
        return Ok(Field::Q);
    }
    if let Some(p) = s.strip_prefix("fp:") {
        let p: u64 = p
            .parse()
            .map_err(|_| InputError(format!("bad field spec '{s}': expected q or fp:<prime>")))?;
        return Field::fp(p).map_err(|e| InputError(e.to_string()));
    }
    err(format!("bad field spec '{s}': expected q or fp:<prime>"))
}

fn scalar_to_string(v: &FieldElem) -> String {
    v.to_string()
}

fn parse_scalar_at(field: Field, s: &str, path: &str) -> Res<FieldElem> {
    field
        .parse_scalar(s)
        .map_err(|e| InputError(format!("parse error in field '{path}': {e}")))
}

fn parse_coords(field: Field, raw: &[String], expected: usize, path: &str) -> Res<Vec<FieldElem>> {
    if raw.len() != expected {
        return err(format!(
            "parse error in field '{path}': expected {expected} coordinates, found {}",
            raw.len()
        ));
    }
    raw.iter()
        .enumerate()
        .map(|(k, s)| parse_scalar_at(field, s, &format!("{path}[{k}]")))
        .collect()
}

fn matrix_to_doc(m: &Matrix) -> MatrixDoc {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            entries.push(scalar_to_string(&m[(r, c)]));
        }
    }
    MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries,
    }
}

fn doc_to_matrix(field: Field, d: &MatrixDoc, path: &str) -> Res<Matrix> {
    if d.entries.len() != d.rows * d.cols {
        return err(format!(
            "parse error in field '{path}': {}x{} matrix needs {} entries, found {}",
            d.rows,
            d.cols,
            d.rows * d.cols,
            d.entries.len()
        ));
    }
    let mut m = Matrix::zeros(field, d.rows, d.cols);
    for r in 0..d.rows {
        for c in 0..d.cols {
            let v = parse_scalar_at(
                field,
                &d.entries[r * d.cols + c],
                &format!("{path}.entries[{}]", r * d.cols + c),
            )?;
            m.set(r, c, v);
        }
    }
    Ok(m)
}

fn pair_key(i: i64, j: i64) -> String {
    format!("{i},{j}")
}

fn parse_ints(s: &str, count: usize, path: &str) -> Res<Vec<i64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != count {
        return err(format!(
            "parse error in field '{path}': key '{s}' should have {count} comma separated integers"
        ));
    }
    parts
        .iter()
        .map(|t| {
            t.trim().parse::<i64>().map_err(|_| {
                InputError(format!(
                    "parse error in field '{path}': key '{s}' has a non-integer part '{t}'"
                ))
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Presentation conversions
// ---------------------------------------------------------------------------

/// Serializes a presentation by reading its hom dimensions, differentials,
/// composition tensors (reconstructed on basis pairs), and identities.
pub fn presentation_to_doc(p: &DgPresentation) -> PresentationDoc {
    let (lo, hi) = p.hom_degree_range();
    let count = p.object_count();
    let mut homs = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut comps = BTreeMap::new();
    let mut identities = BTreeMap::new();
    for a in 0..count {
        identities.insert(
            a.to_string(),
            p.identity_coords(a).iter().map(scalar_to_string).collect(),
        );
        for b in 0..count {
            let key = pair_key(a as i64, b as i64);
            let mut dims = BTreeMap::new();
            let mut mats = BTreeMap::new();
            for degree in lo..=hi {
                let dim = p.gen_hom_dim(a, b, degree);
                if dim == 0 {
                    continue;
                }
                dims.insert(degree.to_string(), dim);
                let m = p.gen_diff_matrix(a, b, degree);
                if !m.is_zero() {
                    mats.insert(degree.to_string(), matrix_to_doc(&m));
                }
            }
            if !dims.is_empty() {
                homs.insert(key.clone(), dims);
            }
            if !mats.is_empty() {
                diffs.insert(key, mats);
            }
        }
    }
    for a in 0..count {
        for b in 0..count {
            for c in 0..count {
                let mut tensors = BTreeMap::new();
                for dp in lo..=hi {
                    for dq in lo..=hi {
                        let out = dp + dq;
                        if out < lo || out > hi {
                            continue;
                        }
                        let np = p.gen_hom_dim(a, b, dp);
                        let nq = p.gen_hom_dim(b, c, dq);
                        let nout = p.gen_hom_dim(a, c, out);
                        if np == 0 || nq == 0 || nout == 0 {
                            continue;
                        }
                        let mut cols = Vec::with_capacity(np * nq);
                        for gj in 0..nq {
                            for fi in 0..np {
                                let mut f = vec![p.field().zero(); np];
                                f[fi] = p.field().one();
                                let mut g = vec![p.field().zero(); nq];
                                g[gj] = p.field().one();
                                cols.push(p.gen_compose(a, b, c, dp, dq, &g, &f));
                            }
                        }
                        let m = Matrix::from_cols(p.field(), nout, cols);
                        if !m.is_zero() {
                            tensors.insert(format!("{dp},{dq}"), matrix_to_doc(&m));
                        }
                    }
                }
                if !tensors.is_empty() {
                    comps.insert(format!("{a},{b},{c}"), tensors);
                }
            }
        }
    }
    PresentationDoc {
        name: p.name().to_string(),
        field: p.field().to_string(),
        objects: (0..count).map(|i| p.object_name(i).to_string()).collect(),
        homs,
        diffs,
        comps,
        identities,
    }
}

pub fn doc_to_presentation(d: &PresentationDoc) -> Res<DgPresentation> {
    let field = parse_field_name(&d.field)
        .map_err(|e| InputError(format!("parse error in field 'body.presentation.field': {e}")))?;
    if d.objects.is_empty() {
        return err("parse error in field 'body.presentation.objects': at least one generator is needed");
    }
    let mut builder = PresentationBuilder::new(&d.name, field);
    for name in &d.objects {
        builder.object(name);
    }
    let name_of = |idx: i64, path: &str| -> Res<String> {
        let i = usize::try_from(idx).ok().filter(|&i| i < d.objects.len());
        match i {
            Some(i) => Ok(d.objects[i].clone()),
            None => err(format!(
                "parse error in field '{path}': generator index {idx} out of range"
            )),
        }
    };
    for (key, dims) in &d.homs {
        let path = format!("body.presentation.homs.{key}");
        let ab = parse_ints(key, 2, &path)?;
        let (a, b) = (name_of(ab[0], &path)?, name_of(ab[1], &path)?);
        for (deg, dim) in dims {
            let degree: i64 = deg.parse().map_err(|_| {
                InputError(format!("parse error in field '{path}.{deg}': bad degree"))
            })?;
            builder.hom(&a, &b, degree, *dim)?;
        }
    }
    for (key, mats) in &d.diffs {
        let path = format!("body.presentation.diffs.{key}");
        let ab = parse_ints(key, 2, &path)?;
        let (a, b) = (name_of(ab[0], &path)?, name_of(ab[1], &path)?);
        for (deg, mat) in mats {
            let degree: i64 = deg.parse().map_err(|_| {
                InputError(format!("parse error in field '{path}.{deg}': bad degree"))
            })?;
            let m = doc_to_matrix(field, mat, &format!("{path}.{deg}"))?;
            builder.diff(&a, &b, degree, m)?;
        }
    }
    for (key, tensors) in &d.comps {
        let path = format!("body.presentation.comps.{key}");
        let abc = parse_ints(key, 3, &path)?;
        let (a, b, c) = (
            name_of(abc[0], &path)?,
            name_of(abc[1], &path)?,
            name_of(abc[2], &path)?,
        );
        for (degs, mat) in tensors {
            let sub = format!("{path}.{degs}");
            let pq = parse_ints(degs, 2, &sub)?;
            let m = doc_to_matrix(field, mat, &sub)?;
            builder.comp(&a, &b, &c, pq[0], pq[1], m)?;
        }
    }
    for (key, coords) in &d.identities {
        let path = format!("body.presentation.identities.{key}");
        let idx: i64 = key
            .parse()
            .map_err(|_| InputError(format!("parse error in field '{path}': bad generator index")))?;
        let name = name_of(idx, &path)?;
        let parsed: Vec<FieldElem> = coords
            .iter()
            .enumerate()
            .map(|(k, s)| parse_scalar_at(field, s, &format!("{path}[{k}]")))
            .collect::<Res<_>>()?;
        builder.identity(&name, parsed)?;
    }
    Ok(builder.build()?)
}

// ---------------------------------------------------------------------------
// Twisted object and morphism conversions
// ---------------------------------------------------------------------------

pub fn twobject_to_body(x: &TwObject) -> TwObjectBody {
    let terms = x
        .terms()
        .iter()
        .map(|(&i, s)| (i.to_string(), s.summands().to_vec()))
        .collect();
    let diffs = x
        .diffs()
        .iter()
        .map(|(&(i, j), d)| {
            (
                pair_key(i, j),
                ComponentDoc {
                    degree: d.degree,
                    coords: d.coords.iter().map(scalar_to_string).collect(),
                },
            )
        })
        .collect();
    TwObjectBody { terms, diffs }
}

fn sum_at(p: &DgPresentation, gens: &[usize], path: &str) -> Res<SumObject> {
    for &g in gens {
        if g >= p.object_count() {
            return err(format!(
                "parse error in field '{path}': generator index {g} out of range"
            ));
        }
    }
    Ok(SumObject::of(gens))
}

pub fn body_to_twobject(p: &DgPresentation, b: &TwObjectBody, path: &str) -> Res<TwObject> {
    let mut terms = BTreeMap::new();
    for (key, gens) in &b.terms {
        let sub = format!("{path}.terms.{key}");
        let i: i64 = key
            .parse()
            .map_err(|_| InputError(format!("parse error in field '{sub}': bad position")))?;
        let s = sum_at(p, gens, &sub)?;
        if !s.is_zero() {
            terms.insert(i, s);
        }
    }
    let term = |i: i64| terms.get(&i).cloned().unwrap_or_else(SumObject::zero);
    let mut diffs = BTreeMap::new();
    for (key, comp) in &b.diffs {
        let sub = format!("{path}.diffs.{key}");
        let ij = parse_ints(key, 2, &sub)?;
        let (i, j) = (ij[0], ij[1]);
        let expected = i - j + 1;
        if comp.degree != expected {
            return err(format!(
                "parse error in field '{sub}.degree': component ({i},{j}) must have degree {expected}, found {}",
                comp.degree
            ));
        }
        let (s, t) = (term(i), term(j));
        let dim = HomLayout::new(p, &s, &t, expected).total;
        let coords = parse_coords(p.field(), &comp.coords, dim, &format!("{sub}.coords"))?;
        diffs.insert(
            (i, j),
            DgMorphism {
                source: s,
                target: t,
                degree: expected,
                coords,
            },
        );
    }
    TwObject::new(p, terms, diffs).map_err(|e| InputError(format!("invalid twisted complex at '{path}': {e}")))
}

pub fn twmorphism_to_body(f: &TwMorphism) -> TwMorphismBody {
    TwMorphismBody {
        source: twobject_to_body(f.source()),
        target: twobject_to_body(f.target()),
        degree: f.degree(),
        comps: f
            .comps()
            .iter()
            .map(|(&(i, j), d)| {
                (pair_key(i, j), d.coords.iter().map(scalar_to_string).collect())
            })
            .collect(),
    }
}

pub fn body_to_twmorphism(p: &DgPresentation, b: &TwMorphismBody, path: &str) -> Res<TwMorphism> {
    let source = body_to_twobject(p, &b.source, &format!("{path}.source"))?;
    let target = body_to_twobject(p, &b.target, &format!("{path}.target"))?;
    let mut comps = BTreeMap::new();
    for (key, coords) in &b.comps {
        let sub = format!("{path}.comps.{key}");
        let ij = parse_ints(key, 2, &sub)?;
        let (i, j) = (ij[0], ij[1]);
        let degree = i - j + b.degree;
        let (s, t) = (source.term(i), target.term(j));
        let dim = HomLayout::new(p, &s, &t, degree).total;
        let parsed = parse_coords(p.field(), coords, dim, &sub)?;
        comps.insert(
            (i, j),
            DgMorphism {
                source: s,
                target: t,
                degree,
                coords: parsed,
            },
        );
    }
    TwMorphism::from_comps(p, source, target, b.degree, comps)
        .map_err(|e| InputError(format!("invalid morphism at '{path}': {e}")))
}

// ---------------------------------------------------------------------------
// Whole-document constructors and extractors
// ---------------------------------------------------------------------------

pub fn presentation_document(p: &DgPresentation) -> Document {
    Document::new(Body::Presentation(presentation_to_doc(p)))
}

pub fn twobject_document(p: &DgPresentation, x: &TwObject) -> Document {
    Document::new(Body::Twobject(TwObjectDoc {
        presentation: presentation_to_doc(p),
        object: twobject_to_body(x),
    }))
}

pub fn twmorphism_document(p: &DgPresentation, f: &TwMorphism) -> Document {
    Document::new(Body::Twmorphism(TwMorphismDoc {
        presentation: presentation_to_doc(p),
        morphism: twmorphism_to_body(f),
    }))
}

pub fn catalog_document(p: &DgPresentation, cat: &SequenceCatalog) -> Document {
    Document::new(Body::Catalog(CatalogDoc {
        presentation: presentation_to_doc(p),
        n: cat.n,
        bound: cat.bound,
        support: cat.support.clone(),
        entries: cat.entries.iter().map(twobject_to_body).collect(),
    }))
}

pub fn certificates_document(
    p: &DgPresentation,
    n: i64,
    morphisms: &[TwMorphism],
    conflations: &[Conflation],
    chain: &[Conflation],
) -> Document {
    Document::new(Body::Certificates(CertificatesDoc {
        presentation: presentation_to_doc(p),
        n,
        morphisms: morphisms.iter().map(twmorphism_to_body).collect(),
        conflations: conflations
            .iter()
            .map(|c| twobject_to_body(&c.threeterm))
            .collect(),
        chain: chain.iter().map(|c| twobject_to_body(&c.threeterm)).collect(),
    }))
}

pub fn report_document(
    title: &str,
    context: BTreeMap<String, String>,
    report: &AxiomReport,
) -> Document {
    Document::new(Body::Report(ReportDoc {
        title: title.to_string(),
        context,
        clauses: report.clauses.clone(),
    }))
}

fn doc_presentation(doc: &Document) -> Res<(&PresentationDoc, DgPresentation)> {
    let pd = match &doc.body {
        Body::Presentation(b) => b,
        Body::Twobject(b) => &b.presentation,
        Body::Twmorphism(b) => &b.presentation,
        Body::Catalog(b) => &b.presentation,
        Body::Certificates(b) => &b.presentation,
        Body::Report(_) => {
            return err("a report document carries no presentation");
        }
    };
    Ok((pd, doc_to_presentation(pd)?))
}

fn doc_to_catalog(p: &DgPresentation, d: &CatalogDoc) -> Res<SequenceCatalog> {
    if d.n < 1 {
        return err("parse error in field 'body.n': a catalog needs n >= 1");
    }
    let mut entries = Vec::with_capacity(d.entries.len());
    for (k, b) in d.entries.iter().enumerate() {
        entries.push(body_to_twobject(p, b, &format!("body.entries[{k}]"))?);
    }
    if let Some(sup) = &d.support {
        for &g in sup {
            if g >= p.object_count() {
                return err(format!(
                    "parse error in field 'body.support': generator index {g} out of range"
                ));
            }
        }
    }
    Ok(SequenceCatalog {
        n: d.n,
        entries,
        bound: d.bound,
        support: d.support.clone(),
    })
}

struct LoadedCerts {
    morphisms: Vec<TwMorphism>,
    conflations: Vec<Conflation>,
    chain: Vec<Conflation>,
    n: i64,
}

fn doc_to_certificates(p: &DgPresentation, d: &CertificatesDoc) -> Res<LoadedCerts> {
    let mut morphisms = Vec::new();
    for (k, b) in d.morphisms.iter().enumerate() {
        morphisms.push(body_to_twmorphism(p, b, &format!("body.morphisms[{k}]"))?);
    }
    let mut conflations = Vec::new();
    for (k, b) in d.conflations.iter().enumerate() {
        let x = body_to_twobject(p, b, &format!("body.conflations[{k}]"))?;
        conflations.push(Conflation::new(p, x, true)?);
    }
    let mut chain = Vec::new();
    for (k, b) in d.chain.iter().enumerate() {
        let x = body_to_twobject(p, b, &format!("body.chain[{k}]"))?;
        chain.push(Conflation::new(p, x, true)?);
    }
    Ok(LoadedCerts {
        morphisms,
        conflations,
        chain,
        n: d.n,
    })
}

// ---------------------------------------------------------------------------
// Command-line definition
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "exangulate",
    version,
    about = "Exact calculus of bounded one-sided twisted complexes",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Coefficient field the inputs must use: q or fp:<prime>
    #[arg(long, global = true)]
    field: Option<String>,
    /// Length parameter n of the calculus
    #[arg(long, global = true)]
    n: Option<i64>,
    /// Enumeration bound on term multiplicities
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Seed for the sampled sections of reports
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Exit with code 2 when any clause is not checkable at the bound
    #[arg(long, global = true)]
    strict: bool,
    /// Write the rendered output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for the rendered result
    #[arg(long, global = true, value_parser = ["text", "json"])]
    format: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a document is well formed and its data satisfies the
    /// structural identities of its kind
    Validate { file: PathBuf },
    /// Dimensions and cohomology of the hom complex between two complexes
    Hom { x: PathBuf, y: PathBuf },
    /// Dimension of the degree zero homotopy classes between two complexes
    Htw { x: PathBuf, y: PathBuf },
    /// Mapping cone of a closed degree zero morphism
    Cone { f: PathBuf },
    /// Brutal truncation of a twisted complex
    Truncate {
        x: PathBuf,
        /// Keep positions <= K
        #[arg(long, conflicts_with = "ge")]
        le: Option<i64>,
        /// Keep positions >= K
        #[arg(long)]
        ge: Option<i64>,
    },
    /// Decide left and right n-exactness of a twisted complex
    Nexact { x: PathBuf },
    /// Decide the three split characterizations and their agreement
    Split { x: PathBuf },
    /// Splice a certified chain of conflations into a long complex
    Splice { chain: PathBuf },
    /// Extension group tables over all generator endpoint pairs
    Ext { input: PathBuf },
    /// Long exact hom sequences of a complex against every generator
    Les { x: PathBuf },
    /// Axioms of the n-exact dg-category structure on a catalog
    Axioms {
        presentation: PathBuf,
        catalog: Option<PathBuf>,
        /// Morphism certificates to use instead of bounded searches
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Ordinary exact-category axioms and clause-by-clause comparison
    Ordinary {
        presentation: PathBuf,
        catalog: Option<PathBuf>,
    },
    /// Degreewise n-stability of a presentation
    Stable { presentation: PathBuf },
    /// Full deterministic verification report for a presentation
    Report { presentation: PathBuf },
}

// ---------------------------------------------------------------------------
// Shared command plumbing
// ---------------------------------------------------------------------------

struct Ctx {
    common: Common,
}

impl Ctx {
    fn n(&self, fallback: Option<i64>) -> Res<i64> {
        match (self.common.n, fallback) {
            (Some(n), Some(m)) if n != m => err(format!(
                "--n {n} disagrees with the input document's n = {m}"
            )),
            (Some(n), _) => Ok(n),
            (None, Some(m)) => Ok(m),
            (None, None) => Ok(1),
        }
    }

    fn bound(&self) -> usize {
        self.common.bound.unwrap_or(1)
    }

    fn seed(&self) -> u64 {
        self.common.seed.unwrap_or(0)
    }

    fn check_field(&self, p: &DgPresentation) -> Res<()> {
        if let Some(spec) = &self.common.field {
            let want = parse_field_name(spec)?;
            if want != p.field() {
                return err(format!(
                    "--field {spec} disagrees with the input document's field {}",
                    p.field()
                ));
            }
        }
        Ok(())
    }

    fn context(&self, inputs: &[(&str, String)]) -> BTreeMap<String, String> {
        let mut ctx = BTreeMap::new();
        for (k, v) in inputs {
            ctx.insert((*k).to_string(), v.clone());
        }
        if let Some(f) = &self.common.field {
            ctx.insert("field".to_string(), f.clone());
        }
        if let Some(n) = self.common.n {
            ctx.insert("n".to_string(), n.to_string());
        }
        if let Some(b) = self.common.bound {
            ctx.insert("bound".to_string(), b.to_string());
        }
        if let Some(s) = self.common.seed {
            ctx.insert("seed".to_string(), s.to_string());
        }
        ctx
    }
}

fn load(path: &PathBuf) -> Res<Document> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| InputError(format!("{}: {}", path.display(), e.0)))
}

fn exit_code(report: &AxiomReport, strict: bool) -> i32 {
    if report.any_failed() {
        1
    } else if strict && report.any_not_checkable() {
        2
    } else {
        0
    }
}

enum Rendered {
    Report(String, BTreeMap<String, String>, AxiomReport),
    Object(Document, String),
}

fn render(ctx: &Ctx, out: Rendered, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let format = ctx.common.format.as_deref().unwrap_or("text");
    let (text, code) = match out {
        Rendered::Report(title, context, report) => {
            let code = exit_code(&report, ctx.common.strict);
            let text = if format == "json" {
                serialize_document(&report_document(&title, context, &report))
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "{title}");
                for (k, v) in &context {
                    let _ = writeln!(s, "  {k}: {v}");
                }
                let _ = write!(s, "{report}");
                s
            };
            (text, code)
        }
        Rendered::Object(doc, describe) => {
            let text = if format == "json" {
                serialize_document(&doc)
            } else {
                let mut s = describe;
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            };
            (text, 0)
        }
    };
    match &ctx.common.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| InputError(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    Ok(code)
}

// ---------------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------------

fn cmd_validate(ctx: &Ctx, file: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(file)?;
    let mut report = AxiomReport::new();
    match &doc.body {
        Body::Presentation(_) => {
            let (_, p) = doc_presentation(&doc)?;
            ctx.check_field(&p)?;
            report.merge(validate_presentation(&p));
        }
        Body::Twobject(b) => {
            let (_, p) = doc_presentation(&doc)?;
            ctx.check_field(&p)?;
            let x = body_to_twobject(&p, &b.object, "body.object")?;
            report.merge(validate_tw(&p, &x));
        }
        Body::Twmorphism(b) => {
            let (_, p) = doc_presentation(&doc)?;
            ctx.check_field(&p)?;
            let f = body_to_twmorphism(&p, &b.morphism, "body.morphism")?;
            report.pass(
                "(shape) components fit their hom layouts",
                format!("degree {} morphism", f.degree()),
            );
            let closed = morphism_is_closed(&p, &f);
            report.pass(
                "(differential) twisted differential computed",
                if closed { "the morphism is closed" } else { "the morphism is not closed" },
            );
        }
        Body::Catalog(b) => {
            let (_, p) = doc_presentation(&doc)?;
            ctx.check_field(&p)?;
            let cat = doc_to_catalog(&p, b)?;
            let mut bad = None;
            for (k, x) in cat.entries.iter().enumerate() {
                if !validate_tw(&p, x).all_passed() {
                    bad = Some(k);
                    break;
                }
            }
            match bad {
                None => report.pass(
                    "(entries) twisted complex identities",
                    format!("{} entries verified", cat.entries.len()),
                ),
                Some(k) => report.fail(
                    "(entries) twisted complex identities",
                    format!("entry {k} violates the twisted identity"),
                ),
            }
            let mut inexact = None;
            for (k, x) in cat.entries.iter().enumerate() {
                let (l, r) = exactness_flags(&p, x, cat.n)?;
                if !(l && r) {
                    inexact = Some(k);
                    break;
                }
            }
            match inexact {
                None => report.pass(
                    "(exactness) entries are n-exact",
                    format!("n = {}", cat.n),
                ),
                Some(k) => report.fail(
                    "(exactness) entries are n-exact",
                    format!("entry {k} is not {}-exact", cat.n),
                ),
            }
        }
        Body::Certificates(b) => {
            let (_, p) = doc_presentation(&doc)?;
            ctx.check_field(&p)?;
            let certs = doc_to_certificates(&p, b)?;
            report.pass(
                "(witnesses) certificate data well formed",
                format!(
                    "{} morphisms, {} conflations, chain of {}",
                    certs.morphisms.len(),
                    certs.conflations.len(),
                    certs.chain.len()
                ),
            );
        }
        Body::Report(b) => {
            report.pass(
                "(schema) report clauses well formed",
                format!("{} clauses under title '{}'", b.clauses.len(), b.title),
            );
        }
    }
    let context = ctx.context(&[("input", file.display().to_string()), ("kind", doc.kind().to_string())]);
    render(ctx, Rendered::Report("validate".to_string(), context, report), stdout)
}

/// Loads two complexes and checks that they live over the same presentation.
fn load_pair(ctx: &Ctx, xp: &PathBuf, yp: &PathBuf) -> Res<(DgPresentation, TwObject, TwObject)> {
    let dx = load(xp)?;
    let dy = load(yp)?;
    let (Body::Twobject(bx), Body::Twobject(by)) = (&dx.body, &dy.body) else {
        return err("hom and htw need two twobject documents");
    };
    if bx.presentation != by.presentation {
        return err("the two complexes live over different presentations");
    }
    let p = doc_to_presentation(&bx.presentation)?;
    ctx.check_field(&p)?;
    let x = body_to_twobject(&p, &bx.object, "body.object")?;
    let y = body_to_twobject(&p, &by.object, "body.object")?;
    Ok((p, x, y))
}

fn cmd_hom(ctx: &Ctx, xp: &PathBuf, yp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let (p, x, y) = load_pair(ctx, xp, yp)?;
    let hc = hom_complex(&p, &x, &y);
    let (lo, hi) = hc.degree_window();
    let mut report = AxiomReport::new();
    for r in lo..=hi {
        let dim = hc.dim(r);
        let d = hc.dmat(&p, r);
        let dnext = hc.dmat(&p, r - 1);
        let cocycles = dim - d.rank();
        let coh = cocycles - dnext.rank();
        report.pass(
            format!("(degree {r})"),
            format!("dim {dim}, cohomology {coh}"),
        );
    }
    let context = ctx.context(&[("source", xp.display().to_string()), ("target", yp.display().to_string())]);
    render(ctx, Rendered::Report("hom complex".to_string(), context, report), stdout)
}

fn cmd_htw(ctx: &Ctx, xp: &PathBuf, yp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let (p, x, y) = load_pair(ctx, xp, yp)?;
    let dim = crate::homotopy::htw_dim(&p, &x, &y)?;
    let mut report = AxiomReport::new();
    report.pass("(dimension) degree zero homotopy classes", format!("dim {dim}"));
    let context = ctx.context(&[("source", xp.display().to_string()), ("target", yp.display().to_string())]);
    render(ctx, Rendered::Report("htw".to_string(), context, report), stdout)
}

fn cmd_cone(ctx: &Ctx, fp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(fp)?;
    let Body::Twmorphism(b) = &doc.body else {
        return err("cone needs a twmorphism document");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let f = body_to_twmorphism(&p, &b.morphism, "body.morphism")?;
    let cd = cone(&p, &f)?;
    let out = twobject_document(&p, &cd.cone);
    let describe = cd.cone.describe(&p);
    render(ctx, Rendered::Object(out, describe), stdout)
}

fn cmd_truncate(
    ctx: &Ctx,
    xp: &PathBuf,
    le: Option<i64>,
    ge: Option<i64>,
    stdout: &mut dyn std::io::Write,
) -> Res<i32> {
    let doc = load(xp)?;
    let Body::Twobject(b) = &doc.body else {
        return err("truncate needs a twobject document");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let x = body_to_twobject(&p, &b.object, "body.object")?;
    let y = match (le, ge) {
        (Some(k), None) => truncate_le(&x, k),
        (None, Some(k)) => truncate_ge(&x, k),
        _ => return err("truncate needs exactly one of --le K or --ge K"),
    };
    let out = twobject_document(&p, &y);
    let describe = y.describe(&p);
    render(ctx, Rendered::Object(out, describe), stdout)
}

fn cmd_nexact(ctx: &Ctx, xp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(xp)?;
    let Body::Twobject(b) = &doc.body else {
        return err("nexact needs a twobject document");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let x = body_to_twobject(&p, &b.object, "body.object")?;
    let n = ctx.n(None)?;
    let (l, r) = exactness_flags(&p, &x, n)?;
    let mut report = AxiomReport::new();
    report.record(
        "(left) homotopy classes from shifted generators vanish",
        if l { Verdict::Pass } else { Verdict::Fail },
        format!("n = {n}"),
    );
    report.record(
        "(right) homotopy classes to shifted generators vanish",
        if r { Verdict::Pass } else { Verdict::Fail },
        format!("n = {n}"),
    );
    let context = ctx.context(&[("input", xp.display().to_string())]);
    render(ctx, Rendered::Report("nexact".to_string(), context, report), stdout)
}

fn cmd_split(ctx: &Ctx, xp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(xp)?;
    let Body::Twobject(b) = &doc.body else {
        return err("split needs a twobject document");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let x = body_to_twobject(&p, &b.object, "body.object")?;
    let n = ctx.n(None)?;
    let (contractible, left, right) = split_characterizations(&p, &x, n)?;
    let mut report = AxiomReport::new();
    let flag = |v: bool| if v { Verdict::Pass } else { Verdict::Fail };
    report.record("(zero object) identity is null homotopic", flag(contractible), "");
    report.record("(left) left n-exact with split last edge", flag(left), "");
    report.record("(right) right n-exact with split first edge", flag(right), "");
    report.record(
        "(agreement) the three characterizations coincide",
        if contractible == left && left == right {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        format!("contractible {contractible}, left {left}, right {right}"),
    );
    let context = ctx.context(&[("input", xp.display().to_string())]);
    render(ctx, Rendered::Report("split".to_string(), context, report), stdout)
}

fn cmd_splice(ctx: &Ctx, chainp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(chainp)?;
    let Body::Certificates(b) = &doc.body else {
        return err("splice needs a certificates document with a chain");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let certs = doc_to_certificates(&p, b)?;
    if certs.chain.is_empty() {
        return err("the certificates document has an empty chain");
    }
    let chain = SpliceChain::plain(certs.chain.clone());
    let spliced = splice_chain(&p, &chain)?;
    let mut report = AxiomReport::new();
    let valid = validate_tw(&p, &spliced);
    report.record(
        "(spliced) output satisfies the twisted identity",
        if valid.all_passed() { Verdict::Pass } else { Verdict::Fail },
        spliced.describe(&p),
    );
    if !certs.conflations.is_empty() {
        let mut pool = ConflationCertificates { conflations: Vec::new() };
        for c in &certs.conflations {
            pool.push(c.clone());
        }
        let sub: Vec<usize> = (0..p.object_count()).collect();
        report.merge(spliced_exactness(&p, &chain, &sub, &pool)?);
    }
    let format = ctx.common.format.as_deref().unwrap_or("text");
    if format == "json" && !report.any_failed() {
        // artifact output: the spliced complex itself
        let out = twobject_document(&p, &spliced);
        return render(ctx, Rendered::Object(out, spliced.describe(&p)), stdout);
    }
    let context = ctx.context(&[("chain", chainp.display().to_string())]);
    render(ctx, Rendered::Report("splice".to_string(), context, report), stdout)
}

fn cmd_ext(ctx: &Ctx, input: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(input)?;
    let (p, cat) = match &doc.body {
        Body::Catalog(b) => {
            let p = doc_to_presentation(&b.presentation)?;
            let cat = doc_to_catalog(&p, b)?;
            (p, cat)
        }
        Body::Presentation(b) => {
            let p = doc_to_presentation(b)?;
            let n = ctx.n(None)?;
            let cat = SequenceCatalog::enumerate(&p, n, ctx.bound())?;
            (p, cat)
        }
        _ => return err("ext needs a presentation or catalog document"),
    };
    ctx.check_field(&p)?;
    let n = ctx.n(Some(cat.n))?;
    if n != cat.n {
        return err(format!("--n {n} disagrees with the catalog's n = {}", cat.n));
    }
    let certs = Certificates::default();
    let mut report = AxiomReport::new();
    for a in 0..p.object_count() {
        for c in 0..p.object_count() {
            let ao = SumObject::generator(a);
            let co = SumObject::generator(c);
            let (table, sub) = ext_group(&p, &ao, &co, &cat, &certs)?;
            let label = format!("[{} -> {}]", p.object_name(c), p.object_name(a));
            report.pass(
                format!("(classes) {label}"),
                format!("{} classes, zero at table index {}", table.classes.len(), table.zero),
            );
            for clause in sub.clauses {
                report.record(format!("{} {label}", clause.name), clause.verdict, clause.detail);
            }
        }
    }
    let context = ctx.context(&[("input", input.display().to_string())]);
    render(ctx, Rendered::Report("ext".to_string(), context, report), stdout)
}

fn cmd_les(ctx: &Ctx, xp: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(xp)?;
    let Body::Twobject(b) = &doc.body else {
        return err("les needs a twobject document");
    };
    let p = doc_to_presentation(&b.presentation)?;
    ctx.check_field(&p)?;
    let x = body_to_twobject(&p, &b.object, "body.object")?;
    let n = ctx.n(None)?;
    let mut report = AxiomReport::new();
    report.record(
        "(sparsity) generator cohomology concentrated in degrees divisible by n",
        if is_n_sparse(&p, n)? { Verdict::Pass } else { Verdict::Fail },
        format!("n = {n}"),
    );
    for g in 0..p.object_count() {
        let a = SumObject::generator(g);
        let name = p.object_name(g);
        match les_row(&p, &a, &x, n, 0)? {
            Some(row) => {
                let dims = row
                    .dims
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                report.record(
                    format!("(row w=0) probe {name}"),
                    if row.is_exact() { Verdict::Pass } else { Verdict::Fail },
                    format!("dims {dims}"),
                );
            }
            None => report.record(
                format!("(row w=0) probe {name}"),
                Verdict::NotCheckableAtBound,
                "corner map undefined here".to_string(),
            ),
        }
        match les_ladder(&p, &a, &x, n)? {
            Some(row) => report.record(
                format!("(ladder) probe {name}"),
                if row.is_exact() { Verdict::Pass } else { Verdict::Fail },
                format!("{} nodes", row.dims.len()),
            ),
            None => report.record(
                format!("(ladder) probe {name}"),
                Verdict::NotCheckableAtBound,
                "corner map undefined here".to_string(),
            ),
        }
    }
    let context = ctx.context(&[("input", xp.display().to_string())]);
    render(ctx, Rendered::Report("les".to_string(), context, report), stdout)
}

fn load_catalog_arg(
    ctx: &Ctx,
    p: &DgPresentation,
    pd: &PresentationDoc,
    catalog: &Option<PathBuf>,
) -> Res<SequenceCatalog> {
    match catalog {
        Some(path) => {
            let doc = load(path)?;
            let Body::Catalog(b) = &doc.body else {
                return err(format!("{} is not a catalog document", path.display()));
            };
            if &b.presentation != pd {
                return err("the catalog and the presentation documents disagree");
            }
            let cat = doc_to_catalog(p, b)?;
            let n = ctx.n(Some(cat.n))?;
            if n != cat.n {
                return err(format!("--n {n} disagrees with the catalog's n = {}", cat.n));
            }
            Ok(cat)
        }
        None => {
            let n = ctx.n(None)?;
            Ok(SequenceCatalog::enumerate(p, n, ctx.bound())?)
        }
    }
}

fn cmd_axioms(
    ctx: &Ctx,
    presentation: &PathBuf,
    catalog: &Option<PathBuf>,
    certsp: &Option<PathBuf>,
    stdout: &mut dyn std::io::Write,
) -> Res<i32> {
    let doc = load(presentation)?;
    let Body::Presentation(pd) = &doc.body else {
        return err("axioms needs a presentation document first");
    };
    let p = doc_to_presentation(pd)?;
    ctx.check_field(&p)?;
    let cat = load_catalog_arg(ctx, &p, pd, catalog)?;
    let certs = match certsp {
        Some(path) => {
            let cdoc = load(path)?;
            let Body::Certificates(cb) = &cdoc.body else {
                return err(format!("{} is not a certificates document", path.display()));
            };
            let loaded = doc_to_certificates(&p, cb)?;
            if loaded.n != cat.n {
                return err(format!(
                    "the certificates target n = {} but the catalog has n = {}",
                    loaded.n, cat.n
                ));
            }
            Certificates {
                morphisms: loaded.morphisms,
            }
        }
        None => Certificates::default(),
    };
    let report = check_dg_axioms(&p, &cat, &certs)?;
    let context = ctx.context(&[("presentation", presentation.display().to_string())]);
    render(ctx, Rendered::Report("axioms".to_string(), context, report), stdout)
}

fn cmd_ordinary(
    ctx: &Ctx,
    presentation: &PathBuf,
    catalog: &Option<PathBuf>,
    stdout: &mut dyn std::io::Write,
) -> Res<i32> {
    let doc = load(presentation)?;
    let Body::Presentation(pd) = &doc.body else {
        return err("ordinary needs a presentation document first");
    };
    let p = doc_to_presentation(pd)?;
    ctx.check_field(&p)?;
    let cat = load_catalog_arg(ctx, &p, pd, catalog)?;
    let certs = Certificates::default();
    let ordinary = ordinary_axioms(&p, &cat, &certs)?;
    let graded = check_dg_axioms(&p, &cat, &certs)?;
    let mut report = ordinary.clone();
    for (dg_name, ord_name) in axiom_clause_pairs() {
        let a = graded.clause(dg_name);
        let b = ordinary.clause(ord_name);
        match (a, b) {
            (Some(a), Some(b)) => report.record(
                format!("(compare) {dg_name} vs {ord_name}"),
                if a.verdict == b.verdict { Verdict::Pass } else { Verdict::Fail },
                format!("{} vs {}", a.verdict, b.verdict),
            ),
            _ => report.record(
                format!("(compare) {dg_name} vs {ord_name}"),
                Verdict::NotCheckableAtBound,
                "clause missing from one side".to_string(),
            ),
        }
    }
    let context = ctx.context(&[("presentation", presentation.display().to_string())]);
    render(ctx, Rendered::Report("ordinary".to_string(), context, report), stdout)
}

fn cmd_stable(ctx: &Ctx, presentation: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(presentation)?;
    let Body::Presentation(pd) = &doc.body else {
        return err("stable needs a presentation document");
    };
    let p = doc_to_presentation(pd)?;
    ctx.check_field(&p)?;
    let n = ctx.n(None)?;
    let report = n_stable_check(&p, n, ctx.bound())?;
    let context = ctx.context(&[("presentation", presentation.display().to_string())]);
    render(ctx, Rendered::Report("stable".to_string(), context, report), stdout)
}

/// Seeded sample of the morphism calculus: random complexes and raw
/// morphisms, checking that the twisted differential squares to zero and
/// satisfies the Leibniz interchange against composition.
fn sampled_calculus(p: &DgPresentation, seed: u64, rounds: usize) -> AxiomReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AxiomReport::new();
    let mut square = 0usize;
    let mut leibniz = 0usize;
    for _ in 0..rounds {
        let Some(x) = crate::twisted::random_complex(p, &mut rng, 0, 2, 2, 8) else {
            continue;
        };
        let Some(y) = crate::twisted::random_complex(p, &mut rng, 0, 2, 2, 8) else {
            continue;
        };
        let f = random_raw_morphism(p, &mut rng, &x, &y, 0);
        if tw_differential(p, &tw_differential(p, &f)).is_zero() {
            square += 1;
        }
        let g = random_raw_morphism(p, &mut rng, &y, &x, 1);
        let lhs = tw_differential(p, &tw_compose(p, &g, &f));
        let rhs = tw_compose(p, &tw_differential(p, &g), &f)
            .add(&tw_compose(p, &g, &tw_differential(p, &f)).scale(&p.field().from_i64(-1)));
        if lhs.sub(&rhs).is_zero() {
            leibniz += 1;
        }
    }
    report.record(
        "(sampled) differential squares to zero",
        if square == rounds { Verdict::Pass } else { Verdict::Fail },
        format!("{square} of {rounds} draws"),
    );
    report.record(
        "(sampled) Leibniz interchange",
        if leibniz == rounds { Verdict::Pass } else { Verdict::Fail },
        format!("{leibniz} of {rounds} draws"),
    );
    report
}

fn cmd_report(ctx: &Ctx, presentation: &PathBuf, stdout: &mut dyn std::io::Write) -> Res<i32> {
    let doc = load(presentation)?;
    let Body::Presentation(pd) = &doc.body else {
        return err("report needs a presentation document");
    };
    let p = doc_to_presentation(pd)?;
    ctx.check_field(&p)?;
    let n = ctx.n(None)?;
    let bound = ctx.bound();
    let mut report = AxiomReport::new();
    report.merge(validate_presentation(&p));
    report.merge(sampled_calculus(&p, ctx.seed(), 20));
    let cat = SequenceCatalog::enumerate(&p, n, bound)?;
    report.pass(
        "(catalog) bounded n-exact sequences enumerated",
        format!("{} entries at bound {bound}", cat.entries.len()),
    );
    let certs = Certificates::default();
    report.merge(check_dg_axioms(&p, &cat, &certs)?);
    report.merge(n_stable_check(&p, n, bound)?);
    if n >= 2 {
        report.merge(realization_check(&p, &cat, &certs)?);
    }
    let context = ctx.context(&[("presentation", presentation.display().to_string())]);
    render(ctx, Rendered::Report("report".to_string(), context, report), stdout)
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Runs the CLI on explicit arguments, writing to the given streams; returns
/// the process exit code. The first argument is the program name.
pub fn run_args<I, S>(args: I, stdout: &mut dyn std::io::Write, stderr: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    3
                }
            };
        }
    };
    let ctx = Ctx {
        common: cli.common.clone(),
    };
    let result = match &cli.command {
        Command::Validate { file } => cmd_validate(&ctx, file, stdout),
        Command::Hom { x, y } => cmd_hom(&ctx, x, y, stdout),
        Command::Htw { x, y } => cmd_htw(&ctx, x, y, stdout),
        Command::Cone { f } => cmd_cone(&ctx, f, stdout),
        Command::Truncate { x, le, ge } => cmd_truncate(&ctx, x, *le, *ge, stdout),
        Command::Nexact { x } => cmd_nexact(&ctx, x, stdout),
        Command::Split { x } => cmd_split(&ctx, x, stdout),
        Command::Splice { chain } => cmd_splice(&ctx, chain, stdout),
        Command::Ext { input } => cmd_ext(&ctx, input, stdout),
        Command::Les { x } => cmd_les(&ctx, x, stdout),
        Command::Axioms {
            presentation,
            catalog,
            certs,
        } => cmd_axioms(&ctx, presentation, catalog, certs, stdout),
        Command::Ordinary {
            presentation,
            catalog,
        } => cmd_ordinary(&ctx, presentation, catalog, stdout),
        Command::Stable { presentation } => cmd_stable(&ctx, presentation, stdout),
        Command::Report { presentation } => cmd_report(&ctx, presentation, stdout),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            3
        }
    }
}

/// Runs the CLI on the process arguments and standard streams.
pub fn run() -> i32 {
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    run_args(std::env::args_os(), &mut stdout, &mut stderr)
}
