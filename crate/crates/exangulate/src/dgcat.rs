//! Finitely presented connective dg-categories and their formal additive
//! closure.
//!
//! A presentation lists generator objects, graded hom spaces supported in
//! nonpositive degrees, differentials, bilinear composition tensors and
//! identity coordinates. Objects of the additive closure are finite ordered
//! sums of generators; their hom spaces are assembled blockwise, so every
//! morphism is a flat coordinate vector against a deterministic block layout.

use crate::linalg::{subquotient, Field, FieldElem, LinalgError, Matrix, Subquotient};
use crate::report::{AxiomReport, Verdict};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum DgError {
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("{0}")]
    Linalg(#[from] LinalgError),
}

/// Graded hom data between one ordered pair of generators.
#[derive(Debug, Clone, Default, PartialEq)]
struct GradedHom {
    dims: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, Matrix>,
}

/// A finitely presented dg-category over an exact field.
#[derive(Debug, Clone, PartialEq)]
pub struct DgPresentation {
    name: String,
    field: Field,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), GradedHom>,
    /// `(a, b, c) -> (p, q) ->` tensor taking `g (x) f` with `f` in
    /// `hom(a,b)^p`, `g` in `hom(b,c)^q` to coordinates in `hom(a,c)^{p+q}`.
    /// Tensor columns are indexed by `g_index * dim_p + f_index`.
    comps: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64), Matrix>>,
    ids: Vec<Vec<FieldElem>>,
}

pub struct PresentationBuilder {
    name: String,
    field: Field,
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), GradedHom>,
    comps: BTreeMap<(usize, usize, usize), BTreeMap<(i64, i64), Matrix>>,
    ids: BTreeMap<usize, Vec<FieldElem>>,
}

impl PresentationBuilder {
    pub fn new(name: &str, field: Field) -> PresentationBuilder {
        PresentationBuilder {
            name: name.to_string(),
            field,
            objects: Vec::new(),
            homs: BTreeMap::new(),
            comps: BTreeMap::new(),
            ids: BTreeMap::new(),
        }
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    fn index(&self, name: &str) -> Result<usize, DgError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| DgError::UnknownObject(name.to_string()))
    }

    pub fn hom(&mut self, a: &str, b: &str, degree: i64, dim: usize) -> Result<&mut Self, DgError> {
        let key = (self.index(a)?, self.index(b)?);
        self.homs.entry(key).or_default().dims.insert(degree, dim);
        Ok(self)
    }

    pub fn diff(&mut self, a: &str, b: &str, degree: i64, m: Matrix) -> Result<&mut Self, DgError> {
        let key = (self.index(a)?, self.index(b)?);
        self.homs.entry(key).or_default().diffs.insert(degree, m);
        Ok(self)
    }

    pub fn comp(
        &mut self,
        a: &str,
        b: &str,
        c: &str,
        p: i64,
        q: i64,
        tensor: Matrix,
    ) -> Result<&mut Self, DgError> {
        let key = (self.index(a)?, self.index(b)?, self.index(c)?);
        self.comps.entry(key).or_default().insert((p, q), tensor);
        Ok(self)
    }

    pub fn identity(&mut self, a: &str, coords: Vec<FieldElem>) -> Result<&mut Self, DgError> {
        let i = self.index(a)?;
        self.ids.insert(i, coords);
        Ok(self)
    }

    /// Structural checks only; the dg axioms are the validator's business.
    pub fn build(self) -> Result<DgPresentation, DgError> {
        let n = self.objects.len();
        let mut ids = Vec::with_capacity(n);
        for i in 0..n {
            let dim = self
                .homs
                .get(&(i, i))
                .and_then(|h| h.dims.get(&0).copied())
                .unwrap_or(0);
            let coords = self.ids.get(&i).cloned().unwrap_or_default();
            if coords.len() != dim {
                return Err(DgError::Shape(format!(
                    "identity of {} has {} coordinates, hom degree 0 has dimension {}",
                    self.objects[i],
                    coords.len(),
                    dim
                )));
            }
            ids.push(coords);
        }
        for (&(a, b), h) in &self.homs {
            for (&deg, m) in &h.diffs {
                let dom = h.dims.get(&deg).copied().unwrap_or(0);
                let cod = h.dims.get(&(deg + 1)).copied().unwrap_or(0);
                if m.rows() != cod || m.cols() != dom {
                    return Err(DgError::Shape(format!(
                        "differential of hom({}, {}) at degree {} is {}x{}, expected {}x{}",
                        self.objects[a],
                        self.objects[b],
                        deg,
                        m.rows(),
                        m.cols(),
                        cod,
                        dom
                    )));
                }
            }
        }
        for (&(a, b, c), tensors) in &self.comps {
            for (&(p, q), t) in tensors {
                let dp = self.homs.get(&(a, b)).and_then(|h| h.dims.get(&p)).copied().unwrap_or(0);
                let dq = self.homs.get(&(b, c)).and_then(|h| h.dims.get(&q)).copied().unwrap_or(0);
                let dout = self
                    .homs
                    .get(&(a, c))
                    .and_then(|h| h.dims.get(&(p + q)))
                    .copied()
                    .unwrap_or(0);
                if t.rows() != dout || t.cols() != dp * dq {
                    return Err(DgError::Shape(format!(
                        "composition tensor ({}, {}, {}) at degrees ({p}, {q}) is {}x{}, expected {}x{}",
                        self.objects[a],
                        self.objects[b],
                        self.objects[c],
                        t.rows(),
                        t.cols(),
                        dout,
                        dp * dq
                    )));
                }
            }
        }
        Ok(DgPresentation {
            name: self.name,
            field: self.field,
            objects: self.objects,
            homs: self.homs,
            comps: self.comps,
            ids,
        })
    }
}

impl DgPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, i: usize) -> &str {
        &self.objects[i]
    }

    pub fn object_index(&self, name: &str) -> Result<usize, DgError> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| DgError::UnknownObject(name.to_string()))
    }

    pub fn gen_hom_dim(&self, a: usize, b: usize, degree: i64) -> usize {
        self.homs
            .get(&(a, b))
            .and_then(|h| h.dims.get(&degree))
            .copied()
            .unwrap_or(0)
    }

    /// Degrees at which some hom space between generators is nonzero.
    pub fn hom_degree_range(&self) -> (i64, i64) {
        let mut lo = 0;
        let mut hi = 0;
        for h in self.homs.values() {
            for (&d, &dim) in &h.dims {
                if dim > 0 {
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
        }
        (lo, hi)
    }

    pub fn gen_diff_matrix(&self, a: usize, b: usize, degree: i64) -> Matrix {
        let dom = self.gen_hom_dim(a, b, degree);
        let cod = self.gen_hom_dim(a, b, degree + 1);
        self.homs
            .get(&(a, b))
            .and_then(|h| h.diffs.get(&degree))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field, cod, dom))
    }

    pub fn identity_coords(&self, a: usize) -> &[FieldElem] {
        &self.ids[a]
    }

    /// Composition of generator-level coordinates: `g` in `hom(b,c)^q`
    /// composed with `f` in `hom(a,b)^p`, landing in `hom(a,c)^{p+q}`.
    pub fn gen_compose(
        &self,
        a: usize,
        b: usize,
        c: usize,
        p: i64,
        q: i64,
        g: &[FieldElem],
        f: &[FieldElem],
    ) -> Vec<FieldElem> {
        let dp = self.gen_hom_dim(a, b, p);
        let dq = self.gen_hom_dim(b, c, q);
        let dout = self.gen_hom_dim(a, c, p + q);
        debug_assert_eq!(f.len(), dp);
        debug_assert_eq!(g.len(), dq);
        let tensor = self.comps.get(&(a, b, c)).and_then(|t| t.get(&(p, q)));
        let Some(t) = tensor else {
            return vec![self.field.zero(); dout];
        };
        let mut kron = Vec::with_capacity(dp * dq);
        for gi in 0..dq {
            for fi in 0..dp {
                kron.push(g[gi].mul(&f[fi]));
            }
        }
        t.mul_vec(&kron)
    }

    pub fn gen_diff(&self, a: usize, b: usize, degree: i64, coords: &[FieldElem]) -> Vec<FieldElem> {
        self.gen_diff_matrix(a, b, degree).mul_vec(coords)
    }
}

/// An object of the additive closure: a finite ordered sum of generators.
/// The empty sum is the zero object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SumObject {
    summands: Vec<usize>,
}

impl SumObject {
    pub fn zero() -> SumObject {
        SumObject { summands: Vec::new() }
    }

    pub fn generator(i: usize) -> SumObject {
        SumObject { summands: vec![i] }
    }

    pub fn of(summands: &[usize]) -> SumObject {
        SumObject {
            summands: summands.to_vec(),
        }
    }

    pub fn concat(&self, other: &SumObject) -> SumObject {
        let mut s = self.summands.clone();
        s.extend_from_slice(&other.summands);
        SumObject { summands: s }
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn summands(&self) -> &[usize] {
        &self.summands
    }

    pub fn label(&self, p: &DgPresentation) -> String {
        if self.is_zero() {
            "0".to_string()
        } else {
            self.summands
                .iter()
                .map(|&i| p.object_name(i))
                .collect::<Vec<_>>()
                .join("+")
        }
    }
}

/// Deterministic block layout for an assembled hom space `hom(A, B)^d`.
/// Blocks are ordered target-major: for each target summand `j`, then each
/// source summand `i`, the generator hom basis of `hom(A_i, B_j)^d`.
#[derive(Debug, Clone)]
pub struct HomLayout {
    pub total: usize,
    /// `(j, i, offset, dim)` for each block in layout order.
    blocks: Vec<(usize, usize, usize, usize)>,
    source_len: usize,
}

impl HomLayout {
    pub fn new(p: &DgPresentation, source: &SumObject, target: &SumObject, degree: i64) -> HomLayout {
        let mut blocks = Vec::new();
        let mut off = 0;
        for (j, &tj) in target.summands().iter().enumerate() {
            for (i, &si) in source.summands().iter().enumerate() {
                let dim = p.gen_hom_dim(si, tj, degree);
                blocks.push((j, i, off, dim));
                off += dim;
            }
        }
        HomLayout {
            total: off,
            blocks,
            source_len: source.len(),
        }
    }

    pub fn block(&self, j: usize, i: usize) -> (usize, usize) {
        let (_, _, off, dim) = self.blocks[j * self.source_len + i];
        (off, dim)
    }
}

/// A morphism in the additive closure: a coordinate vector against the hom
/// layout of its (source, target, degree).
#[derive(Debug, Clone, PartialEq)]
pub struct DgMorphism {
    pub source: SumObject,
    pub target: SumObject,
    pub degree: i64,
    pub coords: Vec<FieldElem>,
}

impl DgMorphism {
    pub fn zero(p: &DgPresentation, source: SumObject, target: SumObject, degree: i64) -> DgMorphism {
        let layout = HomLayout::new(p, &source, &target, degree);
        DgMorphism {
            source,
            target,
            degree,
            coords: vec![p.field().zero(); layout.total],
        }
    }

    pub fn identity(p: &DgPresentation, a: &SumObject) -> DgMorphism {
        let mut f = DgMorphism::zero(p, a.clone(), a.clone(), 0);
        let layout = HomLayout::new(p, a, a, 0);
        for (i, &gi) in a.summands().iter().enumerate() {
            let (off, dim) = layout.block(i, i);
            let id = p.identity_coords(gi);
            debug_assert_eq!(id.len(), dim);
            for (k, v) in id.iter().enumerate() {
                f.coords[off + k] = v.clone();
            }
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElem::is_zero)
    }

    pub fn add(&self, rhs: &DgMorphism) -> DgMorphism {
        assert_eq!(self.source, rhs.source, "source mismatch in add");
        assert_eq!(self.target, rhs.target, "target mismatch in add");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in add");
        DgMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &DgMorphism) -> DgMorphism {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> DgMorphism {
        DgMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            coords: self.coords.iter().map(FieldElem::neg).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem) -> DgMorphism {
        DgMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            coords: self.coords.iter().map(|a| a.mul(s)).collect(),
        }
    }

    /// Extracts one generator block `(target summand j, source summand i)`.
    pub fn block_coords(&self, p: &DgPresentation, j: usize, i: usize) -> Vec<FieldElem> {
        let layout = HomLayout::new(p, &self.source, &self.target, self.degree);
        let (off, dim) = layout.block(j, i);
        self.coords[off..off + dim].to_vec()
    }

    /// Basis element `k` of the assembled hom space.
    pub fn basis_elem(
        p: &DgPresentation,
        source: &SumObject,
        target: &SumObject,
        degree: i64,
        k: usize,
    ) -> DgMorphism {
        let mut f = DgMorphism::zero(p, source.clone(), target.clone(), degree);
        f.coords[k] = p.field().one();
        f
    }
}

/// `g` after `f`: degrees add, blocks compose through the middle object.
pub fn compose(p: &DgPresentation, g: &DgMorphism, f: &DgMorphism) -> DgMorphism {
    assert_eq!(f.target, g.source, "objects do not match in compose");
    let deg = f.degree + g.degree;
    let mut out = DgMorphism::zero(p, f.source.clone(), g.target.clone(), deg);
    let out_layout = HomLayout::new(p, &f.source, &g.target, deg);
    let f_layout = HomLayout::new(p, &f.source, &f.target, f.degree);
    let g_layout = HomLayout::new(p, &g.source, &g.target, g.degree);
    for (k, &ck) in g.target.summands().iter().enumerate() {
        for (i, &ai) in f.source.summands().iter().enumerate() {
            let (out_off, out_dim) = out_layout.block(k, i);
            if out_dim == 0 {
                continue;
            }
            let mut acc = vec![p.field().zero(); out_dim];
            for (j, &bj) in f.target.summands().iter().enumerate() {
                let (f_off, f_dim) = f_layout.block(j, i);
                let (g_off, g_dim) = g_layout.block(k, j);
                if f_dim == 0 || g_dim == 0 {
                    continue;
                }
                let fji = &f.coords[f_off..f_off + f_dim];
                let gkj = &g.coords[g_off..g_off + g_dim];
                let c = p.gen_compose(ai, bj, ck, f.degree, g.degree, gkj, fji);
                for (t, v) in c.iter().enumerate() {
                    acc[t] = acc[t].add(v);
                }
            }
            for (t, v) in acc.into_iter().enumerate() {
                out.coords[out_off + t] = v;
            }
        }
    }
    out
}

/// Blockwise hom differential; raises degree by one.
pub fn differential(p: &DgPresentation, f: &DgMorphism) -> DgMorphism {
    let mut out = DgMorphism::zero(p, f.source.clone(), f.target.clone(), f.degree + 1);
    let in_layout = HomLayout::new(p, &f.source, &f.target, f.degree);
    let out_layout = HomLayout::new(p, &f.source, &f.target, f.degree + 1);
    for (j, &bj) in f.target.summands().iter().enumerate() {
        for (i, &ai) in f.source.summands().iter().enumerate() {
            let (in_off, in_dim) = in_layout.block(j, i);
            let (out_off, out_dim) = out_layout.block(j, i);
            if in_dim == 0 || out_dim == 0 {
                continue;
            }
            let d = p.gen_diff(ai, bj, f.degree, &f.coords[in_off..in_off + in_dim]);
            for (t, v) in d.into_iter().enumerate() {
                out.coords[out_off + t] = v;
            }
        }
    }
    out
}

/// Assembled differential matrix `hom(A,B)^i -> hom(A,B)^{i+1}`.
pub fn assembled_diff_matrix(
    p: &DgPresentation,
    a: &SumObject,
    b: &SumObject,
    degree: i64,
) -> Matrix {
    let dom = HomLayout::new(p, a, b, degree);
    let cod = HomLayout::new(p, a, b, degree + 1);
    let mut m = Matrix::zeros(p.field(), cod.total, dom.total);
    for (j, &bj) in b.summands().iter().enumerate() {
        for (i, &ai) in a.summands().iter().enumerate() {
            let (doff, ddim) = dom.block(j, i);
            let (coff, cdim) = cod.block(j, i);
            if ddim == 0 || cdim == 0 {
                continue;
            }
            m.paste(coff, doff, &p.gen_diff_matrix(ai, bj, degree));
        }
    }
    m
}

/// `H^i hom(A, B)` as a subquotient of the degree `i` hom space.
pub fn cohomology(
    p: &DgPresentation,
    a: &SumObject,
    b: &SumObject,
    degree: i64,
) -> Result<Subquotient, DgError> {
    let d_i = assembled_diff_matrix(p, a, b, degree);
    let d_prev = assembled_diff_matrix(p, a, b, degree - 1);
    Ok(subquotient(&d_i.kernel_basis(), &d_prev)?)
}

impl fmt::Display for DgMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Checks the dg-category axioms of a presentation: strict connectivity,
/// squared differential, the graded Leibniz rule, associativity and strict
/// two-sided units. Failures carry the witnessing basis data.
pub fn validate_presentation(p: &DgPresentation) -> AxiomReport {
    let mut report = AxiomReport::new();
    let n = p.object_count();
    let (lo, _) = p.hom_degree_range();

    let mut bad = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for d in 1.. {
                if d > p.hom_degree_range().1 {
                    break;
                }
                if p.gen_hom_dim(a, b, d) > 0 {
                    bad.push(format!("hom({}, {})^{}", p.object_name(a), p.object_name(b), d));
                }
            }
        }
    }
    report.record(
        "connectivity",
        if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        if bad.is_empty() {
            "all hom spaces supported in nonpositive degrees".to_string()
        } else {
            format!("positive-degree hom spaces: {}", bad.join(", "))
        },
    );

    let mut bad = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for d in lo..=0 {
                let dd = p.gen_diff_matrix(a, b, d + 1).mul(&p.gen_diff_matrix(a, b, d));
                if !dd.is_zero() {
                    bad.push(format!(
                        "d^2 on hom({}, {}) at degree {}",
                        p.object_name(a),
                        p.object_name(b),
                        d
                    ));
                }
            }
        }
    }
    report.record(
        "squared-differential",
        if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        if bad.is_empty() { String::new() } else { bad.join(", ") },
    );

    // Leibniz: d(g.f) = dg.f + (-1)^|g| g.df on all basis pairs
    let mut bad = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for dp in lo..=0 {
                    for dq in lo..=0 {
                        let np = p.gen_hom_dim(a, b, dp);
                        let nq = p.gen_hom_dim(b, c, dq);
                        for fi in 0..np {
                            for gi in 0..nq {
                                let mut f = vec![p.field.zero(); np];
                                f[fi] = p.field.one();
                                let mut g = vec![p.field.zero(); nq];
                                g[gi] = p.field.one();
                                let gf = p.gen_compose(a, b, c, dp, dq, &g, &f);
                                let lhs = p.gen_diff(a, c, dp + dq, &gf);
                                let dg_f = p.gen_compose(a, b, c, dp, dq + 1, &p.gen_diff(b, c, dq, &g), &f);
                                let g_df = p.gen_compose(a, b, c, dp + 1, dq, &g, &p.gen_diff(a, b, dp, &f));
                                let sign = if dq.rem_euclid(2) == 0 { 1 } else { -1 };
                                let rhs: Vec<FieldElem> = dg_f
                                    .iter()
                                    .zip(&g_df)
                                    .map(|(x, y)| x.add(&y.mul(&p.field.from_i64(sign))))
                                    .collect();
                                if lhs != rhs {
                                    bad.push(format!(
                                        "({}, {}, {}) degrees ({dp}, {dq}) basis pair ({fi}, {gi})",
                                        p.object_name(a),
                                        p.object_name(b),
                                        p.object_name(c)
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.record(
        "leibniz",
        if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        if bad.is_empty() { String::new() } else { bad.join(", ") },
    );

    // associativity on basis triples
    let mut bad = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    for dp in lo..=0 {
                        for dq in lo..=0 {
                            for dr in lo..=0 {
                                let np = p.gen_hom_dim(a, b, dp);
                                let nq = p.gen_hom_dim(b, c, dq);
                                let nr = p.gen_hom_dim(c, e, dr);
                                for fi in 0..np {
                                    for gi in 0..nq {
                                        for hi in 0..nr {
                                            let mut f = vec![p.field.zero(); np];
                                            f[fi] = p.field.one();
                                            let mut g = vec![p.field.zero(); nq];
                                            g[gi] = p.field.one();
                                            let mut h = vec![p.field.zero(); nr];
                                            h[hi] = p.field.one();
                                            let gf = p.gen_compose(a, b, c, dp, dq, &g, &f);
                                            let h_gf = p.gen_compose(a, c, e, dp + dq, dr, &h, &gf);
                                            let hg = p.gen_compose(b, c, e, dq, dr, &h, &g);
                                            let hg_f = p.gen_compose(a, b, e, dp, dq + dr, &hg, &f);
                                            if h_gf != hg_f {
                                                bad.push(format!(
                                                    "({}, {}, {}, {}) degrees ({dp}, {dq}, {dr}) basis ({fi}, {gi}, {hi})",
                                                    p.object_name(a),
                                                    p.object_name(b),
                                                    p.object_name(c),
                                                    p.object_name(e)
                                                ));
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    report.record(
        "associativity",
        if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        if bad.is_empty() { String::new() } else { bad.join(", ") },
    );

    // strict units, closed
    let mut bad = Vec::new();
    for a in 0..n {
        let id = p.identity_coords(a).to_vec();
        if p.gen_diff(a, a, 0, &id).iter().any(|v| !v.is_zero()) {
            bad.push(format!("d(id_{}) != 0", p.object_name(a)));
        }
        for b in 0..n {
            for d in lo..=0 {
                let nb = p.gen_hom_dim(a, b, d);
                for fi in 0..nb {
                    let mut f = vec![p.field.zero(); nb];
                    f[fi] = p.field.one();
                    let post = p.gen_compose(a, b, b, d, 0, p.identity_coords(b), &f);
                    let pre = p.gen_compose(a, a, b, 0, d, &f, p.identity_coords(a));
                    if post != f {
                        bad.push(format!(
                            "id_{} . basis {fi} of hom({}, {})^{d}",
                            p.object_name(b),
                            p.object_name(a),
                            p.object_name(b)
                        ));
                    }
                    if pre != f {
                        bad.push(format!(
                            "basis {fi} of hom({}, {})^{d} . id_{}",
                            p.object_name(a),
                            p.object_name(b),
                            p.object_name(a)
                        ));
                    }
                }
            }
        }
    }
    report.record(
        "units",
        if bad.is_empty() { Verdict::Pass } else { Verdict::Fail },
        if bad.is_empty() { String::new() } else { bad.join(", ") },
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixture_presentations_validate() {
        for p in [
            fixtures::semisimple_point(),
            fixtures::dual_numbers(1),
            fixtures::dual_numbers(2),
            fixtures::dual_numbers(3),
            fixtures::two_vertex_quiver(),
        ] {
            let report = validate_presentation(&p);
            assert!(report.all_passed(), "{} failed:\n{}", p.name(), report);
        }
    }

    #[test]
    fn squared_generator_vanishes_in_dual_numbers() {
        let p = fixtures::dual_numbers(2);
        let t = p.object_index("T").unwrap();
        let eps = vec![p.field().one()];
        let sq = p.gen_compose(t, t, t, -2, -2, &eps, &eps);
        assert!(sq.iter().all(FieldElem::is_zero));
    }

    #[test]
    fn block_composition_routes_through_middle_summands() {
        let p = fixtures::two_vertex_quiver();
        let v1 = p.object_index("v1").unwrap();
        let v2 = p.object_index("v2").unwrap();
        let a = SumObject::generator(v1);
        let b = SumObject::of(&[v1, v2]);
        let c = SumObject::generator(v2);
        // f = (id, arrow): v1 -> v1 + v2, g = (arrow, id): v1 + v2 -> v2
        let mut f = DgMorphism::zero(&p, a.clone(), b.clone(), 0);
        f.coords = vec![p.field().one(), p.field().one()];
        let mut g = DgMorphism::zero(&p, b.clone(), c.clone(), 0);
        g.coords = vec![p.field().one(), p.field().one()];
        let gf = compose(&p, &g, &f);
        // arrow . id + id . arrow = 2 arrow = 0 over F_2
        assert!(gf.is_zero());
    }

    #[test]
    fn identity_is_two_sided_unit_on_sums() {
        let p = fixtures::dual_numbers(2);
        let t = p.object_index("T").unwrap();
        let a = SumObject::of(&[t, t]);
        let id = DgMorphism::identity(&p, &a);
        for deg in [-2, 0] {
            let layout = HomLayout::new(&p, &a, &a, deg);
            for k in 0..layout.total {
                let f = DgMorphism::basis_elem(&p, &a, &a, deg, k);
                assert_eq!(compose(&p, &id, &f), f);
                assert_eq!(compose(&p, &f, &id), f);
            }
        }
    }

    #[test]
    fn cohomology_dims_of_dual_numbers() {
        let p = fixtures::dual_numbers(2);
        let t = SumObject::generator(p.object_index("T").unwrap());
        let dims: Vec<usize> = (-3..=0)
            .map(|d| cohomology(&p, &t, &t, d).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![0, 1, 0, 1]); // degrees -3, -2, -1, 0
    }

    #[test]
    fn cohomology_respects_blocks() {
        let p = fixtures::two_vertex_quiver();
        let v1 = p.object_index("v1").unwrap();
        let v2 = p.object_index("v2").unwrap();
        let a = SumObject::of(&[v1, v2]);
        // degree 0 endomorphisms of v1 + v2: id blocks and one arrow block
        assert_eq!(cohomology(&p, &a, &a, 0).unwrap().dim(), 3);
        assert_eq!(cohomology(&p, &a, &a, -1).unwrap().dim(), 0);
    }

    #[test]
    fn builder_rejects_bad_shapes() {
        let f2 = Field::fp(2).unwrap();
        let mut b = PresentationBuilder::new("bad", f2);
        b.object("x");
        b.hom("x", "x", 0, 1).unwrap();
        b.identity("x", vec![f2.one(), f2.one()]).unwrap();
        assert!(matches!(b.build(), Err(DgError::Shape(_))));
    }

    #[test]
    fn validator_flags_positive_degree_hom() {
        let f2 = Field::fp(2).unwrap();
        let mut b = PresentationBuilder::new("pos", f2);
        b.object("x");
        b.hom("x", "x", 0, 1).unwrap();
        b.hom("x", "x", 1, 1).unwrap();
        b.identity("x", vec![f2.one()]).unwrap();
        let p = b.build().unwrap();
        let report = validate_presentation(&p);
        assert!(report.clause("connectivity").unwrap().verdict.is_fail());
    }
}
