//! Bounded one-sided twisted complexes over a presented dg-category.
//!
//! A twisted complex is a finite family of sum objects `X^i` together with
//! strictly upper triangular differential components `d^{i,j} : X^i -> X^j`
//! of degree `i - j + 1` satisfying the Maurer-Cartan equation. Morphisms of
//! degree `m` carry components `f^{i,j}` of degree `i - j + m` for every pair
//! of indices; composition and the differential are computed componentwise.
//!
//! The module provides the constructions the rest of the crate is built on:
//! shifts and their strict section morphisms, cones with their projection and
//! inclusion data, stupid truncations, the glue/extract correspondence for
//! morphisms split along a truncation index, edge replacement, bar complexes,
//! split sequences with their comparison morphisms, and direct sums.

use crate::dgcat::{
    assembled_diff_matrix, cohomology, compose, differential, DgError, DgMorphism, DgPresentation,
    HomLayout, SumObject,
};
use crate::linalg::{Field, FieldElem, LinalgError};
use crate::report::{AxiomReport, Verdict};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum TwError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("morphism is not closed: {0}")]
    NotClosed(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Dg(#[from] DgError),
}

impl From<LinalgError> for TwError {
    fn from(e: LinalgError) -> TwError {
        TwError::Dg(DgError::Linalg(e))
    }
}

/// `(-1)^k` as a field element.
pub(crate) fn sgn(field: Field, k: i64) -> FieldElem {
    if k.rem_euclid(2) == 0 {
        field.one()
    } else {
        field.one().neg()
    }
}

/// A twisted complex. Terms and differential components are stored pruned:
/// zero terms and zero components are absent, so structural equality of the
/// maps is equality of the complexes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwObject {
    terms: BTreeMap<i64, SumObject>,
    diffs: BTreeMap<(i64, i64), DgMorphism>,
}

impl TwObject {
    pub fn zero() -> TwObject {
        TwObject {
            terms: BTreeMap::new(),
            diffs: BTreeMap::new(),
        }
    }

    /// Shape-checked constructor; the Maurer-Cartan equation is the
    /// validator's business. Zero terms and zero components are pruned.
    pub fn new(
        p: &DgPresentation,
        terms: BTreeMap<i64, SumObject>,
        diffs: BTreeMap<(i64, i64), DgMorphism>,
    ) -> Result<TwObject, TwError> {
        let mut kept_terms = BTreeMap::new();
        for (i, s) in terms {
            if !s.is_zero() {
                kept_terms.insert(i, s);
            }
        }
        let mut kept_diffs = BTreeMap::new();
        for ((i, j), g) in diffs {
            if i >= j {
                return Err(TwError::Shape(format!(
                    "differential component ({i}, {j}) is not strictly upper triangular"
                )));
            }
            let src = kept_terms.get(&i).cloned().unwrap_or_else(SumObject::zero);
            let tgt = kept_terms.get(&j).cloned().unwrap_or_else(SumObject::zero);
            if g.source != src || g.target != tgt {
                return Err(TwError::Shape(format!(
                    "differential component ({i}, {j}) does not match the terms"
                )));
            }
            if g.degree != i - j + 1 {
                return Err(TwError::Shape(format!(
                    "differential component ({i}, {j}) has degree {}, expected {}",
                    g.degree,
                    i - j + 1
                )));
            }
            let layout = HomLayout::new(p, &src, &tgt, g.degree);
            if g.coords.len() != layout.total {
                return Err(TwError::Shape(format!(
                    "differential component ({i}, {j}) has {} coordinates, expected {}",
                    g.coords.len(),
                    layout.total
                )));
            }
            if !g.is_zero() {
                kept_diffs.insert((i, j), g);
            }
        }
        Ok(TwObject {
            terms: kept_terms,
            diffs: kept_diffs,
        })
    }

    /// The sum object `A` placed in position `i` with no differential.
    pub fn concentrated(a: &SumObject, i: i64) -> TwObject {
        let mut terms = BTreeMap::new();
        if !a.is_zero() {
            terms.insert(i, a.clone());
        }
        TwObject {
            terms,
            diffs: BTreeMap::new(),
        }
    }

    pub fn is_zero_object(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<i64, SumObject> {
        &self.terms
    }

    pub fn diffs(&self) -> &BTreeMap<(i64, i64), DgMorphism> {
        &self.diffs
    }

    pub fn term(&self, i: i64) -> SumObject {
        self.terms.get(&i).cloned().unwrap_or_else(SumObject::zero)
    }

    /// The component `d^{i,j}`, materialized as zero when absent.
    pub fn diff(&self, p: &DgPresentation, i: i64, j: i64) -> DgMorphism {
        self.diffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| DgMorphism::zero(p, self.term(i), self.term(j), i - j + 1))
    }

    /// Smallest and largest index carrying a nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().next()?;
        let hi = self.terms.keys().next_back()?;
        Some((*lo, *hi))
    }

    pub fn describe(&self, p: &DgPresentation) -> String {
        if self.is_zero_object() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(i, s)| format!("{i}: {}", s.label(p)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// A morphism of twisted complexes, stored as its nonzero components.
#[derive(Debug, Clone, PartialEq)]
pub struct TwMorphism {
    source: TwObject,
    target: TwObject,
    degree: i64,
    comps: BTreeMap<(i64, i64), DgMorphism>,
}

impl TwMorphism {
    pub fn zero(source: TwObject, target: TwObject, degree: i64) -> TwMorphism {
        TwMorphism {
            source,
            target,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn from_comps(
        p: &DgPresentation,
        source: TwObject,
        target: TwObject,
        degree: i64,
        comps: BTreeMap<(i64, i64), DgMorphism>,
    ) -> Result<TwMorphism, TwError> {
        let mut kept = BTreeMap::new();
        for ((i, j), g) in comps {
            let src = source.term(i);
            let tgt = target.term(j);
            if g.source != src || g.target != tgt {
                return Err(TwError::Shape(format!(
                    "component ({i}, {j}) does not match the terms"
                )));
            }
            if g.degree != i - j + degree {
                return Err(TwError::Shape(format!(
                    "component ({i}, {j}) has degree {}, expected {}",
                    g.degree,
                    i - j + degree
                )));
            }
            let layout = HomLayout::new(p, &src, &tgt, g.degree);
            if g.coords.len() != layout.total {
                return Err(TwError::Shape(format!(
                    "component ({i}, {j}) has {} coordinates, expected {}",
                    g.coords.len(),
                    layout.total
                )));
            }
            if !g.is_zero() {
                kept.insert((i, j), g);
            }
        }
        Ok(TwMorphism {
            source,
            target,
            degree,
            comps: kept,
        })
    }

    pub fn identity(p: &DgPresentation, x: &TwObject) -> TwMorphism {
        let comps = x
            .terms
            .iter()
            .map(|(&i, s)| ((i, i), DgMorphism::identity(p, s)))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        TwMorphism {
            source: x.clone(),
            target: x.clone(),
            degree: 0,
            comps,
        }
    }

    pub fn source(&self) -> &TwObject {
        &self.source
    }

    pub fn target(&self) -> &TwObject {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn comps(&self) -> &BTreeMap<(i64, i64), DgMorphism> {
        &self.comps
    }

    /// The component `f^{i,j}`, materialized as zero when absent.
    pub fn comp(&self, p: &DgPresentation, i: i64, j: i64) -> DgMorphism {
        self.comps.get(&(i, j)).cloned().unwrap_or_else(|| {
            DgMorphism::zero(p, self.source.term(i), self.target.term(j), i - j + self.degree)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, rhs: &TwMorphism) -> TwMorphism {
        assert_eq!(self.source, rhs.source, "source mismatch in add");
        assert_eq!(self.target, rhs.target, "target mismatch in add");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in add");
        let mut comps = self.comps.clone();
        for (k, g) in &rhs.comps {
            match comps.get(k) {
                Some(h) => {
                    let s = h.add(g);
                    if s.is_zero() {
                        comps.remove(k);
                    } else {
                        comps.insert(*k, s);
                    }
                }
                None => {
                    comps.insert(*k, g.clone());
                }
            }
        }
        TwMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps,
        }
    }

    pub fn sub(&self, rhs: &TwMorphism) -> TwMorphism {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> TwMorphism {
        TwMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|(k, g)| (*k, g.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem) -> TwMorphism {
        let comps = self
            .comps
            .iter()
            .map(|(k, g)| (*k, g.scale(s)))
            .filter(|(_, g)| !g.is_zero())
            .collect();
        TwMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps,
        }
    }
}

/// Assembles a morphism between concatenated sum objects out of blocks.
/// `blocks` entries are `(target part, source part, morphism)`; overlapping
/// blocks accumulate.
pub fn assemble_blocks(
    p: &DgPresentation,
    sources: &[SumObject],
    targets: &[SumObject],
    degree: i64,
    blocks: &[(usize, usize, DgMorphism)],
) -> DgMorphism {
    let mut src = SumObject::zero();
    let mut src_off = Vec::with_capacity(sources.len());
    for s in sources {
        src_off.push(src.len());
        src = src.concat(s);
    }
    let mut tgt = SumObject::zero();
    let mut tgt_off = Vec::with_capacity(targets.len());
    for t in targets {
        tgt_off.push(tgt.len());
        tgt = tgt.concat(t);
    }
    let mut out = DgMorphism::zero(p, src.clone(), tgt.clone(), degree);
    let out_layout = HomLayout::new(p, &src, &tgt, degree);
    for (ti, si, g) in blocks {
        assert_eq!(g.source, sources[*si], "block source mismatch");
        assert_eq!(g.target, targets[*ti], "block target mismatch");
        assert_eq!(g.degree, degree, "block degree mismatch");
        let g_layout = HomLayout::new(p, &g.source, &g.target, degree);
        for jl in 0..g.target.len() {
            for il in 0..g.source.len() {
                let (go, gd) = g_layout.block(jl, il);
                if gd == 0 {
                    continue;
                }
                let (oo, od) = out_layout.block(tgt_off[*ti] + jl, src_off[*si] + il);
                debug_assert_eq!(gd, od);
                for t in 0..gd {
                    out.coords[oo + t] = out.coords[oo + t].add(&g.coords[go + t]);
                }
            }
        }
    }
    out
}

fn add_comp(comps: &mut BTreeMap<(i64, i64), DgMorphism>, key: (i64, i64), g: DgMorphism) {
    if g.is_zero() {
        return;
    }
    match comps.remove(&key) {
        Some(h) => {
            let s = h.add(&g);
            if !s.is_zero() {
                comps.insert(key, s);
            }
        }
        None => {
            comps.insert(key, g);
        }
    }
}

/// Componentwise composition: `(g . f)^{i,j} = sum_k g^{k,j} . f^{i,k}`.
pub fn tw_compose(p: &DgPresentation, g: &TwMorphism, f: &TwMorphism) -> TwMorphism {
    assert_eq!(f.target, g.source, "objects do not match in tw_compose");
    let mut comps = BTreeMap::new();
    for (&(i, k), fik) in &f.comps {
        for (&(k2, j), gkj) in &g.comps {
            if k2 != k {
                continue;
            }
            add_comp(&mut comps, (i, j), compose(p, gkj, fik));
        }
    }
    TwMorphism {
        source: f.source.clone(),
        target: g.target.clone(),
        degree: f.degree + g.degree,
        comps,
    }
}

/// The differential on morphisms of twisted complexes:
/// `(df)^{i,j} = (-1)^j d(f^{i,j})
///             + sum_k ( d_Y^{k,j} . f^{i,k} - (-1)^m f^{k,j} . d_X^{i,k} )`.
pub fn tw_differential(p: &DgPresentation, f: &TwMorphism) -> TwMorphism {
    let field = p.field();
    let m = f.degree;
    let mut comps = BTreeMap::new();
    for (&(i, j), fij) in &f.comps {
        add_comp(
            &mut comps,
            (i, j),
            differential(p, fij).scale(&sgn(field, j)),
        );
    }
    for (&(i, k), fik) in &f.comps {
        for (&(k2, j), dy) in &f.target.diffs {
            if k2 != k {
                continue;
            }
            add_comp(&mut comps, (i, j), compose(p, dy, fik));
        }
    }
    for (&(k, j), fkj) in &f.comps {
        for (&(i, k2), dx) in &f.source.diffs {
            if k2 != k {
                continue;
            }
            add_comp(
                &mut comps,
                (i, j),
                compose(p, fkj, dx).scale(&sgn(field, m + 1)),
            );
        }
    }
    TwMorphism {
        source: f.source.clone(),
        target: f.target.clone(),
        degree: m + 1,
        comps,
    }
}

pub fn is_closed(p: &DgPresentation, f: &TwMorphism) -> bool {
    tw_differential(p, f).is_zero()
}

/// The Maurer-Cartan defect
/// `d(d^{i,j}) + (-1)^j sum_{i<k<j} d^{k,j} . d^{i,k}`; zero on valid objects.
pub fn mc_defect(p: &DgPresentation, x: &TwObject, i: i64, j: i64) -> DgMorphism {
    let field = p.field();
    let mut acc = differential(p, &x.diff(p, i, j));
    let mut quad = DgMorphism::zero(p, x.term(i), x.term(j), i - j + 2);
    for k in (i + 1)..j {
        if let (Some(dik), Some(dkj)) = (x.diffs.get(&(i, k)), x.diffs.get(&(k, j))) {
            quad = quad.add(&compose(p, dkj, dik));
        }
    }
    acc = acc.add(&quad.scale(&sgn(field, j)));
    acc
}

/// Checks the Maurer-Cartan equation componentwise; the report names the
/// first violating index pair.
pub fn validate_tw(p: &DgPresentation, x: &TwObject) -> AxiomReport {
    let mut report = AxiomReport::new();
    let mut first = None;
    if let Some((lo, hi)) = x.support() {
        'outer: for i in lo..hi {
            for j in (i + 1)..=hi {
                if !mc_defect(p, x, i, j).is_zero() {
                    first = Some((i, j));
                    break 'outer;
                }
            }
        }
    }
    match first {
        None => report.record(
            "maurer-cartan",
            Verdict::Pass,
            "all components satisfy the Maurer-Cartan equation".to_string(),
        ),
        Some((i, j)) => report.record(
            "maurer-cartan",
            Verdict::Fail,
            format!("first violation at component ({i}, {j})"),
        ),
    }
    report
}

/// Shift: `X[m]^i = X^{i+m}` with differential `(-1)^m d^{i+m, j+m}`.
pub fn shift(p: &DgPresentation, x: &TwObject, m: i64) -> TwObject {
    let terms = x.terms.iter().map(|(&i, s)| (i - m, s.clone())).collect();
    let diffs = x
        .diffs
        .iter()
        .map(|(&(i, j), g)| {
            let h = if m.rem_euclid(2) == 0 { g.clone() } else { g.neg() };
            ((i - m, j - m), h)
        })
        .collect();
    TwObject::new(p, terms, diffs).expect("shift preserves shapes")
}

/// Shift of a morphism: components reindex without sign.
pub fn shift_morphism(p: &DgPresentation, f: &TwMorphism, m: i64) -> TwMorphism {
    let comps = f
        .comps
        .iter()
        .map(|(&(i, j), g)| ((i - m, j - m), g.clone()))
        .collect();
    TwMorphism::from_comps(
        p,
        shift(p, &f.source, m),
        shift(p, &f.target, m),
        f.degree,
        comps,
    )
    .expect("shift preserves shapes")
}

/// The closed degree 1 morphism `X[1] -> X` with identity components.
pub fn s_minus(p: &DgPresentation, x: &TwObject) -> TwMorphism {
    let comps = x
        .terms
        .iter()
        .map(|(&t, s)| ((t - 1, t), DgMorphism::identity(p, s)))
        .filter(|(_, g)| !g.is_zero())
        .collect();
    TwMorphism {
        source: shift(p, x, 1),
        target: x.clone(),
        degree: 1,
        comps,
    }
}

/// The closed degree -1 morphism `X -> X[1]` with identity components.
pub fn s_plus(p: &DgPresentation, x: &TwObject) -> TwMorphism {
    let comps = x
        .terms
        .iter()
        .map(|(&t, s)| ((t, t - 1), DgMorphism::identity(p, s)))
        .filter(|(_, g)| !g.is_zero())
        .collect();
    TwMorphism {
        source: x.clone(),
        target: shift(p, x, 1),
        degree: -1,
        comps,
    }
}

/// A cone together with its projection and inclusion morphisms:
/// `p : Cone f -> X[1]`, `u : X[1] -> Cone f`, `q : Cone f -> Y`,
/// `v : Y -> Cone f`.
#[derive(Debug, Clone)]
pub struct ConeData {
    pub cone: TwObject,
    pub p: TwMorphism,
    pub u: TwMorphism,
    pub q: TwMorphism,
    pub v: TwMorphism,
}

/// Cone of a closed degree 0 morphism: `C^i = X^{i+1} (+) Y^i` with
/// differential `[[-d_X, 0], [f, d_Y]]`.
pub fn cone(p: &DgPresentation, f: &TwMorphism) -> Result<ConeData, TwError> {
    if f.degree != 0 {
        return Err(TwError::Shape(format!(
            "cone needs a degree 0 morphism, got degree {}",
            f.degree
        )));
    }
    if !is_closed(p, f) {
        return Err(TwError::NotClosed("cone needs a closed morphism".to_string()));
    }
    let x = &f.source;
    let y = &f.target;
    let mut keys = BTreeSet::new();
    for &i in x.terms.keys() {
        keys.insert(i - 1);
    }
    for &i in y.terms.keys() {
        keys.insert(i);
    }
    let keys: Vec<i64> = keys.into_iter().collect();

    let mut terms = BTreeMap::new();
    for &i in &keys {
        let t = x.term(i + 1).concat(&y.term(i));
        if !t.is_zero() {
            terms.insert(i, t);
        }
    }
    let mut diffs = BTreeMap::new();
    for (a, &i) in keys.iter().enumerate() {
        for &j in &keys[a + 1..] {
            let srcs = [x.term(i + 1), y.term(i)];
            let tgts = [x.term(j + 1), y.term(j)];
            let blocks = vec![
                (0, 0, x.diff(p, i + 1, j + 1).neg()),
                (1, 0, f.comp(p, i + 1, j)),
                (1, 1, y.diff(p, i, j)),
            ];
            let d = assemble_blocks(p, &srcs, &tgts, i - j + 1, &blocks);
            if !d.is_zero() {
                diffs.insert((i, j), d);
            }
        }
    }
    let cone_obj = TwObject::new(p, terms, diffs)?;
    let shifted = shift(p, x, 1);

    let mut pc = BTreeMap::new();
    let mut uc = BTreeMap::new();
    let mut qc = BTreeMap::new();
    let mut vc = BTreeMap::new();
    for &i in &keys {
        let xi = x.term(i + 1);
        let yi = y.term(i);
        if !xi.is_zero() {
            let id = DgMorphism::identity(p, &xi);
            pc.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone(), yi.clone()], &[xi.clone()], 0, &[(0, 0, id.clone())]),
            );
            uc.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone()], &[xi.clone(), yi.clone()], 0, &[(0, 0, id)]),
            );
        }
        if !yi.is_zero() {
            let id = DgMorphism::identity(p, &yi);
            qc.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone(), yi.clone()], &[yi.clone()], 0, &[(0, 1, id.clone())]),
            );
            vc.insert(
                (i, i),
                assemble_blocks(p, &[yi.clone()], &[xi.clone(), yi.clone()], 0, &[(1, 0, id)]),
            );
        }
    }
    Ok(ConeData {
        p: TwMorphism::from_comps(p, cone_obj.clone(), shifted.clone(), 0, pc)?,
        u: TwMorphism::from_comps(p, shifted, cone_obj.clone(), 0, uc)?,
        q: TwMorphism::from_comps(p, cone_obj.clone(), y.clone(), 0, qc)?,
        v: TwMorphism::from_comps(p, y.clone(), cone_obj.clone(), 0, vc)?,
        cone: cone_obj,
    })
}

/// Cocone of a closed degree 0 morphism, normalized as the shifted cone.
pub fn cocone(p: &DgPresentation, f: &TwMorphism) -> Result<TwObject, TwError> {
    Ok(shift(p, &cone(p, f)?.cone, -1))
}

/// Stupid truncation keeping indices `<= k`.
pub fn truncate_le(x: &TwObject, k: i64) -> TwObject {
    TwObject {
        terms: x
            .terms
            .iter()
            .filter(|(&i, _)| i <= k)
            .map(|(&i, s)| (i, s.clone()))
            .collect(),
        diffs: x
            .diffs
            .iter()
            .filter(|(&(i, j), _)| i <= k && j <= k)
            .map(|(&key, g)| (key, g.clone()))
            .collect(),
    }
}

/// Stupid truncation keeping indices `>= k`.
pub fn truncate_ge(x: &TwObject, k: i64) -> TwObject {
    TwObject {
        terms: x
            .terms
            .iter()
            .filter(|(&i, _)| i >= k)
            .map(|(&i, s)| (i, s.clone()))
            .collect(),
        diffs: x
            .diffs
            .iter()
            .filter(|(&(i, j), _)| i >= k && j >= k)
            .map(|(&key, g)| (key, g.clone()))
            .collect(),
    }
}

/// Truncation of a morphism, keeping components with both indices `<= k`.
/// This is only functorial on closed degree 0 morphisms.
pub fn truncate_morphism_le(p: &DgPresentation, f: &TwMorphism, k: i64) -> TwMorphism {
    let comps = f
        .comps
        .iter()
        .filter(|(&(i, j), _)| i <= k && j <= k)
        .map(|(&key, g)| (key, g.clone()))
        .collect();
    TwMorphism::from_comps(
        p,
        truncate_le(&f.source, k),
        truncate_le(&f.target, k),
        f.degree,
        comps,
    )
    .expect("truncation preserves shapes")
}

/// Truncation of a morphism, keeping components with both indices `>= k`.
pub fn truncate_morphism_ge(p: &DgPresentation, f: &TwMorphism, k: i64) -> TwMorphism {
    let comps = f
        .comps
        .iter()
        .filter(|(&(i, j), _)| i >= k && j >= k)
        .map(|(&key, g)| (key, g.clone()))
        .collect();
    TwMorphism::from_comps(
        p,
        truncate_ge(&f.source, k),
        truncate_ge(&f.target, k),
        f.degree,
        comps,
    )
    .expect("truncation preserves shapes")
}

/// The triangle attached to a truncation index: the closed morphism
/// `alpha : (sigma_{<k} X)[-1] -> sigma_{>=k} X` built from the crossing
/// differential components, and the strict comparison morphisms
/// `beta : sigma_{>=k} X -> X` and `gamma : X -> sigma_{<k} X`.
/// The cone of `alpha` is `X` on the nose, with `beta` and `gamma` its
/// inclusion and projection.
pub fn abg(p: &DgPresentation, x: &TwObject, k: i64) -> (TwMorphism, TwMorphism, TwMorphism) {
    let lower = truncate_le(x, k - 1);
    let upper = truncate_ge(x, k);
    let src = shift(p, &lower, -1);
    let mut comps = BTreeMap::new();
    for (&(i, j), g) in &x.diffs {
        if i <= k - 1 && j >= k {
            comps.insert((i + 1, j), g.clone());
        }
    }
    let alpha =
        TwMorphism::from_comps(p, src, upper.clone(), 0, comps).expect("alpha components");
    let beta_comps = upper
        .terms
        .iter()
        .map(|(&i, s)| ((i, i), DgMorphism::identity(p, s)))
        .collect();
    let beta = TwMorphism::from_comps(p, upper, x.clone(), 0, beta_comps).expect("beta components");
    let gamma_comps = lower
        .terms
        .iter()
        .map(|(&i, s)| ((i, i), DgMorphism::identity(p, s)))
        .collect();
    let gamma =
        TwMorphism::from_comps(p, x.clone(), lower, 0, gamma_comps).expect("gamma components");
    (alpha, beta, gamma)
}

/// Rebuilds a closed degree 0 morphism `X -> Y` from truncated pieces
/// `g : sigma_{<k} X -> sigma_{<k} Y`, `e : sigma_{>=k} X -> sigma_{>=k} Y`
/// and a degree -1 homotopy `phi` with
/// `d(phi) = alpha_Y . g[-1] - e . alpha_X`.
pub fn glue(
    p: &DgPresentation,
    x: &TwObject,
    y: &TwObject,
    g: &TwMorphism,
    e: &TwMorphism,
    phi: &TwMorphism,
    k: i64,
) -> Result<TwMorphism, TwError> {
    let lower_x = truncate_le(x, k - 1);
    let lower_y = truncate_le(y, k - 1);
    let upper_x = truncate_ge(x, k);
    let upper_y = truncate_ge(y, k);
    if g.source != lower_x || g.target != lower_y || g.degree != 0 {
        return Err(TwError::Shape("lower piece has wrong shape".to_string()));
    }
    if e.source != upper_x || e.target != upper_y || e.degree != 0 {
        return Err(TwError::Shape("upper piece has wrong shape".to_string()));
    }
    let shifted_lower_x = shift(p, &lower_x, -1);
    if phi.source != shifted_lower_x || phi.target != upper_y || phi.degree != -1 {
        return Err(TwError::Shape("homotopy piece has wrong shape".to_string()));
    }
    let (alpha_x, _, _) = abg(p, x, k);
    let (alpha_y, _, _) = abg(p, y, k);
    let want = tw_compose(p, &alpha_y, &shift_morphism(p, g, -1))
        .sub(&tw_compose(p, e, &alpha_x));
    if tw_differential(p, phi) != want {
        return Err(TwError::Precondition(
            "d(phi) does not match the crossing defect of the truncated pieces".to_string(),
        ));
    }
    let mut comps = BTreeMap::new();
    for (&key, c) in &g.comps {
        comps.insert(key, c.clone());
    }
    for (&key, c) in &e.comps {
        comps.insert(key, c.clone());
    }
    for (&(i, j), c) in &phi.comps {
        comps.insert((i - 1, j), c.clone());
    }
    TwMorphism::from_comps(p, x.clone(), y.clone(), 0, comps)
}

/// Splits a degree 0 morphism at a truncation index into the pieces that
/// `glue` reassembles.
pub fn extract(
    p: &DgPresentation,
    f: &TwMorphism,
    k: i64,
) -> Result<(TwMorphism, TwMorphism, TwMorphism), TwError> {
    if f.degree != 0 {
        return Err(TwError::Shape("extract needs a degree 0 morphism".to_string()));
    }
    let g = truncate_morphism_le(p, f, k - 1);
    let e = truncate_morphism_ge(p, f, k);
    let shifted_lower = shift(p, &truncate_le(&f.source, k - 1), -1);
    let upper_y = truncate_ge(&f.target, k);
    let mut comps = BTreeMap::new();
    for (&(i, j), c) in &f.comps {
        if i <= k - 1 && j >= k {
            comps.insert((i + 1, j), c.clone());
        }
    }
    let phi = TwMorphism::from_comps(p, shifted_lower, upper_y, -1, comps)?;
    Ok((g, e, phi))
}

/// Replaces the edge differential `d^{0,1}` by a cohomologous morphism `a`,
/// where `phi` witnesses `d(phi) = d^{0,1} - a`. Returns the replaced object
/// together with strictly mutually inverse closed morphisms
/// `f : X' -> X` and `g : X -> X'`.
pub fn edge_replace(
    p: &DgPresentation,
    x: &TwObject,
    a: &DgMorphism,
    phi: &DgMorphism,
) -> Result<(TwObject, TwMorphism, TwMorphism), TwError> {
    let x0 = x.term(0);
    let x1 = x.term(1);
    if a.source != x0 || a.target != x1 || a.degree != 0 {
        return Err(TwError::Shape("replacement edge has wrong shape".to_string()));
    }
    if phi.source != x0 || phi.target != x1 || phi.degree != -1 {
        return Err(TwError::Shape("edge homotopy has wrong shape".to_string()));
    }
    if differential(p, phi) != x.diff(p, 0, 1).sub(a) {
        return Err(TwError::Precondition(
            "d(phi) does not connect the old and new edge differentials".to_string(),
        ));
    }
    let mut diffs = x.diffs.clone();
    diffs.remove(&(0, 1));
    if !a.is_zero() {
        diffs.insert((0, 1), a.clone());
    }
    for (&(i, j), dx) in &x.diffs {
        if i != 1 {
            continue;
        }
        let new = x.diff(p, 0, j).add(&compose(p, dx, phi));
        diffs.remove(&(0, j));
        if !new.is_zero() {
            diffs.insert((0, j), new);
        }
    }
    let xp = TwObject::new(p, x.terms.clone(), diffs)?;

    let mut fc: BTreeMap<(i64, i64), DgMorphism> = x
        .terms
        .iter()
        .map(|(&i, s)| ((i, i), DgMorphism::identity(p, s)))
        .collect();
    add_comp(&mut fc, (0, 1), phi.clone());
    let f = TwMorphism::from_comps(p, xp.clone(), x.clone(), 0, fc)?;

    let mut gc: BTreeMap<(i64, i64), DgMorphism> = x
        .terms
        .iter()
        .map(|(&i, s)| ((i, i), DgMorphism::identity(p, s)))
        .collect();
    add_comp(&mut gc, (0, 1), phi.neg());
    let g = TwMorphism::from_comps(p, x.clone(), xp.clone(), 0, gc)?;
    Ok((xp, f, g))
}

/// The image of a twisted complex in the homotopy category of the zeroth
/// cohomology category: its terms, and the cohomology classes of the
/// adjacent differential components.
#[derive(Debug, Clone, PartialEq)]
pub struct BarComplex {
    pub terms: BTreeMap<i64, SumObject>,
    pub diffs: BTreeMap<i64, Vec<FieldElem>>,
}

pub fn bar(p: &DgPresentation, x: &TwObject) -> Result<BarComplex, TwError> {
    let mut diffs = BTreeMap::new();
    for (&i, s) in &x.terms {
        let t = x.term(i + 1);
        if t.is_zero() {
            continue;
        }
        let h = cohomology(p, s, &t, 0)?;
        let class = h
            .class_of(&x.diff(p, i, i + 1).coords)
            .expect("adjacent differential components are cycles");
        diffs.insert(i, class);
    }
    Ok(BarComplex {
        terms: x.terms.clone(),
        diffs,
    })
}

/// Cohomology classes of the diagonal components `f^{i, i+m}` of a closed
/// morphism; the data of the induced chain map between bar complexes.
pub fn bar_morphism(
    p: &DgPresentation,
    f: &TwMorphism,
) -> Result<BTreeMap<i64, Vec<FieldElem>>, TwError> {
    if !is_closed(p, f) {
        return Err(TwError::NotClosed(
            "bar classes are only defined for closed morphisms".to_string(),
        ));
    }
    let m = f.degree;
    let mut out = BTreeMap::new();
    for (&i, s) in &f.source.terms {
        let t = f.target.term(i + m);
        if t.is_zero() {
            continue;
        }
        let h = cohomology(p, s, &t, 0)?;
        let class = h
            .class_of(&f.comp(p, i, i + m).coords)
            .expect("diagonal components of closed morphisms are cycles");
        out.insert(i, class);
    }
    Ok(out)
}

/// The split sequence with end terms `A` and `C`: for `n >= 2` it repeats
/// `A` in positions 0, 1 and `C` in positions `n`, `n+1` with identity
/// edges; for `n = 1` the middle term is `A (+) C`.
pub fn split_sequence(
    p: &DgPresentation,
    a: &SumObject,
    c: &SumObject,
    n: i64,
) -> Result<TwObject, TwError> {
    if n < 1 {
        return Err(TwError::Shape("split sequences need n >= 1".to_string()));
    }
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    if n == 1 {
        let mid = a.concat(c);
        terms.insert(0, a.clone());
        terms.insert(1, mid.clone());
        terms.insert(2, c.clone());
        diffs.insert(
            (0, 1),
            assemble_blocks(p, &[a.clone()], &[a.clone(), c.clone()], 0, &[(0, 0, DgMorphism::identity(p, a))]),
        );
        diffs.insert(
            (1, 2),
            assemble_blocks(p, &[a.clone(), c.clone()], &[c.clone()], 0, &[(0, 1, DgMorphism::identity(p, c))]),
        );
    } else {
        terms.insert(0, a.clone());
        terms.insert(1, a.clone());
        terms.insert(n, c.clone());
        terms.insert(n + 1, c.clone());
        diffs.insert((0, 1), DgMorphism::identity(p, a));
        diffs.insert((n, n + 1), DgMorphism::identity(p, c));
    }
    TwObject::new(p, terms, diffs)
}

/// The closed comparison morphism from the split sequence on the end terms
/// of `X` into `X`: identity in position 0, the outgoing differential
/// components in position 1.
pub fn split_comparison(
    p: &DgPresentation,
    x: &TwObject,
    n: i64,
) -> Result<TwMorphism, TwError> {
    if let Some((lo, hi)) = x.support() {
        if lo < 0 || hi > n + 1 {
            return Err(TwError::Shape(format!(
                "support [{lo}, {hi}] exceeds [0, {}]",
                n + 1
            )));
        }
    }
    let a = x.term(0);
    let c = x.term(n + 1);
    let nseq = split_sequence(p, &a, &c, n)?;
    let mut comps = BTreeMap::new();
    if !a.is_zero() {
        comps.insert((0, 0), DgMorphism::identity(p, &a));
    }
    for (&(i, j), d) in &x.diffs {
        if i != 0 {
            continue;
        }
        let block = if n == 1 {
            assemble_blocks(p, &[a.clone(), c.clone()], &[x.term(j)], 1 - j, &[(0, 0, d.clone())])
        } else {
            d.clone()
        };
        comps.insert((1, j), block);
    }
    TwMorphism::from_comps(p, nseq, x.clone(), 0, comps)
}

/// Attempts the section-side comparison: a closed morphism `g` from the
/// split sequence into `X` whose end components are identities. Solvable
/// exactly when the last differential class of `X` splits; returns `None`
/// otherwise.
pub fn split_section(
    p: &DgPresentation,
    x: &TwObject,
    n: i64,
) -> Result<Option<TwMorphism>, TwError> {
    let f = split_comparison(p, x, n)?;
    let a = x.term(0);
    let c = x.term(n + 1);
    let xn = x.term(n);
    let dn = x.diff(p, n, n + 1);

    // unknowns: phi_n in hom(C, X^n)^0 and phi_{n+1} in hom(C, C)^{-1}
    // equation: d^{n,n+1} . phi_n + d(phi_{n+1}) = id_C
    let field = p.field();
    let phi_n_layout = HomLayout::new(p, &c, &xn, 0);
    let id_c = DgMorphism::identity(p, &c);
    let m1 = crate::linalg::Matrix::from_fn_cols(field, id_c.coords.len(), phi_n_layout.total, |k| {
        let b = DgMorphism::basis_elem(p, &c, &xn, 0, k);
        compose(p, &dn, &b).coords
    });
    let m2 = assembled_diff_matrix(p, &c, &c, -1);
    let system = m1.hstack(&m2);
    let sol = match system.solve(&id_c.coords)? {
        Some(s) => s,
        None => return Ok(None),
    };
    let mut phi_n = DgMorphism::zero(p, c.clone(), xn.clone(), 0);
    phi_n.coords = sol[..phi_n_layout.total].to_vec();
    let mut phi_n1 = DgMorphism::zero(p, c.clone(), c.clone(), -1);
    phi_n1.coords = sol[phi_n_layout.total..].to_vec();

    let mut h = BTreeMap::new();
    if n == 1 {
        add_comp(
            &mut h,
            (1, 1),
            assemble_blocks(p, &[a.clone(), c.clone()], &[xn.clone()], 0, &[(0, 1, phi_n)]),
        );
        add_comp(
            &mut h,
            (1, 2),
            assemble_blocks(p, &[a.clone(), c.clone()], &[c.clone()], -1, &[(0, 1, phi_n1)]),
        );
        add_comp(&mut h, (2, 2), DgMorphism::identity(p, &c));
    } else {
        add_comp(&mut h, (n, n), phi_n);
        add_comp(&mut h, (n, n + 1), phi_n1.scale(&sgn(field, n + 1)));
        add_comp(&mut h, (n + 1, n + 1), DgMorphism::identity(p, &c));
    }
    let nseq = f.source.clone();
    let hmor = TwMorphism::from_comps(p, nseq, x.clone(), 0, h)?;
    Ok(Some(f.add(&hmor)))
}

/// A direct sum with its inclusion and projection morphisms.
#[derive(Debug, Clone)]
pub struct SumData {
    pub object: TwObject,
    pub inj1: TwMorphism,
    pub inj2: TwMorphism,
    pub proj1: TwMorphism,
    pub proj2: TwMorphism,
}

pub fn direct_sum(p: &DgPresentation, x: &TwObject, y: &TwObject) -> SumData {
    let mut keys = BTreeSet::new();
    keys.extend(x.terms.keys().copied());
    keys.extend(y.terms.keys().copied());
    let keys: Vec<i64> = keys.into_iter().collect();
    let mut terms = BTreeMap::new();
    for &i in &keys {
        let t = x.term(i).concat(&y.term(i));
        if !t.is_zero() {
            terms.insert(i, t);
        }
    }
    let mut diffs = BTreeMap::new();
    for (a, &i) in keys.iter().enumerate() {
        for &j in &keys[a + 1..] {
            let blocks = vec![
                (0, 0, x.diff(p, i, j)),
                (1, 1, y.diff(p, i, j)),
            ];
            let d = assemble_blocks(
                p,
                &[x.term(i), y.term(i)],
                &[x.term(j), y.term(j)],
                i - j + 1,
                &blocks,
            );
            if !d.is_zero() {
                diffs.insert((i, j), d);
            }
        }
    }
    let object = TwObject::new(p, terms, diffs).expect("direct sum shapes");

    let mut i1 = BTreeMap::new();
    let mut i2 = BTreeMap::new();
    let mut p1 = BTreeMap::new();
    let mut p2 = BTreeMap::new();
    for &i in &keys {
        let xi = x.term(i);
        let yi = y.term(i);
        if !xi.is_zero() {
            let id = DgMorphism::identity(p, &xi);
            i1.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone()], &[xi.clone(), yi.clone()], 0, &[(0, 0, id.clone())]),
            );
            p1.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone(), yi.clone()], &[xi.clone()], 0, &[(0, 0, id)]),
            );
        }
        if !yi.is_zero() {
            let id = DgMorphism::identity(p, &yi);
            i2.insert(
                (i, i),
                assemble_blocks(p, &[yi.clone()], &[xi.clone(), yi.clone()], 0, &[(1, 0, id.clone())]),
            );
            p2.insert(
                (i, i),
                assemble_blocks(p, &[xi.clone(), yi.clone()], &[yi.clone()], 0, &[(0, 1, id)]),
            );
        }
    }
    SumData {
        inj1: TwMorphism::from_comps(p, x.clone(), object.clone(), 0, i1).expect("inclusion"),
        inj2: TwMorphism::from_comps(p, y.clone(), object.clone(), 0, i2).expect("inclusion"),
        proj1: TwMorphism::from_comps(p, object.clone(), x.clone(), 0, p1).expect("projection"),
        proj2: TwMorphism::from_comps(p, object.clone(), y.clone(), 0, p2).expect("projection"),
        object,
    }
}

/// Blockwise direct sum of two morphisms of equal degree.
pub fn direct_sum_morphism(
    p: &DgPresentation,
    f: &TwMorphism,
    g: &TwMorphism,
) -> TwMorphism {
    assert_eq!(f.degree, g.degree, "degree mismatch in direct_sum_morphism");
    let src = direct_sum(p, &f.source, &g.source).object;
    let tgt = direct_sum(p, &f.target, &g.target).object;
    let mut keys = BTreeSet::new();
    keys.extend(f.comps.keys().copied());
    keys.extend(g.comps.keys().copied());
    let mut comps = BTreeMap::new();
    for (i, j) in keys {
        let blocks = vec![
            (0, 0, f.comp(p, i, j)),
            (1, 1, g.comp(p, i, j)),
        ];
        let c = assemble_blocks(
            p,
            &[f.source.term(i), g.source.term(i)],
            &[f.target.term(j), g.target.term(j)],
            i - j + f.degree,
            &blocks,
        );
        if !c.is_zero() {
            comps.insert((i, j), c);
        }
    }
    TwMorphism {
        source: src,
        target: tgt,
        degree: f.degree,
        comps,
    }
}

/// Samples a valid twisted complex with terms in `[lo, hi]`: random terms,
/// then differential components solved span by span against the
/// Maurer-Cartan equation, randomizing over the solution space. Retries with
/// fresh draws when a span admits no solution.
pub fn random_complex<R: Rng>(
    p: &DgPresentation,
    rng: &mut R,
    lo: i64,
    hi: i64,
    max_mult: usize,
    attempts: usize,
) -> Option<TwObject> {
    'attempt: for _ in 0..attempts {
        let mut terms: BTreeMap<i64, SumObject> = BTreeMap::new();
        for i in lo..=hi {
            let mult = rng.gen_range(0..=max_mult);
            let s: Vec<usize> = (0..mult)
                .map(|_| rng.gen_range(0..p.object_count()))
                .collect();
            if !s.is_empty() {
                terms.insert(i, SumObject::of(&s));
            }
        }
        let term = |i: i64, t: &BTreeMap<i64, SumObject>| {
            t.get(&i).cloned().unwrap_or_else(SumObject::zero)
        };
        let mut diffs: BTreeMap<(i64, i64), DgMorphism> = BTreeMap::new();
        for span in 1..=(hi - lo) {
            for i in lo..=(hi - span) {
                let j = i + span;
                let a = term(i, &terms);
                let b = term(j, &terms);
                let mut rhs = DgMorphism::zero(p, a.clone(), b.clone(), i - j + 2);
                for k in (i + 1)..j {
                    if let (Some(dik), Some(dkj)) = (diffs.get(&(i, k)), diffs.get(&(k, j))) {
                        rhs = rhs.add(&compose(p, dkj, dik));
                    }
                }
                let rhs = rhs.scale(&sgn(p.field(), j + 1));
                let dmat = assembled_diff_matrix(p, &a, &b, i - j + 1);
                let mut coords = match dmat.solve(&rhs.coords) {
                    Ok(Some(s)) => s,
                    _ => continue 'attempt,
                };
                let kern = dmat.kernel_basis();
                for col in 0..kern.cols() {
                    let r = p.field().random_elem(rng);
                    for row in 0..kern.rows() {
                        coords[row] = coords[row].add(&kern[(row, col)].mul(&r));
                    }
                }
                let mut d = DgMorphism::zero(p, a, b, i - j + 1);
                d.coords = coords;
                if !d.is_zero() {
                    diffs.insert((i, j), d);
                }
            }
        }
        let x = TwObject::new(p, terms, diffs).ok()?;
        debug_assert!(validate_tw(p, &x).all_passed());
        return Some(x);
    }
    None
}

/// Samples an unconstrained morphism: every component gets random
/// coordinates. Useful as raw material; its differential is always closed.
pub fn random_raw_morphism<R: Rng>(
    p: &DgPresentation,
    rng: &mut R,
    x: &TwObject,
    y: &TwObject,
    m: i64,
) -> TwMorphism {
    let mut comps = BTreeMap::new();
    for (&i, a) in &x.terms {
        for (&j, b) in &y.terms {
            let layout = HomLayout::new(p, a, b, i - j + m);
            if layout.total == 0 {
                continue;
            }
            let coords: Vec<FieldElem> = (0..layout.total)
                .map(|_| p.field().random_elem(rng))
                .collect();
            let g = DgMorphism {
                source: a.clone(),
                target: b.clone(),
                degree: i - j + m,
                coords,
            };
            if !g.is_zero() {
                comps.insert((i, j), g);
            }
        }
    }
    TwMorphism {
        source: x.clone(),
        target: y.clone(),
        degree: m,
        comps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample_complexes(p: &DgPresentation, seed: u64, count: usize) -> Vec<TwObject> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| random_complex(p, &mut rng, 0, 3, 2, 500).expect("sampling a complex"))
            .collect()
    }

    /// The extension of the simple by itself: end terms with the square-zero
    /// generator as long differential.
    fn eps_extension(p: &DgPresentation) -> TwObject {
        let t = SumObject::generator(0);
        let mut terms = BTreeMap::new();
        terms.insert(0, t.clone());
        terms.insert(3, t.clone());
        let mut eps = DgMorphism::zero(p, t.clone(), t.clone(), -2);
        eps.coords[0] = p.field().one();
        let mut diffs = BTreeMap::new();
        diffs.insert((0, 3), eps);
        TwObject::new(p, terms, diffs).unwrap()
    }

    #[test]
    fn generated_complexes_satisfy_maurer_cartan() {
        for (k, p) in fixtures::all().iter().enumerate() {
            for x in sample_complexes(p, 11 + k as u64, 8) {
                assert!(validate_tw(p, &x).all_passed(), "{}", x.describe(p));
            }
        }
    }

    #[test]
    fn maurer_cartan_violation_is_reported() {
        let p = fixtures::semisimple_point();
        let t = SumObject::generator(0);
        let mut terms = BTreeMap::new();
        for i in 0..3 {
            terms.insert(i, t.clone());
        }
        let mut diffs = BTreeMap::new();
        diffs.insert((0, 1), DgMorphism::identity(&p, &t));
        diffs.insert((1, 2), DgMorphism::identity(&p, &t));
        let x = TwObject::new(&p, terms, diffs).unwrap();
        let report = validate_tw(&p, &x);
        assert!(report.clause("maurer-cartan").unwrap().verdict.is_fail());
        assert!(report.clause("maurer-cartan").unwrap().detail.contains("(0, 2)"));
    }

    #[test]
    fn morphism_differential_squares_to_zero() {
        for (k, p) in fixtures::all().iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + k as u64);
            let xs = sample_complexes(p, 200 + k as u64, 4);
            for pair in xs.windows(2) {
                for m in [-1, 0, 1] {
                    let f = random_raw_morphism(p, &mut rng, &pair[0], &pair[1], m);
                    let ddf = tw_differential(p, &tw_differential(p, &f));
                    assert!(ddf.is_zero());
                }
            }
        }
    }

    #[test]
    fn differential_of_composite_interchanges() {
        for (k, p) in fixtures::all().iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(300 + k as u64);
            let xs = sample_complexes(p, 400 + k as u64, 3);
            for (mf, mg) in [(0, 0), (-1, 0), (0, -1), (1, -1)] {
                let f = random_raw_morphism(p, &mut rng, &xs[0], &xs[1], mf);
                let g = random_raw_morphism(p, &mut rng, &xs[1], &xs[2], mg);
                let lhs = tw_differential(p, &tw_compose(p, &g, &f));
                let rhs = tw_compose(p, &tw_differential(p, &g), &f).add(
                    &tw_compose(p, &g, &tw_differential(p, &f)).scale(&sgn(p.field(), mg)),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn composition_is_associative() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let xs = sample_complexes(&p, 8, 4);
        let f = random_raw_morphism(&p, &mut rng, &xs[0], &xs[1], 0);
        let g = random_raw_morphism(&p, &mut rng, &xs[1], &xs[2], -1);
        let h = random_raw_morphism(&p, &mut rng, &xs[2], &xs[3], 1);
        let left = tw_compose(&p, &h, &tw_compose(&p, &g, &f));
        let right = tw_compose(&p, &tw_compose(&p, &h, &g), &f);
        assert_eq!(left, right);
    }

    #[test]
    fn cone_satisfies_its_identities() {
        for (k, p) in fixtures::all().iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + k as u64);
            let xs = sample_complexes(p, 600 + k as u64, 4);
            for pair in xs.windows(2) {
                let psi = random_raw_morphism(p, &mut rng, &pair[0], &pair[1], -1);
                let f = tw_differential(p, &psi);
                let c = cone(p, &f).unwrap();
                assert!(validate_tw(p, &c.cone).all_passed());
                let x1 = shift(p, &pair[0], 1);
                assert_eq!(tw_compose(p, &c.q, &c.v), TwMorphism::identity(p, &pair[1]));
                assert_eq!(tw_compose(p, &c.p, &c.u), TwMorphism::identity(p, &x1));
                let split = tw_compose(p, &c.u, &c.p).add(&tw_compose(p, &c.v, &c.q));
                assert_eq!(split, TwMorphism::identity(p, &c.cone));
                assert!(is_closed(p, &c.p));
                assert!(is_closed(p, &c.v));
                let fsp = tw_compose(p, &f, &tw_compose(p, &s_minus(p, &pair[0]), &c.p));
                assert_eq!(tw_differential(p, &c.q), fsp.neg());
                let vfs = tw_compose(p, &c.v, &tw_compose(p, &f, &s_minus(p, &pair[0])));
                assert_eq!(tw_differential(p, &c.u), vfs);
            }
        }
    }

    #[test]
    fn cone_from_zero_source_is_the_target() {
        let p = fixtures::dual_numbers(2);
        let y = eps_extension(&p);
        let f = TwMorphism::zero(TwObject::zero(), y.clone(), 0);
        let c = cone(&p, &f).unwrap();
        assert_eq!(c.cone, y);
        assert_eq!(c.q, TwMorphism::identity(&p, &y));
        assert_eq!(c.v, TwMorphism::identity(&p, &y));
    }

    #[test]
    fn shifts_invert_and_sections_compose_to_identities() {
        let p = fixtures::dual_numbers(1);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let xs = sample_complexes(&p, 18, 2);
        for x in &xs {
            for m in [-2, 1, 3] {
                assert_eq!(shift(&p, &shift(&p, x, m), -m), *x);
            }
            let sm = s_minus(&p, x);
            let sp = s_plus(&p, x);
            assert!(is_closed(&p, &sm));
            assert!(is_closed(&p, &sp));
            assert_eq!(tw_compose(&p, &sm, &sp), TwMorphism::identity(&p, x));
            assert_eq!(
                tw_compose(&p, &sp, &sm),
                TwMorphism::identity(&p, &shift(&p, x, 1))
            );
        }
        let f = random_raw_morphism(&p, &mut rng, &xs[0], &xs[1], 0);
        for m in [-1, 2] {
            let lhs = tw_differential(&p, &shift_morphism(&p, &f, m));
            let rhs = shift_morphism(&p, &tw_differential(&p, &f), m).scale(&sgn(p.field(), m));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn truncation_triangle_assembles_the_object_on_the_nose() {
        for (k, p) in fixtures::all().iter().enumerate() {
            for x in sample_complexes(p, 700 + k as u64, 4) {
                for cut in 1..=2 {
                    let (alpha, beta, gamma) = abg(p, &x, cut);
                    assert!(is_closed(p, &alpha));
                    assert!(is_closed(p, &beta));
                    assert!(is_closed(p, &gamma));
                    let c = cone(p, &alpha).unwrap();
                    assert_eq!(c.cone, x);
                    assert_eq!(c.v, beta);
                    assert_eq!(c.p, gamma);
                }
            }
        }
    }

    #[test]
    fn glue_and_extract_are_mutually_inverse() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let xs = sample_complexes(&p, 24, 4);
        for pair in xs.windows(2) {
            let psi = random_raw_morphism(&p, &mut rng, &pair[0], &pair[1], -1);
            let f = tw_differential(&p, &psi);
            for cut in 1..=2 {
                let (g, e, phi) = extract(&p, &f, cut).unwrap();
                let back = glue(&p, &pair[0], &pair[1], &g, &e, &phi, cut).unwrap();
                assert_eq!(back, f);
                assert!(is_closed(&p, &back));

                // moving phi by a boundary hits a different preimage
                let chi = random_raw_morphism(&p, &mut rng, phi.source(), phi.target(), -2);
                let phi2 = phi.add(&tw_differential(&p, &chi));
                let f2 = glue(&p, &pair[0], &pair[1], &g, &e, &phi2, cut).unwrap();
                assert!(is_closed(&p, &f2));
                let (g2, e2, phi3) = extract(&p, &f2, cut).unwrap();
                assert_eq!(g2, g);
                assert_eq!(e2, e);
                assert_eq!(phi3, phi2);
            }
        }
    }

    #[test]
    fn glue_rejects_a_bad_homotopy() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let xs = sample_complexes(&p, 30, 2);
        let psi = random_raw_morphism(&p, &mut rng, &xs[0], &xs[1], -1);
        let f = tw_differential(&p, &psi);
        let (g, e, phi) = extract(&p, &f, 1).unwrap();
        let mut found = false;
        for _ in 0..50 {
            let zeta = random_raw_morphism(&p, &mut rng, phi.source(), phi.target(), -1);
            if tw_differential(&p, &zeta).is_zero() {
                continue;
            }
            let bad = phi.add(&zeta);
            assert!(matches!(
                glue(&p, &xs[0], &xs[1], &g, &e, &bad, 1),
                Err(TwError::Precondition(_))
            ));
            found = true;
            break;
        }
        assert!(found, "no non-closed perturbation sampled");
    }

    #[test]
    fn edge_replacement_gives_strict_mutual_inverses() {
        let p = fixtures::dual_numbers(1);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut nontrivial = 0;
        for _ in 0..12 {
            let Some(x) = random_complex(&p, &mut rng, 0, 2, 2, 500) else {
                continue;
            };
            let x0 = x.term(0);
            let x1 = x.term(1);
            let layout = HomLayout::new(&p, &x0, &x1, -1);
            if layout.total == 0 {
                continue;
            }
            let mut phi = DgMorphism::zero(&p, x0, x1, -1);
            phi.coords = (0..layout.total).map(|_| p.field().random_elem(&mut rng)).collect();
            let a = x.diff(&p, 0, 1).sub(&differential(&p, &phi));
            let (xp, f, g) = edge_replace(&p, &x, &a, &phi).unwrap();
            assert!(validate_tw(&p, &xp).all_passed());
            assert_eq!(xp.diff(&p, 0, 1), a);
            assert!(is_closed(&p, &f));
            assert!(is_closed(&p, &g));
            assert_eq!(tw_compose(&p, &g, &f), TwMorphism::identity(&p, &xp));
            assert_eq!(tw_compose(&p, &f, &g), TwMorphism::identity(&p, &x));
            if !phi.is_zero() {
                nontrivial += 1;
            }
        }
        assert!(nontrivial >= 3, "too few nontrivial replacements sampled");
    }

    #[test]
    fn adjacent_differential_classes_compose_to_zero() {
        for (k, p) in fixtures::all().iter().enumerate() {
            for x in sample_complexes(p, 900 + k as u64, 4) {
                let b = bar(p, &x).unwrap();
                if let Some((lo, hi)) = x.support() {
                    for i in lo..hi.saturating_sub(1) {
                        let comp = compose(p, &x.diff(p, i + 1, i + 2), &x.diff(p, i, i + 1));
                        let h = cohomology(p, &x.term(i), &x.term(i + 2), 0).unwrap();
                        if h.ambient_dim() == 0 {
                            continue;
                        }
                        assert!(h.is_boundary(&comp.coords));
                    }
                }
                drop(b);
            }
        }
    }

    #[test]
    fn split_sequences_validate_and_admit_both_comparisons() {
        let p = fixtures::dual_numbers(2);
        let a = SumObject::generator(0);
        let c = SumObject::of(&[0, 0]);
        for n in 1..=3 {
            let nseq = split_sequence(&p, &a, &c, n).unwrap();
            assert!(validate_tw(&p, &nseq).all_passed());
            let f = split_comparison(&p, &nseq, n).unwrap();
            assert!(is_closed(&p, &f));
            assert_eq!(f.comp(&p, 0, 0), DgMorphism::identity(&p, &a));
            let g = split_section(&p, &nseq, n).unwrap().expect("split sequence splits");
            assert!(is_closed(&p, &g));
            assert_eq!(g.comp(&p, 0, 0), DgMorphism::identity(&p, &a));
            assert_eq!(g.comp(&p, n + 1, n + 1), DgMorphism::identity(&p, &c));
        }
    }

    #[test]
    fn nonsplit_extension_admits_no_section() {
        let p = fixtures::dual_numbers(2);
        let x = eps_extension(&p);
        assert!(validate_tw(&p, &x).all_passed());
        let f = split_comparison(&p, &x, 2).unwrap();
        assert!(is_closed(&p, &f));
        assert!(split_section(&p, &x, 2).unwrap().is_none());
    }

    #[test]
    fn direct_sum_satisfies_biproduct_identities() {
        let p = fixtures::two_vertex_quiver();
        let xs = sample_complexes(&p, 41, 2);
        let s = direct_sum(&p, &xs[0], &xs[1]);
        assert!(validate_tw(&p, &s.object).all_passed());
        for m in [&s.inj1, &s.inj2, &s.proj1, &s.proj2] {
            assert!(is_closed(&p, m));
        }
        assert_eq!(
            tw_compose(&p, &s.proj1, &s.inj1),
            TwMorphism::identity(&p, &xs[0])
        );
        assert_eq!(
            tw_compose(&p, &s.proj2, &s.inj2),
            TwMorphism::identity(&p, &xs[1])
        );
        assert!(tw_compose(&p, &s.proj2, &s.inj1).is_zero());
        let glued = tw_compose(&p, &s.inj1, &s.proj1).add(&tw_compose(&p, &s.inj2, &s.proj2));
        assert_eq!(glued, TwMorphism::identity(&p, &s.object));
    }

    #[test]
    fn concentrated_objects_shift_as_expected() {
        let p = fixtures::semisimple_point();
        let a = SumObject::of(&[0, 0]);
        for i in [-2, 0, 3] {
            let shifted = shift(&p, &TwObject::concentrated(&a, 0), -i);
            assert_eq!(shifted, TwObject::concentrated(&a, i));
        }
    }
}
