//! Hom complexes of twisted complexes and their homotopy quotients.
//!
//! The morphism space between two twisted complexes in each degree is a
//! finite dimensional vector space with a deterministic block basis indexed
//! by component pairs. Materializing the differential as a matrix reduces
//! every homotopy-theoretic question to exact linear algebra: homotopy
//! classes are a subquotient, invertibility up to homotopy is a single
//! linear system, and chain maps between induced complexes in the zeroth
//! cohomology category are a kernel modulo an image.
//!
//! Besides the plain homotopy quotient, three smaller quotients are
//! supported in which the witnessing homotopies must vanish on the edge
//! components next to one or both endpoints. These are the hom spaces of
//! the categories in which extension data is compared.

use crate::dgcat::{
    assembled_diff_matrix, cohomology, compose, DgMorphism, DgPresentation, SumObject,
};
use crate::linalg::{subquotient, FieldElem, Matrix, Subquotient};
use crate::twisted::{
    is_closed, sgn, tw_compose, tw_differential, TwError, TwMorphism, TwObject,
};
use rand::Rng;
use std::collections::BTreeMap;

/// Deterministic basis layout of the degree `r` morphism space between two
/// twisted complexes: for each source index `i` and target index `j`, the
/// generator-level hom basis of degree `i - j + r`.
#[derive(Debug, Clone)]
pub struct TwHomLayout {
    pub total: usize,
    blocks: Vec<(i64, i64, usize, usize)>,
}

impl TwHomLayout {
    pub fn blocks(&self) -> &[(i64, i64, usize, usize)] {
        &self.blocks
    }

    pub fn block(&self, i: i64, j: i64) -> Option<(usize, usize)> {
        self.blocks
            .iter()
            .find(|(bi, bj, _, _)| *bi == i && *bj == j)
            .map(|&(_, _, off, dim)| (off, dim))
    }
}

pub fn tw_hom_layout(p: &DgPresentation, x: &TwObject, y: &TwObject, r: i64) -> TwHomLayout {
    let mut blocks = Vec::new();
    let mut off = 0;
    for (&i, a) in x.terms() {
        for (&j, b) in y.terms() {
            let dim = crate::dgcat::HomLayout::new(p, a, b, i - j + r).total;
            if dim > 0 {
                blocks.push((i, j, off, dim));
                off += dim;
            }
        }
    }
    TwHomLayout { total: off, blocks }
}

/// Flattens a morphism against a layout of matching degree.
pub fn tw_coords(
    p: &DgPresentation,
    layout: &TwHomLayout,
    f: &TwMorphism,
) -> Vec<FieldElem> {
    let mut out = vec![p.field().zero(); layout.total];
    for &(i, j, off, dim) in &layout.blocks {
        if let Some(c) = f.comps().get(&(i, j)) {
            debug_assert_eq!(c.coords.len(), dim);
            out[off..off + dim].clone_from_slice(&c.coords);
        }
    }
    out
}

/// Rebuilds a morphism from flat coordinates against a layout.
pub fn tw_from_coords(
    p: &DgPresentation,
    x: &TwObject,
    y: &TwObject,
    r: i64,
    layout: &TwHomLayout,
    coords: &[FieldElem],
) -> TwMorphism {
    assert_eq!(coords.len(), layout.total, "coordinate length mismatch");
    let mut comps = BTreeMap::new();
    for &(i, j, off, dim) in &layout.blocks {
        let slice = coords[off..off + dim].to_vec();
        if slice.iter().all(FieldElem::is_zero) {
            continue;
        }
        comps.insert(
            (i, j),
            DgMorphism {
                source: x.term(i),
                target: y.term(j),
                degree: i - j + r,
                coords: slice,
            },
        );
    }
    TwMorphism::from_comps(p, x.clone(), y.clone(), r, comps).expect("layout coordinates")
}

/// The hom complex between two twisted complexes over a window of degrees,
/// with its differentials materialized as matrices.
#[derive(Debug, Clone)]
pub struct TwHomComplex {
    source: TwObject,
    target: TwObject,
    lo: i64,
    hi: i64,
    layouts: BTreeMap<i64, TwHomLayout>,
    diffs: BTreeMap<i64, Matrix>,
}

pub fn hom_complex(p: &DgPresentation, x: &TwObject, y: &TwObject) -> TwHomComplex {
    let (dlo, dhi) = p.hom_degree_range();
    let mut lo = -2;
    let mut hi = 1;
    for &i in x.terms().keys() {
        for &j in y.terms().keys() {
            lo = lo.min(j - i + dlo);
            hi = hi.max(j - i + dhi);
        }
    }
    let mut layouts = BTreeMap::new();
    for r in lo..=(hi + 1) {
        layouts.insert(r, tw_hom_layout(p, x, y, r));
    }
    let mut diffs = BTreeMap::new();
    for r in lo..=hi {
        let dom = &layouts[&r];
        let cod = &layouts[&(r + 1)];
        let m = Matrix::from_fn_cols(p.field(), cod.total, dom.total, |k| {
            let mut coords = vec![p.field().zero(); dom.total];
            coords[k] = p.field().one();
            let f = tw_from_coords(p, x, y, r, dom, &coords);
            tw_coords(p, cod, &tw_differential(p, &f))
        });
        diffs.insert(r, m);
    }
    TwHomComplex {
        source: x.clone(),
        target: y.clone(),
        lo,
        hi,
        layouts,
        diffs,
    }
}

impl TwHomComplex {
    pub fn source(&self) -> &TwObject {
        &self.source
    }

    pub fn target(&self) -> &TwObject {
        &self.target
    }

    pub fn degree_window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn layout(&self, p: &DgPresentation, r: i64) -> TwHomLayout {
        self.layouts
            .get(&r)
            .cloned()
            .unwrap_or_else(|| tw_hom_layout(p, &self.source, &self.target, r))
    }

    pub fn dim(&self, r: i64) -> usize {
        self.layouts.get(&r).map_or(0, |l| l.total)
    }

    /// The differential matrix from degree `r` to `r + 1`.
    pub fn dmat(&self, p: &DgPresentation, r: i64) -> Matrix {
        self.diffs
            .get(&r)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(p.field(), self.dim(r + 1), self.dim(r)))
    }
}

/// Which homotopies are allowed to witness equivalence. The restricted
/// variants force the edge components next to one or both endpoints of the
/// index window `[0, n+1]` (respectively `[1, n+1]`, `[0, n]`) to vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HomotopyClass {
    Free,
    FixEnds,
    FixLeft,
    FixRight,
}

impl HomotopyClass {
    /// Component pairs of degree -1 homotopies that are forced to vanish.
    pub fn forbidden(&self, n: i64) -> Vec<(i64, i64)> {
        match self {
            HomotopyClass::Free => vec![],
            HomotopyClass::FixEnds => vec![(1, 0), (n + 1, n)],
            HomotopyClass::FixLeft => vec![(1, 0)],
            HomotopyClass::FixRight => vec![(n + 1, n)],
        }
    }
}

/// Columns of the degree -1 differential restricted to allowed homotopies.
fn boundary_matrix(
    p: &DgPresentation,
    hc: &TwHomComplex,
    class: HomotopyClass,
    n: i64,
) -> Matrix {
    let full = hc.dmat(p, -1);
    let forbidden = class.forbidden(n);
    if forbidden.is_empty() {
        return full;
    }
    let layout = hc.layout(p, -1);
    let mut kept = Vec::new();
    for &(i, j, off, dim) in layout.blocks() {
        if forbidden.contains(&(i, j)) {
            continue;
        }
        kept.extend(off..off + dim);
    }
    Matrix::from_fn_cols(p.field(), full.rows(), kept.len(), |k| full.col(kept[k]))
}

/// Closed degree 0 morphisms modulo an allowed class of homotopies,
/// presented as a subquotient of the degree 0 hom space.
#[derive(Debug, Clone)]
pub struct QuotientHomSpace {
    complex: TwHomComplex,
    class: HomotopyClass,
    n: i64,
    subq: Subquotient,
}

pub fn quotient_hom(
    p: &DgPresentation,
    x: &TwObject,
    y: &TwObject,
    class: HomotopyClass,
    n: i64,
) -> Result<QuotientHomSpace, TwError> {
    let hc = hom_complex(p, x, y);
    let cycles = hc.dmat(p, 0).kernel_basis();
    let boundaries = boundary_matrix(p, &hc, class, n);
    let subq = subquotient(&cycles, &boundaries)?;
    Ok(QuotientHomSpace {
        complex: hc,
        class,
        n,
        subq,
    })
}

impl QuotientHomSpace {
    pub fn dim(&self) -> usize {
        self.subq.dim()
    }

    pub fn complex(&self) -> &TwHomComplex {
        &self.complex
    }

    pub fn class(&self) -> HomotopyClass {
        self.class
    }

    pub fn cut(&self) -> i64 {
        self.n
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.subq
    }

    /// Class coordinates of a closed morphism.
    pub fn class_of(&self, p: &DgPresentation, f: &TwMorphism) -> Result<Vec<FieldElem>, TwError> {
        let layout = self.complex.layout(p, 0);
        let coords = tw_coords(p, &layout, f);
        self.subq
            .class_of(&coords)
            .ok_or_else(|| TwError::NotClosed("class of a non-closed morphism".to_string()))
    }

    /// A closed representative of a class.
    pub fn rep_of(&self, p: &DgPresentation, class: &[FieldElem]) -> TwMorphism {
        let layout = self.complex.layout(p, 0);
        let coords = self.subq.rep_of(class);
        tw_from_coords(
            p,
            self.complex.source(),
            self.complex.target(),
            0,
            &layout,
            &coords,
        )
    }

    pub fn is_zero_class(&self, p: &DgPresentation, f: &TwMorphism) -> Result<bool, TwError> {
        Ok(self.class_of(p, f)?.iter().all(FieldElem::is_zero))
    }
}

/// Dimension of the full homotopy quotient between two twisted complexes.
pub fn htw_dim(p: &DgPresentation, x: &TwObject, y: &TwObject) -> Result<usize, TwError> {
    Ok(quotient_hom(p, x, y, HomotopyClass::Free, 0)?.dim())
}

/// Matrix of postcomposition `g -> f . g` from the degree `r` hom space
/// out of `w` into the source of `f`.
pub fn postcompose_matrix(
    p: &DgPresentation,
    w: &TwObject,
    f: &TwMorphism,
    r: i64,
) -> Matrix {
    let dom = tw_hom_layout(p, w, f.source(), r);
    let cod = tw_hom_layout(p, w, f.target(), r + f.degree());
    Matrix::from_fn_cols(p.field(), cod.total, dom.total, |k| {
        let mut coords = vec![p.field().zero(); dom.total];
        coords[k] = p.field().one();
        let g = tw_from_coords(p, w, f.source(), r, &dom, &coords);
        tw_coords(p, &cod, &tw_compose(p, f, &g))
    })
}

/// Matrix of precomposition `g -> g . f` from the degree `r` hom space
/// out of the target of `f` into `w`.
pub fn precompose_matrix(
    p: &DgPresentation,
    f: &TwMorphism,
    w: &TwObject,
    r: i64,
) -> Matrix {
    let dom = tw_hom_layout(p, f.target(), w, r);
    let cod = tw_hom_layout(p, f.source(), w, r + f.degree());
    Matrix::from_fn_cols(p.field(), cod.total, dom.total, |k| {
        let mut coords = vec![p.field().zero(); dom.total];
        coords[k] = p.field().one();
        let g = tw_from_coords(p, f.target(), w, r, &dom, &coords);
        tw_coords(p, &cod, &tw_compose(p, &g, f))
    })
}

/// Decides invertibility of a closed degree 0 morphism up to an allowed
/// class of homotopies, as one joint linear system: a closed `g` together
/// with allowed homotopies witnessing `g . f ~ id` and `f . g ~ id`.
pub fn is_iso_in(
    p: &DgPresentation,
    f: &TwMorphism,
    class: HomotopyClass,
    n: i64,
) -> Result<bool, TwError> {
    if f.degree() != 0 {
        return Err(TwError::Shape("isomorphisms have degree 0".to_string()));
    }
    if !is_closed(p, f) {
        return Err(TwError::NotClosed("isomorphism test needs a closed morphism".to_string()));
    }
    let x = f.source();
    let y = f.target();
    let field = p.field();

    let back = hom_complex(p, y, x);
    let hx = hom_complex(p, x, x);
    let hy = hom_complex(p, y, y);
    let closed_rows = back.dmat(p, 1).rows();
    let a = back.dmat(p, 0);
    let b = precompose_matrix(p, f, x, 0);
    let c = postcompose_matrix(p, y, f, 0);
    let d1 = boundary_matrix(p, &hx, class, n);
    let d2 = boundary_matrix(p, &hy, class, n);

    let n_g = back.dim(0);
    let n_1 = d1.cols();
    let n_2 = d2.cols();
    let rows = closed_rows + d1.rows() + d2.rows();
    let cols = n_g + n_1 + n_2;
    let mut system = Matrix::zeros(field, rows, cols);
    system.paste(0, 0, &a);
    system.paste(closed_rows, 0, &b);
    system.paste(closed_rows, n_g, &d1.neg());
    system.paste(closed_rows + d1.rows(), 0, &c);
    system.paste(closed_rows + d1.rows(), n_g + n_1, &d2.neg());

    let mut rhs = vec![field.zero(); rows];
    let idx = tw_coords(p, &hx.layout(p, 0), &TwMorphism::identity(p, x));
    let idy = tw_coords(p, &hy.layout(p, 0), &TwMorphism::identity(p, y));
    rhs[closed_rows..closed_rows + idx.len()].clone_from_slice(&idx);
    rhs[closed_rows + d1.rows()..closed_rows + d1.rows() + idy.len()].clone_from_slice(&idy);

    Ok(system.solve(&rhs)?.is_some())
}

/// The cohomology classes of the two endpoint components of a closed
/// degree 0 morphism on the window `[0, n+1]`.
pub fn st(
    p: &DgPresentation,
    f: &TwMorphism,
    n: i64,
) -> Result<(Vec<FieldElem>, Vec<FieldElem>), TwError> {
    if !is_closed(p, f) {
        return Err(TwError::NotClosed("endpoint classes need a closed morphism".to_string()));
    }
    let class_at = |i: i64| -> Result<Vec<FieldElem>, TwError> {
        let a = f.source().term(i);
        let b = f.target().term(i);
        let h = cohomology(p, &a, &b, 0)?;
        Ok(h.class_of(&f.comp(p, i, i).coords)
            .expect("degree 0 components are cycles"))
    };
    Ok((class_at(0)?, class_at(n + 1)?))
}

/// Replaces a closed morphism by a homotopic one whose two endpoint
/// components are the prescribed cycles, provided they have the right
/// cohomology classes; `None` when the classes do not match.
pub fn endpoint_normalize(
    p: &DgPresentation,
    f: &TwMorphism,
    a: &DgMorphism,
    c: &DgMorphism,
    n: i64,
) -> Result<Option<TwMorphism>, TwError> {
    if !is_closed(p, f) || f.degree() != 0 {
        return Err(TwError::NotClosed("endpoint normalization needs a closed morphism".to_string()));
    }
    let x = f.source();
    let y = f.target();
    if a.source != x.term(0) || a.target != y.term(0) || a.degree != 0 {
        return Err(TwError::Shape("left endpoint replacement has wrong shape".to_string()));
    }
    if c.source != x.term(n + 1) || c.target != y.term(n + 1) || c.degree != 0 {
        return Err(TwError::Shape("right endpoint replacement has wrong shape".to_string()));
    }
    let d0 = assembled_diff_matrix(p, &x.term(0), &y.term(0), -1);
    let delta0 = f.comp(p, 0, 0).sub(a);
    let Some(phi0) = d0.solve(&delta0.coords)? else {
        return Ok(None);
    };
    let dn = assembled_diff_matrix(p, &x.term(n + 1), &y.term(n + 1), -1);
    let delta_n = f.comp(p, n + 1, n + 1).sub(c);
    let Some(phin) = dn.solve(&delta_n.coords)? else {
        return Ok(None);
    };
    let mut comps = BTreeMap::new();
    if !phi0.iter().all(FieldElem::is_zero) {
        comps.insert(
            (0, 0),
            DgMorphism {
                source: x.term(0),
                target: y.term(0),
                degree: -1,
                coords: phi0,
            },
        );
    }
    if !phin.iter().all(FieldElem::is_zero) {
        let m = DgMorphism {
            source: x.term(n + 1),
            target: y.term(n + 1),
            degree: -1,
            coords: phin,
        }
        .scale(&sgn(p.field(), n + 1));
        comps.insert((n + 1, n + 1), m);
    }
    let xi = TwMorphism::from_comps(p, x.clone(), y.clone(), -1, comps)?;
    let out = f.sub(&tw_differential(p, &xi));
    debug_assert_eq!(out.comp(p, 0, 0), *a);
    debug_assert_eq!(out.comp(p, n + 1, n + 1), *c);
    Ok(Some(out))
}

/// Solves `d(psi) = target` with the prescribed components of `psi` forced
/// to zero; `None` when no such homotopy exists.
pub fn solve_homotopy(
    p: &DgPresentation,
    target: &TwMorphism,
    forbidden: &[(i64, i64)],
) -> Result<Option<TwMorphism>, TwError> {
    let x = target.source();
    let y = target.target();
    let r = target.degree() - 1;
    let dom = tw_hom_layout(p, x, y, r);
    let cod = tw_hom_layout(p, x, y, r + 1);
    let mut kept = Vec::new();
    for &(i, j, off, dim) in dom.blocks() {
        if forbidden.contains(&(i, j)) {
            continue;
        }
        kept.extend(off..off + dim);
    }
    let m = Matrix::from_fn_cols(p.field(), cod.total, kept.len(), |k| {
        let mut coords = vec![p.field().zero(); dom.total];
        coords[kept[k]] = p.field().one();
        let g = tw_from_coords(p, x, y, r, &dom, &coords);
        tw_coords(p, &cod, &tw_differential(p, &g))
    });
    let rhs = tw_coords(p, &cod, target);
    let Some(sol) = m.solve(&rhs)? else {
        return Ok(None);
    };
    let mut coords = vec![p.field().zero(); dom.total];
    for (slot, v) in kept.iter().zip(sol) {
        coords[*slot] = v;
    }
    Ok(Some(tw_from_coords(p, x, y, r, &dom, &coords)))
}

/// A uniformly random closed morphism of the given degree.
pub fn random_cycle<R: Rng>(
    p: &DgPresentation,
    rng: &mut R,
    x: &TwObject,
    y: &TwObject,
    r: i64,
) -> TwMorphism {
    let hc = hom_complex(p, x, y);
    let kern = hc.dmat(p, r).kernel_basis();
    let layout = hc.layout(p, r);
    let mut coords = vec![p.field().zero(); layout.total];
    for col in 0..kern.cols() {
        let s = p.field().random_elem(rng);
        for row in 0..kern.rows() {
            coords[row] = coords[row].add(&kern[(row, col)].mul(&s));
        }
    }
    tw_from_coords(p, x, y, r, &layout, &coords)
}

/// Matrix of postcomposition with a degree 0 cycle `g` in `hom(b, c)` on
/// zeroth cohomology: `H^0(a, b) -> H^0(a, c)`.
pub fn h0_postcompose(
    p: &DgPresentation,
    a: &SumObject,
    b: &SumObject,
    c: &SumObject,
    g: &DgMorphism,
) -> Result<Matrix, TwError> {
    let dom = cohomology(p, a, b, 0)?;
    let cod = cohomology(p, a, c, 0)?;
    Ok(Matrix::from_fn_cols(p.field(), cod.dim(), dom.dim(), |k| {
        let mut class = vec![p.field().zero(); dom.dim()];
        class[k] = p.field().one();
        let rep = DgMorphism {
            source: a.clone(),
            target: b.clone(),
            degree: 0,
            coords: dom.rep_of(&class),
        };
        cod.class_of(&compose(p, g, &rep).coords)
            .expect("degree 0 morphisms are cycles")
    }))
}

/// Matrix of precomposition with a degree 0 cycle `g` in `hom(a, b)` on
/// zeroth cohomology: `H^0(b, c) -> H^0(a, c)`.
pub fn h0_precompose(
    p: &DgPresentation,
    a: &SumObject,
    b: &SumObject,
    c: &SumObject,
    g: &DgMorphism,
) -> Result<Matrix, TwError> {
    let dom = cohomology(p, b, c, 0)?;
    let cod = cohomology(p, a, c, 0)?;
    Ok(Matrix::from_fn_cols(p.field(), cod.dim(), dom.dim(), |k| {
        let mut class = vec![p.field().zero(); dom.dim()];
        class[k] = p.field().one();
        let rep = DgMorphism {
            source: b.clone(),
            target: c.clone(),
            degree: 0,
            coords: dom.rep_of(&class),
        };
        cod.class_of(&compose(p, &rep, g).coords)
            .expect("degree 0 morphisms are cycles")
    }))
}

fn bar_edge_rep(
    p: &DgPresentation,
    b: &crate::twisted::BarComplex,
    i: i64,
) -> Result<Option<DgMorphism>, TwError> {
    let Some(class) = b.diffs.get(&i) else {
        return Ok(None);
    };
    let src = b.terms[&i].clone();
    let tgt = b.terms[&(i + 1)].clone();
    let h = cohomology(p, &src, &tgt, 0)?;
    Ok(Some(DgMorphism {
        source: src,
        target: tgt,
        degree: 0,
        coords: h.rep_of(class),
    }))
}

/// Dimension of the chain-homotopy classes of degree 0 chain maps between
/// two complexes in the zeroth cohomology category, computed entirely in
/// class coordinates: chain maps are the kernel of the commutation
/// constraints, homotopies map in through the two-sided boundary formula.
pub fn k_hom_dim(
    p: &DgPresentation,
    xb: &crate::twisted::BarComplex,
    yb: &crate::twisted::BarComplex,
) -> Result<usize, TwError> {
    let field = p.field();
    let zero_sum = SumObject::zero;
    let xt = |i: i64| xb.terms.get(&i).cloned().unwrap_or_else(zero_sum);
    let yt = |i: i64| yb.terms.get(&i).cloned().unwrap_or_else(zero_sum);

    let mut keys: Vec<i64> = xb.terms.keys().chain(yb.terms.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();

    // component spaces of a degree 0 map
    let mut f_dims = BTreeMap::new();
    let mut f_off = BTreeMap::new();
    let mut total_f = 0;
    for &i in &keys {
        let d = cohomology(p, &xt(i), &yt(i), 0)?.dim();
        f_off.insert(i, total_f);
        f_dims.insert(i, d);
        total_f += d;
    }

    // commutation constraints at each edge
    let mut rows = Vec::new();
    let mut total_c = 0;
    for &i in &keys {
        let c = cohomology(p, &xt(i), &yt(i + 1), 0)?.dim();
        if c > 0 {
            rows.push((i, total_c, c));
            total_c += c;
        }
    }
    let mut constraints = Matrix::zeros(field, total_c, total_f);
    for &(i, roff, _) in &rows {
        if let Some(dy) = bar_edge_rep(p, yb, i)? {
            let post = h0_postcompose(p, &xt(i), &yt(i), &yt(i + 1), &dy)?;
            constraints.paste(roff, f_off[&i], &post);
        }
        if let Some(dx) = bar_edge_rep(p, xb, i)? {
            let pre = h0_precompose(p, &xt(i), &xt(i + 1), &yt(i + 1), &dx)?;
            constraints.paste(roff, f_off[&(i + 1)], &pre.neg());
        }
    }
    let chain_maps = constraints.kernel_basis();

    // null-homotopic maps
    let mut h_blocks = Vec::new();
    let mut total_h = 0;
    for &i in &keys {
        let d = cohomology(p, &xt(i), &yt(i - 1), 0)?.dim();
        if d > 0 {
            h_blocks.push((i, total_h, d));
            total_h += d;
        }
    }
    let mut boundaries = Matrix::zeros(field, total_f, total_h);
    for &(i, hoff, hdim) in &h_blocks {
        let dom = cohomology(p, &xt(i), &yt(i - 1), 0)?;
        for k in 0..hdim {
            let mut class = vec![field.zero(); hdim];
            class[k] = field.one();
            let rep = DgMorphism {
                source: xt(i),
                target: yt(i - 1),
                degree: 0,
                coords: dom.rep_of(&class),
            };
            if let Some(dy) = bar_edge_rep(p, yb, i - 1)? {
                let cod = cohomology(p, &xt(i), &yt(i), 0)?;
                let v = cod
                    .class_of(&compose(p, &dy, &rep).coords)
                    .expect("degree 0 morphisms are cycles");
                for (t, val) in v.into_iter().enumerate() {
                    let cur = boundaries[(f_off[&i] + t, hoff + k)].clone();
                    boundaries.set(f_off[&i] + t, hoff + k, cur.add(&val));
                }
            }
            if let Some(dx) = bar_edge_rep(p, xb, i - 1)? {
                let cod = cohomology(p, &xt(i - 1), &yt(i - 1), 0)?;
                let v = cod
                    .class_of(&compose(p, &rep, &dx).coords)
                    .expect("degree 0 morphisms are cycles");
                for (t, val) in v.into_iter().enumerate() {
                    let cur = boundaries[(f_off[&(i - 1)] + t, hoff + k)].clone();
                    boundaries.set(f_off[&(i - 1)] + t, hoff + k, cur.add(&val));
                }
            }
        }
    }

    Ok(subquotient(&chain_maps, &boundaries)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::twisted::{
        bar, random_complex, random_raw_morphism, split_section, split_sequence, TwObject,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn samples(p: &DgPresentation, seed: u64, count: usize) -> Vec<TwObject> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| random_complex(p, &mut rng, 0, 3, 2, 500).expect("sampling"))
            .collect()
    }

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
    fn homotopy_classes_match_chain_homotopy_classes_on_generators() {
        for (k, p) in fixtures::all().iter().enumerate() {
            let mut xs = samples(p, 50 + k as u64, 5);
            if p.name().contains("dual") {
                xs.push(eps_extension(p));
            }
            for x in &xs {
                for b in 0..p.object_count() {
                    let target = TwObject::concentrated(&SumObject::generator(b), 0);
                    let lhs = htw_dim(p, x, &target).unwrap();
                    let rhs =
                        k_hom_dim(p, &bar(p, x).unwrap(), &bar(p, &target).unwrap()).unwrap();
                    assert_eq!(lhs, rhs, "{} against {}", x.describe(p), p.object_name(b));
                }
            }
        }
    }

    #[test]
    fn quotient_classes_round_trip_and_kill_boundaries() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let xs = samples(&p, 60, 4);
        for pair in xs.windows(2) {
            let q = quotient_hom(&p, &pair[0], &pair[1], HomotopyClass::Free, 2).unwrap();
            for k in 0..q.dim() {
                let mut class = vec![p.field().zero(); q.dim()];
                class[k] = p.field().one();
                let rep = q.rep_of(&p, &class);
                assert!(is_closed(&p, &rep));
                assert_eq!(q.class_of(&p, &rep).unwrap(), class);
            }
            let psi = random_raw_morphism(&p, &mut rng, &pair[0], &pair[1], -1);
            let boundary = tw_differential(&p, &psi);
            assert!(q.is_zero_class(&p, &boundary).unwrap());
        }
    }

    #[test]
    fn restricted_quotients_see_more_than_the_free_one() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let mut witnessed = false;
        'outer: for _ in 0..40 {
            let x = random_complex(&p, &mut rng, 0, 3, 2, 500).unwrap();
            let y = random_complex(&p, &mut rng, 0, 3, 2, 500).unwrap();
            let free = quotient_hom(&p, &x, &y, HomotopyClass::Free, 2).unwrap();
            let fixed = quotient_hom(&p, &x, &y, HomotopyClass::FixEnds, 2).unwrap();
            assert!(fixed.dim() >= free.dim());
            let layout = tw_hom_layout(&p, &x, &y, -1);
            for &(i, j, off, dim) in layout.blocks() {
                if !((i, j) == (1, 0) || (i, j) == (3, 2)) {
                    continue;
                }
                for k in 0..dim {
                    let mut coords = vec![p.field().zero(); layout.total];
                    coords[off + k] = p.field().one();
                    let phi = tw_from_coords(&p, &x, &y, -1, &layout, &coords);
                    let b = tw_differential(&p, &phi);
                    assert!(free.is_zero_class(&p, &b).unwrap());
                    if !fixed.is_zero_class(&p, &b).unwrap() {
                        witnessed = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(witnessed, "no boundary outside the restricted ideal found");
    }

    #[test]
    fn iso_detection_accepts_homotopic_identities_and_rejects_zero() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let x = eps_extension(&p);
        let id = TwMorphism::identity(&p, &x);
        for class in [
            HomotopyClass::Free,
            HomotopyClass::FixEnds,
            HomotopyClass::FixLeft,
            HomotopyClass::FixRight,
        ] {
            assert!(is_iso_in(&p, &id, class, 2).unwrap());
        }
        let psi = random_raw_morphism(&p, &mut rng, &x, &x, -1);
        let moved = id.add(&tw_differential(&p, &psi));
        assert!(is_iso_in(&p, &moved, HomotopyClass::Free, 2).unwrap());
        let zero = TwMorphism::zero(x.clone(), x.clone(), 0);
        assert!(htw_dim(&p, &x, &x).unwrap() > 0);
        assert!(!is_iso_in(&p, &zero, HomotopyClass::Free, 2).unwrap());
    }

    #[test]
    fn fixed_end_isos_are_free_isos_on_samples() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let xs = samples(&p, 90, 3);
        for x in &xs {
            let psi = random_raw_morphism(&p, &mut rng, x, x, -1);
            let f = TwMorphism::identity(&p, x).add(&tw_differential(&p, &psi));
            if is_iso_in(&p, &f, HomotopyClass::FixEnds, 2).unwrap() {
                assert!(is_iso_in(&p, &f, HomotopyClass::Free, 2).unwrap());
            }
        }
    }

    #[test]
    fn endpoint_normalization_moves_within_the_class() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let xs = samples(&p, 100, 4);
        for pair in xs.windows(2) {
            let f = tw_differential(&p, &random_raw_morphism(&p, &mut rng, &pair[0], &pair[1], -1));
            let f00 = f.comp(&p, 0, 0);
            let f33 = f.comp(&p, 3, 3);
            let d0 = assembled_diff_matrix(&p, &pair[0].term(0), &pair[1].term(0), -1);
            let phi: Vec<FieldElem> = (0..d0.cols()).map(|_| p.field().random_elem(&mut rng)).collect();
            let a = DgMorphism {
                source: pair[0].term(0),
                target: pair[1].term(0),
                degree: 0,
                coords: f00
                    .coords
                    .iter()
                    .zip(d0.mul_vec(&phi))
                    .map(|(u, v)| u.sub(&v))
                    .collect(),
            };
            let out = endpoint_normalize(&p, &f, &a, &f33, 2).unwrap().unwrap();
            assert!(is_closed(&p, &out));
            assert_eq!(out.comp(&p, 0, 0), a);
            assert_eq!(out.comp(&p, 3, 3), f33);
            let q = quotient_hom(&p, &pair[0], &pair[1], HomotopyClass::Free, 2).unwrap();
            assert_eq!(q.class_of(&p, &out).unwrap(), q.class_of(&p, &f).unwrap());
        }
    }

    #[test]
    fn homotopies_solve_with_prescribed_zero_components() {
        let p = fixtures::dual_numbers(2);
        let mut rng = ChaCha8Rng::seed_from_u64(111);
        let xs = samples(&p, 110, 4);
        let forbidden = [(1, 0), (3, 2)];
        for pair in xs.windows(2) {
            let layout = tw_hom_layout(&p, &pair[0], &pair[1], -1);
            let mut coords: Vec<FieldElem> = (0..layout.total)
                .map(|_| p.field().random_elem(&mut rng))
                .collect();
            for &(i, j, off, dim) in layout.blocks() {
                if forbidden.contains(&(i, j)) {
                    for c in coords.iter_mut().skip(off).take(dim) {
                        *c = p.field().zero();
                    }
                }
            }
            let psi = tw_from_coords(&p, &pair[0], &pair[1], -1, &layout, &coords);
            let target = tw_differential(&p, &psi);
            let solved = solve_homotopy(&p, &target, &forbidden).unwrap().unwrap();
            assert_eq!(tw_differential(&p, &solved), target);
            for key in &forbidden {
                assert!(!solved.comps().contains_key(key));
            }
        }
    }

    #[test]
    fn section_of_split_sequence_has_identity_endpoint_classes() {
        let p = fixtures::dual_numbers(2);
        let a = SumObject::generator(0);
        let c = SumObject::of(&[0, 0]);
        let nseq = split_sequence(&p, &a, &c, 2).unwrap();
        let g = split_section(&p, &nseq, 2).unwrap().unwrap();
        let (s, t) = st(&p, &g, 2).unwrap();
        let ha = cohomology(&p, &a, &a, 0).unwrap();
        let hc = cohomology(&p, &c, &c, 0).unwrap();
        let ida = DgMorphism::identity(&p, &a);
        let idc = DgMorphism::identity(&p, &c);
        assert_eq!(s, ha.class_of(&ida.coords).unwrap());
        assert_eq!(t, hc.class_of(&idc.coords).unwrap());
    }

    #[test]
    fn random_cycles_are_closed_and_class_stable_under_boundaries() {
        let p = fixtures::two_vertex_quiver();
        let mut rng = ChaCha8Rng::seed_from_u64(121);
        let xs = samples(&p, 120, 2);
        let q = quotient_hom(&p, &xs[0], &xs[1], HomotopyClass::Free, 2).unwrap();
        for _ in 0..5 {
            let z = random_cycle(&p, &mut rng, &xs[0], &xs[1], 0);
            assert!(is_closed(&p, &z));
            let psi = random_raw_morphism(&p, &mut rng, &xs[0], &xs[1], -1);
            let moved = z.add(&tw_differential(&p, &psi));
            assert_eq!(
                q.class_of(&p, &z).unwrap(),
                q.class_of(&p, &moved).unwrap()
            );
        }
    }
}
