//! Bundled example presentations used by the test suites and shipped as CLI
//! fixtures.

use crate::dgcat::{DgPresentation, PresentationBuilder};
use crate::linalg::{Field, Matrix};

fn f2() -> Field {
    Field::fp(2).expect("2 is prime")
}

/// One object `k` with endomorphisms spanned by the identity in degree 0.
/// The smallest semisimple example: every bounded complex splits.
pub fn semisimple_point() -> DgPresentation {
    let f = f2();
    let mut b = PresentationBuilder::new("fixC", f);
    b.object("k");
    b.hom("k", "k", 0, 1).unwrap();
    b.comp("k", "k", "k", 0, 0, Matrix::from_i64(f, 1, 1, &[1])).unwrap();
    b.identity("k", vec![f.one()]).unwrap();
    b.build().expect("fixture is well formed")
}

/// One object `T` with endomorphism algebra `F_2[eps]/(eps^2)` where `eps`
/// sits in degree `-n` and `d(eps) = 0`. The generic source of nonsplit
/// n-exact sequences.
pub fn dual_numbers(n: u32) -> DgPresentation {
    let f = f2();
    let d = -(n as i64);
    let mut b = PresentationBuilder::new(&format!("fixA{n}"), f);
    b.object("T");
    b.hom("T", "T", 0, 1).unwrap();
    b.hom("T", "T", d, 1).unwrap();
    let unit = Matrix::from_i64(f, 1, 1, &[1]);
    b.comp("T", "T", "T", 0, 0, unit.clone()).unwrap();
    b.comp("T", "T", "T", 0, d, unit.clone()).unwrap();
    b.comp("T", "T", "T", d, 0, unit).unwrap();
    // eps . eps lands in degree 2d, which is zero: the tensor is omitted
    b.identity("T", vec![f.one()]).unwrap();
    b.build().expect("fixture is well formed")
}

/// Path category of the two-vertex quiver `v1 -> v2` over `F_2`, concentrated
/// in degree 0. The ordinary-exactness comparison fixture.
pub fn two_vertex_quiver() -> DgPresentation {
    let f = f2();
    let mut b = PresentationBuilder::new("fixQ", f);
    b.object("v1");
    b.object("v2");
    b.hom("v1", "v1", 0, 1).unwrap();
    b.hom("v2", "v2", 0, 1).unwrap();
    b.hom("v1", "v2", 0, 1).unwrap();
    let unit = Matrix::from_i64(f, 1, 1, &[1]);
    b.comp("v1", "v1", "v1", 0, 0, unit.clone()).unwrap();
    b.comp("v2", "v2", "v2", 0, 0, unit.clone()).unwrap();
    b.comp("v1", "v1", "v2", 0, 0, unit.clone()).unwrap();
    b.comp("v1", "v2", "v2", 0, 0, unit).unwrap();
    b.identity("v1", vec![f.one()]).unwrap();
    b.identity("v2", vec![f.one()]).unwrap();
    b.build().expect("fixture is well formed")
}

/// All bundled presentations, by fixture name.
pub fn all() -> Vec<DgPresentation> {
    vec![
        semisimple_point(),
        dual_numbers(1),
        dual_numbers(2),
        dual_numbers(3),
        two_vertex_quiver(),
    ]
}
