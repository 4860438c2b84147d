//! Exact linear algebra over Q and prime fields.
//!
//! Everything downstream reduces to ranks, kernels, solutions of linear
//! systems and subquotient bases computed here. Determinism is part of the
//! contract: row reduction scans columns left to right, `solve` returns the
//! solution whose free coordinates are zero, and subquotient bases are picked
//! in reduced-echelon pivot order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::Index;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar {text:?} over {field}")]
    BadScalar { text: String, field: Field },
    #[error("column {col} of the boundary matrix lies outside the cycle space")]
    BoundaryNotContained { col: usize },
}

/// Coefficient field: the rationals or a prime field F_p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Q,
    Fp(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn fp(p: u64) -> Result<Field, LinalgError> {
        if is_prime(p) {
            Ok(Field::Fp(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            Field::Q => FieldElem::Q(BigRational::zero()),
            Field::Fp(p) => FieldElem::Fp { p: *p, r: 0 },
        }
    }

    pub fn one(&self) -> FieldElem {
        match self {
            Field::Q => FieldElem::Q(BigRational::one()),
            Field::Fp(p) => FieldElem::Fp { p: *p, r: 1 },
        }
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        match self {
            Field::Q => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let m = n.rem_euclid(*p as i64) as u64;
                FieldElem::Fp { p: *p, r: m }
            }
        }
    }

    /// Parses the canonical text form: `a` or `a/b` over Q, a residue over F_p.
    pub fn parse_scalar(&self, s: &str) -> Result<FieldElem, LinalgError> {
        let bad = || LinalgError::BadScalar {
            text: s.to_string(),
            field: *self,
        };
        let s = s.trim();
        match self {
            Field::Q => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let n: BigInt = num.parse().map_err(|_| bad())?;
                let d: BigInt = den.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(FieldElem::Q(BigRational::new(n, d)))
            }
            Field::Fp(p) => {
                let n: i128 = s.parse().map_err(|_| bad())?;
                let r = n.rem_euclid(*p as i128) as u64;
                Ok(FieldElem::Fp { p: *p, r })
            }
        }
    }

    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> FieldElem {
        match self {
            // small integers keep rational test data readable
            Field::Q => self.from_i64(rng.gen_range(-4..=4)),
            Field::Fp(p) => FieldElem::Fp {
                p: *p,
                r: rng.gen_range(0..*p),
            },
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "q"),
            Field::Fp(p) => write!(f, "fp:{p}"),
        }
    }
}

/// An exact scalar tagged with its field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Q(BigRational),
    Fp { p: u64, r: u64 },
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Q(_) => Field::Q,
            FieldElem::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(x) => x.is_zero(),
            FieldElem::Fp { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Q(x) => x.is_one(),
            FieldElem::Fp { r, .. } => *r == 1,
        }
    }

    pub fn add(&self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp { p, r: a }, FieldElem::Fp { p: q, r: b }) if p == q => {
                FieldElem::Fp { p: *p, r: (a + b) % p }
            }
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }

    pub fn sub(&self, rhs: &FieldElem) -> FieldElem {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp { p, r: a }, FieldElem::Fp { p: q, r: b }) if p == q => FieldElem::Fp {
                p: *p,
                r: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => panic!("field mismatch in scalar arithmetic"),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp { p, r } => FieldElem::Fp {
                p: *p,
                r: if *r == 0 { 0 } else { p - r },
            },
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            FieldElem::Fp { p, r } => {
                // Fermat: r^(p-2) mod p
                let mut acc: u128 = 1;
                let mut base = *r as u128;
                let mut e = p - 2;
                let m = *p as u128;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                FieldElem::Fp { p: *p, r: acc as u64 }
            }
        })
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else if x.denom().is_negative() {
                    // num-rational keeps denominators positive; defensive only
                    write!(f, "{}/{}", -x.numer(), -x.denom())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            FieldElem::Fp { r, .. } => write!(f, "{r}"),
        }
    }
}

/// Dense row-major matrix over a fixed field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    fn index(&self, (r, c): (usize, usize)) -> &FieldElem {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            field,
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix from integer entries, mapped into the field.
    pub fn from_i64(field: Field, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            entries: data.iter().map(|&n| field.from_i64(n)).collect(),
        }
    }

    /// Column `j` is `f(j)`; the workhorse for turning linear closures
    /// (compose with a fixed morphism, apply a differential) into matrices.
    pub fn from_fn_cols(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize) -> Vec<FieldElem>,
    ) -> Matrix {
        let mut m = Matrix::zeros(field, rows, cols);
        for j in 0..cols {
            let col = f(j);
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn random<R: Rng>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        let entries = (0..rows * cols).map(|_| field.random_elem(rng)).collect();
        Matrix { field, rows, cols, entries }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn col(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn from_cols(field: Field, rows: usize, cols: Vec<Vec<FieldElem>>) -> Matrix {
        let c = cols.len();
        assert!(cols.iter().all(|col| col.len() == rows), "ragged columns");
        let mut m = Matrix::zeros(field, rows, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self[(i, j)].clone());
            }
        }
        m
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(FieldElem::neg).collect(),
        }
    }

    pub fn scale(&self, s: &FieldElem) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc = acc.add(&self[(i, j)].mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "shape mismatch in hstack");
        let mut m = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self[(i, j)].clone());
            }
            for j in 0..rhs.cols {
                m.set(i, self.cols + j, rhs[(i, j)].clone());
            }
        }
        m
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "shape mismatch in vstack");
        let mut m = Matrix::zeros(self.field, self.rows + rhs.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self[(i, j)].clone());
            }
        }
        for i in 0..rhs.rows {
            for j in 0..self.cols {
                m.set(self.rows + i, j, rhs[(i, j)].clone());
            }
        }
        m
    }

    /// Copies `block` into `self` with top-left corner at `(r, c)`.
    pub fn paste(&mut self, r: usize, c: usize, block: &Matrix) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r + i, c + j, block[(i, j)].clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut m = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self[(r0 + i, c0 + j)].clone());
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot column indices,
    /// ascending. Column scan order is left to right, which fixes every
    /// downstream basis choice.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if pr != row {
                for j in 0..m.cols {
                    m.entries.swap(pr * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m[(row, col)].inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = m[(row, j)].mul(&inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let factor = m[(r, col)].clone();
                    for j in 0..m.cols {
                        let v = m[(r, j)].sub(&factor.mul(&m[(row, j)]));
                        m.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// First solution of `self * x = b` in reduced-echelon pivot order: free
    /// coordinates are zero, pivot coordinates are read off the echelon form.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Vec<FieldElem>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "solve: matrix has {} rows, right-hand side has {} entries",
                self.rows,
                b.len()
            )));
        }
        let rhs = Matrix::from_cols(self.field, self.rows, vec![b.to_vec()]);
        let aug = self.hstack(&rhs);
        let (red, pivots) = aug.rref_with_pivots();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the constant column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = red[(r, self.cols)].clone();
        }
        Ok(Some(x))
    }

    /// Basis of the kernel, one column per free coordinate, ascending.
    pub fn kernel_basis(&self) -> Matrix {
        let (red, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = red[(r, f)].neg();
            }
            cols.push(v);
        }
        Matrix::from_cols(self.field, self.cols, cols)
    }

    /// The columns of `self` at the echelon pivot positions: a deterministic
    /// basis of the column space.
    pub fn independent_columns(&self) -> Matrix {
        let (_, pivots) = self.rref_with_pivots();
        let cols = pivots.iter().map(|&c| self.col(c)).collect();
        Matrix::from_cols(self.field, self.rows, cols)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// A subquotient Z/B of an ambient coordinate space, with a chosen basis.
///
/// `cycles` and `boundaries` hold independent spanning columns in ambient
/// coordinates, `basis` holds representatives of the chosen classes, and
/// `project` maps Z-coordinates (with respect to `cycles`) to Z/B-coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subquotient {
    ambient_dim: usize,
    cycles: Matrix,
    boundaries: Matrix,
    basis: Matrix,
    project: Matrix,
}

/// Builds `span(cycles)/span(boundaries)`, verifying containment.
pub fn subquotient(cycles: &Matrix, boundaries: &Matrix) -> Result<Subquotient, LinalgError> {
    if cycles.rows() != boundaries.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "subquotient: cycles have ambient dimension {}, boundaries {}",
            cycles.rows(),
            boundaries.rows()
        )));
    }
    let ambient_dim = cycles.rows();
    let z = cycles.independent_columns();
    for col in 0..boundaries.cols() {
        if z.solve(&boundaries.col(col))?.is_none() {
            return Err(LinalgError::BoundaryNotContained { col });
        }
    }
    let b = boundaries.independent_columns();
    // pivots of [B | Z] beyond the B block pick class representatives
    let (_, pivots) = b.hstack(&z).rref_with_pivots();
    let basis_cols: Vec<Vec<FieldElem>> = pivots
        .iter()
        .filter(|&&c| c >= b.cols())
        .map(|&c| z.col(c - b.cols()))
        .collect();
    let basis = Matrix::from_cols(cycles.field(), ambient_dim, basis_cols);
    // express each Z basis column over [B | basis]; the quotient coordinates
    // are the trailing block
    let frame = b.hstack(&basis);
    let mut proj_cols = Vec::with_capacity(z.cols());
    for j in 0..z.cols() {
        let y = frame
            .solve(&z.col(j))?
            .expect("cycle columns lie in the span of boundaries and representatives");
        proj_cols.push(y[b.cols()..].to_vec());
    }
    let project = Matrix::from_cols(cycles.field(), basis.cols(), proj_cols);
    Ok(Subquotient {
        ambient_dim,
        cycles: z,
        boundaries: b,
        basis,
        project,
    })
}

impl Subquotient {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn cycles(&self) -> &Matrix {
        &self.cycles
    }

    pub fn boundaries(&self) -> &Matrix {
        &self.boundaries
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn project(&self) -> &Matrix {
        &self.project
    }

    /// Class coordinates of an ambient vector; `None` if it is not a cycle.
    pub fn class_of(&self, v: &[FieldElem]) -> Option<Vec<FieldElem>> {
        let zc = self.cycles.solve(v).ok()??;
        Some(self.project.mul_vec(&zc))
    }

    /// Ambient representative of a class coordinate vector.
    pub fn rep_of(&self, class: &[FieldElem]) -> Vec<FieldElem> {
        self.basis.mul_vec(class)
    }

    /// True when the ambient vector is a cycle whose class is zero.
    pub fn is_boundary(&self, v: &[FieldElem]) -> bool {
        self.class_of(v).map_or(false, |c| c.iter().all(FieldElem::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> Field {
        Field::fp(2).unwrap()
    }

    #[test]
    fn parse_and_display_rationals() {
        let q = Field::Q;
        let x = q.parse_scalar("-6/4").unwrap();
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(q.parse_scalar("7").unwrap().to_string(), "7");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("a").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::fp(5).unwrap();
        let three = f5.from_i64(3);
        assert_eq!(three.inv().unwrap(), f5.from_i64(2));
        assert_eq!(f5.from_i64(-1), f5.from_i64(4));
        assert!(Field::fp(6).is_err());
        assert!(Field::fp(1).is_err());
    }

    #[test]
    fn solve_upper_triangular_f2() {
        // [[1,1],[0,1]] x = (0,1) has the unique solution (1,1) over F_2
        let m = Matrix::from_i64(f2(), 2, 2, &[1, 1, 0, 1]);
        let b = vec![f2().from_i64(0), f2().from_i64(1)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(x, vec![f2().from_i64(1), f2().from_i64(1)]);
    }

    #[test]
    fn solve_reports_dimension_mismatch() {
        let m = Matrix::from_i64(f2(), 2, 2, &[1, 0, 0, 1]);
        let b = vec![f2().one()];
        assert!(matches!(m.solve(&b), Err(LinalgError::DimensionMismatch(_))));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let m = Matrix::from_i64(Field::Q, 2, 1, &[1, 1]);
        let b = vec![Field::Q.from_i64(1), Field::Q.from_i64(2)];
        assert_eq!(m.solve(&b).unwrap(), None);
    }

    #[test]
    fn solve_prefers_zero_free_coordinates() {
        // x + y = 1 over Q: pivot in column 0, free column 1 stays zero
        let m = Matrix::from_i64(Field::Q, 1, 2, &[1, 1]);
        let b = vec![Field::Q.from_i64(1)];
        let x = m.solve(&b).unwrap().unwrap();
        assert_eq!(x, vec![Field::Q.from_i64(1), Field::Q.from_i64(0)]);
    }

    #[test]
    fn kernel_of_row_vector_f2() {
        // ker [1 1] over F_2 is spanned by (1,1)
        let m = Matrix::from_i64(f2(), 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col(0), vec![f2().one(), f2().one()]);
        assert!(m.mul(&k).is_zero());
    }

    #[test]
    fn rank_nullity_on_seeded_random_f2_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let rows = rng.gen_range(0..6);
            let cols = rng.gen_range(0..6);
            let m = Matrix::random(f2(), rows, cols, &mut rng);
            let k = m.kernel_basis();
            assert_eq!(k.rows(), cols);
            assert_eq!(m.rank() + k.cols(), cols);
            assert!(m.mul(&k).is_zero() || k.cols() == 0);
        }
    }

    #[test]
    fn solve_exactness_both_ways_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let m = Matrix::random(f2(), rows, cols, &mut rng);
            // image vectors are solvable, and the solution reproduces them
            let x = (0..cols).map(|_| f2().random_elem(&mut rng)).collect::<Vec<_>>();
            let b = m.mul_vec(&x);
            let sol = m.solve(&b).unwrap().expect("image vector must be solvable");
            assert_eq!(m.mul_vec(&sol), b);
            // a vector outside the column space must be rejected
            let probe: Vec<FieldElem> = (0..rows).map(|_| f2().random_elem(&mut rng)).collect();
            if m.independent_columns().hstack(&Matrix::from_cols(f2(), rows, vec![probe.clone()])).rank()
                > m.rank()
            {
                assert_eq!(m.solve(&probe).unwrap(), None);
            }
        }
    }

    #[test]
    fn subquotient_of_plane_by_line() {
        // Z = span{e1, e2} in Q^3, B = span{e1}: one class, represented by e2
        let z = Matrix::from_i64(Field::Q, 3, 2, &[1, 0, 0, 1, 0, 0]);
        let b = Matrix::from_i64(Field::Q, 3, 1, &[1, 0, 0]);
        let sq = subquotient(&z, &b).unwrap();
        assert_eq!(sq.dim(), 1);
        assert_eq!(sq.basis().col(0), z.col(1));
        // the class map kills boundaries and fixes the representative
        assert!(sq.is_boundary(&b.col(0)));
        let one = vec![Field::Q.from_i64(1)];
        assert_eq!(sq.class_of(&sq.rep_of(&one)).unwrap(), one);
        assert_eq!(sq.class_of(&vec![Field::Q.zero(); 3]).unwrap(), vec![Field::Q.from_i64(0)]);
        assert_eq!(sq.class_of(&[Field::Q.zero(), Field::Q.zero(), Field::Q.one()]), None);
    }

    #[test]
    fn subquotient_rejects_noncontained_boundaries() {
        let z = Matrix::from_i64(Field::Q, 2, 1, &[1, 0]);
        let b = Matrix::from_i64(Field::Q, 2, 1, &[0, 1]);
        assert!(matches!(
            subquotient(&z, &b),
            Err(LinalgError::BoundaryNotContained { col: 0 })
        ));
    }

    #[test]
    fn subquotient_dimension_is_rank_difference_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..100 {
            let ambient = rng.gen_range(1..6);
            let m = Matrix::random(f2(), ambient, rng.gen_range(0..5), &mut rng);
            let z = m.clone();
            // boundaries: random combinations of the cycle columns
            let combo = Matrix::random(f2(), m.cols(), rng.gen_range(0..4), &mut rng);
            let b = m.mul(&combo);
            let sq = subquotient(&z, &b).unwrap();
            assert_eq!(sq.dim(), z.rank() - b.rank());
            // project annihilates boundaries
            for j in 0..b.cols() {
                assert!(sq.is_boundary(&b.col(j)));
            }
            // project is the identity on representatives
            for j in 0..sq.dim() {
                let mut e = vec![f2().zero(); sq.dim()];
                e[j] = f2().one();
                assert_eq!(sq.class_of(&sq.rep_of(&e)).unwrap(), e);
            }
        }
    }
}
