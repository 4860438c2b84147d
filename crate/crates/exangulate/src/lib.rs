//! Exact computational calculus of bounded one-sided twisted complexes over
//! finitely presented connective dg-categories.
//!
//! The engine decides n-exactness of (n+2)-term twisted complexes, verifies
//! the axioms of an n-exact dg-category against a catalog of sequences, and
//! checks the induced higher exangulated structure on the degree-zero
//! homotopy category. All linear algebra is exact, over the rationals or a
//! prime field; nothing in this crate touches floating point.

pub mod linalg;
pub mod report;

pub mod dgcat;
pub mod twisted;

pub mod homotopy;

pub mod exactness;

pub mod verifier;

pub mod splice;

pub mod cli;

pub mod fixtures;
