//! SU(2) Chern–Simons spectra of 1/n-surgeries on two-bridge knots, and an
//! exact deduction ledger for the r_s family of homology-cobordism
//! invariants.
//!
//! The pipeline: a two-generator knot group presentation produces an exact
//! Riley polynomial; the A-polynomial cuts out the surgery representation
//! classes; Kirk–Klassen path integration assigns each class its
//! Chern–Simons value mod ℤ with a certified error bound; the ledger turns
//! computed spectra and asserted geometric facts into exact r_s values,
//! independence certificates, and d_∞ bounds.

pub mod algebra;
pub mod cli;
pub mod csintegrator;
pub mod linalg;
pub mod numerics;
pub mod presentations;
pub mod repfinder;
pub mod riley;
pub mod rscalc;

pub use numerics::{AppComplex, PrecisionPolicy};
