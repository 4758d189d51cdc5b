//! Multidifferential operators, the Gerstenhaber calculus and the
//! associativity oracles built on it.

pub mod gerstenhaber;
pub mod multidiff;
pub mod polyvector;
pub mod star;

pub use gerstenhaber::{bracket_series, circle, gerstenhaber_bracket, gerstenhaber_insert, hochschild_d, OpSeries};
pub use multidiff::{MultiDiffOp, Signature};
pub use polyvector::{schouten_jacobi_defect, PolyVector};
pub use star::{monomials, StarProduct, TripleDefect};
