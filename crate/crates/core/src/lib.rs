//! Exact construction and verification of formal deformation quantizations.

pub mod algebra;
pub mod berezin;
pub mod error;
pub mod fedosov;
pub mod formats;
pub mod gutt;
pub mod moyal;
pub mod polydiff;
pub mod reduction;
pub mod symmetry;

pub use error::{Error, Result};
