//! Exact computations with formal triangular matrix rings over prime fields.
//!
//! The crate builds finite-dimensional algebras and their modules from
//! structure constants, the triple categories attached to a bimodule, the
//! exact subcategories of triples cut out by finite module inventories, and
//! the stable categories of those subcategories when they are Frobenius.

pub mod error;
pub mod algebra;
pub mod bimodule;
pub mod diagram;
pub mod fixtures;
pub mod io;
pub mod linalg;
pub mod rep;
pub mod stable;
pub mod subcat;

pub use error::{Error, Result};
pub use linalg::{Matrix, Subspace};
