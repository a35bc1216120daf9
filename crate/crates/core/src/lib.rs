//! Computational probes of amenability for finitely presented algebras.
//!
//! Everything is exact: subspaces are row-reduced over GF(p) inside a finite
//! window of normal words, and every ratio is an exact rational.

pub mod algebra;
pub mod bundled;
pub mod error;
pub mod exactlin;
pub mod exhaustion;
pub mod folner;
pub mod growth;
pub mod measure;
pub mod modrank;
pub mod paradox;
pub mod rational;
pub mod report;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
