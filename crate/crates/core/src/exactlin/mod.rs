//! Exact linear algebra over prime fields.
//!
//! Subspaces are kept as reduced row-echelon bases of sparse rows. Elimination
//! is deterministic: pivots are always the first nonzero column of a row.

mod field;
mod space;
mod tracked;

pub use field::{FieldSpec, DEFAULT_CHARACTERISTIC};
pub use space::{rank_of, rref, Echelon, Mat, RowSpace, SparseVec};
pub use tracked::TrackedBasis;
