//! Finitely presented associative algebras over prime fields.
//!
//! A presentation lists generators and rewrite rules `lhs -> rhs` whose
//! right-hand sides are deglex-smaller than their left-hand sides, so
//! rewriting always terminates. Normal words (words containing no left-hand
//! side as a factor) form the canonical basis once the rules are confluent,
//! which [`enumerate_basis`] checks before building a [`CoordinateWindow`].
//!
//! Group algebras are encoded with one inverse generator per generator and
//! the rules `xX -> 1`, `Xx -> 1`.

mod element;
mod parse;
mod presentation;
mod window;
mod word;

pub use element::Element;
pub use presentation::{AlgebraPresentation, PresentationFile, Rule, RuleFile};
pub use window::{enumerate_basis, right_multiply_by_set, right_multiply_subspace, CoordinateWindow};
pub(crate) use window::Translator;
pub use word::Word;
