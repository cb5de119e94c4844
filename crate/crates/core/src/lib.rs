//! Exact-arithmetic analysis of weighted shift operators on rooted directed
//! trees.
//!
//! Trees are finite cores with finitely many infinite rays whose weights
//! follow closed-form tails, so per-vertex quantities stabilize and suprema
//! over the infinite vertex set are computable exactly in `BigRational`
//! arithmetic: operator norms of shift powers, norm attainment with
//! witnesses, operator-class membership tests, and spectra of the associated
//! diagonal operators.

pub mod class;
pub mod fixtures;
pub mod gen;
pub mod norm;
pub mod rat;
pub mod spectra;
pub mod tree;
pub mod word;

pub use rat::Rat;
pub use tree::{TreeSpec, ValidatedTree, VertexId};
