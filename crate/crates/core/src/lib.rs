//! Dualizability analysis for finite automatic algebras.
//!
//! An automatic algebra is a partial automaton made total by a zero: states
//! and letters are elements, `q·a` is the transition, everything else is `0`.

pub mod algebra;
pub mod catalog;
pub mod classifier;
pub mod error;
pub mod format;
pub mod groups;
pub mod ops;
pub mod par;
pub mod powers;
pub mod random;
pub mod structure;
pub mod terms;
pub mod witness;

#[cfg(any(test, feature = "oracles"))]
pub mod oracle;
#[cfg(any(test, feature = "oracles"))]
pub mod suites;

pub use algebra::{AutomaticAlgebra, Element, Word};
pub use classifier::{classify, Certificate, Outcome, Verdict};
pub use error::Error;
