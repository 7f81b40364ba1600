//! Generalised conditional probability on product spaces.
//!
//! A [`GcppTable`] assigns a plausibility to every conditional atom `x|y` of a
//! finite [`Scheme`]. From such a table the crate extracts conditional
//! independence structures, checks them against the graphoid axioms, decides
//! the connectivity and coherence conditions under which those axioms are
//! guaranteed, runs a qualitative (equivalence-class) inference engine, and
//! builds boundary DAGs for factorization and d-separation.

pub mod connectivity;
mod error;
pub mod fixtures;
pub mod graph;
pub mod independence;
pub mod measures;
pub mod model;
pub mod qcpp;
pub mod sufficiency;
mod union_find;

pub use error::{Error, Result};
pub use independence::{Axiom, IndependenceStructure, Triple};
pub use model::{Assignment, CondAtom, GcppTable, MeasureKind, Payload, Plaus, Rank, Scheme, VarSet};
pub use union_find::UnionFind;
