//! Conditional independence structures and the graphoid axioms.

mod axioms;
mod closure;
mod extract;
mod structure;

pub use axioms::{check_axiom, first_violation, satisfies, satisfies_all, Axiom, AxiomViolation};
pub use closure::closure;
pub use extract::{eq_upto_undef, extract_i, extract_i_prime, holds_i, holds_i_prime};
pub use structure::{IndependenceStructure, Triple, MAX_STRUCTURE_VARIABLES};

pub(crate) use extract::{holds_i_prime_view, holds_i_view, structure_from};
