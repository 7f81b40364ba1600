//! Variables, assignments, conditional atoms and the GCPP table.

mod plaus;
mod scheme;
mod table;
mod varset;

pub use plaus::{Payload, Plaus, Rank};
pub use scheme::{Assignment, Assignments, CondAtom, Scheme, Variable};
pub use table::{GcppTable, GcppViolation, MeasureKind, MAX_TABLE_ATOMS};
pub use varset::{VarSet, MAX_VARIABLES};

pub(crate) use table::{checked_atom_count, fullness_witness, gcpp_violations, LabelView};
