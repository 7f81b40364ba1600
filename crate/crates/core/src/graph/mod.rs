//! Boundary DAGs, d-separation and factorization of the joint along a DAG.

mod dag;
mod dot;
mod dsep;
mod factorize;

pub use dag::{boundary_dag, BoundaryDag, Dag};
pub use dot::to_dot;
pub use dsep::{d_separated, dag_independencies};
pub use factorize::{combine, factorize, Factorization};
