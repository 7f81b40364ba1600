//! Qualitative conditional probability: equivalence relations (SQCPPs) and
//! preorders (QCPPs) on conditional atoms, and a rule engine that builds
//! them from judgements.

mod infer;
mod preorder;
mod sqcpp;

pub use infer::{infer, infer_with_stages, CiAssumption, CiForm, Inference, QcppProgram, Rule, Stage, Status};
pub use preorder::{preorder_close, qcpp_symmetric_part, Preorder};
pub use sqcpp::{
    check_cross_multiplication, gcpp_from_sqcpp, sqcpp_from_gcpp, validate_sqcpp, CrossViolation, Element, Sqcpp,
    SqcppReport,
};
