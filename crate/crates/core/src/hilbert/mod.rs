//! Hilbert system for LD: axiom schemas plus modus ponens.

pub mod builder;
pub mod format;
pub mod golden;
pub mod proof;
pub mod transform;

pub use format::{parse_proof, write_proof, ProofFormatError};
pub use proof::{check_proof, Justification, Proof, ProofError, ProofStep, StepFault};
pub use transform::{deduction, deduction_at, necessitate, TransformError};
