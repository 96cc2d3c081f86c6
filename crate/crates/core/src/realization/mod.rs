//! The constructive cores of the two realization theorems: tree-indexed
//! families over pairs and finite sums, realized sequences, and machine
//! checkable forms of their three claims.

mod aset;
mod claims;
mod realized;

pub use aset::{ASetHindman, ASetRamsey};
pub use claims::{
    a_set_member, branch_preimages, claim1_witness, claim3_refute, descend, verify_descent,
    Claim3Bounds, Claim3Outcome, DescentCertificate,
};
pub use realized::{RealizedKind, RealizedSequence};
