//! Exact finite combinatorics: finite-sum sets, pair sets, very sparse sets
//! with unique-support decoding, and the prefix-monotone tree enumeration.

mod fs;
mod genset;
mod index;
mod sparse;
mod tree;

pub use fs::{fs, fs_bits, pairs, subset_sum_decode, SumBits};
pub use genset::GenSet;
pub use index::{Index, IndexDomain, IndexSet};
pub use sparse::{
    certify_very_sparse, certify_very_sparse_seq, generate_very_sparse, CertificationOutcome,
    CertificationReport, GrowthRule, VerySparseSet,
};
pub use tree::{TreeBijection, TreeSeq};
