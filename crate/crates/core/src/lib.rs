//! A desk-scale laboratory for convergence along partition regular maps.
//!
//! Everything infinite in the theory is cut to an explicit half-open window
//! `[0, bound)` and every existential claim is replaced by a finite,
//! independently re-verifiable certificate: limit witnesses carry their
//! epsilon ladder and removal sets, cluster witnesses carry a generator set
//! whose image sits inside a level set, descent certificates carry the
//! `(child, removal)` data of the middle claims. Searches are deterministic
//! and report their bounds on a miss.

pub mod combinatorics;
pub mod convergence;
mod error;
pub mod exec;
pub mod partition_regular;
pub mod realization;
pub mod souslin;

pub use error::{Error, Result};
pub use exec::run_with_threads;
