//! seplab: a desk-scale laboratory for comparing classical and
//! quantum-capable learners on number-theoretic concept classes.
//!
//! The crate generates reference instances (prime groups and RSA-style
//! moduli), defines concept classes whose examples can be produced without
//! any secret inversion, runs learners with and without a simulated
//! quantum capability oracle, and scores everything in a PAC evaluation
//! harness. A companion guide lives in `book/`; its code snippets compile
//! and run as doc-tests.

#[cfg(doctest)]
mod book;
pub mod concepts;
pub mod error;
pub mod harness;
pub mod instances;
pub mod learners;
pub mod numtheory;
pub mod reductions;
pub mod rng;

pub use error::{Error, Result};

/// Version tag stamped into every persisted JSON artifact.
pub const SCHEMA_VERSION: u32 = 1;
