//! Combinatorics of the quantum alcove model.
//!
//! The crate is organized bottom-up:
//!
//! * [`rootsys`] — finite irreducible root systems and Weyl group arithmetic;
//! * [`qbg`] — the (parabolic) quantum Bruhat graph, reflection orderings,
//!   shellability paths, and Deodhar lifts;
//! * [`alcove`] — lambda-chains of roots and affine-reflection bookkeeping;
//! * [`model`] — admissible subsets, quantum LS paths, and the
//!   statistic-preserving bijections between the two models;
//! * [`ktheory`] — truncated K-group arithmetic, Chevalley expansions, and the
//!   R-operator calculus with its Yang-Baxter property;
//! * [`qk_flag`] — the type-A quantum K-Chevalley coefficients, reordering
//!   algorithm, and degree bounds.

pub mod alcove;
pub mod ktheory;
pub mod model;
pub mod qbg;
pub mod qk_flag;
pub mod rootsys;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported Cartan type/rank: {0}")]
    UnsupportedType(String),
    #[error("Weyl group size limit exceeded (limit {limit})")]
    SizeLimit { limit: usize },
    #[error("weight is not dominant: {0}")]
    NotDominant(String),
    #[error("weight is not anti-dominant: {0}")]
    NotAntiDominant(String),
    #[error("zero weight has no chain")]
    ZeroWeight,
    #[error("invalid lambda-chain: {0}")]
    InvalidChain(String),
    #[error("word is not reduced")]
    NonReducedWord,
    #[error("segment does not match the expected pattern: {0}")]
    PatternMismatch(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
