//! Exact computations in the orbit method for nilpotent Lie algebras over ℚ
//! with p-adic lattice bookkeeping.
//!
//! The crate works throughout with arbitrary-precision rationals, a fixed
//! prime p, and the lattice spanned by the distinguished basis of a nilpotent
//! Lie algebra. On top of that it provides:
//!
//! * [`scalars`] — rationals with p-adic valuation,
//! * [`linalg`] — exact row-echelon linear algebra and p-saturated lattice bases,
//! * [`lie`] — nilpotent Lie algebra presentations, central series, flags,
//!   quotients and level-n deformations,
//! * [`forms`] — linear forms, polarisations, reducing quadruples,
//! * [`weyl`] — normal-ordered Weyl algebra arithmetic,
//! * [`pbw`] — PBW monomials and straightening,
//! * [`dixmier`] — the differential-operator realisation of induced modules
//!   and degree-truncated annihilator kernels,
//! * [`coadjoint`] — exp(ad u), coadjoint twists, lattice bounds and
//!   orbit-level kernel comparisons,
//! * [`io`] / [`catalog`] / [`corpus`] — file format, bundled algebras and
//!   the randomised test corpus.

pub mod catalog;
pub mod coadjoint;
pub mod corpus;
pub mod dixmier;
pub mod forms;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod pbw;
pub mod scalars;
pub mod weyl;

use std::fmt;

/// Errors shared by all modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid Lie algebra presentation:\n{0}")]
    Validation(lie::ValidationReport),
    #[error("{0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn pre(msg: impl fmt::Display) -> Self {
        Error::Precondition(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
