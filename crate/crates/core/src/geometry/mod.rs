//! Complete flags in `𝔽_p^n`, their relative positions, geometric
//! convolution of Schubert cells, and torus transport between Borels.
//!
//! Everything is brute force, so the sweeps are capped at `n ≤ 4` over
//! `𝔽₂` and `n ≤ 3` over `𝔽₃` and `𝔽₅`.

mod flag;
mod linalg;
mod permutation;
mod torus;

use thiserror::Error;

use crate::coxeter::CoxeterError;

pub use flag::{
    check_caps, enumerate_flags, geometric_convolve, rank_table, relpos, schubert_count, Flag,
    FlagVariety,
};
pub use linalg::{MatrixGF, PrimeField};
pub use permutation::Permutation;
pub use torus::{
    borel, cartan_equivariance_check, intersection, torus_transport, transport_stats,
    TorusElement, TransportStats, CARTAN_BUDGET, FACTOR_CHECKS_PER_PAIR,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("unsupported field size {0}; expected one of 2, 3, 5")]
    UnsupportedField(u8),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error("flags or matrices of different dimension or field")]
    DimensionMismatch,
    #[error("matrix does not lie in the intersection of the two Borel subgroups")]
    NotInIntersection,
    #[error("the torus of GL_n(F_2) is trivial; torus transport needs p >= 3")]
    FieldTooSmall,
    #[error("system is not of type A_{} (needed for permutations of {n} points)", n.saturating_sub(1))]
    NotTypeA { n: usize },
    #[error("invalid permutation {0}")]
    InvalidPermutation(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}
