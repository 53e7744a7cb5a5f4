//! Coxeter systems, canonical elements and the Bruhat order.
//!
//! Elements are stored by their ShortLex-least reduced word together with an
//! exact backend state (permutation, dihedral word or integer root matrix), so
//! equality and ordering are purely syntactic while arithmetic stays cheap.

mod backend;
mod bruhat;
mod classify;
mod element;
mod matrix;
mod system;

pub use bruhat::DEFAULT_ORACLE_CAP;
pub use element::{Element, ElementSet, SystemId, Word};
pub use matrix::{CoxeterMatrix, MatrixEntry, Order, SystemSpec, MAX_RANK};
pub use system::{CoxeterSystem, Realization, Reflection, RootWitness, DEFAULT_ENUMERATION_CAP};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported Coxeter matrix: {0}")]
    UnsupportedMatrix(String),
    #[error("generator {index} out of range for rank {rank}")]
    InvalidGenerator { index: usize, rank: usize },
    #[error("elements belong to different Coxeter systems")]
    SystemMismatch,
    #[error("operation requires a finite Coxeter group")]
    InfiniteGroup,
    #[error("enumeration cap of {cap} elements exceeded")]
    CapExceeded { cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
