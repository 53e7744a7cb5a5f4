//! Convolution sets of Bruhat cells in Coxeter groups.
//!
//! The crate computes the set `x₁ * x₂` of relative positions obtained by
//! composing orbit correspondences, checks that its Bruhat-minimal element is
//! the group product `x₁x₂` and its maximal element the Demazure product, and
//! cross-checks the combinatorics against brute-force flag varieties of
//! `GL_n` over small prime fields.

pub mod cli;
pub mod convolution;
pub mod coxeter;
pub mod geometry;
pub mod verify;
