//! Lattice-based subset-sum solvers with exact rational certificates.
//!
//! Everything on the correctness path runs over arbitrary-precision
//! integers and rationals: Gram-Schmidt data, LLL reducedness reports,
//! Babai residual bounds and tester certificates are exact, never
//! floating point.
//!
//! The crate provides three solver families for the subset-sum problem
//! `sum e_i a_i = T` over `e in {0,1}^n`:
//!
//! * [`lo_classic`] — reduce a scaled `(n+1)`-dimensional lattice once per
//!   target and scan for a `{0,1}` certificate row;
//! * [`truncated`] — reduce the target-free truncation of that lattice and
//!   walk to the target with the nearest-plane algorithm;
//! * [`modular`] — reduce one lattice built from the weights modulo a
//!   suitably large prime, extract multipliers, and thereafter decide any
//!   number of targets with a single exact linear solve each.
//!
//! [`instance`] generates reproducible random instances in the ranges each
//! method is designed for.

pub mod babai;
pub mod basis;
pub mod error;
pub mod gso;
pub mod hnf;
pub mod instance;
pub mod lo_classic;
pub mod matrix;
pub mod modular;
mod numutil;
pub mod primes;
pub mod reduction;
pub mod residue;
pub mod truncated;

pub use basis::IntBasis;
pub use error::{Error, Result};
pub use gso::{gram_schmidt, lattice_volume, GsoData, Volume};
pub use matrix::{dual_basis, rational_rank, solve_rational, RatMatrix};
pub use reduction::{is_lll_reduced, lll_reduce, LllReduction, ReducednessReport, ReductionParams};
pub use residue::symmetric_residue;

#[cfg(test)]
mod proptests;
