//! Factorization of SU(2) loops.
//!
//! Loops are truncated Laurent series with 2×2 matrix coefficients. The crate
//! builds loops from root subgroup coordinates `(η, χ, ζ)`, computes their
//! Birkhoff factorization `g = g₋ g₀ g₊` from finite sections of the block
//! Toeplitz operator, converts to the triangular factorization `g = l m a u`,
//! and recovers `(η, χ, ζ)` from the Taylor coefficients of `l₂₁*/l₁₁*` and
//! `u₂₁/u₂₂` by peeling one coordinate at a time.
//!
//! Coefficients are generic over [`Scalar`]: [`num_complex::Complex64`] for
//! numerics and [`Exact`] (Gaussian rationals) for the combinatorial oracle.

pub mod assembly;
pub mod error;
pub mod experiment;
pub mod factorization;
pub mod loops;
pub mod oracle;
pub mod rootsub;
pub mod scalar;
pub mod series;
pub mod solver;

/// Library version, echoed in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use assembly::TriangularFactorization;
pub use error::{Error, Result};
pub use factorization::BirkhoffFactorization;
pub use loops::{Mat2, MatrixLoop};
pub use rootsub::{RootSubgroupCoordinates, Side};
pub use scalar::{Exact, Scalar};
pub use series::{LaurentSeries, Orientation, Part, Window};
