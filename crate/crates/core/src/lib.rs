//! Numerical Lie theory for homogeneous bundles `H\(G×F)` over `H\G`.
//!
//! The crate models a chain of compact Lie algebras `𝔨 ⊂ 𝔥 ⊂ 𝔤` inside
//! 𝔰𝔬(n), 𝔲(n) or 𝔰𝔭(n), the one-parameter family of left-invariant metrics
//! obtained by shrinking the bi-invariant metric along 𝔥, and decision
//! procedures that look for horizontal zero-curvature planes. Every verdict is
//! a floating-point certificate carrying its residual and tolerance.

pub mod algebra;
pub mod catalog;
pub mod certify;
pub mod cli;
pub mod error;
pub mod flatness;
mod linalg;
mod search;
pub mod triple;

pub use error::{Error, Result};
