//! Scalars, skew-Hermitian matrix algebras over ℝ, ℂ and ℍ, and their groups.

pub mod basis;
mod element;
mod matrix;
mod quaternion;

pub use element::{adjoint, bracket, group_exp, inner, AlgElement, FieldTag, GroupElement, UNITARY_TOL};
pub(crate) use element::adjoint_unchecked;
pub use matrix::QMatrix;
pub use quaternion::Quaternion;
