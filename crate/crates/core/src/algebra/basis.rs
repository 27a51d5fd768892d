//! Standard spanning sets for 𝔰𝔬(n), 𝔲(n), 𝔰𝔭(n) and their block subalgebras.

use super::element::{AlgElement, FieldTag};
use super::matrix::QMatrix;
use super::quaternion::Quaternion;

/// `q·E_ab − q̄·E_ba`
pub fn off_diagonal(field: FieldTag, n: usize, a: usize, b: usize, q: Quaternion) -> AlgElement {
    debug_assert!(a != b && field.contains(q));
    let mut m = QMatrix::zeros(n);
    m[(a, b)] = q;
    m[(b, a)] = -q.conj();
    AlgElement::from_matrix_unchecked(field, m)
}

/// Diagonal matrix with the given purely imaginary entries.
pub fn diagonal(field: FieldTag, n: usize, entries: &[(usize, Quaternion)]) -> AlgElement {
    let mut m = QMatrix::zeros(n);
    for &(i, q) in entries {
        debug_assert!(q.w == 0.0 && field.contains(q));
        m[(i, i)] += q;
    }
    AlgElement::from_matrix_unchecked(field, m)
}

/// Spanning set (pairwise orthogonal, not normalized) of the compact algebra
/// 𝔤(k) over `field`, acting on the coordinates `indices` of an `n × n` matrix.
pub fn compact_algebra(field: FieldTag, n: usize, indices: &[usize]) -> Vec<AlgElement> {
    let mut out = Vec::new();
    for &i in indices {
        for &u in field.imaginary_units() {
            out.push(diagonal(field, n, &[(i, u)]));
        }
    }
    for (pos, &a) in indices.iter().enumerate() {
        for &b in &indices[pos + 1..] {
            for &q in field.units() {
                out.push(off_diagonal(field, n, a, b, q));
            }
        }
    }
    out
}

/// Real dimension of 𝔤(k) over `field`.
pub fn compact_dimension(field: FieldTag, k: usize) -> usize {
    k * field.imaginary_units().len() + k * k.saturating_sub(1) / 2 * field.components()
}
