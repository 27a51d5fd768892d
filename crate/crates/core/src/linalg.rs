//! Small dense linear-algebra helpers over the component coordinates of a
//! matrix algebra. The Euclidean norm of the component vector is exactly the
//! bi-invariant norm, so the component space is an orthonormal frame.

use nalgebra::{DMatrix, DVector, SVD};

use crate::algebra::AlgElement;
use crate::error::{Error, Result};

pub(crate) fn to_vector(x: &AlgElement) -> DVector<f64> {
    DVector::from_vec(x.to_components())
}

/// Columns are the component vectors of `elements`.
pub(crate) fn column_matrix(rows: usize, elements: &[AlgElement]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(rows, elements.len());
    for (j, e) in elements.iter().enumerate() {
        m.set_column(j, &to_vector(e));
    }
    m
}

/// Modified Gram–Schmidt with one re-orthogonalization pass. Vectors whose
/// remaining norm falls below `drop_tol` (relative to their input norm, and in
/// absolute terms) are discarded.
pub(crate) fn gram_schmidt(vectors: &[AlgElement], drop_tol: f64) -> Vec<AlgElement> {
    let mut out: Vec<AlgElement> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = v.norm();
        if original <= drop_tol {
            continue;
        }
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = r.dot(q);
                r = r.axpy(-c, q);
            }
        }
        let rn = r.norm();
        if rn > drop_tol * original.max(1.0) {
            out.push(r.scale(1.0 / rn));
        }
    }
    out
}

/// Orthonormal basis of the complement of the unit vector `u` in ℝⁿ,
/// returned as the columns of an `n × (n-1)` matrix (Householder reflection).
pub(crate) fn complement_of_unit(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let mut v = u.clone();
    let sign = if u[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign;
    let vv = v.dot(&v);
    let mut h = DMatrix::identity(n, n);
    if vv > 0.0 {
        h -= (&v * v.transpose()) * (2.0 / vv);
    }
    h.columns(1, n - 1).into_owned()
}

/// Smallest singular value of `m` together with its right singular vector.
/// Requires `m.nrows() >= m.ncols() > 0`.
pub(crate) fn smallest_singular(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    debug_assert!(m.ncols() > 0 && m.nrows() >= m.ncols());
    let svd = SVD::new(m.clone(), false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (idx, &sigma) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    (sigma, v_t.row(idx).transpose())
}

pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = SVD::new(m.clone(), false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| a.total_cmp(b));
    s
}

/// Orthonormal basis (columns) of the numerical null space of `m`: right
/// singular vectors with singular value below `threshold`. Any singular value
/// inside `[threshold, threshold * gap)` makes the rank ambiguous and is an error.
pub(crate) fn null_space(m: &DMatrix<f64>, threshold: f64, gap: f64) -> Result<DMatrix<f64>> {
    let cols = m.ncols();
    if cols == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    // pad with zero rows so the SVD returns a full set of right singular vectors
    let work = if m.nrows() < cols {
        let mut padded = DMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = SVD::new(work, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut kernel = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s < threshold {
            kernel.push(v_t.row(i).transpose());
        } else if s < threshold * gap {
            return Err(Error::Degenerate { value: s, low: threshold, high: threshold * gap });
        }
    }
    if kernel.is_empty() {
        return Ok(DMatrix::zeros(cols, 0));
    }
    Ok(DMatrix::from_columns(&kernel))
}
