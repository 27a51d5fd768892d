//! JSON form of a [`Triple`].
//!
//! ```json
//! {
//!   "label": "t1_sphere(n=2)",
//!   "field": "real",
//!   "n": 3,
//!   "g_basis": [[0.0, 0.7071067811865475, ...], ...],
//!   "h_basis": [...],
//!   "k_basis": [],
//!   "m_basis": [...],
//!   "p_basis": [...],
//!   "base_point": [...]
//! }
//! ```
//!
//! Every matrix is a flat row-major array of `n * n * c` reals, where `c` is
//! 1, 2 or 4 for real, complex and quaternion entries; entry `(r, s)` occupies
//! indices `(r * n + s) * c .. (r * n + s + 1) * c` in the order `w, x, y, z`.
//! `m_basis`, `p_basis` and `base_point` are optional. Bases that are already
//! orthonormal are kept bit-for-bit; other spanning sets are orthonormalized.

use serde::{Deserialize, Serialize};

use super::{Subspace, Triple, BASIS_TOL};
use crate::algebra::{AlgElement, FieldTag};
use crate::error::{Error, Result};

/// Largest matrix size accepted from a document.
pub const MAX_DOCUMENT_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleDocument {
    pub label: String,
    pub field: FieldTag,
    pub n: usize,
    pub g_basis: Vec<Vec<f64>>,
    pub h_basis: Vec<Vec<f64>>,
    pub k_basis: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_basis: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_point: Option<Vec<f64>>,
}

fn elements(field: FieldTag, n: usize, rows: &[Vec<f64>]) -> Result<Vec<AlgElement>> {
    rows.iter().map(|r| AlgElement::from_components(field, n, r)).collect()
}

fn subspace(field: FieldTag, n: usize, rows: &[Vec<f64>]) -> Result<Subspace> {
    let elems = elements(field, n, rows)?;
    let verbatim = Subspace { field, n, basis: elems };
    if verbatim.gram_error() <= BASIS_TOL {
        Ok(verbatim)
    } else {
        Subspace::from_spanning(field, n, &verbatim.basis)
    }
}

fn rows(s: &Subspace) -> Vec<Vec<f64>> {
    s.basis().iter().map(AlgElement::to_components).collect()
}

impl Triple {
    pub fn to_document(&self) -> TripleDocument {
        TripleDocument {
            label: self.label.clone(),
            field: self.field,
            n: self.n,
            g_basis: rows(&self.g),
            h_basis: rows(&self.h),
            k_basis: rows(&self.k),
            m_basis: Some(rows(&self.m)),
            p_basis: Some(rows(&self.p)),
            base_point: self.base_point.as_ref().map(AlgElement::to_components),
        }
    }

    pub fn from_document(doc: &TripleDocument) -> Result<Self> {
        let (field, n) = (doc.field, doc.n);
        if n == 0 || n > MAX_DOCUMENT_SIZE {
            return Err(Error::Input(format!("matrix size {n} outside 1..={MAX_DOCUMENT_SIZE}")));
        }
        let g = subspace(field, n, &doc.g_basis)?;
        let h = subspace(field, n, &doc.h_basis)?;
        let k = subspace(field, n, &doc.k_basis)?;
        let m = match &doc.m_basis {
            Some(r) => Some(Subspace::from_orthonormal(field, n, elements(field, n, r)?)?),
            None => None,
        };
        let p = match &doc.p_basis {
            Some(r) => Some(Subspace::from_orthonormal(field, n, elements(field, n, r)?)?),
            None => None,
        };
        let triple = Triple::from_bases(doc.label.clone(), g, h, k, m, p)?;
        match &doc.base_point {
            Some(a) => triple.with_base_point(AlgElement::from_components(field, n, a)?),
            None => Ok(triple),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("triple document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TripleDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }
}
