use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::QMatrix;
use super::quaternion::Quaternion;
use crate::error::{Error, Result};

/// Tolerance for the unitarity invariant of [`GroupElement`].
pub const UNITARY_TOL: f64 = 1e-10;

/// Scalar field of a matrix algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Real,
    Complex,
    Quaternion,
}

impl FieldTag {
    /// Number of real components stored per matrix entry.
    pub fn components(self) -> usize {
        match self {
            FieldTag::Real => 1,
            FieldTag::Complex => 2,
            FieldTag::Quaternion => 4,
        }
    }

    /// Unit-norm basis of the purely imaginary scalars.
    pub fn imaginary_units(self) -> &'static [Quaternion] {
        match self {
            FieldTag::Real => &[],
            FieldTag::Complex => &[Quaternion::I],
            FieldTag::Quaternion => &[Quaternion::I, Quaternion::J, Quaternion::K],
        }
    }

    /// Unit-norm real basis of the field.
    pub fn units(self) -> &'static [Quaternion] {
        match self {
            FieldTag::Real => &[Quaternion::ONE],
            FieldTag::Complex => &[Quaternion::ONE, Quaternion::I],
            FieldTag::Quaternion => &[Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K],
        }
    }

    pub fn contains(self, q: Quaternion) -> bool {
        match self {
            FieldTag::Real => q.x == 0.0 && q.y == 0.0 && q.z == 0.0,
            FieldTag::Complex => q.y == 0.0 && q.z == 0.0,
            FieldTag::Quaternion => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FieldTag::Real => "real",
            FieldTag::Complex => "complex",
            FieldTag::Quaternion => "quaternion",
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn skew_residual(m: &QMatrix) -> f64 {
    (m + &m.conj_transpose()).frobenius_norm()
}

fn check_field(field: FieldTag, m: &QMatrix) -> Result<()> {
    if m.entries().iter().all(|q| field.contains(*q)) {
        Ok(())
    } else {
        Err(Error::OutsideField { field })
    }
}

/// A skew-Hermitian matrix over ℝ, ℂ or ℍ: a tangent vector at the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgElement {
    field: FieldTag,
    matrix: QMatrix,
}

impl AlgElement {
    /// Validates the field and the skew-Hermitian condition.
    pub fn new(field: FieldTag, matrix: QMatrix) -> Result<Self> {
        check_field(field, &matrix)?;
        let residual = skew_residual(&matrix);
        if residual > 1e-9 * matrix.frobenius_norm().max(1.0) {
            return Err(Error::NotSkewHermitian { residual });
        }
        Ok(Self { field, matrix })
    }

    pub(crate) fn from_matrix_unchecked(field: FieldTag, matrix: QMatrix) -> Self {
        Self { field, matrix }
    }

    pub fn zero(field: FieldTag, n: usize) -> Self {
        Self { field, matrix: QMatrix::zeros(n) }
    }

    /// Builds `Σ coeffs[i] * basis[i]`. All basis elements must share field and size.
    pub fn combination(field: FieldTag, n: usize, basis: &[AlgElement], coeffs: &[f64]) -> Self {
        debug_assert_eq!(basis.len(), coeffs.len());
        let mut out = QMatrix::zeros(n);
        for (b, &c) in basis.iter().zip(coeffs) {
            if c != 0.0 {
                out = out.axpy(c, &b.matrix);
            }
        }
        Self { field, matrix: out }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> Quaternion {
        self.matrix[(r, c)]
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field, right: other.field });
        }
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { field: self.field, matrix: self.matrix.scale(s) }
    }

    /// `self + s * other`; both operands must be compatible.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        debug_assert!(self.check_compatible(other).is_ok());
        Self { field: self.field, matrix: self.matrix.axpy(s, &other.matrix) }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    pub fn norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.matrix.frobenius_dot(&self.matrix)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(1.0 / n)
        }
    }

    /// Unchecked commutator, for hot loops where compatibility is already known.
    pub(crate) fn commutator(&self, other: &Self) -> Self {
        let xy = &self.matrix * &other.matrix;
        let yx = &other.matrix * &self.matrix;
        Self { field: self.field, matrix: &xy - &yx }
    }

    pub(crate) fn dot(&self, other: &Self) -> f64 {
        self.matrix.frobenius_dot(&other.matrix)
    }

    /// The real components of all entries, `field.components()` per entry, row-major.
    pub fn to_components(&self) -> Vec<f64> {
        let c = self.field.components();
        self.matrix.entries().iter().flat_map(|q| q.components().into_iter().take(c)).collect()
    }

    /// Inverse of [`AlgElement::to_components`]; validates length and skew-Hermitian structure.
    pub fn from_components(field: FieldTag, n: usize, values: &[f64]) -> Result<Self> {
        let c = field.components();
        let expected = n.checked_mul(n).and_then(|nn| nn.checked_mul(c));
        if expected != Some(values.len()) {
            return Err(Error::Input(format!(
                "expected {} components for a {n}x{n} {field} matrix, got {}",
                n * n * c,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("non-finite matrix component".into()));
        }
        let entries = values
            .chunks_exact(c)
            .map(|chunk| {
                let mut comps = [0.0; 4];
                comps[..c].copy_from_slice(chunk);
                Quaternion::from_components(comps)
            })
            .collect();
        Self::new(field, QMatrix::from_entries(n, entries))
    }
}

/// A unitary (orthogonal, symplectic) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    field: FieldTag,
    matrix: QMatrix,
}

impl GroupElement {
    pub fn new(field: FieldTag, matrix: QMatrix) -> Result<Self> {
        check_field(field, &matrix)?;
        let residual = unitary_residual(&matrix);
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self { field, matrix })
    }

    pub fn identity(field: FieldTag, n: usize) -> Self {
        Self { field, matrix: QMatrix::identity(n) }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn inverse(&self) -> Self {
        Self { field: self.field, matrix: self.matrix.conj_transpose() }
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field, right: other.field });
        }
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(Self { field: self.field, matrix: &self.matrix * &other.matrix })
    }

    /// `‖g ḡᵀ − I‖`
    pub fn unitarity_residual(&self) -> f64 {
        unitary_residual(&self.matrix)
    }
}

fn unitary_residual(m: &QMatrix) -> f64 {
    let prod = m * &m.conj_transpose();
    (&prod - &QMatrix::identity(m.size())).frobenius_norm()
}

/// `XY − YX`
pub fn bracket(x: &AlgElement, y: &AlgElement) -> Result<AlgElement> {
    x.check_compatible(y)?;
    Ok(x.commutator(y))
}

/// The bi-invariant inner product `Re tr(X · Ȳᵀ)`.
pub fn inner(x: &AlgElement, y: &AlgElement) -> Result<f64> {
    x.check_compatible(y)?;
    Ok(x.dot(y))
}

/// `exp(s · X)`
pub fn group_exp(x: &AlgElement, s: f64) -> GroupElement {
    GroupElement { field: x.field, matrix: x.matrix.scale(s).exp() }
}

/// `g · X · g⁻¹`, with `g⁻¹` taken as the conjugate transpose.
pub fn adjoint(g: &GroupElement, x: &AlgElement) -> Result<AlgElement> {
    if g.field != x.field {
        return Err(Error::FieldMismatch { left: g.field, right: x.field });
    }
    if g.size() != x.size() {
        return Err(Error::SizeMismatch { left: g.size(), right: x.size() });
    }
    Ok(adjoint_unchecked(g, x))
}

pub(crate) fn adjoint_unchecked(g: &GroupElement, x: &AlgElement) -> AlgElement {
    let gx = &g.matrix * &x.matrix;
    AlgElement { field: x.field, matrix: &gx * &g.matrix.conj_transpose() }
}
