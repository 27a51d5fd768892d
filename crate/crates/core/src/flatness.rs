//! Zero-curvature plane criteria.
//!
//! A plane `span{X, Y}` of the deformed metric on `G` is flat iff
//! `[Φ(X), Φ(Y)] = 0` and `[Xʰ, Yʰ] = 0`. A horizontal flat plane of the bundle
//! exists at the point `(g⁻¹, p₀)` iff there are orthonormal `Z ⟂ 𝔨`, `W ∈ 𝔭`
//! with `[Z, W] = 0` and `[(Ad_g Z)ʰ, (Ad_g W)ʰ] = 0`. For symmetric pairs `Z`
//! may be taken in 𝔪. All residuals are returned as squared norms; verdicts
//! are made by the callers in [`crate::certify`].

use serde::{Deserialize, Serialize};

use crate::algebra::{adjoint_unchecked, AlgElement, FieldTag, GroupElement};
use crate::error::{Error, Result};
use crate::triple::{DeformParam, Triple};

/// Tolerance for the orthonormality and membership preconditions.
pub const PRECONDITION_TOL: f64 = 1e-8;

/// A pair `(Z, W)` with its residuals, witnessing an (approximate) flat plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WitnessDocument", into = "WitnessDocument")]
pub struct FlatPairWitness {
    pub z: AlgElement,
    pub w: AlgElement,
    pub commutator_residual: f64,
    pub horizontal_residual: f64,
    /// Parameter `s` of the point `exp(−sA)` when the witness comes from a scan.
    pub point_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDocument {
    field: FieldTag,
    n: usize,
    z: Vec<f64>,
    w: Vec<f64>,
    commutator_residual: f64,
    horizontal_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    point_s: Option<f64>,
}

impl From<FlatPairWitness> for WitnessDocument {
    fn from(w: FlatPairWitness) -> Self {
        WitnessDocument {
            field: w.z.field(),
            n: w.z.size(),
            z: w.z.to_components(),
            w: w.w.to_components(),
            commutator_residual: w.commutator_residual,
            horizontal_residual: w.horizontal_residual,
            point_s: w.point_s,
        }
    }
}

impl TryFrom<WitnessDocument> for FlatPairWitness {
    type Error = Error;
    fn try_from(d: WitnessDocument) -> Result<Self> {
        if d.n == 0 || d.n > crate::triple::MAX_DOCUMENT_SIZE {
            return Err(Error::Input(format!("witness matrix size {} out of range", d.n)));
        }
        Ok(FlatPairWitness {
            z: AlgElement::from_components(d.field, d.n, &d.z)?,
            w: AlgElement::from_components(d.field, d.n, &d.w)?,
            commutator_residual: d.commutator_residual,
            horizontal_residual: d.horizontal_residual,
            point_s: d.point_s,
        })
    }
}

impl FlatPairWitness {
    pub fn total_residual(&self) -> f64 {
        self.commutator_residual + self.horizontal_residual
    }
}

/// `|[Φ(X), Φ(Y)]|² + |[Xʰ, Yʰ]|²`, zero iff `span{X, Y}` is flat for the deformed metric.
pub fn eschenburg_residual(t: &Triple, x: &AlgElement, y: &AlgElement, d: DeformParam) -> Result<f64> {
    t.check_in_g(x)?;
    t.check_in_g(y)?;
    let (xx, yy, xy) = (x.norm_sqr(), y.norm_sqr(), x.dot(y));
    if xx * yy - xy * xy <= 1e-12 * xx * yy || xx == 0.0 || yy == 0.0 {
        return Err(Error::Input("X and Y must be linearly independent".into()));
    }
    let fx = t.phi(x, d)?;
    let fy = t.phi(y, d)?;
    let (xh, yh) = (t.project_h(x), t.project_h(y));
    Ok(fx.commutator(&fy).norm_sqr() + xh.commutator(&yh).norm_sqr())
}

fn check_unit(v: &AlgElement, name: &str) -> Result<()> {
    let err = (v.norm() - 1.0).abs();
    if err > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("{name} must have unit length (|{name}| = {})", v.norm())));
    }
    Ok(())
}

fn check_group(t: &Triple, g: &GroupElement) -> Result<()> {
    if g.field() != t.field() {
        return Err(Error::FieldMismatch { left: t.field(), right: g.field() });
    }
    if g.size() != t.size() {
        return Err(Error::SizeMismatch { left: t.size(), right: g.size() });
    }
    Ok(())
}

/// Second residual `|[(Ad_g Z)ʰ, (Ad_g W)ʰ]|²` without precondition checks.
pub(crate) fn horizontal_term(t: &Triple, g: &GroupElement, z: &AlgElement, w: &AlgElement) -> f64 {
    let az = t.project_h(&adjoint_unchecked(g, z));
    let aw = t.project_h(&adjoint_unchecked(g, w));
    az.commutator(&aw).norm_sqr()
}

/// `(|[Z, W]|², |[(Ad_g Z)ʰ, (Ad_g W)ʰ]|²)` for orthonormal `Z ⟂ 𝔨`, `W ∈ 𝔭`.
/// Both components vanish iff a horizontal flat plane exists at `(g⁻¹, p₀)`;
/// neither depends on the deformation parameter.
pub fn horizontal_flat_residual(
    t: &Triple,
    g: &GroupElement,
    z: &AlgElement,
    w: &AlgElement,
) -> Result<(f64, f64)> {
    check_group(t, g)?;
    t.check_in_g(z)?;
    t.check_in_g(w)?;
    check_unit(z, "Z")?;
    check_unit(w, "W")?;
    if z.dot(w).abs() > PRECONDITION_TOL {
        return Err(Error::Precondition("Z and W must be orthogonal".into()));
    }
    let zk = t.k().project(z).norm();
    if zk > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("Z must be orthogonal to k (|Zᵏ| = {zk:e})")));
    }
    let wp = t.p().residual(w);
    if wp > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("W must lie in p (residual {wp:e})")));
    }
    Ok((z.commutator(w).norm_sqr(), horizontal_term(t, g, z, w)))
}

/// Specialization to symmetric pairs with `X ∈ 𝔪`, `W ∈ 𝔭` unit vectors.
pub fn symmetric_horizontal_residual(
    t: &Triple,
    g: &GroupElement,
    x: &AlgElement,
    w: &AlgElement,
) -> Result<(f64, f64)> {
    if !t.is_symmetric() {
        return Err(Error::Precondition(format!("{} is not a symmetric pair", t.label())));
    }
    check_group(t, g)?;
    t.check_in_g(x)?;
    t.check_in_g(w)?;
    check_unit(x, "X")?;
    check_unit(w, "W")?;
    let xm = t.m().residual(x);
    if xm > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("X must lie in m (residual {xm:e})")));
    }
    let wp = t.p().residual(w);
    if wp > PRECONDITION_TOL {
        return Err(Error::Precondition(format!("W must lie in p (residual {wp:e})")));
    }
    Ok((x.commutator(w).norm_sqr(), horizontal_term(t, g, x, w)))
}

/// `¼|[X, Y]|²`, the sectional curvature of the bi-invariant metric on an
/// orthonormal pair.
pub fn biinvariant_plane_curvature(x: &AlgElement, y: &AlgElement) -> Result<f64> {
    x.check_compatible(y)?;
    Ok(0.25 * x.commutator(y).norm_sqr())
}
