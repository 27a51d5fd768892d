//! The chain `𝔨 ⊂ 𝔥 ⊂ 𝔤` with `𝔪 = 𝔥 ⊖ 𝔨` and `𝔭 = 𝔤 ⊖ 𝔥`, the metric that
//! shrinks the bi-invariant one by `t` along 𝔥, and the operator
//! `Φ(X) = t·Xʰ + Xᵖ` relating the two.

mod json;

pub use json::{TripleDocument, MAX_DOCUMENT_SIZE};

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::algebra::{AlgElement, FieldTag};
use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance for orthonormality and containment invariants.
pub const BASIS_TOL: f64 = 1e-10;
/// Residual above which an element is considered outside 𝔤.
pub const DOMAIN_TOL: f64 = 1e-8;
/// Singular values below this bound span the stabilizer.
pub const NULL_THRESHOLD: f64 = 1e-9;
/// Required separation between the null and retained singular values.
pub const NULL_GAP: f64 = 1e3;

const DROP_TOL: f64 = 1e-8;

/// A `g₀`-orthonormal list of algebra elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    field: FieldTag,
    n: usize,
    basis: Vec<AlgElement>,
}

impl Subspace {
    pub fn empty(field: FieldTag, n: usize) -> Self {
        Self { field, n, basis: Vec::new() }
    }

    /// Orthonormalizes an arbitrary spanning set.
    pub fn from_spanning(field: FieldTag, n: usize, span: &[AlgElement]) -> Result<Self> {
        check_members(field, n, span)?;
        Ok(Self { field, n, basis: linalg::gram_schmidt(span, DROP_TOL) })
    }

    /// Accepts `basis` verbatim if it is orthonormal within [`BASIS_TOL`].
    pub fn from_orthonormal(field: FieldTag, n: usize, basis: Vec<AlgElement>) -> Result<Self> {
        check_members(field, n, &basis)?;
        let s = Self { field, n, basis };
        let err = s.gram_error();
        if err > BASIS_TOL {
            return Err(Error::Input(format!("basis is not orthonormal (Gram error {err:e})")));
        }
        Ok(s)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn matrix_size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[AlgElement] {
        &self.basis
    }

    pub fn coordinates(&self, x: &AlgElement) -> Vec<f64> {
        self.basis.iter().map(|b| b.dot(x)).collect()
    }

    pub fn element(&self, coords: &[f64]) -> AlgElement {
        AlgElement::combination(self.field, self.n, &self.basis, coords)
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, x: &AlgElement) -> AlgElement {
        let mut out = AlgElement::zero(self.field, self.n);
        for b in &self.basis {
            out = out.axpy(b.dot(x), b);
        }
        out
    }

    /// `|x − proj(x)|`
    pub fn residual(&self, x: &AlgElement) -> f64 {
        x.sub(&self.project(x)).norm()
    }

    /// Largest entry of `|Gram − I|`.
    pub fn gram_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((a.dot(b) - target).abs());
            }
        }
        err
    }

    /// Largest inner product between members of the two bases.
    pub fn max_overlap(&self, other: &Subspace) -> f64 {
        let mut m: f64 = 0.0;
        for a in &self.basis {
            for b in &other.basis {
                m = m.max(a.dot(b).abs());
            }
        }
        m
    }

    /// Largest residual of `other`'s basis after projecting onto `self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other.basis.iter().map(|b| self.residual(b)).fold(0.0, f64::max)
    }

    /// Concatenation of two mutually orthogonal subspaces.
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Subspace { field: self.field, n: self.n, basis }
    }

    /// Applies an orthogonal change of basis: new_i = Σ_j q[(j, i)] old_j.
    pub fn rotated(&self, q: &DMatrix<f64>) -> Subspace {
        let d = self.dim();
        assert_eq!((q.nrows(), q.ncols()), (d, d));
        let basis = (0..d)
            .map(|i| {
                let coeffs: Vec<f64> = q.column(i).iter().copied().collect();
                self.element(&coeffs)
            })
            .collect();
        Subspace { field: self.field, n: self.n, basis }
    }

    /// Orthogonal complement of `self` inside `within`.
    fn complement_in(within: &Subspace, of: &Subspace) -> Subspace {
        let residuals: Vec<AlgElement> = within.basis.iter().map(|b| b.sub(&of.project(b))).collect();
        Subspace {
            field: within.field,
            n: within.n,
            basis: linalg::gram_schmidt(&residuals, DROP_TOL),
        }
    }
}

fn check_members(field: FieldTag, n: usize, elems: &[AlgElement]) -> Result<()> {
    for e in elems {
        if e.field() != field {
            return Err(Error::FieldMismatch { left: field, right: e.field() });
        }
        if e.size() != n {
            return Err(Error::SizeMismatch { left: n, right: e.size() });
        }
    }
    Ok(())
}

/// Which summand of `𝔤 = 𝔨 ⊕ 𝔪 ⊕ 𝔭` to project onto (`H` is `𝔨 ⊕ 𝔪`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    K,
    M,
    P,
    H,
}

/// The deformation parameter `t ∈ (0, 1)` and `λ = t / (1 − t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformParam {
    t: f64,
    lambda: f64,
}

impl DeformParam {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidDeformation(t));
        }
        Ok(Self { t, lambda: t / (1.0 - t) })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl Default for DeformParam {
    fn default() -> Self {
        Self { t: 0.5, lambda: 1.0 }
    }
}

/// A chain `𝔨 ⊂ 𝔥 ⊂ 𝔤` with derived complements.
#[derive(Debug, Clone, PartialEq)]
pub struct Triple {
    label: String,
    field: FieldTag,
    n: usize,
    g: Subspace,
    h: Subspace,
    k: Subspace,
    m: Subspace,
    p: Subspace,
    base_point: Option<AlgElement>,
    symmetric: bool,
}

impl Triple {
    /// Builds a triple from spanning sets of 𝔤, 𝔥 and 𝔨.
    pub fn new(
        label: impl Into<String>,
        field: FieldTag,
        n: usize,
        g_span: &[AlgElement],
        h_span: &[AlgElement],
        k_span: &[AlgElement],
    ) -> Result<Self> {
        let g = Subspace::from_spanning(field, n, g_span)?;
        let h = Subspace::from_spanning(field, n, h_span)?;
        let k = Subspace::from_spanning(field, n, k_span)?;
        Self::assemble(label.into(), g, h, k, None, None)
    }

    /// Builds a triple from already orthonormal bases. `m` and `p` are derived
    /// when not supplied, and validated when they are.
    pub fn from_bases(
        label: impl Into<String>,
        g: Subspace,
        h: Subspace,
        k: Subspace,
        m: Option<Subspace>,
        p: Option<Subspace>,
    ) -> Result<Self> {
        Self::assemble(label.into(), g, h, k, m, p)
    }

    fn assemble(
        label: String,
        g: Subspace,
        h: Subspace,
        k: Subspace,
        m: Option<Subspace>,
        p: Option<Subspace>,
    ) -> Result<Self> {
        let (field, n) = (g.field, g.n);
        for s in [&h, &k] {
            if s.field != field {
                return Err(Error::FieldMismatch { left: field, right: s.field });
            }
            if s.n != n {
                return Err(Error::SizeMismatch { left: n, right: s.n });
            }
        }
        let r = h.containment_residual(&k);
        if r > BASIS_TOL {
            return Err(Error::Containment { what: "k is not contained in h", residual: r });
        }
        let r = g.containment_residual(&h);
        if r > BASIS_TOL {
            return Err(Error::Containment { what: "h is not contained in g", residual: r });
        }
        let m = match m {
            Some(m) => m,
            None => Subspace::complement_in(&h, &k),
        };
        let p = match p {
            Some(p) => p,
            None => Subspace::complement_in(&g, &h),
        };
        if m.dim() + k.dim() != h.dim() {
            return Err(Error::Input(format!(
                "dim m = {} but dim h - dim k = {}",
                m.dim(),
                h.dim() as isize - k.dim() as isize
            )));
        }
        if p.dim() + h.dim() != g.dim() {
            return Err(Error::Input(format!(
                "dim p = {} but dim g - dim h = {}",
                p.dim(),
                g.dim() as isize - h.dim() as isize
            )));
        }
        for (s, name) in [(&m, "m"), (&p, "p")] {
            if s.gram_error() > BASIS_TOL {
                return Err(Error::Input(format!("{name} basis is not orthonormal")));
            }
        }
        let r = h.containment_residual(&m).max(m.max_overlap(&k));
        if r > BASIS_TOL {
            return Err(Error::Containment { what: "m must lie in h and be orthogonal to k", residual: r });
        }
        let r = g.containment_residual(&p).max(p.max_overlap(&h));
        if r > BASIS_TOL {
            return Err(Error::Containment { what: "p must lie in g and be orthogonal to h", residual: r });
        }

        let mut triple = Self { label, field, n, g, h, k, m, p, base_point: None, symmetric: false };
        triple.symmetric = triple.is_symmetric_pair(1e-9);
        Ok(triple)
    }

    /// Attaches a designated point `A ∈ 𝔤`.
    pub fn with_base_point(mut self, a: AlgElement) -> Result<Self> {
        self.check_in_g(&a)?;
        self.base_point = Some(a);
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> &Subspace {
        &self.g
    }

    pub fn h(&self) -> &Subspace {
        &self.h
    }

    pub fn k(&self) -> &Subspace {
        &self.k
    }

    pub fn m(&self) -> &Subspace {
        &self.m
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    /// `𝔤 ⊖ 𝔨 = 𝔪 ⊕ 𝔭`
    pub fn g_minus_k(&self) -> Subspace {
        self.m.direct_sum(&self.p)
    }

    pub fn base_point(&self) -> Option<&AlgElement> {
        self.base_point.as_ref()
    }

    /// Whether the triple passed the symmetric-pair test at construction (tolerance 1e-9).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement::zero(self.field, self.n)
    }

    pub(crate) fn check_compatible(&self, x: &AlgElement) -> Result<()> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch { left: self.field, right: x.field() });
        }
        if x.size() != self.n {
            return Err(Error::SizeMismatch { left: self.n, right: x.size() });
        }
        Ok(())
    }

    pub(crate) fn check_in_g(&self, x: &AlgElement) -> Result<()> {
        self.check_compatible(x)?;
        let residual = self.g.residual(x);
        if residual > DOMAIN_TOL * x.norm().max(1.0) {
            return Err(Error::OutsideAlgebra { residual });
        }
        Ok(())
    }

    pub(crate) fn subspace(&self, part: Part) -> &Subspace {
        match part {
            Part::K => &self.k,
            Part::M => &self.m,
            Part::P => &self.p,
            Part::H => &self.h,
        }
    }

    /// Orthogonal projection of `x ∈ 𝔤` onto one summand.
    pub fn project(&self, x: &AlgElement, part: Part) -> Result<AlgElement> {
        self.check_in_g(x)?;
        Ok(self.subspace(part).project(x))
    }

    pub(crate) fn project_h(&self, x: &AlgElement) -> AlgElement {
        self.h.project(x)
    }

    /// `Φ(X) = t·Xʰ + Xᵖ`
    pub fn phi(&self, x: &AlgElement, d: DeformParam) -> Result<AlgElement> {
        self.check_in_g(x)?;
        let xh = self.h.project(x);
        let xp = self.p.project(x);
        Ok(xp.axpy(d.t, &xh))
    }

    /// `Φ⁻¹(X) = Xʰ / t + Xᵖ`
    pub fn phi_inv(&self, x: &AlgElement, d: DeformParam) -> Result<AlgElement> {
        self.check_in_g(x)?;
        let xh = self.h.project(x);
        let xp = self.p.project(x);
        Ok(xp.axpy(1.0 / d.t, &xh))
    }

    /// The deformed metric `g₀(Xᵖ, Yᵖ) + t·g₀(Xʰ, Yʰ)`.
    pub fn deformed_inner(&self, x: &AlgElement, y: &AlgElement, d: DeformParam) -> Result<f64> {
        self.check_in_g(x)?;
        self.check_in_g(y)?;
        let (xp, yp) = (self.p.project(x), self.p.project(y));
        let (xh, yh) = (self.h.project(x), self.h.project(y));
        Ok(xp.dot(&yp) + d.t * xh.dot(&yh))
    }

    /// Checks `[𝔭, 𝔭] ⊂ 𝔥` and `[𝔭, 𝔥] ⊂ 𝔭` on basis pairs.
    pub fn is_symmetric_pair(&self, tol: f64) -> bool {
        self.symmetric_pair_residual() < tol
    }

    /// Largest violation of the symmetric-pair conditions over basis pairs.
    pub fn symmetric_pair_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let p = self.p.basis();
        for (i, a) in p.iter().enumerate() {
            for b in &p[i + 1..] {
                worst = worst.max(self.p.project(&a.commutator(b)).norm());
            }
            for b in self.h.basis() {
                worst = worst.max(self.h.project(&a.commutator(b)).norm());
            }
        }
        worst
    }

    /// The same triple with `𝔪` and `𝔭` re-expressed in random orthonormal bases.
    pub fn rebased(&self, seed: u64) -> Triple {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qm = random_orthogonal(self.m.dim(), &mut rng);
        let qp = random_orthogonal(self.p.dim(), &mut rng);
        Triple { m: self.m.rotated(&qm), p: self.p.rotated(&qp), ..self.clone() }
    }
}

pub(crate) fn random_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    if d == 0 {
        return DMatrix::zeros(0, 0);
    }
    let g = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // sign fix makes the distribution Haar
    for j in 0..d {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Orthonormal basis of `{Y ∈ span(h) : [Y, A] = 0}`.
pub fn stabilizer_subalgebra(h: &Subspace, a: &AlgElement) -> Result<Subspace> {
    if a.field() != h.field() {
        return Err(Error::FieldMismatch { left: h.field(), right: a.field() });
    }
    if a.size() != h.matrix_size() {
        return Err(Error::SizeMismatch { left: h.matrix_size(), right: a.size() });
    }
    if h.dim() == 0 {
        return Ok(h.clone());
    }
    let rows = a.to_components().len();
    let images: Vec<AlgElement> = h.basis().iter().map(|y| y.commutator(a)).collect();
    let map = linalg::column_matrix(rows, &images);
    let kernel = linalg::null_space(&map, NULL_THRESHOLD, NULL_GAP)?;
    let basis: Vec<AlgElement> = (0..kernel.ncols())
        .map(|j| {
            let coeffs: Vec<f64> = kernel.column(j).iter().copied().collect();
            h.element(&coeffs)
        })
        .collect();
    // kernel vectors are orthonormal in h-coordinates, hence in the algebra
    Subspace::from_spanning(h.field(), h.matrix_size(), &basis)
}
