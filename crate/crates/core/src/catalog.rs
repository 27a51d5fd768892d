//! Constructors for the worked examples: unit and projective tangent bundles
//! of rank-one symmetric spaces, `T¹S³ = S²×S³`, the lens-space bundles
//! `M_kl = U(n+1)/K_kl`, and the `S^{4n-1}`-bundle over ℍPⁿ.
//!
//! Conventions: `H` and `K` sit in the leading and lower-right diagonal blocks
//! exactly as `diag(z, A)` / `diag(z₁, z₂, A)` are written, and `𝔭` is the band
//! formed by the first row and column. The designated point `A ∈ 𝔭` is written
//! as `{W₁, …, W_n}`, the entries of its first row after the diagonal.

use serde::Serialize;

use crate::algebra::basis::{compact_algebra, diagonal, off_diagonal};
use crate::algebra::{AlgElement, FieldTag, Quaternion};
use crate::error::{Error, Result};
use crate::triple::{stabilizer_subalgebra, Triple};

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EntryParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldTag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub symmetric_pair: bool,
    /// `(G, H)` is a compact rank-one symmetric pair. Asserted, not computed.
    pub rank_one: bool,
    pub result: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub params: EntryParams,
    pub triple: Triple,
    pub base_point: AlgElement,
    pub metadata: Metadata,
}

/// First-row band element `{W₁, …}` of `𝔤(n+1)`, normalized to unit length.
pub fn band_element(field: FieldTag, size: usize, w: &[Quaternion]) -> AlgElement {
    let mut a = AlgElement::zero(field, size);
    for (j, &q) in w.iter().enumerate() {
        if q != Quaternion::ZERO {
            a = a.add(&off_diagonal(field, size, 0, j + 1, q));
        }
    }
    a.normalized()
}

/// `𝔤(1) ⊕ 𝔤(n)` acting on `{0}` and `{1, …, n}`.
fn isotropy_of_projective_space(field: FieldTag, n: usize) -> Vec<AlgElement> {
    let size = n + 1;
    let mut h = compact_algebra(field, size, &[0]);
    h.extend(compact_algebra(field, size, &(1..size).collect::<Vec<_>>()));
    h
}

fn full_algebra(field: FieldTag, size: usize) -> Vec<AlgElement> {
    compact_algebra(field, size, &(0..size).collect::<Vec<_>>())
}

fn tail_block(field: FieldTag, size: usize) -> Vec<AlgElement> {
    compact_algebra(field, size, &(2..size).collect::<Vec<_>>())
}

fn finish(
    id: &'static str,
    params: EntryParams,
    triple: Triple,
    base_point: AlgElement,
    rank_one: bool,
    result: &str,
    notes: Vec<String>,
) -> Result<CatalogEntry> {
    let triple = triple.with_base_point(base_point.clone())?;
    Ok(CatalogEntry {
        id,
        params,
        metadata: Metadata {
            symmetric_pair: triple.is_symmetric(),
            rank_one,
            result: result.to_string(),
            notes,
        },
        triple,
        base_point,
    })
}

/// `𝔨 = span{(i,i)} ⊂ 𝔥 = Δ𝔰𝔭(1) ⊂ 𝔤 = 𝔰𝔭(1) ⊕ 𝔰𝔭(1)`, modelled as diagonal
/// 2×2 quaternion matrices, with `A = (i, −i)/√2`.
pub fn t1s3_product() -> Result<CatalogEntry> {
    let f = FieldTag::Quaternion;
    let units = f.imaginary_units();
    let g: Vec<_> = (0..2).flat_map(|s| units.iter().map(move |&u| diagonal(f, 2, &[(s, u)]))).collect();
    let h: Vec<_> = units.iter().map(|&u| diagonal(f, 2, &[(0, u), (1, u)])).collect();
    let k = vec![diagonal(f, 2, &[(0, Quaternion::I), (1, Quaternion::I)])];
    let triple = Triple::new("t1s3_product", f, 2, &g, &h, &k)?;
    let a = diagonal(f, 2, &[(0, Quaternion::I), (1, -Quaternion::I)]).normalized();
    finish(
        "t1s3_product",
        EntryParams::default(),
        triple,
        a,
        true,
        "T¹S³ = S²×S³ over S³ = Δ(S³)\\(S³×S³): almost-positive curvature",
        Vec::new(),
    )
}

/// `𝔰𝔬(n−1) ⊂ 𝔰𝔬(n) ⊂ 𝔰𝔬(n+1)` with `A = (E₁₂ − E₂₁)/√2` and `𝔨` computed as
/// the stabilizer of `A` in 𝔥.
pub fn t1_sphere(n: usize) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(Error::Input(format!("t1_sphere requires n >= 2, got {n}")));
    }
    let f = FieldTag::Real;
    let size = n + 1;
    let g = full_algebra(f, size);
    let h = compact_algebra(f, size, &(1..size).collect::<Vec<_>>());
    let a = band_element(f, size, &[Quaternion::ONE]);
    let k = {
        let probe = Triple::new("probe", f, size, &g, &h, &[])?;
        stabilizer_subalgebra(probe.h(), &a)?
    };
    let triple = Triple::new(format!("t1_sphere(n={n})"), f, size, &g, &h, k.basis())?;
    let mut notes = Vec::new();
    if n.is_multiple_of(2) {
        notes.push(format!(
            "SO(2) embedded diagonally in SO({n}) acts freely; the quotient SO(2)\\SO({size})/SO({}) inherits the conclusion (not modelled)",
            n - 1
        ));
    }
    finish(
        "t1_sphere",
        EntryParams { n: Some(n), ..Default::default() },
        triple,
        a,
        true,
        &format!("T¹S^{n}: quasi-positive curvature"),
        notes,
    )
}

/// Unit tangent bundle of ℂPⁿ or ℍPⁿ: `𝔨 = {diag(u, u, B)}` inside
/// `𝔤(1) ⊕ 𝔤(n) ⊂ 𝔤(n+1)`.
pub fn t1_projective(field: FieldTag, n: usize) -> Result<CatalogEntry> {
    if field == FieldTag::Real {
        return Err(Error::Input("t1_projective takes complex or quaternion; use t1_sphere for the real case".into()));
    }
    if n < 1 {
        return Err(Error::Input("t1_projective requires n >= 1".into()));
    }
    let size = n + 1;
    let g = full_algebra(field, size);
    let h = isotropy_of_projective_space(field, size - 1);
    let mut k: Vec<_> = field.imaginary_units().iter().map(|&u| diagonal(field, size, &[(0, u), (1, u)])).collect();
    k.extend(tail_block(field, size));
    let label = format!("t1_projective({field}, n={n})");
    let triple = Triple::new(label, field, size, &g, &h, &k)?;
    let a = band_element(field, size, &[Quaternion::ONE]);
    let mut notes = Vec::new();
    if n == 1 {
        notes.push("n = 1: the base is a sphere and the isotropy block G(n-1) is empty".into());
    }
    let space = if field == FieldTag::Complex { "CP" } else { "HP" };
    finish(
        "t1_projective",
        EntryParams { field: Some(field), n: Some(n), ..Default::default() },
        triple,
        a,
        true,
        &format!("T¹{space}^{n}: quasi-positive curvature"),
        notes,
    )
}

/// Projective tangent bundle `P_𝕂 T 𝕂Pⁿ`: `𝔨 = {diag(u₁, u₂, B)}`.
pub fn pt_projective(field: FieldTag, n: usize) -> Result<CatalogEntry> {
    if n < 1 {
        return Err(Error::Input("pt_projective requires n >= 1".into()));
    }
    let size = n + 1;
    let g = full_algebra(field, size);
    let h = isotropy_of_projective_space(field, n);
    let mut k = compact_algebra(field, size, &[0]);
    k.extend(compact_algebra(field, size, &[1]));
    k.extend(tail_block(field, size));
    let label = format!("pt_projective({field}, n={n})");
    let triple = Triple::new(label, field, size, &g, &h, &k)?;
    let a = band_element(field, size, &[Quaternion::ONE]);
    let mut notes = Vec::new();
    if n == 1 {
        notes.push("n = 1: K = H, so the fibre is a point and m = 0".into());
    }
    let space = match field {
        FieldTag::Real => "RP",
        FieldTag::Complex => "CP",
        FieldTag::Quaternion => "HP",
    };
    finish(
        "pt_projective",
        EntryParams { field: Some(field), n: Some(n), ..Default::default() },
        triple,
        a,
        true,
        &format!("projective tangent bundle of {space}^{n}: almost-positive curvature"),
        notes,
    )
}

/// `M_kl = U(n+1)/K_kl` with `𝔨 = {diag(tki, tli, B)}` and `A = {1, 1, 0, …}/2`.
pub fn m_kl(n: usize, k: i64, l: i64) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(Error::Input(format!("m_kl requires n >= 2, got {n}")));
    }
    let f = FieldTag::Complex;
    let size = n + 1;
    let g = full_algebra(f, size);
    let h = isotropy_of_projective_space(f, n);
    let i = Quaternion::I;
    let mut kspan = vec![diagonal(f, size, &[(0, i.scale(k as f64)), (1, i.scale(l as f64))])];
    kspan.extend(tail_block(f, size));
    let triple = Triple::new(format!("m_kl(n={n}, k={k}, l={l})"), f, size, &g, &h, &kspan)?;
    let a = band_element(f, size, &[Quaternion::ONE, Quaternion::ONE]);
    let mut notes = Vec::new();
    if k == 0 {
        notes.push("k = 0 lies outside the quasi-positive family (k ≠ 0 required)".into());
    }
    finish(
        "m_kl",
        EntryParams { n: Some(n), k: Some(k), l: Some(l), ..Default::default() },
        triple,
        a,
        true,
        &format!("lens-space bundle U({size})/K_{{{k},{l}}} over CP^{n}: quasi-positive curvature when k ≠ 0"),
        notes,
    )
}

/// `Sp(n+1)/{diag(z, 1, A)}`: `𝔨 = 𝔰𝔭(1) ⊕ 0 ⊕ 𝔰𝔭(n−1)` with `A = {1, 0, …}/√2`.
pub fn sp_example(n: usize) -> Result<CatalogEntry> {
    if n < 2 {
        return Err(Error::Input(format!("sp_example requires n >= 2, got {n}")));
    }
    let f = FieldTag::Quaternion;
    let size = n + 1;
    let g = full_algebra(f, size);
    let h = isotropy_of_projective_space(f, n);
    let mut k = compact_algebra(f, size, &[0]);
    k.extend(tail_block(f, size));
    let triple = Triple::new(format!("sp_example(n={n})"), f, size, &g, &h, &k)?;
    let a = band_element(f, size, &[Quaternion::ONE]);
    let notes = vec![format!(
        "L = {{z·I | z ∈ Sp(1)}} acts freely and isometrically; the quotient Sp(1)\\Sp({size})/Sp(1)·Sp({}) inherits the conclusion (not modelled)",
        n - 1
    )];
    finish(
        "sp_example",
        EntryParams { n: Some(n), ..Default::default() },
        triple,
        a,
        true,
        &format!("S^{}-bundle Sp({size})/diag(Sp(1), 1, Sp({})) over HP^{n}: quasi-positive curvature", 4 * n - 1, n - 1),
        notes,
    )
}

/// Catalog listing row.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogInfo {
    pub id: &'static str,
    pub parameters: &'static str,
    pub constraints: &'static str,
    pub description: &'static str,
}

pub const ENTRY_IDS: [&str; 6] = ["t1s3_product", "t1_sphere", "t1_projective", "pt_projective", "m_kl", "sp_example"];

pub fn list() -> Vec<CatalogInfo> {
    vec![
        CatalogInfo {
            id: "t1s3_product",
            parameters: "none",
            constraints: "",
            description: "T¹S³ = S²×S³ via sp(1)⊕sp(1) ⊃ Δsp(1) ⊃ span{(i,i)}",
        },
        CatalogInfo {
            id: "t1_sphere",
            parameters: "n",
            constraints: "n ≥ 2",
            description: "unit tangent bundle of Sⁿ: so(n-1) ⊂ so(n) ⊂ so(n+1)",
        },
        CatalogInfo {
            id: "t1_projective",
            parameters: "field ∈ {complex, quaternion}, n",
            constraints: "n ≥ 1 (n = 1 degenerate)",
            description: "unit tangent bundle of CPⁿ or HPⁿ",
        },
        CatalogInfo {
            id: "pt_projective",
            parameters: "field ∈ {real, complex, quaternion}, n",
            constraints: "n ≥ 2 (n = 1 degenerate)",
            description: "projective tangent bundle of RPⁿ, CPⁿ or HPⁿ",
        },
        CatalogInfo {
            id: "m_kl",
            parameters: "n, k, l",
            constraints: "k ≠ 0 and n ≥ 2 for quasi-positive curvature (k = 0 accepted but flagged)",
            description: "lens-space bundle U(n+1)/{diag(z^k, z^l, A)} over CPⁿ",
        },
        CatalogInfo {
            id: "sp_example",
            parameters: "n",
            constraints: "n ≥ 2",
            description: "S^{4n-1}-bundle Sp(n+1)/{diag(z, 1, A)} over HPⁿ",
        },
    ]
}

/// Builds an entry by id. Missing parameters fall back to `n = 2`, `k = l = 1`
/// and the complex field.
pub fn build(id: &str, params: &EntryParams) -> Result<CatalogEntry> {
    let n = params.n.unwrap_or(2);
    match id {
        "t1s3_product" => t1s3_product(),
        "t1_sphere" => t1_sphere(n),
        "t1_projective" => t1_projective(params.field.unwrap_or(FieldTag::Complex), n),
        "pt_projective" => pt_projective(params.field.unwrap_or(FieldTag::Complex), n),
        "m_kl" => m_kl(n, params.k.unwrap_or(1), params.l.unwrap_or(1)),
        "sp_example" => sp_example(n),
        other => Err(Error::Input(format!("unknown catalog entry '{other}'"))),
    }
}
