//! Decision procedures for quasi-positive curvature of `H\(G×F)`.
//!
//! * [`check_fatness`]: no commuting orthonormal pair `Z ⟂ 𝔨`, `W ∈ 𝔭`.
//! * [`certify_part2`]: `[Zʰ, [A, W]ʰ] ≠ 0` on every commuting pair.
//! * [`certify_part3`]: symmetric pair with `A ∈ 𝔭` and `[X, A] ≠ 0` for all
//!   non-zero `X ∈ 𝔪`; a deterministic SVD certificate.
//! * [`point_positivity`] and [`scan_along_a`]: absence of horizontal flat
//!   planes at individual points `(g⁻¹, p₀)`.
//!
//! Scores are squared residuals, except for part (3) where the score is the
//! smallest singular value. Verdicts from the bilinear searches are local
//! evidence and carry `heuristic = true`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{adjoint_unchecked, group_exp, AlgElement, GroupElement};
use crate::error::{Error, Result};
use crate::flatness::{horizontal_flat_residual, horizontal_term, FlatPairWitness};
use crate::linalg;
use crate::search::{best, BilinearProblem};
use crate::triple::{Subspace, Triple};

pub use crate::search::StartBudget;

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_REFUTE_TOL: f64 = 1e-12;
/// Penalty weights `μ` for the commutator constraint in part (2).
pub const PENALTY_SCHEDULE: [f64; 3] = [10.0, 1e3, 1e5];
/// Relative agreement required between analytic and numeric second derivatives.
pub const DERIVATIVE_RTOL: f64 = 1e-3;
/// Analytic values below this are compared in absolute terms.
pub const DERIVATIVE_FLOOR: f64 = 1e-10;
/// Finite-difference step for [`derivative_test`].
pub const DERIVATIVE_STEP: f64 = 1e-3;

pub const RANK_ONE_NOTE: &str = "rank-one property of the symmetric pair is taken from catalog metadata, not checked";
const VACUOUS_NOTE: &str = "warning: degenerate dimensions, certificate is vacuous";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Fat,
    Part2,
    Part3,
    PointScan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// Certification threshold `tol` and refutation threshold `refute` (`0 < refute < tol`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    tol: f64,
    refute: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: DEFAULT_TOL, refute: DEFAULT_REFUTE_TOL }
    }
}

impl Tolerances {
    pub fn new(tol: f64, refute: f64) -> Result<Self> {
        if !(refute > 0.0 && refute < tol && tol.is_finite()) {
            return Err(Error::Input(format!("tolerances must satisfy 0 < refute_tol < tol (got {refute:e}, {tol:e})")));
        }
        Ok(Tolerances { tol, refute })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn refute(&self) -> f64 {
        self.refute
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertReport {
    pub triple: String,
    pub method: Method,
    pub verdict: Verdict,
    /// `+∞` for vacuous certificates; serialized as `null`.
    #[serde(serialize_with = "ser_score", deserialize_with = "de_score")]
    pub score: f64,
    pub tolerance: f64,
    pub refute_tolerance: f64,
    /// For part (2) the horizontal residual holds `|[Zʰ, [A, W]ʰ]|²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<FlatPairWitness>,
    pub starts: usize,
    pub seed: u64,
    pub heuristic: bool,
    /// Scan parameter of the point `exp(−sA)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Only filled when timing is requested, so reports stay reproducible.
    #[serde(default)]
    pub wall_time_ms: Option<u64>,
}

fn ser_score<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn de_score<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl CertReport {
    fn new(t: &Triple, method: Method, tols: Tolerances, budget: Option<&StartBudget>) -> Self {
        CertReport {
            triple: t.label().to_string(),
            method,
            verdict: Verdict::Inconclusive,
            score: f64::INFINITY,
            tolerance: tols.tol,
            refute_tolerance: tols.refute,
            witness: None,
            starts: budget.map_or(0, |b| b.starts),
            seed: budget.map_or(0, |b| b.seed),
            heuristic: budget.is_some(),
            s: None,
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    fn vacuous(mut self, why: &str) -> Self {
        self.verdict = Verdict::Certified;
        self.score = f64::INFINITY;
        self.notes.push(format!("{VACUOUS_NOTE} ({why})"));
        self
    }

    /// Checks the verdict/score/witness consistency rules.
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.refute_tolerance > 0.0) {
            return Err(Error::Input("tolerances must be positive".into()));
        }
        match self.verdict {
            Verdict::Certified if !(self.score > self.tolerance) => {
                Err(Error::Input(format!("certified report with score {} <= tolerance {}", self.score, self.tolerance)))
            }
            Verdict::Refuted => match &self.witness {
                None => Err(Error::Input("refuted report without witness".into())),
                Some(w) if !(w.commutator_residual < self.tolerance && w.horizontal_residual < self.tolerance) => {
                    Err(Error::Input("refutation witness exceeds tolerance".into()))
                }
                Some(_) => Ok(()),
            },
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Parses and validates a report.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: CertReport = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }
}

fn witness(t: &Triple, z: AlgElement, w: AlgElement) -> FlatPairWitness {
    let identity = GroupElement::identity(t.field(), t.size());
    FlatPairWitness {
        commutator_residual: z.commutator(&w).norm_sqr(),
        horizontal_residual: horizontal_term(t, &identity, &z, &w),
        z,
        w,
        point_s: None,
    }
}

fn ad_operator(t: &Triple, a: &AlgElement) -> nalgebra::DMatrix<f64> {
    let rows = t.field().components() * t.size() * t.size();
    let images: Vec<AlgElement> = t.m().basis().iter().map(|x| x.commutator(a)).collect();
    linalg::column_matrix(rows, &images)
}

/// Smallest singular value of `X ↦ [X, A]` on 𝔪; `+∞` when `dim 𝔪 = 0`.
pub fn min_ad_singular(t: &Triple, a: &AlgElement) -> Result<f64> {
    t.check_in_g(a)?;
    if t.m().dim() == 0 {
        return Ok(f64::INFINITY);
    }
    Ok(linalg::singular_values(&ad_operator(t, a))[0])
}

/// Deterministic certificate for the symmetric rank-one case. Errors only
/// on inputs incompatible with the triple.
pub fn certify_part3(t: &Triple, a: &AlgElement, tols: Tolerances) -> Result<CertReport> {
    t.check_in_g(a)?;
    let mut r = CertReport::new(t, Method::Part3, tols, None);
    r.notes.push(RANK_ONE_NOTE.into());
    if t.m().dim() == 0 {
        return Ok(r.vacuous("dim m = 0"));
    }
    let (sigma, x) = linalg::smallest_singular(&ad_operator(t, a));
    r.score = sigma;
    let symmetric = t.is_symmetric();
    let an = a.norm();
    let p_residual = if an > 0.0 { t.p().residual(a) / an } else { 0.0 };
    let in_p = p_residual < tols.tol;
    if !symmetric {
        r.notes.push("precondition: (g, h) is not a symmetric pair".into());
    }
    if !in_p {
        r.notes.push(format!("precondition: A is not in p (relative residual {p_residual:e})"));
    }
    if symmetric && in_p && sigma > tols.tol {
        r.verdict = Verdict::Certified;
    } else if sigma < tols.tol / 10.0 {
        let coords: Vec<f64> = x.iter().copied().collect();
        let z = t.m().element(&coords);
        let w = if an > 0.0 { a.scale(1.0 / an) } else { t.zero() };
        r.witness = Some(witness(t, z, w));
        r.verdict = Verdict::Refuted;
    }
    Ok(r)
}

/// Admissible `(Z, W)` domain: `Z ∈ 𝔤 ⊖ 𝔨`, `W ∈ 𝔭`. `None` when no
/// orthonormal pair exists.
fn general_domain(t: &Triple) -> Option<Subspace> {
    let u = t.g_minus_k();
    (t.p().dim() > 0 && u.dim() >= 2).then_some(u)
}

/// Multi-start search for commuting orthonormal pairs `Z ⟂ 𝔨`, `W ∈ 𝔭`.
pub fn check_fatness(t: &Triple, budget: &StartBudget, tols: Tolerances) -> Result<CertReport> {
    let mut r = CertReport::new(t, Method::Fat, tols, Some(budget));
    let Some(u) = general_domain(t) else {
        return Ok(r.vacuous("no orthonormal pair Z ⟂ k, W ∈ p"));
    };
    let br = |z: &AlgElement, w: &AlgElement| z.commutator(w);
    let problem = BilinearProblem::new(&u, t.p(), &[&br]);
    let results = problem.multi_start(&[vec![1.0]], budget)?;
    let Some(b) = best(&results) else {
        return Ok(r);
    };
    let wit = witness(t, problem.z_element(&b.z), problem.w_element(&b.w));
    r.score = wit.commutator_residual;
    if r.score < tols.refute {
        r.verdict = Verdict::Refuted;
        r.heuristic = false;
        r.witness = Some(wit);
    } else if r.score > tols.tol {
        r.verdict = Verdict::Certified;
    }
    Ok(r)
}

/// Minimizes `|[Zʰ, [A, W]ʰ]|²` over commuting orthonormal pairs by penalty
/// continuation followed by descent inside the exact commuting set.
pub fn certify_part2(t: &Triple, a: &AlgElement, budget: &StartBudget, tols: Tolerances) -> Result<CertReport> {
    t.check_in_g(a)?;
    let mut r = CertReport::new(t, Method::Part2, tols, Some(budget));
    let Some(u) = general_domain(t) else {
        return Ok(r.vacuous("no orthonormal pair Z ⟂ k, W ∈ p"));
    };
    let second = |z: &AlgElement, w: &AlgElement| t.project_h(z).commutator(&t.project_h(&w.commutator(a)));
    let br = |z: &AlgElement, w: &AlgElement| z.commutator(w);
    let problem = BilinearProblem::new(&u, t.p(), &[&second, &br]);
    let schedule: Vec<Vec<f64>> = PENALTY_SCHEDULE.iter().map(|&mu| vec![1.0, mu]).collect();
    let results = problem.multi_start(&schedule, budget)?;
    let Some(penalized) = best(&results) else {
        return Ok(r);
    };
    r.score = penalized.value;

    let mut feasible: Option<(f64, FlatPairWitness)> = None;
    for local in &results {
        let Some((z, w)) = problem.feasible_descend(&[1.0, 0.0], &[0.0, 1.0], local.z.clone(), local.w.clone(), tols.refute, 50)
        else {
            continue;
        };
        let (ze, we) = (problem.z_element(&z), problem.w_element(&w));
        let commutator = ze.commutator(&we).norm_sqr();
        if commutator >= tols.refute {
            continue;
        }
        let objective = second(&ze, &we).norm_sqr();
        if feasible.as_ref().is_none_or(|(v, _)| objective < *v) {
            let wit = FlatPairWitness { z: ze, w: we, commutator_residual: commutator, horizontal_residual: objective, point_s: None };
            feasible = Some((objective, wit));
        }
    }
    if let Some((objective, wit)) = feasible {
        r.score = r.score.min(objective);
        if objective < tols.tol * 1e-2 {
            r.verdict = Verdict::Refuted;
            r.heuristic = false;
            r.witness = Some(wit);
            return Ok(r);
        }
    } else {
        r.notes.push("no commuting pair found; penalty term alone bounds the objective".into());
    }
    if r.score > tols.tol {
        r.verdict = Verdict::Certified;
    }
    Ok(r)
}

/// Searches for a horizontal flat plane at `(g⁻¹, p₀)`. For symmetric pairs
/// `Z` ranges over 𝔪 only, which suffices there.
pub fn point_positivity(t: &Triple, g: &GroupElement, budget: &StartBudget, tols: Tolerances) -> Result<CertReport> {
    if g.field() != t.field() {
        return Err(Error::FieldMismatch { left: t.field(), right: g.field() });
    }
    if g.size() != t.size() {
        return Err(Error::SizeMismatch { left: t.size(), right: g.size() });
    }
    let mut r = CertReport::new(t, Method::PointScan, tols, Some(budget));
    let domain = if t.is_symmetric() {
        (t.p().dim() > 0 && t.m().dim() > 0).then(|| t.m().clone())
    } else {
        general_domain(t)
    };
    let Some(u) = domain else {
        return Ok(r.vacuous("no admissible orthonormal pair"));
    };
    let br = |z: &AlgElement, w: &AlgElement| z.commutator(w);
    let hor = |z: &AlgElement, w: &AlgElement| t.project_h(&adjoint_unchecked(g, z)).commutator(&t.project_h(&adjoint_unchecked(g, w)));
    let problem = BilinearProblem::new(&u, t.p(), &[&br, &hor]);
    let results = problem.multi_start(&[vec![1.0, 1.0]], budget)?;
    let Some(b) = best(&results) else {
        return Ok(r);
    };
    let (z, w) = (problem.z_element(&b.z), problem.w_element(&b.w));
    let wit = FlatPairWitness {
        commutator_residual: z.commutator(&w).norm_sqr(),
        horizontal_residual: horizontal_term(t, g, &z, &w),
        z,
        w,
        point_s: None,
    };
    r.score = wit.total_residual();
    if r.score < tols.refute {
        r.verdict = Verdict::Refuted;
        r.heuristic = false;
        r.witness = Some(wit);
    } else if r.score > tols.tol {
        r.verdict = Verdict::Certified;
    }
    Ok(r)
}

/// Runs [`point_positivity`] at the points `exp(−sA)`, i.e. `g = exp(sA)`.
pub fn scan_along_a(
    t: &Triple,
    a: &AlgElement,
    s_values: &[f64],
    budget: &StartBudget,
    tols: Tolerances,
) -> Result<Vec<CertReport>> {
    t.check_in_g(a)?;
    s_values
        .iter()
        .map(|&s| {
            if !s.is_finite() {
                return Err(Error::Input(format!("scan parameter {s} is not finite")));
            }
            let mut r = point_positivity(t, &group_exp(a, s), budget, tols)?;
            r.s = Some(s);
            if let Some(w) = r.witness.as_mut() {
                w.point_s = Some(s);
            }
            Ok(r)
        })
        .collect()
}

fn check_commuting_pair(t: &Triple, z: &AlgElement, w: &AlgElement, a: &AlgElement) -> Result<()> {
    t.check_in_g(a)?;
    let (c, _) = horizontal_flat_residual(t, &GroupElement::identity(t.field(), t.size()), z, w)?;
    if c.sqrt() >= 1e-10 {
        return Err(Error::Precondition(format!("[Z, W] must vanish (|[Z, W]| = {:e})", c.sqrt())));
    }
    Ok(())
}

/// `f(s) = |[(Ad_{exp(sA)} Z)ʰ, (Ad_{exp(sA)} W)ʰ]|²` for a commuting admissible pair.
pub fn f_of_s(t: &Triple, z: &AlgElement, w: &AlgElement, a: &AlgElement, s: f64) -> Result<f64> {
    check_commuting_pair(t, z, w, a)?;
    Ok(horizontal_term(t, &group_exp(a, s), z, w))
}

/// Analytic `½f''(0) = |[Zʰ, [A, W]ʰ]|²` against a Richardson-extrapolated
/// central second difference of `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeCheck {
    pub analytic: f64,
    pub numeric: f64,
}

impl DerivativeCheck {
    pub fn relative_error(&self) -> f64 {
        (self.analytic - self.numeric).abs() / self.analytic.abs().max(DERIVATIVE_FLOOR)
    }

    pub fn flagged(&self) -> bool {
        !(self.relative_error() <= DERIVATIVE_RTOL)
    }
}

pub fn derivative_test(t: &Triple, z: &AlgElement, w: &AlgElement, a: &AlgElement) -> Result<DerivativeCheck> {
    check_commuting_pair(t, z, w, a)?;
    let f = |s: f64| horizontal_term(t, &group_exp(a, s), z, w);
    let f0 = f(0.0);
    let second = |h: f64| (f(h) - 2.0 * f0 + f(-h)) / (h * h);
    let h = DERIVATIVE_STEP;
    let richardson = (4.0 * second(h / 2.0) - second(h)) / 3.0;
    let analytic = t.project_h(z).commutator(&t.project_h(&a.commutator(w))).norm_sqr();
    Ok(DerivativeCheck { analytic, numeric: 0.5 * richardson })
}

#[cfg(test)]
mod tests;
