//! Multi-start minimization of weighted sums of squared bilinear residuals
//! `Σ_k c_k |β_k(Z, W)|²` over unit `Z ∈ U`, unit `W ∈ V` with `⟨Z, W⟩ = 0`.
//!
//! Each residual is linear in either argument once the other is fixed, so a
//! block step is an exact constrained least-squares problem (smallest right
//! singular vector on the orthogonal complement of the coupling direction).
//! Alternating the two block steps never increases the objective.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::AlgElement;
use crate::error::{Error, Result};
use crate::linalg;
use crate::triple::Subspace;

/// Below this the coupling `C w` is treated as absent.
const COUPLING_EPS: f64 = 1e-13;

/// Start count, seed and iteration cap for a multi-start search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartBudget {
    pub starts: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for StartBudget {
    fn default() -> Self {
        StartBudget { starts: 64, seed: 0, max_iters: 2000, workers: None }
    }
}

impl StartBudget {
    pub fn with_seed(self, seed: u64) -> Self {
        StartBudget { seed, ..self }
    }

    pub fn with_starts(self, starts: usize) -> Self {
        StartBudget { starts, ..self }
    }
}

/// A local minimum: coordinates of `Z` in `U` and `W` in `V`.
#[derive(Debug, Clone)]
pub(crate) struct LocalMin {
    pub value: f64,
    pub z: DVector<f64>,
    pub w: DVector<f64>,
    pub start: usize,
}

pub(crate) struct BilinearProblem {
    u: Vec<AlgElement>,
    v: Vec<AlgElement>,
    /// `C_ij = ⟨u_i, v_j⟩`
    cross: DMatrix<f64>,
    /// `tensors[k][j]` has columns `β_k(u_i, v_j)`.
    tensors: Vec<Vec<DMatrix<f64>>>,
    rows: usize,
}

impl BilinearProblem {
    pub fn new(u: &Subspace, v: &Subspace, residuals: &[&(dyn Fn(&AlgElement, &AlgElement) -> AlgElement + Sync)]) -> Self {
        let (du, dv) = (u.dim(), v.dim());
        let rows = u.field().components() * u.matrix_size() * u.matrix_size();
        let cross = DMatrix::from_fn(du, dv, |i, j| u.basis()[i].dot(&v.basis()[j]));
        let tensors = residuals
            .iter()
            .map(|beta| {
                v.basis()
                    .iter()
                    .map(|vj| {
                        let images: Vec<AlgElement> = u.basis().iter().map(|ui| beta(ui, vj)).collect();
                        linalg::column_matrix(rows, &images)
                    })
                    .collect()
            })
            .collect();
        BilinearProblem { u: u.basis().to_vec(), v: v.basis().to_vec(), cross, tensors, rows }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.u.len(), self.v.len())
    }

    pub fn z_element(&self, z: &DVector<f64>) -> AlgElement {
        combine(&self.u, z)
    }

    pub fn w_element(&self, w: &DVector<f64>) -> AlgElement {
        combine(&self.v, w)
    }

    /// Stacked `√c_k · β_k(·, W)` as a matrix acting on `z`.
    fn z_operator(&self, weights: &[f64], w: &DVector<f64>) -> DMatrix<f64> {
        let du = self.u.len();
        let mut out = DMatrix::zeros(self.rows * self.tensors.len(), du);
        for (k, tk) in self.tensors.iter().enumerate() {
            let s = weights[k].sqrt();
            let mut block = out.view_mut((k * self.rows, 0), (self.rows, du));
            for (j, t) in tk.iter().enumerate() {
                block += t * (s * w[j]);
            }
        }
        out
    }

    /// Stacked `√c_k · β_k(Z, ·)` as a matrix acting on `w`.
    fn w_operator(&self, weights: &[f64], z: &DVector<f64>) -> DMatrix<f64> {
        let dv = self.v.len();
        let mut out = DMatrix::zeros(self.rows * self.tensors.len(), dv);
        for (k, tk) in self.tensors.iter().enumerate() {
            let s = weights[k].sqrt();
            for (j, t) in tk.iter().enumerate() {
                let col = t * z * s;
                out.view_mut((k * self.rows, j), (self.rows, 1)).copy_from(&col);
            }
        }
        out
    }

    pub fn objective(&self, weights: &[f64], z: &DVector<f64>, w: &DVector<f64>) -> f64 {
        (self.z_operator(weights, w) * z).norm_squared()
    }

    fn random_start(&self, rng: &mut ChaCha8Rng) -> Option<(DVector<f64>, DVector<f64>)> {
        let (du, dv) = self.dims();
        let w = DVector::from_fn(dv, |_, _| StandardNormal.sample(rng)).normalize();
        let mut z: DVector<f64> = DVector::from_fn(du, |_, _| StandardNormal.sample(rng));
        let c = &self.cross * &w;
        let cn = c.norm_squared();
        if cn > COUPLING_EPS * COUPLING_EPS {
            z -= &c * (c.dot(&z) / cn);
        }
        let zn = z.norm();
        (zn > 0.0).then(|| (z / zn, w))
    }

    /// Alternating exact block minimization from `(z, w)`.
    pub fn descend(&self, weights: &[f64], mut z: DVector<f64>, mut w: DVector<f64>, max_iters: usize) -> (f64, DVector<f64>, DVector<f64>) {
        let mut current = self.objective(weights, &z, &w);
        for _ in 0..max_iters {
            if let Some(nz) = constrained_min(&self.z_operator(weights, &w), &(&self.cross * &w)) {
                z = nz;
            }
            if let Some(nw) = constrained_min(&self.w_operator(weights, &z), &(self.cross.transpose() * &z)) {
                w = nw;
            }
            let next = self.objective(weights, &z, &w);
            let stalled = current - next <= 1e-12 * current;
            current = next.min(current);
            if current < 1e-32 || stalled {
                break;
            }
        }
        (self.objective(weights, &z, &w), z, w)
    }

    /// Runs every start through the weight schedule (warm-starting each stage
    /// from the previous one). Results are returned in start order.
    pub fn multi_start(&self, schedule: &[Vec<f64>], budget: &StartBudget) -> Result<Vec<LocalMin>> {
        let run = |start: usize| -> Option<LocalMin> {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(start as u64);
            let (mut z, mut w) = self.random_start(&mut rng)?;
            let mut value = f64::INFINITY;
            for weights in schedule {
                let (v, nz, nw) = self.descend(weights, z, w, budget.max_iters);
                value = v;
                z = nz;
                w = nw;
            }
            Some(LocalMin { value, z, w, start })
        };
        let collect = || (0..budget.starts).into_par_iter().filter_map(run).collect::<Vec<_>>();
        match budget.workers {
            Some(0) => Err(Error::Input("worker count must be positive".into())),
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map(|pool| pool.install(collect))
                .map_err(|e| Error::Input(format!("thread pool: {e}"))),
            None => Ok(collect()),
        }
    }
}

impl BilinearProblem {
    /// Descent on the objective weighted by `objective` restricted to the exact
    /// zero set of the terms weighted by `constraint`: each block step works in
    /// the numerical kernel (squared singular values below `kernel_sq_tol`) of
    /// the constraint operator. `None` when the first step finds no kernel.
    pub fn feasible_descend(
        &self,
        objective: &[f64],
        constraint: &[f64],
        mut z: DVector<f64>,
        mut w: DVector<f64>,
        kernel_sq_tol: f64,
        rounds: usize,
    ) -> Option<(DVector<f64>, DVector<f64>)> {
        let mut found = false;
        for _ in 0..rounds {
            let zc = &self.cross * &w;
            match kernel_min(&self.z_operator(objective, &w), &self.z_operator(constraint, &w), &zc, kernel_sq_tol) {
                Some(nz) => z = nz,
                None if !found => return None,
                None => break,
            }
            found = true;
            let wc = self.cross.transpose() * &z;
            match kernel_min(&self.w_operator(objective, &z), &self.w_operator(constraint, &z), &wc, kernel_sq_tol) {
                Some(nw) => w = nw,
                None => break,
            }
        }
        Some((z, w))
    }
}

fn kernel_min(obj: &DMatrix<f64>, con: &DMatrix<f64>, c: &DVector<f64>, kernel_sq_tol: f64) -> Option<DVector<f64>> {
    let cn = c.norm();
    let q = if cn > COUPLING_EPS { linalg::complement_of_unit(&(c / cn)) } else { DMatrix::identity(con.ncols(), con.ncols()) };
    if q.ncols() == 0 {
        return None;
    }
    let restricted = pad_rows(&(con * &q));
    let svd = nalgebra::SVD::new(restricted, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let kernel: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s * s < kernel_sq_tol)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    if kernel.is_empty() {
        return None;
    }
    let basis = &q * DMatrix::from_columns(&kernel);
    let (_, y) = smallest_right(&(obj * &basis));
    Some(basis * y)
}

fn pad_rows(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.nrows() >= m.ncols() {
        return m.clone();
    }
    let mut padded = DMatrix::zeros(m.ncols(), m.ncols());
    padded.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    padded
}

fn combine(basis: &[AlgElement], coeffs: &DVector<f64>) -> AlgElement {
    let first = &basis[0];
    AlgElement::combination(first.field(), first.size(), basis, coeffs.as_slice())
}

/// Unit minimizer of `|M x|` subject to `⟨c, x⟩ = 0`. `None` when the
/// constraint leaves no room.
pub(crate) fn constrained_min(m: &DMatrix<f64>, c: &DVector<f64>) -> Option<DVector<f64>> {
    let cn = c.norm();
    if cn > COUPLING_EPS {
        let q = linalg::complement_of_unit(&(c / cn));
        if q.ncols() == 0 {
            return None;
        }
        let (_, y) = smallest_right(&(m * &q));
        Some(q * y)
    } else if m.ncols() == 0 {
        None
    } else {
        Some(smallest_right(m).1)
    }
}

fn smallest_right(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    linalg::smallest_singular(&pad_rows(m))
}

/// The deterministic minimum of a multi-start run (ties go to the lower start index).
pub(crate) fn best(results: &[LocalMin]) -> Option<&LocalMin> {
    results.iter().min_by(|a, b| a.value.total_cmp(&b.value).then(a.start.cmp(&b.start)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::basis::compact_algebra;
    use crate::algebra::FieldTag;

    fn so3() -> (Subspace, Subspace) {
        let g = compact_algebra(FieldTag::Real, 3, &[0, 1, 2]);
        let full = Subspace::from_spanning(FieldTag::Real, 3, &g).unwrap();
        (full.clone(), full)
    }

    #[test]
    fn so3_commutator_is_constant_on_orthonormal_pairs() {
        let (u, v) = so3();
        let br = |a: &AlgElement, b: &AlgElement| a.commutator(b);
        let p = BilinearProblem::new(&u, &v, &[&br]);
        let res = p.multi_start(&[vec![1.0]], &StartBudget::default().with_starts(8)).unwrap();
        assert_eq!(res.len(), 8);
        for r in &res {
            assert!((r.value - 0.5).abs() < 1e-12, "{}", r.value);
            let z = p.z_element(&r.z);
            let w = p.w_element(&r.w);
            assert!(z.dot(&w).abs() < 1e-12);
        }
    }

    #[test]
    fn finds_commuting_pair_in_so4() {
        let g = compact_algebra(FieldTag::Real, 4, &[0, 1, 2, 3]);
        let s = Subspace::from_spanning(FieldTag::Real, 4, &g).unwrap();
        let br = |a: &AlgElement, b: &AlgElement| a.commutator(b);
        let p = BilinearProblem::new(&s, &s, &[&br]);
        let res = p.multi_start(&[vec![1.0]], &StartBudget::default().with_starts(4)).unwrap();
        let b = best(&res).unwrap();
        assert!(b.value < 1e-24, "{:e}", b.value);
    }

    #[test]
    fn results_do_not_depend_on_worker_count() {
        let (u, v) = so3();
        let br = |a: &AlgElement, b: &AlgElement| a.commutator(b);
        let p = BilinearProblem::new(&u, &v, &[&br]);
        let b1 = StartBudget { workers: Some(1), starts: 6, ..Default::default() };
        let b3 = StartBudget { workers: Some(3), ..b1 };
        let r1 = p.multi_start(&[vec![1.0]], &b1).unwrap();
        let r3 = p.multi_start(&[vec![1.0]], &b3).unwrap();
        for (a, b) in r1.iter().zip(&r3) {
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            assert_eq!(a.z, b.z);
        }
        assert!(p.multi_start(&[vec![1.0]], &StartBudget { workers: Some(0), ..b1 }).is_err());
    }

    #[test]
    fn constrained_min_respects_constraint() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 2.0, 1.0]));
        let c = DVector::from_vec(vec![0.0, 0.0, 1.0]);
        let x = constrained_min(&m, &c).unwrap();
        assert!(x[2].abs() < 1e-14);
        assert!((x[1].abs() - 1.0).abs() < 1e-14);
        assert!(constrained_min(&DMatrix::zeros(1, 1), &DVector::from_vec(vec![1.0])).is_none());
    }
}
