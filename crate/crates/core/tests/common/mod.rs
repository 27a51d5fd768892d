//! Independent oracles shared by the integration tests. Nothing here calls the
//! SVD-based or search-based code paths of the library.
#![allow(dead_code)]

use quasipos::algebra::{bracket, group_exp, AlgElement, Quaternion};
use quasipos::catalog::CatalogEntry;
use quasipos::triple::{Subspace, Triple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const R2: f64 = std::f64::consts::SQRT_2;

pub fn gaussian(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn unit(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

pub fn random_unit_in(s: &Subspace, rng: &mut ChaCha8Rng) -> AlgElement {
    let mut c = gaussian(rng, s.dim());
    unit(&mut c);
    s.element(&c)
}

/// `|Σ x_i images_i|` with images stored as component vectors.
fn combo_norm(images: &[Vec<f64>], x: &[f64]) -> f64 {
    let rows = images[0].len();
    let mut acc = 0.0;
    for r in 0..rows {
        let mut s = 0.0;
        for (img, xi) in images.iter().zip(x) {
            s += img[r] * xi;
        }
        acc += s * s;
    }
    acc.sqrt()
}

/// Brute-force minimum of `|[X, A]|` over unit `X ∈ 𝔪`: `samples` uniform
/// points on the sphere, then random-perturbation hill climbing from the best
/// few of them.
pub fn sampled_min_ad(t: &Triple, a: &AlgElement, samples: usize, seed: u64) -> f64 {
    let d = t.m().dim();
    if d == 0 {
        return f64::INFINITY;
    }
    let images: Vec<Vec<f64>> = t.m().basis().iter().map(|x| bracket(x, a).unwrap().to_components()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Vec<(f64, Vec<f64>)> = Vec::new();
    for _ in 0..samples {
        let mut x = gaussian(&mut rng, d);
        unit(&mut x);
        let v = combo_norm(&images, &x);
        if best.len() < 8 || v < best[best.len() - 1].0 {
            best.push((v, x));
            best.sort_by(|p, q| p.0.total_cmp(&q.0));
            best.truncate(8);
        }
    }
    let mut overall = f64::INFINITY;
    for (mut value, mut x) in best {
        let mut step = 0.3;
        while step > 1e-7 {
            let mut improved = false;
            for _ in 0..20 {
                let mut y: Vec<f64> = x.iter().map(|xi| xi + step * rng.sample::<f64, _>(StandardNormal)).collect();
                unit(&mut y);
                let v = combo_norm(&images, &y);
                if v < value {
                    value = v;
                    x = y;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        overall = overall.min(value);
    }
    overall
}

/// `f(s)` evaluated from scratch with the public algebra operations.
pub fn f_direct(t: &Triple, z: &AlgElement, w: &AlgElement, a: &AlgElement, s: f64) -> f64 {
    let g = group_exp(a, s);
    let gz = t.h().project(&quasipos::algebra::adjoint(&g, z).unwrap());
    let gw = t.h().project(&quasipos::algebra::adjoint(&g, w).unwrap());
    bracket(&gz, &gw).unwrap().norm_sqr()
}

/// Richardson-extrapolated `½f''(0)` from central second differences with step `h`.
pub fn half_second_derivative(f: impl Fn(f64) -> f64, h: f64) -> f64 {
    let f0 = f(0.0);
    let d = |h: f64| (f(h) - 2.0 * f0 + f(-h)) / (h * h);
    0.5 * (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Minimum of `|[Z, W]|` over a grid of orthonormal pairs with `W` on the unit
/// sphere of 𝔭 and `Z` on the unit sphere of `(𝔤 ⊖ 𝔨) ∩ W^⟂`, for `dim 𝔭 = 2`
/// and `dim(𝔤 ⊖ 𝔨) = 3`.
pub fn grid_min_commutator_low_dim(t: &Triple, steps: usize) -> f64 {
    assert_eq!(t.p().dim(), 2);
    let u = t.g_minus_k();
    assert_eq!(u.dim(), 3);
    let mut min = f64::INFINITY;
    for i in 0..steps {
        let th = std::f64::consts::TAU * i as f64 / steps as f64;
        let w = t.p().element(&[th.cos(), th.sin()]);
        // orthonormal basis of W^⟂ inside u via Gram–Schmidt on u's basis
        let mut perp: Vec<AlgElement> = Vec::new();
        for b in u.basis() {
            let mut r = b.axpy(-quasipos::algebra::inner(b, &w).unwrap(), &w);
            for q in &perp {
                r = r.axpy(-quasipos::algebra::inner(&r, q).unwrap(), q);
            }
            if r.norm() > 1e-6 {
                perp.push(r.normalized());
            }
        }
        assert_eq!(perp.len(), 2);
        for j in 0..steps {
            let ph = std::f64::consts::TAU * j as f64 / steps as f64;
            let z = perp[0].scale(ph.cos()).add(&perp[1].scale(ph.sin()));
            min = min.min(bracket(&z, &w).unwrap().norm());
        }
    }
    min
}

pub fn pair(a: Quaternion, b: Quaternion) -> AlgElement {
    quasipos::algebra::basis::diagonal(quasipos::algebra::FieldTag::Quaternion, 2, &[(0, a), (1, b)])
}

pub fn label(e: &CatalogEntry) -> &str {
    e.triple.label()
}
