use std::ops::{Add, Mul, Neg, Sub};

use super::quaternion::Quaternion;

/// Dense square matrix with quaternion entries, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Quaternion::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if the length is not `n * n`.
    pub fn from_entries(n: usize, data: Vec<Quaternion>) -> Self {
        assert_eq!(data.len(), n * n, "expected {} entries", n * n);
        Self { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|q| q.scale(s)).collect() }
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| *a + b.scale(s)).collect(),
        }
    }

    /// `Re tr(A · B̄ᵀ)`, which is the Euclidean dot product of all real components.
    pub fn frobenius_dot(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.dot(*b)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|q| q.components())
            .fold(0.0, |m: f64, v| m.max(v.abs()))
    }

    /// Matrix exponential by scaling and squaring with a truncated Taylor series.
    pub fn exp(&self) -> Self {
        let n = self.n;
        let norm = self.frobenius_norm();
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm > 0.25 {
            scaled_norm *= 0.5;
            squarings += 1;
        }
        let a = self.scale(0.5f64.powi(squarings as i32));

        let mut result = Self::identity(n);
        let mut term = Self::identity(n);
        for k in 1..=30 {
            term = (&term * &a).scale(1.0 / k as f64);
            result = &result + &term;
            if term.max_abs() <= 1e-18 * result.max_abs() {
                break;
            }
        }
        for _ in 0..squarings {
            result = &result * &result;
        }
        result
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (r, c): (usize, usize)) -> &Quaternion {
        &self.data[r * self.n + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Quaternion {
        &mut self.data[r * self.n + c]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        let n = self.n;
        debug_assert_eq!(n, rhs.n);
        let mut out = QMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Quaternion::ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        assert_eq!(QMatrix::zeros(3).exp(), QMatrix::identity(3));
    }

    #[test]
    fn exp_of_real_rotation_generator() {
        let mut l = QMatrix::zeros(2);
        l[(0, 1)] = Quaternion::ONE;
        l[(1, 0)] = -Quaternion::ONE;
        let s = 2.7;
        let e = l.scale(s).exp();
        assert!((e[(0, 0)].w - s.cos()).abs() < 1e-14);
        assert!((e[(0, 1)].w - s.sin()).abs() < 1e-14);
        assert!((e[(1, 0)].w + s.sin()).abs() < 1e-14);
    }

    #[test]
    fn exp_of_pure_quaternion() {
        // exp(θ u) = cos θ + u sin θ for unit imaginary u
        let u = Quaternion::new(0.0, 0.6, 0.0, 0.8);
        let theta = 5.3;
        let e = QMatrix::from_entries(1, vec![u.scale(theta)]).exp();
        let expect = Quaternion::real(theta.cos()) + u.scale(theta.sin());
        assert!((e[(0, 0)] - expect).norm() < 1e-13);
    }
}
