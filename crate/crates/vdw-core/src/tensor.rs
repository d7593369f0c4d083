//! Just enough fixed-size linear algebra for dyadic Green tensors and
//! polarisability matrices. Everything is `f64` and row-major; no attempt is
//! made to be a general-purpose library.

use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::math;

/// Cartesian 3-vector.
pub type Vec3 = [f64; 3];

/// Euclidean inner product.
#[inline]
#[must_use]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Euclidean length.
#[inline]
#[must_use]
pub fn norm(a: Vec3) -> f64 {
    math::sqrt(dot(a, a))
}

/// `a + s·b`, the only compound vector update the crate needs.
#[inline]
#[must_use]
pub fn add_scaled(a: Vec3, s: f64, b: Vec3) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

/// Dense real 3×3 matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Matrix3(pub [[f64; 3]; 3]);

impl Matrix3 {
    /// The zero matrix.
    pub const ZERO: Matrix3 = Matrix3([[0.0; 3]; 3]);

    /// The identity matrix.
    #[must_use]
    pub fn identity() -> Matrix3 {
        let mut m = Matrix3::ZERO;
        m.0[0][0] = 1.0;
        m.0[1][1] = 1.0;
        m.0[2][2] = 1.0;
        m
    }

    /// Dyadic product `a ⊗ b`.
    #[must_use]
    pub fn outer(a: Vec3, b: Vec3) -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for (i, row) in m.0.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i] * b[j];
            }
        }
        m
    }

    /// Sum of the diagonal.
    #[must_use]
    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    /// Transposed copy.
    #[must_use]
    pub fn transpose(&self) -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] = self.0[j][i];
            }
        }
        m
    }

    /// Largest entry magnitude; a cheap matrix norm for diagnostics and
    /// convergence tests.
    #[must_use]
    pub fn max_abs(&self) -> f64 {
        let mut best = 0.0f64;
        for row in &self.0 {
            for &v in row {
                best = best.max(math::abs(v));
            }
        }
        best
    }

    /// Whether the matrix equals its transpose to within `tol` on every
    /// entry.
    #[must_use]
    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if math::abs(self.0[i][j] - self.0[j][i]) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// True when every entry is finite.
    #[must_use]
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|row| row.iter().all(|v| v.is_finite()))
    }
}

impl Add for Matrix3 {
    type Output = Matrix3;
    fn add(self, rhs: Matrix3) -> Matrix3 {
        let mut m = self;
        m += rhs;
        m
    }
}

impl AddAssign for Matrix3 {
    fn add_assign(&mut self, rhs: Matrix3) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Matrix3 {
    type Output = Matrix3;
    fn sub(self, rhs: Matrix3) -> Matrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] -= rhs.0[i][j];
            }
        }
        m
    }
}

impl Neg for Matrix3 {
    type Output = Matrix3;
    fn neg(self) -> Matrix3 {
        self * -1.0
    }
}

impl Mul<f64> for Matrix3 {
    type Output = Matrix3;
    fn mul(self, rhs: f64) -> Matrix3 {
        let mut m = self;
        for i in 0..3 {
            for j in 0..3 {
                m.0[i][j] *= rhs;
            }
        }
        m
    }
}

impl Mul<Matrix3> for Matrix3 {
    type Output = Matrix3;
    fn mul(self, rhs: Matrix3) -> Matrix3 {
        let mut m = Matrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for (k, row) in rhs.0.iter().enumerate() {
                    acc += self.0[i][k] * row[j];
                }
                m.0[i][j] = acc;
            }
        }
        m
    }
}

impl Index<(usize, usize)> for Matrix3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_product_and_trace() {
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, 5.0, 6.0];
        let m = Matrix3::outer(a, b);
        assert_eq!(m[(0, 1)], 5.0);
        assert_eq!(m[(2, 0)], 12.0);
        assert_eq!(m.trace(), dot(a, b));
    }

    #[test]
    fn matrix_product_against_hand_result() {
        let m = Matrix3([[1.0, 2.0, 0.0], [0.0, 1.0, 3.0], [4.0, 0.0, 1.0]]);
        let id = Matrix3::identity();
        assert_eq!(m * id, m);
        let sq = m * m;
        assert_eq!(sq[(0, 0)], 1.0);
        assert_eq!(sq[(0, 1)], 4.0);
        assert_eq!(sq[(0, 2)], 6.0);
        assert_eq!(sq[(2, 2)], 1.0);
    }

    #[test]
    fn trace_is_cyclic() {
        let a = Matrix3([[1.0, 2.0, 3.0], [0.5, -1.0, 2.0], [0.0, 1.0, 4.0]]);
        let b = Matrix3([[2.0, 0.0, 1.0], [1.0, 3.0, 0.0], [0.0, -2.0, 1.0]]);
        let ab = (a * b).trace();
        let ba = (b * a).trace();
        assert!((ab - ba).abs() <= 1e-12 * ab.abs());
    }

    #[test]
    fn symmetry_check() {
        let sym = Matrix3([[1.0, 2.0, 3.0], [2.0, 5.0, 6.0], [3.0, 6.0, 9.0]]);
        assert!(sym.is_symmetric(0.0));
        let mut skew = sym;
        skew.0[0][1] += 1e-6;
        assert!(!skew.is_symmetric(1e-9));
        assert!(skew.is_symmetric(1e-3));
    }

    #[test]
    fn add_scaled_accumulates() {
        let v = add_scaled([1.0, 0.0, 2.0], 0.5, [2.0, 4.0, -2.0]);
        assert_eq!(v, [2.0, 2.0, 1.0]);
    }
}
