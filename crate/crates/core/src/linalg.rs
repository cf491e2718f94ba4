//! Dense complex square matrices. Every operator here is at most a few tens
//! of rows, so a flat row-major `Vec` is all that is needed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut, Mul};

use crate::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries. Panics if `rows` is not square.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn fill_zero(&mut self) {
        self.data.iter_mut().for_each(|z| *z = ZERO);
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| (self[(r, c)] - self[(c, r)].conj()).norm_sqr() <= tol * tol))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        let max_sqr = self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).fold(0.0, f64::max);
        libm::sqrt(max_sqr)
    }

    /// `out = self * v`.
    pub fn mul_vec_into(&self, v: &[C64], out: &mut [C64]) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.dim..(r + 1) * self.dim];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        self.mul_vec_into(v, &mut out);
        out
    }

    /// Kronecker product `self ⊗ other`; the left factor is the more
    /// significant index.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, other.dim);
        let mut out = CMatrix::zeros(a * b);
        for r1 in 0..a {
            for c1 in 0..a {
                let s = self[(r1, c1)];
                if s == ZERO {
                    continue;
                }
                for r2 in 0..b {
                    for c2 in 0..b {
                        out[(r1 * b + r2, c1 * b + c2)] = s * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs[(k, c)];
                }
            }
        }
        out
    }
}

/// Row-major dump in scientific notation, one row per line.
impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            for c in 0..self.dim {
                if c > 0 {
                    f.write_str("  ")?;
                }
                let z = self[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i", z.re, z.im)?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Squared Euclidean norm of a complex slice.
pub(crate) fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `e^{iφ}`.
pub(crate) fn phase(phi: f64) -> C64 {
    C64::new(libm::cos(phi), libm::sin(phi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_orders_left_factor_first() {
        let x = CMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]);
        let id = CMatrix::identity(2);
        let x1 = x.kron(&id);
        // |00⟩ -> |10⟩
        assert_eq!(x1[(2, 0)], ONE);
        let x2 = id.kron(&x);
        assert_eq!(x2[(1, 0)], ONE);
    }

    #[test]
    fn adjoint_and_hermiticity() {
        let m = CMatrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 2.0)], &[c(0.0, -2.0), c(3.0, 0.0)]]);
        assert!(m.is_hermitian(0.0));
        assert_eq!(m.adjoint(), m);
        let n = CMatrix::from_rows(&[&[c(1.0, 0.0), c(0.0, 2.0)], &[c(0.0, 2.0), c(3.0, 0.0)]]);
        assert!(!n.is_hermitian(1e-12));
    }

    #[test]
    fn product_matches_matvec() {
        let a = CMatrix::from_rows(&[&[c(1.0, 1.0), c(2.0, 0.0)], &[c(0.0, -1.0), c(0.5, 0.0)]]);
        let b = CMatrix::from_rows(&[&[c(0.0, 1.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(-1.0, 0.0)]]);
        let v = [c(0.3, -0.2), c(1.0, 0.4)];
        let ab = &a * &b;
        let lhs = ab.mul_vec(&v);
        let rhs = a.mul_vec(&b.mul_vec(&v));
        for (x, y) in lhs.iter().zip(&rhs) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
