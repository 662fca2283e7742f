//! Dense complex vectors and matrices of dimension two or three.
//!
//! Storage is always 3 (x 3); entries beyond `dim` are zero and ignored.

use core::fmt;
use core::ops::{Index, IndexMut, Mul};

#[cfg(not(feature = "std"))]
use num_traits::Float;

pub use num_complex::Complex64 as C64;

pub(crate) const MAX_DIM: usize = 3;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, PartialEq)]
pub struct CVector {
    dim: usize,
    data: [C64; MAX_DIM],
}

impl CVector {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, data: [ZERO; MAX_DIM] }
    }

    pub fn from_slice(entries: &[C64]) -> Self {
        let mut v = Self::zeros(entries.len());
        v.data[..entries.len()].copy_from_slice(entries);
        v
    }

    pub fn from_real(entries: &[f64]) -> Self {
        let mut v = Self::zeros(entries.len());
        for (d, &x) in v.data.iter_mut().zip(entries) {
            *d = C64::new(x, 0.0);
        }
        v
    }

    /// The `k`-th unit vector.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[k] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data[..self.dim]
    }

    pub(crate) fn raw(&self) -> &[C64; MAX_DIM] {
        &self.data
    }

    pub(crate) fn from_raw(dim: usize, data: [C64; MAX_DIM]) -> Self {
        Self { dim, data }
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.as_slice().iter()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// ⟨self|other⟩, conjugating `self`.
    pub fn inner(&self, other: &CVector) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        self.iter().zip(other.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn populations(&self) -> [f64; MAX_DIM] {
        let mut p = [0.0; MAX_DIM];
        for (pk, z) in p.iter_mut().zip(self.iter()) {
            *pk = z.norm_sqr();
        }
        p
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for z in out.data[..self.dim].iter_mut() {
            *z *= s;
        }
        out
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, k: usize) -> &C64 {
        &self.as_slice()[k]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, k: usize) -> &mut C64 {
        &mut self.data[..self.dim][k]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: [[C64; MAX_DIM]; MAX_DIM],
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} out of range");
        Self { dim, data: [[ZERO; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m.data[k][k] = ONE;
        }
        m
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (k, &z) in entries.iter().enumerate() {
            m.data[k][k] = z;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let mut m = Self::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), rows.len(), "matrix must be square");
            m.data[i][..row.len()].copy_from_slice(row);
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let mut m = Self::zeros(rows.len());
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), rows.len(), "matrix must be square");
            for (j, &x) in row.iter().enumerate() {
                m.data[i][j] = C64::new(x, 0.0);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[CVector]) -> Self {
        let mut m = Self::zeros(cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), cols.len(), "matrix must be square");
            for i in 0..cols.len() {
                m.data[i][j] = c[i];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> CVector {
        let mut v = CVector::zeros(self.dim);
        for i in 0..self.dim {
            v[i] = self.data[i][j];
        }
        v
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.data[i][j] = self.data[j][i];
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &CVector) -> CVector {
        debug_assert_eq!(self.dim, v.dim());
        let mut out = CVector::zeros(self.dim);
        for i in 0..self.dim {
            out[i] = (0..self.dim).map(|j| self.data[i][j] * v[j]).sum();
        }
        out
    }

    /// Largest absolute entry of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.data[i][j] - other.data[i][j]).norm());
            }
        }
        worst
    }

    /// max |(M†M − I)_ij|.
    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian_exact(&self) -> bool {
        *self == self.adjoint()
    }

    /// `self` raised to a non-negative integer power by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &self.data[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        &mut self.data[i][j]
    }
}

impl Mul for CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: CMatrix) -> CMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i][j] = (0..n).map(|k| self.data[i][k] * rhs.data[k][j]).sum();
            }
        }
        m
    }
}

impl Mul<CVector> for CMatrix {
    type Output = CVector;
    fn mul(self, rhs: CVector) -> CVector {
        self.mul_vec(&rhs)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.dim {
            list.entry(&&self.data[i][..self.dim]);
        }
        list.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_matches_repeated_product() {
        let m = CMatrix::from_rows(&[
            &[C64::new(0.3, 0.1), C64::new(-0.2, 0.5)],
            &[C64::new(0.7, -0.4), C64::new(0.1, 0.9)],
        ]);
        let mut expected = CMatrix::identity(2);
        for _ in 0..7 {
            expected = expected * m;
        }
        assert!(m.pow(7).max_abs_diff(&expected) < 1e-12);
        assert_eq!(m.pow(0), CMatrix::identity(2));
    }

    #[test]
    fn inner_product_conjugates_left() {
        let a = CVector::from_slice(&[C64::new(0.0, 1.0), C64::new(1.0, 0.0)]);
        let b = CVector::from_slice(&[C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
        assert_eq!(a.inner(&b), C64::new(1.0, 0.0));
    }
}
