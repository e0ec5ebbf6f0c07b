//! Small dense linear algebra: a dynamically sized square matrix for the
//! general fibre algebra, plus fixed-size arrays for the dimension-4 hot path.
//!
//! Matrices act on column vectors: `(a x)_i = sum_j a[i][j] x_j`, so column
//! `c` of a matrix is the image of the basis vector `e_c`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

pub type Vec4 = [f64; 4];
pub type Mat3 = [[f64; 3]; 3];
pub type Mat4 = [[f64; 4]; 4];
pub type Mat6 = [[f64; 6]; 6];

/// Square real matrix of arbitrary size, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix product of mismatched sizes");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    /// `max |a_ij + a_ji|`.
    pub fn skew_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                r = r.max((self[(i, j)] + self[(j, i)]).abs());
            }
        }
        r
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "matrix sum of mismatched sizes");
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl From<Mat4> for Matrix {
    fn from(m: Mat4) -> Self {
        Self::from_fn(4, |i, j| m[i][j])
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

// ---- fixed 4x4 ----------------------------------------------------------

pub const ZERO4: Mat4 = [[0.0; 4]; 4];

pub fn mat4_to_matrix(m: &Mat4) -> Matrix {
    Matrix::from(*m)
}

/// Returns `None` unless the matrix is 4x4.
pub fn matrix_to_mat4(m: &Matrix) -> Option<Mat4> {
    if m.dim() != 4 {
        return None;
    }
    let mut out = ZERO4;
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
    }
    Some(out)
}

#[inline]
pub fn mul4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut r = ZERO4;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] + a[i][3] * b[3][j];
        }
    }
    r
}

#[inline]
pub fn apply4(a: &Mat4, x: &Vec4) -> Vec4 {
    let mut r = [0.0; 4];
    for (i, ri) in r.iter_mut().enumerate() {
        *ri = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2] + a[i][3] * x[3];
    }
    r
}

#[inline]
pub fn add4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut r = *a;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] += b[i][j];
        }
    }
    r
}

#[inline]
pub fn sub4(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut r = *a;
    for i in 0..4 {
        for j in 0..4 {
            r[i][j] -= b[i][j];
        }
    }
    r
}

#[inline]
pub fn scale4(a: &Mat4, s: f64) -> Mat4 {
    let mut r = *a;
    for row in r.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    r
}

#[inline]
pub fn dot4(a: &Vec4, b: &Vec4) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn max_abs4(a: &Mat4) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

/// `max |J V + V J|`.
pub fn anticommutator_residual4(j: &Mat4, v: &Mat4) -> f64 {
    max_abs4(&add4(&mul4(j, v), &mul4(v, j)))
}

pub fn skew_residual4(a: &Mat4) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..4 {
        for j in i..4 {
            r = r.max((a[i][j] + a[j][i]).abs());
        }
    }
    r
}

/// `-1/2 trace(a b)`.
#[inline]
pub fn inner_g4(a: &Mat4, b: &Mat4) -> f64 {
    let mut t = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            t += a[i][k] * b[k][i];
        }
    }
    -0.5 * t
}

// ---- 3x3 and 6x6 ----------------------------------------------------------

pub const ZERO3: Mat3 = [[0.0; 3]; 3];
pub const IDENTITY3: Mat3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

pub fn trace3(a: &Mat3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}

pub fn transpose3(a: &Mat3) -> Mat3 {
    let mut r = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = a[j][i];
        }
    }
    r
}

pub fn symmetric_residual3(a: &Mat3) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..3 {
        for j in i..3 {
            r = r.max((a[i][j] - a[j][i]).abs());
        }
    }
    r
}

pub fn max_abs3(a: &Mat3) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn frobenius3(a: &Mat3) -> f64 {
    libm::sqrt(a.iter().flatten().map(|v| v * v).sum())
}

pub fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn apply3(a: &Mat3, x: &[f64; 3]) -> [f64; 3] {
    let mut r = [0.0; 3];
    for (i, ri) in r.iter_mut().enumerate() {
        *ri = a[i][0] * x[0] + a[i][1] * x[1] + a[i][2] * x[2];
    }
    r
}

pub fn symmetric_residual6(a: &Mat6) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..6 {
        for j in i..6 {
            r = r.max((a[i][j] - a[j][i]).abs());
        }
    }
    r
}

pub fn max_abs6(a: &Mat6) -> f64 {
    a.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn frobenius6(a: &Mat6) -> f64 {
    libm::sqrt(a.iter().flatten().map(|v| v * v).sum())
}
