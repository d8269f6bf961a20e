//! Small dense row-major matrices and a cyclic Jacobi eigensolver.
//!
//! State dimensions here are tiny (tens at most), so a plain `Vec`-backed
//! matrix with naive products is all the model and Gramian code needs.

use std::ops::{Index, IndexMut};

use crate::error::{CoreError, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Every row must have the same length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(CoreError::RaggedMatrix);
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(CoreError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.rows().map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(CoreError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `x * self`.
    pub fn left_mul_row(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.rows);
        let mut out = vec![T::zero(); self.cols];
        for (k, &xk) in x.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.row(k)) {
                *o = *o + xk * a;
            }
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a = *a + b;
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    /// Adds the outer product `v vᵀ`.
    pub fn add_outer(&mut self, v: &[T]) {
        debug_assert!(self.is_square() && v.len() == self.rows);
        for (i, &vi) in v.iter().enumerate() {
            if vi == T::zero() {
                continue;
            }
            for (j, &vj) in v.iter().enumerate() {
                self[(i, j)] = self[(i, j)] + vi * vj;
            }
        }
    }

    /// Replaces the matrix by `(M + Mᵀ) / 2`.
    pub fn symmetrize(&mut self) {
        debug_assert!(self.is_square());
        let half = T::lit(0.5);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                let m = (self[(i, j)] + self[(j, i)]) * half;
                self[(i, j)] = m;
                self[(j, i)] = m;
            }
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        dev
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| U::lit(x.as_f64())).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

const MAX_SWEEPS: usize = 100;

/// Relative asymmetry accepted by [`symmetric_eigenvalues`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

/// All eigenvalues of a real symmetric matrix, sorted ascending.
///
/// Uses cyclic Jacobi rotations, which are accurate to a small multiple of
/// `eps * ||M||` and fully deterministic for a given input. Input asymmetry
/// above `1e-12` relative to the largest entry is rejected; smaller drift is
/// absorbed by symmetrizing first.
pub fn symmetric_eigenvalues<T: Scalar>(m: &Matrix<T>) -> Result<Vec<T>> {
    if !m.is_square() {
        return Err(CoreError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if !m.is_finite() {
        return Err(CoreError::NonFinite);
    }
    let n = m.nrows();
    let scale = m.max_abs();
    let tolerance = T::rel_tol(SYMMETRY_TOLERANCE) * scale;
    let deviation = m.asymmetry();
    if deviation > tolerance {
        return Err(CoreError::Asymmetric {
            deviation: deviation.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }

    let mut a = m.clone();
    a.symmetrize();
    if scale == T::zero() {
        return Ok(vec![T::zero(); n]);
    }

    let frob2: T = a.as_slice().iter().map(|&x| x * x).sum();
    let target = T::epsilon() * T::epsilon() * frob2;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[(p, q)] * a[(p, q)];
            }
        }
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged {
        return Err(CoreError::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut eig: Vec<T> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(eig)
}

/// One Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Scalar>(a: &mut Matrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == T::zero() {
        return;
    }
    let two = T::lit(2.0);
    let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
    // smaller root of t^2 + 2 theta t - 1 = 0
    let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
    let t = if theta == T::zero() { T::one() } else { t };
    let c = T::one() / t.hypot(T::one());
    let s = t * c;
    let tau = s / (T::one() + c);

    a[(p, p)] = a[(p, p)] - t * apq;
    a[(q, q)] = a[(q, q)] + t * apq;
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    for r in 0..a.nrows() {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
}
