//! Small dense complex matrices and the handful of kernels the algebra needs:
//! products, Gauss-Jordan inversion, Hermitian eigenvalues and singular
//! values.
//!
//! Blocks in this crate are tiny (a few rows), so everything here is plain
//! row-major storage with Jacobi-type iterations. Spectral quantities of a
//! complex matrix `X + iY` are computed on its real embedding
//! `[[X, -Y], [Y, X]]`, whose spectrum is that of the complex matrix with
//! every value doubled.

use std::ops::{Index, IndexMut};

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n_rows: usize,
    n_cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![Complex::zero(); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::one();
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                data.push(f(i, j));
            }
        }
        Self { n_rows, n_cols, data }
    }

    /// Builds a matrix from nested rows; `None` if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Option<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return None;
        }
        Some(Self {
            n_rows,
            n_cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real matrix from nested rows of real numbers.
    pub fn from_real_rows(rows: &[&[T]]) -> Option<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex::new(v, T::zero())).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.n_rows
    }

    pub fn ncols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<T>]> {
        self.data.chunks(self.n_cols.max(1)).take(self.n_rows)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.n_rows, other.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let lhs = self.data[i * self.n_cols + k];
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.n_cols {
                    out.data[i * other.n_cols + j] =
                        out.data[i * other.n_cols + j] + lhs * other.data[k * other.n_cols + j];
                }
            }
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(
            (self.n_rows, self.n_cols),
            (other.n_rows, other.n_cols),
            "elementwise dimension mismatch"
        );
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|z| -z)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|z| z * c)
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj())
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Real embedding `[[X, -Y], [Y, X]]` of `X + iY`, row-major.
    fn real_embedding(&self) -> Vec<T> {
        let (r, c) = (self.n_rows, self.n_cols);
        let w = 2 * c;
        let mut out = vec![T::zero(); 4 * r * c];
        for i in 0..r {
            for j in 0..c {
                let z = self[(i, j)];
                out[i * w + j] = z.re;
                out[i * w + c + j] = -z.im;
                out[(r + i) * w + j] = z.im;
                out[(r + i) * w + c + j] = z.re;
            }
        }
        out
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n_cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n_cols + j]
    }
}

/// Inverse by Gauss-Jordan elimination with partial pivoting.
///
/// Returns `None` only when an exact zero pivot shows up; callers that care
/// about conditioning check singular values first.
pub fn inverse<T: Real>(m: &CMatrix<T>) -> Option<CMatrix<T>> {
    assert!(m.is_square(), "inverse of a non-square matrix");
    let n = m.nrows();
    let mut a = m.clone();
    let mut inv = CMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                a[(i, col)]
                    .norm()
                    .partial_cmp(&a[(j, col)].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("non-empty pivot range");
        if a[(pivot, col)].is_zero() {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.data.swap(pivot * n + j, col * n + j);
                inv.data.swap(pivot * n + j, col * n + j);
            }
        }
        let p = a[(col, col)].inv();
        for j in 0..n {
            a[(col, j)] = a[(col, j)] * p;
            inv[(col, j)] = inv[(col, j)] * p;
        }
        for i in 0..n {
            if i == col {
                continue;
            }
            let factor = a[(i, col)];
            if factor.is_zero() {
                continue;
            }
            for j in 0..n {
                let (aj, ij) = (a[(col, j)], inv[(col, j)]);
                a[(i, j)] = a[(i, j)] - factor * aj;
                inv[(i, j)] = inv[(i, j)] - factor * ij;
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of a real symmetric `n x n` matrix (row-major), ascending.
/// Cyclic Jacobi rotations.
pub fn symmetric_eigenvalues<T: Real>(mut a: Vec<T>, n: usize) -> Vec<T> {
    assert_eq!(a.len(), n * n);
    let eps = T::epsilon();
    let total: T = a.iter().map(|&v| v * v).sum();
    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q] * a[p * n + q];
            }
        }
        if off <= eps * eps * total || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                a[p * n + p] = a[p * n + p] - t * apq;
                a[q * n + q] = a[q * n + q] + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let g = a[r * n + p];
                    let h = a[r * n + q];
                    let rp = c * g - s * h;
                    let rq = s * g + c * h;
                    a[r * n + p] = rp;
                    a[p * n + r] = rp;
                    a[r * n + q] = rq;
                    a[q * n + r] = rq;
                }
            }
        }
    }
    let mut eig: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    eig
}

/// One-sided (Hestenes) Jacobi SVD of a real `m x n` row-major matrix.
///
/// Returns the `n` singular values (unsorted, aligned with the columns of
/// `V`) and the right singular vectors `V` as `n` columns.
pub fn jacobi_svd<T: Real>(a: &[T], m: usize, n: usize) -> (Vec<T>, Vec<Vec<T>>) {
    assert_eq!(a.len(), m * n);
    let eps = T::epsilon();
    let mut cols: Vec<Vec<T>> = (0..n).map(|j| (0..m).map(|i| a[i * n + j]).collect()).collect();
    let mut v: Vec<Vec<T>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (alpha, beta, gamma) = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold((T::zero(), T::zero(), T::zero()), |(al, be, ga), (&x, &y)| {
                        (al + x * x, be + y * y, ga + x * y)
                    });
                if gamma.is_zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_columns(&mut cols, p, q, c, s);
                rotate_columns(&mut v, p, q, c, s);
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = cols
        .iter()
        .map(|c| c.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    (sigma, v)
}

fn rotate_columns<T: Real>(cols: &mut [Vec<T>], p: usize, q: usize, c: T, s: T) {
    let (left, right) = cols.split_at_mut(q);
    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
        let (xp, yq) = (*x, *y);
        *x = c * xp - s * yq;
        *y = s * xp + c * yq;
    }
}

/// Eigenvalues of a Hermitian matrix, ascending. Only the Hermitian part is
/// read; callers check self-adjointness themselves.
pub fn hermitian_eigenvalues<T: Real>(h: &CMatrix<T>) -> Vec<T> {
    assert!(h.is_square());
    match h.nrows() {
        0 => Vec::new(),
        1 => vec![h[(0, 0)].re],
        2 => {
            let two = T::lit(2.0);
            let (a, d) = (h[(0, 0)].re, h[(1, 1)].re);
            let b = (h[(0, 1)] + h[(1, 0)].conj()) / Complex::new(two, T::zero());
            let mean = (a + d) / two;
            let rad = ((a - d) / two).hypot(b.norm());
            vec![mean - rad, mean + rad]
        }
        n => {
            // Symmetrise first so rounding in the input cannot break the
            // embedding's symmetry.
            let herm = CMatrix::from_fn(n, n, |i, j| {
                (h[(i, j)] + h[(j, i)].conj()) / Complex::new(T::lit(2.0), T::zero())
            });
            let doubled = symmetric_eigenvalues(herm.real_embedding(), 2 * n);
            doubled.into_iter().step_by(2).collect()
        }
    }
}

/// Singular values of a complex matrix, descending.
pub fn singular_values<T: Real>(m: &CMatrix<T>) -> Vec<T> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return Vec::new();
    }
    if r == 1 && c == 1 {
        return vec![m[(0, 0)].norm()];
    }
    let (mut sigma, _) = jacobi_svd(&m.real_embedding(), 2 * r, 2 * c);
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    sigma.truncate(2 * r.min(c));
    sigma.into_iter().step_by(2).collect()
}

/// Largest singular value.
pub fn spectral_norm<T: Real>(m: &CMatrix<T>) -> T {
    match (m.nrows(), m.ncols()) {
        (0, _) | (_, 0) => T::zero(),
        (1, 1) => m[(0, 0)].norm(),
        _ => {
            let gram = m.adjoint().matmul(m);
            let top = hermitian_eigenvalues(&gram)
                .last()
                .copied()
                .unwrap_or_else(T::zero);
            top.max(T::zero()).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn inverse_of_known_matrix() {
        let m = CMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[0.0, 1.0, 4.0], &[5.0, 6.0, 0.0]]).unwrap();
        let inv = inverse(&m).unwrap();
        let expected =
            CMatrix::from_real_rows(&[&[-24.0, 18.0, 5.0], &[20.0, -15.0, -4.0], &[-5.0, 4.0, 1.0]]).unwrap();
        assert!(inv.sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn inverse_detects_exact_zero_pivot() {
        let m = CMatrix::<f64>::zeros(2, 2);
        assert!(inverse(&m).is_none());
    }

    #[test]
    fn hermitian_eigenvalues_of_pauli_y() {
        let y = CMatrix::from_rows(vec![vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let eig = hermitian_eigenvalues(&y);
        assert!((eig[0] + 1.0).abs() < 1e-14 && (eig[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_path_matches_closed_form_on_diagonal() {
        let d = CMatrix::diagonal(&[c(3.0, 0.0), c(-1.0, 0.0), c(0.5, 0.0), c(2.0, 0.0)]);
        assert_eq!(hermitian_eigenvalues(&d), vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn singular_values_of_nilpotent() {
        let m = CMatrix::<f64>::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]).unwrap();
        let s = singular_values(&m);
        assert!((s[0] - 2.0).abs() < 1e-14);
        assert!(s[1].abs() < 1e-14);
        assert!((spectral_norm(&m) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn svd_right_vectors_span_nullspace() {
        // rank-one 2x3 real matrix: nullspace has dimension 2
        let a = [1.0f64, 2.0, 3.0, 2.0, 4.0, 6.0];
        let (sigma, v) = jacobi_svd(&a, 2, 3);
        let null: Vec<_> = sigma.iter().zip(&v).filter(|(s, _)| **s < 1e-12).collect();
        assert_eq!(null.len(), 2);
        for (_, col) in null {
            let r0 = col[0] + 2.0 * col[1] + 3.0 * col[2];
            assert!(r0.abs() < 1e-12);
        }
    }
}
