//! Dense square matrices over a [`Scalar`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{check_dims, Error, Result};
use crate::scalar::{Real, Scalar};
use crate::Rational;

/// Square `n x n` matrix stored row-major.
///
/// Operators on references (`&a + &b`, `&a * &b`) panic on mismatched
/// dimensions; the checked entry points in [`crate::linalg`] return
/// [`Error::DimensionMismatch`] instead.
#[derive(Clone, PartialEq)]
pub struct Mat<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn from_vec(dim: usize, data: Vec<T>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        Ok(Mat { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            check_dims(dim, row.len())?;
            data.extend(row);
        }
        Self::from_vec(dim, data)
    }

    pub fn zeros(dim: usize) -> Self {
        Mat {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Elementary matrix with a single one at `(row, col)`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut m = Self::zeros(dim);
        m[(row, col)] = T::one();
        m
    }

    pub fn diag(values: Vec<T>) -> Self {
        let dim = values.len();
        let mut m = Self::zeros(dim);
        for (i, v) in values.into_iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Mat { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    /// Induced 1-norm (maximum column sum).
    pub fn norm1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self[(i, j)].magnitude()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let m = x.magnitude();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(self.zip(other, |a, b| a.clone() + b.clone()))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        Ok(self.zip(other, |a, b| a.clone() - b.clone()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.clone() * other.data[k * n + j].clone();
                    let slot = &mut out.data[i * n + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Mat {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Converts an exact matrix (or any other scalar) into this scalar type.
    pub fn from_rational(m: &Mat<Rational>) -> Self {
        m.map(T::from_rational)
    }

    /// Block-diagonal embedding `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        Mat::from_fn(n, |i, j| {
            if i < self.dim && j < self.dim {
                self[(i, j)].clone()
            } else if i >= self.dim && j >= self.dim {
                other[(i - self.dim, j - self.dim)].clone()
            } else {
                T::zero()
            }
        })
    }

    /// Top-left `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Mat::from_fn(k, |i, j| self[(i, j)].clone())
    }

    /// Trailing `k x k` block.
    pub fn trailing_block(&self, k: usize) -> Self {
        let off = self.dim - k;
        Mat::from_fn(k, |i, j| self[(i + off, j + off)].clone())
    }
}

impl<T: Real> Mat<T> {
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn to_f64(&self) -> Mat<f64> {
        self.map(|x| x.to_f64_lossy())
    }

    /// Solves `self * X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut lu = self.data.clone();
        let mut x = rhs.data.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&a, &b| {
                    lu[a * n + col]
                        .abs()
                        .partial_cmp(&lu[b * n + col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("non-empty range");
            if lu[pivot * n + col] == T::zero() {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    lu.swap(pivot * n + j, col * n + j);
                    x.swap(pivot * n + j, col * n + j);
                }
            }
            let p = lu[col * n + col];
            for row in col + 1..n {
                let factor = lu[row * n + col] / p;
                if factor == T::zero() {
                    continue;
                }
                for j in col..n {
                    lu[row * n + j] = lu[row * n + j] - factor * lu[col * n + j];
                }
                for j in 0..n {
                    x[row * n + j] = x[row * n + j] - factor * x[col * n + j];
                }
            }
        }
        for row in (0..n).rev() {
            for j in 0..n {
                let mut acc = x[row * n + j];
                for k in row + 1..n {
                    acc = acc - lu[row * n + k] * x[k * n + j];
                }
                x[row * n + j] = acc / lu[row * n + row];
            }
        }
        Mat::from_vec(n, x)
    }

    pub fn inverse(&self) -> Result<Self> {
        self.solve(&Mat::identity(self.dim))
    }

    pub fn determinant(&self) -> T {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = T::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| {
                    a[p * n + col]
                        .abs()
                        .partial_cmp(&a[q * n + col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("non-empty range");
            if a[pivot * n + col] == T::zero() {
                return T::zero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det = det * p;
            for row in col + 1..n {
                let factor = a[row * n + col] / p;
                for j in col..n {
                    a[row * n + j] = a[row * n + j] - factor * a[col * n + j];
                }
            }
        }
        det
    }
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Scalar> Add for &Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: Self) -> Mat<T> {
        self.checked_add(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Scalar> Sub for &Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: Self) -> Mat<T> {
        self.checked_sub(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Scalar> Mul for &Mat<T> {
    type Output = Mat<T>;

    fn mul(self, rhs: Self) -> Mat<T> {
        self.checked_mul(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Scalar> Neg for &Mat<T> {
    type Output = Mat<T>;

    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Scalar> Add for Mat<T> {
    type Output = Mat<T>;

    fn add(self, rhs: Self) -> Mat<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Mat<T> {
    type Output = Mat<T>;

    fn sub(self, rhs: Self) -> Mat<T> {
        &self - &rhs
    }
}

impl<T: fmt::Debug> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.dim.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Scalar> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.data.chunks(self.dim).enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl<T: Scalar> Mat<T> {
    /// `true` when `self` is exactly `c * I`.
    pub fn is_scalar_multiple_of_identity(&self) -> bool {
        let c = &self[(0, 0)];
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                if i == j {
                    &self[(i, j)] == c
                } else {
                    self[(i, j)].is_zero()
                }
            })
        })
    }
}

/// Relative discrepancy `|a - b| / max(|a|, |b|, tiny)` in the Frobenius norm.
pub fn relative_difference<T: Real>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    let diff = (a - b).frobenius();
    let scale = a.frobenius().max(b.frobenius());
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}
