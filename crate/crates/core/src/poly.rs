//! Polynomials in `t` with square-matrix coefficients.

use crate::error::{check_dims, Error, Result};
use crate::linalg::LieAlgebra;
use crate::mat::Mat;
use crate::rational::{int, Rational};
use crate::scalar::Scalar;

/// `sum_k coeffs[k] * t^k`. Trailing zero coefficients are trimmed, but at
/// least the constant coefficient is always stored.
#[derive(Clone, PartialEq, Debug)]
pub struct MatPoly<T> {
    coeffs: Vec<Mat<T>>,
}

impl<T: Scalar> MatPoly<T> {
    pub fn new(coeffs: Vec<Mat<T>>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("polynomial needs at least one coefficient".into()))?;
        let dim = first.dim();
        for c in &coeffs {
            check_dims(dim, c.dim())?;
        }
        Ok(Self::trimmed(coeffs))
    }

    fn trimmed(mut coeffs: Vec<Mat<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Mat::is_zero) {
            coeffs.pop();
        }
        MatPoly { coeffs }
    }

    pub fn constant(m: Mat<T>) -> Self {
        MatPoly { coeffs: vec![m] }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(Mat::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Mat<T>] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Mat<T> {
        self.coeffs.get(k).cloned().unwrap_or_else(|| Mat::zeros(self.dim()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Mat::is_zero)
    }

    pub fn eval(&self, t: &T) -> Mat<T> {
        let mut acc = Mat::zeros(self.dim());
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(t) + c;
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MatPoly<U> {
        MatPoly {
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(self.dim());
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(&T::from_rational(&int(k as i64 + 1))))
            .collect();
        Self::trimmed(coeffs)
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// `t -> integral_0^t p(s) ds`.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![Mat::zeros(self.dim())];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, c)| {
            c.scale(&T::from_rational(&Rational::new(1.into(), (k as i64 + 1).into())))
        }));
        Self::trimmed(coeffs)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::trimmed(
            (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::trimmed(self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    /// Pointwise matrix product `t -> p(t) q(t)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        let mut coeffs = vec![Mat::zeros(self.dim()); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(Self::trimmed(coeffs))
    }

    /// Pointwise commutator `t -> [p(t), q(t)]`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let pq = self.checked_mul(other)?;
        let qp = other.checked_mul(self)?;
        pq.checked_sub(&qp)
    }

    /// Keeps only the coefficients of `t^0..=t^max_degree`.
    pub fn truncate(&self, max_degree: usize) -> Self {
        Self::trimmed(self.coeffs.iter().take(max_degree + 1).cloned().collect())
    }

    /// Largest coefficient entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Mat::max_abs).fold(0.0, f64::max)
    }
}

impl MatPoly<Rational> {
    /// Converts exact coefficients into the working scalar.
    pub fn to_scalar<U: Scalar>(&self) -> MatPoly<U> {
        self.map(U::from_rational)
    }
}

impl<T: Scalar> LieAlgebra for MatPoly<T> {
    type Scalar = T;

    fn zero_like(&self) -> Self {
        Self::zero(self.dim())
    }

    fn plus(&self, other: &Self) -> Self {
        self.checked_add(other).expect("polynomial dimensions agree")
    }

    fn times(&self, c: &T) -> Self {
        self.scale(c)
    }

    fn bracket(&self, other: &Self) -> Self {
        self.commutator(other).expect("polynomial dimensions agree")
    }

    fn size(&self) -> f64 {
        self.max_abs()
    }
}

impl<T: Scalar> MatPoly<T> {
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn q(rows: Vec<Vec<i64>>) -> Mat<Rational> {
        Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(int).collect()).collect()).unwrap()
    }

    #[test]
    fn derivative_and_antiderivative() {
        let a0 = q(vec![vec![1, 2], vec![0, 1]]);
        let a1 = q(vec![vec![0, 1], vec![1, 0]]);
        let a2 = q(vec![vec![3, 0], vec![0, -3]]);
        let p = MatPoly::new(vec![a0.clone(), a1.clone(), a2.clone()]).unwrap();
        assert_eq!(p.degree(), 2);
        let d = p.derivative();
        assert_eq!(d.coeff(0), a1);
        assert_eq!(d.coeff(1), a2.scale(&int(2)));
        assert_eq!(p.antiderivative().derivative(), p);
        assert_eq!(p.nth_derivative(3), MatPoly::zero(2));
        assert_eq!(p.eval(&ratio(1, 2)), &(&a0 + &a1.scale(&ratio(1, 2))) + &a2.scale(&ratio(1, 4)));
    }

    #[test]
    fn commutator_of_linear_polynomials() {
        let a = q(vec![vec![0, 1], vec![0, 0]]);
        let b = q(vec![vec![0, 0], vec![1, 0]]);
        let p = MatPoly::new(vec![a.clone(), b.clone()]).unwrap();
        // [a + tb, a + tb] = 0 pointwise
        assert!(p.commutator(&p).unwrap().is_zero());
        let c = MatPoly::constant(a.clone()).commutator(&MatPoly::new(vec![Mat::zeros(2), b.clone()]).unwrap()).unwrap();
        assert_eq!(c.degree(), 1);
        assert_eq!(c.coeff(1), crate::linalg::commutator(&a, &b).unwrap());
    }

    #[test]
    fn trims_trailing_zero_coefficients() {
        let p = MatPoly::new(vec![q(vec![vec![1]]), q(vec![vec![0]])]).unwrap();
        assert_eq!(p.degree(), 0);
        assert!(p.is_constant());
        assert!(MatPoly::<Rational>::new(vec![]).is_err());
    }
}
