//! Commutators, truncated `dexp` / `dexp^{-1}` series, and the matrix
//! exponential and logarithm.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{check_dims, Error, Result};
use crate::mat::Mat;
use crate::rational::{bernoulli_table, factorial, Rational};
use crate::scalar::{FromRational, Real, Scalar};

/// A Lie algebra element: the minimum needed to evaluate `ad`-power series.
pub trait LieAlgebra: Clone {
    type Scalar: Scalar;

    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, c: &Self::Scalar) -> Self;
    fn bracket(&self, other: &Self) -> Self;
    /// Largest coefficient magnitude, for convergence tests.
    fn size(&self) -> f64;
}

impl<T: Scalar> LieAlgebra for Mat<T> {
    type Scalar = T;

    fn zero_like(&self) -> Self {
        Mat::zeros(self.dim())
    }

    fn plus(&self, other: &Self) -> Self {
        self + other
    }

    fn times(&self, c: &T) -> Self {
        self.scale(c)
    }

    fn bracket(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    fn size(&self) -> f64 {
        self.max_abs()
    }
}

/// `sum_n coeffs[n] * ad_u^n(v)`.
pub fn ad_series<E: LieAlgebra>(u: &E, v: &E, coeffs: &[Rational]) -> E {
    let mut term = v.clone();
    let mut acc = v.zero_like();
    for (n, c) in coeffs.iter().enumerate() {
        if n > 0 {
            term = u.bracket(&term);
        }
        if !c.is_zero() {
            acc = acc.plus(&term.times(&E::Scalar::from_rational(c)));
        }
    }
    acc
}

/// `B_n / n!` for `n = 0..=order`.
pub fn dexpinv_coefficients(order: usize) -> Vec<Rational> {
    bernoulli_table(order)
        .into_iter()
        .enumerate()
        .map(|(n, b)| b / Rational::from_integer(factorial(n)))
        .collect()
}

/// `1 / (n+1)!` for `n = 0..=order`.
pub fn dexp_coefficients(order: usize) -> Vec<Rational> {
    (0..=order)
        .map(|n| Rational::new(BigInt::one(), factorial(n + 1)))
        .collect()
}

pub fn dexpinv_of<E: LieAlgebra>(u: &E, v: &E, order: usize) -> E {
    ad_series(u, v, &dexpinv_coefficients(order))
}

pub fn dexp_of<E: LieAlgebra>(u: &E, v: &E, order: usize) -> E {
    ad_series(u, v, &dexp_coefficients(order))
}

/// `XY - YX`.
pub fn commutator<T: Scalar>(x: &Mat<T>, y: &Mat<T>) -> Result<Mat<T>> {
    check_dims(x.dim(), y.dim())?;
    Ok(x.bracket(y))
}

/// `ad_u^n(v)`, with `ad_u^0(v) = v`.
pub fn ad_pow<T: Scalar>(u: &Mat<T>, v: &Mat<T>, n: usize) -> Result<Mat<T>> {
    check_dims(u.dim(), v.dim())?;
    Ok((0..n).fold(v.clone(), |acc, _| u.bracket(&acc)))
}

/// `sum_{n=0}^{order} B_n/n! ad_u^n(v)`, the truncated inverse differential of
/// the exponential.
pub fn dexpinv<T: Scalar>(u: &Mat<T>, v: &Mat<T>, order: usize) -> Result<Mat<T>> {
    check_dims(u.dim(), v.dim())?;
    Ok(dexpinv_of(u, v, order))
}

/// `sum_{n=0}^{order} 1/(n+1)! ad_u^n(v)`.
pub fn dexp<T: Scalar>(u: &Mat<T>, v: &Mat<T>, order: usize) -> Result<Mat<T>> {
    check_dims(u.dim(), v.dim())?;
    Ok(dexp_of(u, v, order))
}

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// 1-norm threshold below which the degree 13 Pade approximant is accurate to
/// double precision.
const THETA13: f64 = 5.371_920_351_148_152;

/// Matrix exponential by scaling and squaring with a diagonal `[13/13]` Pade
/// kernel.
pub fn expm<T: Real>(x: &Mat<T>) -> Result<Mat<T>> {
    if !x.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = x.dim();
    let norm = x.norm1();
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = x.scale(&T::from_f64_lossy(0.5f64.powi(squarings)));
    let c = |k: usize| T::from_f64_lossy(PADE13[k]);
    let id = Mat::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let inner_u = &(&a6.scale(&c(13)) + &a4.scale(&c(11))) + &a2.scale(&c(9));
    let w = &(&(&(&(&a6 * &inner_u) + &a6.scale(&c(7))) + &a4.scale(&c(5))) + &a2.scale(&c(3)))
        + &id.scale(&c(1));
    let u = &a * &w;
    let inner_v = &(&a6.scale(&c(12)) + &a4.scale(&c(10))) + &a2.scale(&c(8));
    let v = &(&(&(&(&a6 * &inner_v) + &a6.scale(&c(6))) + &a4.scale(&c(4))) + &a2.scale(&c(2)))
        + &id.scale(&c(0));

    let mut r = (&v - &u).solve(&(&v + &u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Principal square root by the Denman-Beavers iteration.
fn sqrtm<T: Real>(a: &Mat<T>) -> Result<Mat<T>> {
    let half = T::from_f64_lossy(0.5);
    let mut y = a.clone();
    let mut z = Mat::identity(a.dim());
    for _ in 0..100 {
        let y_next = (&y + &z.inverse()?).scale(&half);
        let z_next = (&z + &y.inverse()?).scale(&half);
        let delta = (&y_next - &y).norm1();
        y = y_next;
        z = z_next;
        if delta <= 4.0 * T::epsilon().to_f64_lossy() * y.norm1() {
            return Ok(y);
        }
    }
    Err(Error::NoConvergence {
        steps: 100,
        difference: f64::NAN,
    })
}

/// Principal matrix logarithm by inverse scaling and squaring.
///
/// Only defined here for `|Y - I|_1 < 1/2`, where the principal branch is
/// unambiguous.
pub fn logm<T: Real>(y: &Mat<T>) -> Result<Mat<T>> {
    if !y.is_finite() {
        return Err(Error::NonFinite);
    }
    let id = Mat::identity(y.dim());
    if (y - &id).norm1() >= 0.5 {
        return Err(Error::InvalidArgument(
            "logm requires |Y - I|_1 < 1/2".into(),
        ));
    }
    let mut z = y.clone();
    let mut roots = 0;
    while (&z - &id).norm1() > 1.0 / 64.0 {
        z = sqrtm(&z)?;
        roots += 1;
    }
    let x = &z - &id;
    let eps = T::epsilon().to_f64_lossy();
    let mut power = x.clone();
    let mut acc = Mat::zeros(y.dim());
    for k in 1..200 {
        let coeff = T::from_f64_lossy(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64);
        let term = power.scale(&coeff);
        acc = &acc + &term;
        if term.norm1() <= eps * acc.norm1().max(eps) * 1e-2 {
            break;
        }
        power = &power * &x;
    }
    Ok(acc.scale(&T::from_f64_lossy(2f64.powi(roots))))
}
