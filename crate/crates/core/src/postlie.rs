//! The post-Lie algebra of quasi-right-invariant fields on
//! `GL(n) x Aff(1)`.
//!
//! An element is `h e_0 + H(t)`: a matrix polynomial block `H` and the
//! speed `h` of time translation. With `' = d/dt`:
//!
//! * Jacobi bracket of vector fields: `([H, K] + h K' - k H', 0)`
//! * Cartan connection: `H ▷ K = (h K', 0)`
//! * torsion bracket: `[H, K]_t = ([H, K], 0)`, pointwise in `t`
//!
//! Everything is exact rational polynomial arithmetic.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::linalg::LieAlgebra;
use crate::magnus::magnus_term_exact;
use crate::mat::Mat;
use crate::poly::MatPoly;
use crate::problem::{matrix_from_entries, matrix_to_entries, MatrixEntries};
use crate::rational::{bernoulli_table, factorial, int, max_abs, Rational, RationalEntry};

#[derive(Clone, Debug, PartialEq)]
pub struct TField {
    pub p: MatPoly<Rational>,
    pub h: Rational,
}

impl TField {
    pub fn new(p: MatPoly<Rational>, h: Rational) -> Self {
        TField { p, h }
    }

    /// Right-invariant part only (`h = 0`).
    pub fn matrix(p: MatPoly<Rational>) -> Self {
        TField { p, h: Rational::zero() }
    }

    /// The field `A(t) + e_0` attached to `Y' = A(t) Y`.
    pub fn from_problem(a: MatPoly<Rational>) -> Self {
        TField { p: a, h: Rational::one() }
    }

    pub fn zero(dim: usize) -> Self {
        TField::matrix(MatPoly::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.h.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        TField {
            p: self.p.plus(&other.p),
            h: &self.h + &other.h,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TField {
            p: self.p.scale(c),
            h: &self.h * c,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    /// Largest absolute coefficient, over both blocks.
    pub fn max_abs(&self) -> Rational {
        let p = max_abs(self.p.coeffs().iter().flat_map(|m| m.entries()));
        let h = self.h.abs();
        if h > p {
            h
        } else {
            p
        }
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let file: TFieldFile = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        let dim = file
            .poly
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Parse("poly needs at least one matrix".into()))?;
        let coeffs = file
            .poly
            .iter()
            .map(|m| matrix_from_entries(dim, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(TField {
            p: MatPoly::new(coeffs)?,
            h: file.h.to_rational()?,
        })
    }

    pub fn to_json(&self) -> String {
        let file = TFieldFile {
            h: RationalEntry::from_rational(&self.h),
            poly: self.p.coeffs().iter().map(matrix_to_entries).collect(),
        };
        serde_json::to_string(&file).expect("field serializes")
    }
}

#[derive(Serialize, Deserialize)]
struct TFieldFile {
    h: RationalEntry,
    poly: Vec<MatrixEntries>,
}

fn same_dim(a: &TField, b: &TField) -> Result<()> {
    check_dims(a.dim(), b.dim())
}

/// Vector-field commutator `⟦H, K⟧`.
pub fn jacobi_bracket(a: &TField, b: &TField) -> Result<TField> {
    same_dim(a, b)?;
    let p = a
        .p
        .bracket(&b.p)
        .plus(&b.p.derivative().scale(&a.h))
        .plus(&a.p.derivative().scale(&-b.h.clone()));
    Ok(TField::matrix(p))
}

/// `H ▷ K = (h K', 0)`.
pub fn cartan_connection(a: &TField, b: &TField) -> Result<TField> {
    same_dim(a, b)?;
    Ok(TField::matrix(b.p.derivative().scale(&a.h)))
}

/// `[H, K]_t = ([H, K], 0)`; the time components play no part.
pub fn torsion_bracket(a: &TField, b: &TField) -> Result<TField> {
    same_dim(a, b)?;
    Ok(TField::matrix(a.p.bracket(&b.p)))
}

/// `H ▶ K = H ▷ K + [H, K]_t`.
pub fn adjoint_product(a: &TField, b: &TField) -> Result<TField> {
    Ok(cartan_connection(a, b)?.add(&torsion_bracket(a, b)?))
}

/// `-[H, K]_t`, the bracket paired with [`adjoint_product`].
pub fn negated_torsion_bracket(a: &TField, b: &TField) -> Result<TField> {
    Ok(torsion_bracket(a, b)?.neg())
}

type Op = fn(&TField, &TField) -> Result<TField>;

/// `a(x, y, z) = x ▷ (y ▷ z) - (x ▷ y) ▷ z`.
fn associator(product: Op, x: &TField, y: &TField, z: &TField) -> Result<TField> {
    Ok(product(x, &product(y, z)?)?.sub(&product(&product(x, y)?, z)?))
}

/// Residuals of the two post-Lie axioms for `(bracket, product)`:
/// `r1 = x ▷ [y, z] - [x ▷ y, z] - [y, x ▷ z]` and
/// `r2 = [x, y] ▷ z - a(x, y, z) + a(y, x, z)`.
pub fn postlie_residuals(bracket: Op, product: Op, x: &TField, y: &TField, z: &TField) -> Result<(TField, TField)> {
    same_dim(x, y)?;
    same_dim(y, z)?;
    let r1 = product(x, &bracket(y, z)?)?
        .sub(&bracket(&product(x, y)?, z)?)
        .sub(&bracket(y, &product(x, z)?)?);
    let r2 = product(&bracket(x, y)?, z)?
        .sub(&associator(product, x, y, z)?)
        .add(&associator(product, y, x, z)?);
    Ok((r1, r2))
}

/// Post-Lie residuals for `([·,·]_t, ▷)`.
pub fn postlie_axiom_check(x: &TField, y: &TField, z: &TField) -> Result<(TField, TField)> {
    postlie_residuals(torsion_bracket, cartan_connection, x, y, z)
}

/// Post-Lie residuals for the adjoint structure `(-[·,·]_t, ▶)`.
pub fn adjoint_axiom_check(x: &TField, y: &TField, z: &TField) -> Result<(TField, TField)> {
    postlie_residuals(negated_torsion_bracket, adjoint_product, x, y, z)
}

/// `x ▷ y - y ▷ x + [x, y]_t - ⟦x, y⟧`, zero when the Jacobi bracket is
/// recovered from the post-Lie data.
pub fn derived_bracket_residual(x: &TField, y: &TField) -> Result<TField> {
    Ok(cartan_connection(x, y)?
        .sub(&cartan_connection(y, x)?)
        .add(&torsion_bracket(x, y)?)
        .sub(&jacobi_bracket(x, y)?))
}

/// Jacobi identity residual for a bracket.
pub fn jacobi_residual(bracket: Op, x: &TField, y: &TField, z: &TField) -> Result<TField> {
    Ok(bracket(x, &bracket(y, z)?)?
        .add(&bracket(y, &bracket(z, x)?)?)
        .add(&bracket(z, &bracket(x, y)?)?))
}

/// The ladder `(τ A ▷)^n (A)` as its `τ^n` coefficient.
pub fn connection_ladder(a: &TField, n: usize) -> Result<TField> {
    (0..n).try_fold(a.clone(), |acc, _| cartan_connection(a, &acc))
}

/// Formal power series in `τ` with [`TField`] coefficients, truncated after
/// `τ^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSeries {
    coeffs: Vec<TField>,
}

impl TauSeries {
    pub fn zero(dim: usize, order: usize) -> Self {
        TauSeries {
            coeffs: vec![TField::zero(dim); order + 1],
        }
    }

    pub fn from_coeffs(coeffs: Vec<TField>) -> Result<Self> {
        let dim = coeffs
            .first()
            .map(TField::dim)
            .ok_or_else(|| Error::InvalidArgument("series needs a coefficient".into()))?;
        if coeffs.iter().any(|c| c.dim() != dim) {
            return Err(Error::InvalidArgument("series coefficients differ in dimension".into()));
        }
        Ok(TauSeries { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coeffs[0].dim()
    }

    pub fn coeff(&self, k: usize) -> &TField {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[TField] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        TauSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TauSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Cauchy product under a bilinear operation, truncated at the order.
    pub fn combine(&self, other: &Self, op: Op) -> Result<Self> {
        let n = self.order();
        let mut out = Self::zero(self.dim(), n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=n - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&op(&self.coeffs[i], &other.coeffs[j])?);
            }
        }
        Ok(out)
    }

    /// `d/dτ`, keeping the order.
    pub fn derivative(&self) -> Self {
        let dim = self.dim();
        let mut coeffs: Vec<TField> = (1..self.coeffs.len())
            .map(|k| self.coeffs[k].scale(&int(k as i64)))
            .collect();
        coeffs.push(TField::zero(dim));
        TauSeries { coeffs }
    }

    /// The matrix block at `(t, τ)`.
    pub fn eval_block(&self, t: &Rational, tau: &Rational) -> Mat<Rational> {
        let mut acc = Mat::zeros(self.dim());
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(tau) + &c.p.eval(t);
        }
        acc
    }

    /// The `e_0` component at `τ`.
    pub fn eval_speed(&self, tau: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * tau + &c.h)
    }

    /// Matrix blocks at `t` as a polynomial in `τ`.
    pub fn block_at(&self, t: &Rational) -> MatPoly<Rational> {
        MatPoly::new(self.coeffs.iter().map(|c| c.p.eval(t)).collect()).expect("nonempty")
    }
}

fn require_unit_speed(a: &TField) -> Result<()> {
    if !a.h.is_one() {
        return Err(Error::InvalidArgument(format!("field must have unit time speed, got {}", a.h)));
    }
    Ok(())
}

/// Cap on the `τ` order of [`theta_series`].
pub const THETA_CAP: usize = 16;

/// `sum_k τ^k/k! (A^(k), δ_k0)`: the field that evaluates to `A(t + τ)`.
pub fn shifted_field(a: &TField, order: usize) -> Result<TauSeries> {
    require_unit_speed(a)?;
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut deriv = a.p.clone();
    for k in 0..=order {
        let inv = Rational::new(1.into(), factorial(k));
        let h = if k == 0 { Rational::one() } else { Rational::zero() };
        coeffs.push(TField::new(deriv.scale(&inv), h));
        deriv = deriv.derivative();
    }
    TauSeries::from_coeffs(coeffs)
}

/// The post-Lie Magnus series `θ(τ)`, solving
/// `θ' = sum_n B_n/n! ad_θ^n (F)` with `F` the shifted field, `θ(0) = 0`,
/// and `ad` in the torsion bracket, through `τ^order`.
///
/// The `τ^(k-1)` coefficient of the right-hand side involves only the
/// coefficients of `θ` below `τ^k`, so each coefficient is found once.
/// `ad` powers are kept per coefficient and extended as `θ` grows.
pub fn theta_series(a: &TField, order: usize) -> Result<TauSeries> {
    require_unit_speed(a)?;
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if order > THETA_CAP {
        return Err(Error::OverCap {
            what: "theta order",
            value: order,
            cap: THETA_CAP,
        });
    }
    let f = shifted_field(a, order)?;
    let bern = bernoulli_table(order);
    let zero = TField::zero(a.dim());
    let mut theta = TauSeries::zero(a.dim(), order);
    // powers[n][j]: τ^j coefficient of ad_θ^n (F). It vanishes for j < n
    // because θ starts at τ^1.
    let mut powers: Vec<Vec<TField>> = vec![f.coeffs().to_vec()];
    for k in 1..=order {
        let j = k - 1;
        let mut rhs = f.coeff(j).clone();
        for n in 1..=j {
            if powers.len() <= n {
                powers.push(vec![zero.clone(); order + 1]);
            }
            let mut c = zero.clone();
            for i in 1..=j + 1 - n {
                let prev = &powers[n - 1][j - i];
                if !prev.is_zero() && !theta.coeffs[i].is_zero() {
                    c = c.add(&torsion_bracket(&theta.coeffs[i], prev)?);
                }
            }
            if !bern[n].is_zero() {
                rhs = rhs.add(&c.scale(&(&bern[n] / Rational::from_integer(factorial(n)))));
            }
            powers[n][j] = c;
        }
        theta.coeffs[k] = rhs.scale(&Rational::new(1.into(), k.into()));
    }
    Ok(theta)
}

/// Per-order comparison of `θ` at `t = 0` with the classical expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricMagnusReport {
    /// `max |[θ(τ)(0)]_k - [Ω_1 + Ω_2 + Ω_3]_k|` for `k = 1..=order`.
    pub theta_vs_omega: Vec<Rational>,
    /// Same for the derivatives in `τ` (coefficients `0..order`).
    pub theta_dot_vs_omega_dot: Vec<Rational>,
    /// `θ'(τ)(0)` against `Ω(τ)` itself, coefficients `0..=order`.
    pub theta_dot_vs_omega: Vec<Rational>,
    /// `max |λ^j part of θ(τ)(0) - Ω_j(τ)|` over `τ^0..τ^order`, `j = 1..=3`.
    pub graded: Vec<Rational>,
    /// Largest `τ` power at which `Ω_1 + Ω_2 + Ω_3` is the full expansion
    /// (`Ω_4` starts at `τ^5`).
    pub exact_through: usize,
    /// `e_0` component of every `θ` coefficient matches `τ e_0`.
    pub speed_is_tau: bool,
}

impl GeometricMagnusReport {
    /// Orders `1..=min(order, 4)` and the three graded terms agree exactly.
    pub fn passes(&self) -> bool {
        self.speed_is_tau
            && self.theta_vs_omega.iter().take(self.exact_through).all(Zero::is_zero)
            && self.graded.iter().all(Zero::is_zero)
    }
}

fn coeff_or_zero(p: &MatPoly<Rational>, k: usize) -> Mat<Rational> {
    if k < p.coeffs().len() {
        p.coeffs()[k].clone()
    } else {
        Mat::zeros(p.dim())
    }
}

fn mat_max_abs(m: &Mat<Rational>) -> Rational {
    max_abs(m.entries())
}

/// Parts of `θ(λA)(τ)(0)` homogeneous of degree `j` in `λ`, `j = 0..=order`,
/// by exact interpolation over `λ = 0..=order`.
pub fn theta_graded_blocks(a: &TField, order: usize) -> Result<Vec<MatPoly<Rational>>> {
    require_unit_speed(a)?;
    let zero = Rational::zero();
    let samples: Vec<MatPoly<Rational>> = (0..=order)
        .map(|l| {
            let scaled = TField::new(a.p.scale(&int(l as i64)), Rational::one());
            Ok(theta_series(&scaled, order)?.block_at(&zero))
        })
        .collect::<Result<_>>()?;
    // Solve V c = s with V_lj = l^j, coefficientwise, by Gaussian elimination.
    let n = order + 1;
    let mut v: Vec<Vec<Rational>> = (0..n)
        .map(|l| (0..n).map(|j| num_traits::pow(int(l as i64), j)).collect())
        .collect();
    let mut rhs = samples;
    for col in 0..n {
        let pivot = (col..n).find(|&r| !v[r][col].is_zero()).expect("Vandermonde is invertible");
        v.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = v[col][col].recip();
        for j in 0..n {
            v[col][j] = &v[col][j] * &inv;
        }
        rhs[col] = rhs[col].scale(&inv);
        for r in 0..n {
            if r != col && !v[r][col].is_zero() {
                let f = v[r][col].clone();
                for j in 0..n {
                    let sub = &v[col][j] * &f;
                    v[r][j] -= sub;
                }
                rhs[r] = rhs[r].plus(&rhs[col].scale(&-f));
            }
        }
    }
    Ok(rhs)
}

/// Compares `θ` at `t = 0` with the classical terms `Ω_1..Ω_3` computed in
/// closed form: by powers of `τ`, for the `τ` derivatives, and by degree in
/// `A`.
pub fn geometric_magnus_check(a: &TField, order: usize) -> Result<GeometricMagnusReport> {
    let theta = theta_series(a, order)?;
    let zero = Rational::zero();
    let block = theta.block_at(&zero);
    // At t = 0 the shifted field is A(τ), so the classical terms in τ are
    // those of A itself.
    let omegas: Vec<MatPoly<Rational>> = (1..=3)
        .map(|k| magnus_term_exact(&a.p, k))
        .collect::<Result<_>>()?;
    let omega = omegas.iter().fold(MatPoly::zero(a.dim()), |acc, o| acc.plus(o));

    let theta_vs_omega = (1..=order)
        .map(|k| mat_max_abs(&(&coeff_or_zero(&block, k) - &coeff_or_zero(&omega, k))))
        .collect();
    let theta_dot = block.derivative();
    let omega_dot = omega.derivative();
    let theta_dot_vs_omega_dot = (0..order)
        .map(|k| mat_max_abs(&(&coeff_or_zero(&theta_dot, k) - &coeff_or_zero(&omega_dot, k))))
        .collect();
    let theta_dot_vs_omega = (0..=order)
        .map(|k| mat_max_abs(&(&coeff_or_zero(&theta_dot, k) - &coeff_or_zero(&omega, k))))
        .collect();

    let graded_blocks = theta_graded_blocks(a, order)?;
    let graded = (1..=3.min(order))
        .map(|j| {
            (0..=order)
                .map(|k| mat_max_abs(&(&coeff_or_zero(&graded_blocks[j], k) - &coeff_or_zero(&omegas[j - 1], k))))
                .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        })
        .collect();

    let speed_is_tau = theta
        .coeffs()
        .iter()
        .enumerate()
        .all(|(k, c)| c.h == if k == 1 { Rational::one() } else { Rational::zero() });
    Ok(GeometricMagnusReport {
        theta_vs_omega,
        theta_dot_vs_omega_dot,
        theta_dot_vs_omega,
        graded,
        exact_through: order.min(4),
        speed_is_tau,
    })
}
