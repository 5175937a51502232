//! Runge-Kutta-Munthe-Kaas stepping for `Y' = A(t) Y`.
//!
//! Stages live in the Lie algebra:
//! `u_i = h sum_j a_ij f_j`, `f_i = dexpinv(u_i, A(t0 + h c_i))`, and the step
//! is `Y1 = exp(h sum_i b_i f_i) Y0`. Implicit tableaux are solved by a fixed
//! number of Jacobi sweeps starting from `f_i = A(t0 + h c_i)`.

mod continuous;
mod tableau;

pub use continuous::{cstage_step, ContinuousCoeffs, ContinuousStep, StageFunction, StageKernel, StageRule};
pub use tableau::{is_consistent, weight_sum, ButcherTableau, Coeff, TABLEAU_NAMES};

use num_traits::{One, Zero};

use crate::error::{check_dims, Error, Result};
use crate::linalg::{dexpinv_of, expm, LieAlgebra};
use crate::magnus::check_step_size;
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::scalar::Real;

/// Largest supported `dexpinv` truncation.
pub const MAX_DEXPINV_ORDER: usize = 8;

/// Sweep cap when iterating to a residual tolerance.
pub const MAX_RESIDUAL_SWEEPS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RkmkOptions {
    /// Highest `ad` power kept in `dexpinv`; 1 keeps `V - [U, V]/2`.
    pub dexpinv_order: usize,
    /// Fixed-point sweeps for implicit stages.
    pub fp_iters: usize,
    /// Iterate until successive stage values differ by at most this much
    /// instead of running `fp_iters` sweeps. Off by default.
    pub residual_tol: Option<f64>,
}

impl Default for RkmkOptions {
    fn default() -> Self {
        RkmkOptions {
            dexpinv_order: 1,
            fp_iters: 1,
            residual_tol: None,
        }
    }
}

impl RkmkOptions {
    pub fn new(dexpinv_order: usize, fp_iters: usize) -> Self {
        RkmkOptions {
            dexpinv_order,
            fp_iters,
            residual_tol: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dexpinv_order > MAX_DEXPINV_ORDER {
            return Err(Error::OverCap {
                what: "dexpinv_order",
                value: self.dexpinv_order,
                cap: MAX_DEXPINV_ORDER,
            });
        }
        if let Some(tol) = self.residual_tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidArgument(format!("residual tolerance must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

fn strictly_lower<T: Real>(w: &[Vec<T>]) -> bool {
    w.iter().enumerate().all(|(i, row)| row[i..].iter().all(|x| x.is_zero()))
}

/// `h sum_j w[i][j] f_j`.
fn combine<E>(row: &[E::Scalar], f: &[E], h: E::Scalar) -> E
where
    E: LieAlgebra,
    E::Scalar: Real,
{
    let mut acc = f[0].zero_like();
    for (w, fj) in row.iter().zip(f) {
        if !w.is_zero() {
            acc = acc.plus(&fj.times(&(h * *w)));
        }
    }
    acc
}

/// Solves the stage system for an arbitrary Lie algebra.
///
/// `field(i, u)` returns the vector field sampled for stage `i` once the
/// stage increment is `u`; for `Y' = A(t) Y` it ignores `u` and returns
/// `A(t0 + h c_i)`. Returns `(u_i, f_i)` for every stage. `start` gives the
/// initial guess `u_i` used to seed an implicit iteration.
pub fn solve_stages<E, F>(
    w: &[Vec<E::Scalar>],
    start: &[E],
    h: E::Scalar,
    opts: &RkmkOptions,
    field: F,
) -> Result<(Vec<E>, Vec<E>)>
where
    E: LieAlgebra,
    E::Scalar: Real,
    F: Fn(usize, &E) -> Result<E>,
{
    opts.validate()?;
    let s = w.len();
    check_dims(start.len(), s)?;
    let order = opts.dexpinv_order;

    if strictly_lower(w) {
        let mut u: Vec<E> = Vec::with_capacity(s);
        let mut f: Vec<E> = Vec::with_capacity(s);
        for i in 0..s {
            let ui = if i == 0 {
                start[0].zero_like()
            } else {
                combine(&w[i][..i], &f, h)
            };
            let fi = dexpinv_of(&ui, &field(i, &ui)?, order);
            u.push(ui);
            f.push(fi);
        }
        return Ok((u, f));
    }

    let mut f = (0..s).map(|i| field(i, &start[i])).collect::<Result<Vec<E>>>()?;
    let mut u = start.to_vec();
    let sweep = |f: &[E]| -> Result<(Vec<E>, Vec<E>)> {
        let u: Vec<E> = w.iter().map(|row| combine(row, f, h)).collect();
        let next = u
            .iter()
            .enumerate()
            .map(|(i, ui)| Ok(dexpinv_of(ui, &field(i, ui)?, order)))
            .collect::<Result<Vec<E>>>()?;
        Ok((u, next))
    };
    match opts.residual_tol {
        None => {
            for _ in 0..opts.fp_iters {
                (u, f) = sweep(&f)?;
            }
        }
        Some(tol) => {
            let mut difference = f64::INFINITY;
            for _ in 0..MAX_RESIDUAL_SWEEPS {
                let (nu, nf) = sweep(&f)?;
                difference = nf
                    .iter()
                    .zip(&f)
                    .map(|(a, b)| a.plus(&b.times(&-E::Scalar::one())).size())
                    .fold(0.0, f64::max);
                (u, f) = (nu, nf);
                if difference <= tol {
                    return Ok((u, f));
                }
            }
            return Err(Error::NoConvergence {
                steps: MAX_RESIDUAL_SWEEPS,
                difference,
            });
        }
    }
    Ok((u, f))
}

/// `h sum_i b_i f_i` for a tableau and a generic stage field.
pub fn rkmk_exponent<E, F>(tab: &ButcherTableau, opts: &RkmkOptions, h: E::Scalar, seed: &E, field: F) -> Result<E>
where
    E: LieAlgebra,
    E::Scalar: Real,
    F: Fn(usize, &E) -> Result<E>,
{
    let (a, b, c) = tab.to_real::<E::Scalar>();
    // Seed implicit sweeps at u_i = h c_i F(0) so that state-dependent fields
    // are first sampled at the stage times.
    let start: Vec<E> = c.iter().map(|&ci| seed.times(&(h * ci))).collect();
    let (_, f) = solve_stages(&a, &start, h, opts, field)?;
    Ok(combine(&b, &f, h))
}

/// One RKMK step: returns `(exponent, Y1)`.
pub fn rkmk_step<T: Real>(
    tab: &ButcherTableau,
    opts: &RkmkOptions,
    a: &MatFn<T>,
    t0: T,
    h: T,
    y0: &Mat<T>,
) -> Result<(Mat<T>, Mat<T>)> {
    check_dims(a.dim(), y0.dim())?;
    if check_step_size(h)? {
        return Ok((Mat::zeros(y0.dim()), y0.clone()));
    }
    let (_, _, c) = tab.to_real::<T>();
    let samples: Vec<Mat<T>> = c.iter().map(|&ci| a.eval(t0 + h * ci)).collect();
    if samples.iter().any(|m| m.dim() != y0.dim()) {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: y0.dim(),
        });
    }
    let seed = Mat::zeros(y0.dim());
    let exponent = rkmk_exponent(tab, opts, h, &seed, |i, _| Ok(samples[i].clone()))?;
    let y1 = &expm(&exponent)? * y0;
    Ok((exponent, y1))
}

/// Heun-RKMK with two `dexpinv` terms, written the way it is derived:
/// `f1 = A0`, `f2 = A1 - (h/2)[A0, A1]`, exponent `(h/2)(f1 + f2)`.
pub fn heun_exponent<T: Real>(a0: &Mat<T>, a1: &Mat<T>, h: T) -> Result<Mat<T>> {
    check_dims(a0.dim(), a1.dim())?;
    let half = T::from_f64_lossy(0.5);
    let f1 = a0.clone();
    let f2 = a1 - &a0.bracket(a1).scale(&(half * h));
    Ok((&f1 + &f2).scale(&(half * h)))
}

/// Two-stage Gauss-Legendre RKMK after one sweep with two `dexpinv` terms:
/// `f1 = A1 + (h/2)(1/4 - w)[A1, A2]`, `f2 = A2 - (h/2)(1/4 + w)[A1, A2]`,
/// `w = sqrt(3)/6`, exponent `(h/2)(f1 + f2)`.
pub fn gl4_exponent<T: Real>(a1: &Mat<T>, a2: &Mat<T>, h: T) -> Result<Mat<T>> {
    check_dims(a1.dim(), a2.dim())?;
    let half = T::from_f64_lossy(0.5);
    let quarter = T::from_f64_lossy(0.25);
    let w = T::from_f64_lossy(3f64.sqrt() / 6.0);
    let br = a1.bracket(a2);
    let f1 = a1 + &br.scale(&(half * h * (quarter - w)));
    let f2 = a2 - &br.scale(&(half * h * (quarter + w)));
    Ok((&f1 + &f2).scale(&(half * h)))
}
