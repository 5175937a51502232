//! Classical Magnus expansion: the nested-integral terms `Omega_1..Omega_3`,
//! the order two and order four Magnus integrators, and a reference solver.


use crate::error::{Error, Result};
use crate::linalg::{expm, LieAlgebra};
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::poly::MatPoly;
use crate::quadrature::Quadrature;
use crate::rational::{int, ratio, Rational};
use crate::scalar::Real;

/// Gauss nodes per nested integral when `A` is an opaque sampler.
pub const SAMPLER_NODES: usize = 16;

/// Gauss nodes per nested integral that integrate `Omega_k` of a degree
/// `degree` polynomial exactly: the outermost integrand has degree
/// `k (degree + 1) - 1`.
pub fn exact_node_count(k: usize, degree: usize) -> usize {
    (k * (degree + 1)).div_ceil(2).max(1)
}

/// `Omega_k(A)(t)` for `k` in `{1, 2, 3}` by tensor Gauss-Legendre quadrature
/// over the simplex. Exact (up to rounding) for polynomial `A`.
pub fn magnus_term<T: Real>(a: &MatFn<T>, k: usize, t: T) -> Result<Mat<T>> {
    let nodes = match a.degree() {
        Some(d) => exact_node_count(k, d),
        None => SAMPLER_NODES,
    };
    magnus_term_with_nodes(a, k, t, nodes)
}

pub fn magnus_term_with_nodes<T: Real>(a: &MatFn<T>, k: usize, t: T, nodes: usize) -> Result<Mat<T>> {
    if !(1..=3).contains(&k) {
        return Err(Error::InvalidArgument(format!("Magnus term index {k} not in 1..=3")));
    }
    if t < T::zero() {
        return Err(Error::InvalidArgument("Magnus terms need t >= 0".into()));
    }
    let q = Quadrature::<T>::gauss_legendre(nodes);
    let dim = a.dim();
    let mut acc = Mat::zeros(dim);
    let pts: Vec<(T, T)> = q.nodes.iter().copied().zip(q.weights.iter().copied()).collect();
    match k {
        1 => {
            for &(x, w) in &pts {
                acc = &acc + &a.eval(t * x).scale(&(w * t));
            }
        }
        2 => {
            for &(x1, w1) in &pts {
                let t1 = t * x1;
                let a1 = a.eval(t1);
                for &(x2, w2) in &pts {
                    let t2 = t1 * x2;
                    let jac = w1 * w2 * t * t1;
                    acc = &acc + &a.eval(t2).bracket(&a1).scale(&jac);
                }
            }
            acc = acc.scale(&T::from_f64_lossy(-0.5));
        }
        _ => {
            let quarter = T::from_f64_lossy(0.25);
            let twelfth = T::one() / T::from_f64_lossy(12.0);
            for &(x1, w1) in &pts {
                let t1 = t * x1;
                let a1 = a.eval(t1);
                for &(x2, w2) in &pts {
                    let t2 = t1 * x2;
                    let a2 = a.eval(t2);
                    for &(x3, w3) in &pts {
                        let w = w1 * w2 * w3;
                        // nested simplex t3 < t2 < t1
                        let t3 = t2 * x3;
                        let nested = a.eval(t3).bracket(&a2).bracket(&a1);
                        acc = &acc + &nested.scale(&(quarter * w * t * t1 * t2));
                        // t2, t3 both in [0, t1]
                        let s3 = t1 * x3;
                        let split = a2.bracket(&a.eval(s3).bracket(&a1));
                        acc = &acc + &split.scale(&(twelfth * w * t * t1 * t1));
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// `Omega_k(A)` as an exact polynomial in `t`, from the closed forms of the
/// nested integrals of monomials.
pub fn magnus_term_exact(a: &MatPoly<Rational>, k: usize) -> Result<MatPoly<Rational>> {
    let c = a.coeffs();
    let dim = a.dim();
    let d = c.len();
    let mut out: Vec<Mat<Rational>> = Vec::new();
    let mut add = |power: usize, m: Mat<Rational>| {
        if out.len() <= power {
            out.resize(power + 1, Mat::zeros(dim));
        }
        out[power] = &out[power] + &m;
    };
    match k {
        1 => return Ok(a.antiderivative()),
        2 => {
            for i in 0..d {
                for j in 0..d {
                    let br = c[i].bracket(&c[j]);
                    if br.is_zero() {
                        continue;
                    }
                    let den = ((i + 1) * (i + j + 2)) as i64;
                    add(i + j + 2, br.scale(&ratio(-1, 2 * den)));
                }
            }
        }
        3 => {
            for i in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        let p = i + j + l + 3;
                        // 1/4 [[A(t3), A(t2)], A(t1)] on t3 < t2 < t1
                        let nested = c[i].bracket(&c[j]).bracket(&c[l]);
                        if !nested.is_zero() {
                            let den = ((i + 1) * (i + j + 2) * p) as i64;
                            add(p, nested.scale(&ratio(1, 4 * den)));
                        }
                        // 1/12 [A(t2), [A(t3), A(t1)]] on t2, t3 < t1
                        let split = c[i].bracket(&c[j].bracket(&c[l]));
                        if !split.is_zero() {
                            let den = ((i + 1) * (j + 1) * p) as i64;
                            add(p, split.scale(&ratio(1, 12 * den)));
                        }
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidArgument(format!("Magnus term index {k} not in 1..=3")));
        }
    }
    if out.is_empty() {
        out.push(Mat::zeros(dim));
    }
    MatPoly::new(out)
}

/// `Omega_1 + ... + Omega_order` as an exact polynomial, `order <= 3`.
pub fn magnus_partial_sum_exact(a: &MatPoly<Rational>, order: usize) -> Result<MatPoly<Rational>> {
    (1..=order).try_fold(MatPoly::zero(a.dim()), |acc, k| acc.checked_add(&magnus_term_exact(a, k)?))
}

/// Exponent of a one-step map and the resulting group element `exp(exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    pub exponent: Mat<T>,
    pub update: Mat<T>,
}

impl<T: Real> Step<T> {
    pub(crate) fn from_exponent(exponent: Mat<T>) -> Result<Self> {
        let update = expm(&exponent)?;
        Ok(Step { exponent, update })
    }

    fn identity(dim: usize) -> Self {
        Step {
            exponent: Mat::zeros(dim),
            update: Mat::identity(dim),
        }
    }
}

pub(crate) fn check_step_size<T: Real>(h: T) -> Result<bool> {
    if !h.is_finite() || h < T::zero() {
        return Err(Error::InvalidArgument(format!("step size must be >= 0, got {h:e}")));
    }
    Ok(h.is_zero())
}

/// `(h/2)(A_0 + A_1) - (h^2/4)[A_0, A_1]`: the two-term Magnus series with the
/// trapezoidal rule.
pub fn magnus2_exponent<T: Real>(a0: &Mat<T>, a1: &Mat<T>, h: T) -> Mat<T> {
    let half = T::from_f64_lossy(0.5);
    let quarter = T::from_f64_lossy(0.25);
    &(a0 + a1).scale(&(half * h)) - &a0.bracket(a1).scale(&(quarter * h * h))
}

/// `(h/2)(A_1 + A_2) - (sqrt(3) h^2 / 12)[A_1, A_2]` with `A_i` sampled at
/// the two Gauss nodes.
pub fn magnus4_exponent<T: Real>(a1: &Mat<T>, a2: &Mat<T>, h: T) -> Mat<T> {
    let half = T::from_f64_lossy(0.5);
    let c = T::from_f64_lossy(3f64.sqrt() / 12.0);
    &(a1 + a2).scale(&(half * h)) - &a1.bracket(a2).scale(&(c * h * h))
}

/// Gauss-Legendre abscissae `1/2 -+ sqrt(3)/6`.
pub fn gauss2_nodes<T: Real>() -> [T; 2] {
    let w = 3f64.sqrt() / 6.0;
    [T::from_f64_lossy(0.5 - w), T::from_f64_lossy(0.5 + w)]
}

pub fn magnus2_step<T: Real>(a: &MatFn<T>, t0: T, h: T) -> Result<Step<T>> {
    if check_step_size(h)? {
        return Ok(Step::identity(a.dim()));
    }
    Step::from_exponent(magnus2_exponent(&a.eval(t0), &a.eval(t0 + h), h))
}

pub fn magnus4_step<T: Real>(a: &MatFn<T>, t0: T, h: T) -> Result<Step<T>> {
    if check_step_size(h)? {
        return Ok(Step::identity(a.dim()));
    }
    let [c1, c2] = gauss2_nodes::<T>();
    Step::from_exponent(magnus4_exponent(&a.eval(t0 + c1 * h), &a.eval(t0 + c2 * h), h))
}

/// Times and states of a uniformly stepped solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<Mat<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> &Mat<T> {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn final_time(&self) -> T {
        *self.times.last().expect("trajectory holds the initial time")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Final state of `nsteps` uniform Magnus-4 steps on `[t0, t_end]`.
fn magnus4_final<T: Real>(a: &MatFn<T>, t0: T, t_end: T, nsteps: usize, y0: &Mat<T>) -> Result<Mat<T>> {
    let h = (t_end - t0) / T::from_f64_lossy(nsteps as f64);
    let mut y = y0.clone();
    for k in 0..nsteps {
        let t = t0 + h * T::from_f64_lossy(k as f64);
        y = &magnus4_step(a, t, h)?.update * &y;
    }
    Ok(y)
}

/// Largest step count tried by [`reference_solve`].
pub const REFERENCE_MAX_STEPS: usize = 1 << 18;

/// High-accuracy `Y(t_end)` by repeated step halving of the order four Magnus
/// method until two successive refinements agree within `tol / 10`
/// (relative to `max(1, |Y|)`); the finer solution is returned.
pub fn reference_solve<T: Real>(a: &MatFn<T>, t0: T, t_end: T, y0: &Mat<T>, tol: f64) -> Result<Mat<T>> {
    if tol < 1e-14 {
        return Err(Error::InvalidArgument(format!("tolerance {tol:e} below 1e-14")));
    }
    if t_end <= t0 {
        return Err(Error::InvalidArgument("reference solve needs t_end > t0".into()));
    }
    let mut n = 4;
    let mut coarse = magnus4_final(a, t0, t_end, n, y0)?;
    let mut difference = f64::INFINITY;
    while 2 * n <= REFERENCE_MAX_STEPS {
        n *= 2;
        let fine = magnus4_final(a, t0, t_end, n, y0)?;
        difference = (&fine - &coarse).max_abs();
        if difference <= tol / 10.0 * fine.max_abs().max(1.0) {
            return Ok(fine);
        }
        coarse = fine;
    }
    Err(Error::NoConvergence { steps: n, difference })
}

/// Exact `Omega_2` for `A(t) = a + t b`: `-(t^3/12)[a, b]`.
pub fn omega2_linear(a: &Mat<Rational>, b: &Mat<Rational>, t: &Rational) -> Mat<Rational> {
    a.bracket(b).scale(&(-(t * t * t) / int(12)))
}
