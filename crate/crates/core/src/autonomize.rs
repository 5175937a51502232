//! Autonomization of `Y' = A(t) Y` on `GL(n) x Aff(1)`.
//!
//! The state is `blockdiag(Y, [[x, t], [0, 1]])` and the field
//! `blockdiag(A(t), e_0)` reads `t` off the state, so the system becomes
//! autonomous. Both are stored blockwise; `aff(1)` elements are
//! `p e_-1 + q e_0` with `e_-1 = [[1, 0], [0, 0]]` and `e_0 = [[0, 1], [0, 0]]`.

use crate::error::{check_dims, Error, Result};
use crate::linalg::{expm, LieAlgebra};
use crate::magnus::{check_step_size, gauss2_nodes};
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::method::Method;
use crate::rkmk::rkmk_exponent;
use crate::scalar::Real;

/// An element of `gl(n) x aff(1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedElement<T> {
    pub gl: Mat<T>,
    pub p: T,
    pub q: T,
}

impl<T: Real> AugmentedElement<T> {
    pub fn new(gl: Mat<T>, p: T, q: T) -> Self {
        AugmentedElement { gl, p, q }
    }

    /// `blockdiag(A, e_0)`.
    pub fn with_time_generator(gl: Mat<T>) -> Self {
        AugmentedElement::new(gl, T::zero(), T::one())
    }

    pub fn dim(&self) -> usize {
        self.gl.dim()
    }

    /// The `(n + 2) x (n + 2)` matrix.
    pub fn to_matrix(&self) -> Mat<T> {
        let aff = Mat::from_rows(vec![vec![self.p, self.q], vec![T::zero(), T::zero()]]).expect("2x2");
        self.gl.block_diag(&aff)
    }

    /// The group element `exp(self)`, block by block.
    pub fn exp(&self) -> Result<AugmentedGroup<T>> {
        // exp(p e_-1 + q e_0) = [[e^p, q (e^p - 1)/p], [0, 1]]
        let a = self.p.exp();
        let b = if self.p.is_zero() {
            self.q
        } else {
            self.q * self.p.exp_m1() / self.p
        };
        Ok(AugmentedGroup {
            g: expm(&self.gl)?,
            a,
            b,
        })
    }
}

impl<T: Real> LieAlgebra for AugmentedElement<T> {
    type Scalar = T;

    fn zero_like(&self) -> Self {
        AugmentedElement::new(Mat::zeros(self.dim()), T::zero(), T::zero())
    }

    fn plus(&self, other: &Self) -> Self {
        AugmentedElement::new(&self.gl + &other.gl, self.p + other.p, self.q + other.q)
    }

    fn times(&self, c: &T) -> Self {
        AugmentedElement::new(self.gl.scale(c), self.p * *c, self.q * *c)
    }

    fn bracket(&self, other: &Self) -> Self {
        // [e_-1, e_0] = e_0
        AugmentedElement::new(
            self.gl.bracket(&other.gl),
            T::zero(),
            self.p * other.q - other.p * self.q,
        )
    }

    fn size(&self) -> f64 {
        self.gl
            .max_abs()
            .max(self.p.to_f64_lossy().abs())
            .max(self.q.to_f64_lossy().abs())
    }
}

/// `blockdiag(G, [[a, b], [0, 1]])`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedGroup<T> {
    pub g: Mat<T>,
    pub a: T,
    pub b: T,
}

impl<T: Real> AugmentedGroup<T> {
    pub fn to_matrix(&self) -> Mat<T> {
        let aff = Mat::from_rows(vec![vec![self.a, self.b], vec![T::zero(), T::one()]]).expect("2x2");
        self.g.block_diag(&aff)
    }

    /// Left multiplication `self * state`.
    pub fn act(&self, state: &AugmentedState<T>) -> AugmentedState<T> {
        AugmentedState {
            y: &self.g * &state.y,
            x: self.a * state.x,
            t: self.a * state.t + self.b,
        }
    }
}

/// `blockdiag(Y, [[x, t], [0, 1]])`.
#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedState<T> {
    pub y: Mat<T>,
    pub x: T,
    pub t: T,
}

impl<T: Real> AugmentedState<T> {
    pub fn new(y: Mat<T>, t: T) -> Self {
        AugmentedState { y, x: T::one(), t }
    }

    pub fn to_matrix(&self) -> Mat<T> {
        let aff = Mat::from_rows(vec![vec![self.x, self.t], vec![T::zero(), T::one()]]).expect("2x2");
        self.y.block_diag(&aff)
    }
}

/// The autonomous field `state -> blockdiag(A(state.t), e_0)`.
pub struct AugmentedField<'a, T> {
    a: &'a MatFn<T>,
}

pub fn augment<T: Real>(a: &MatFn<T>) -> AugmentedField<'_, T> {
    AugmentedField { a }
}

impl<T: Real> AugmentedField<'_, T> {
    pub fn eval(&self, state: &AugmentedState<T>) -> AugmentedElement<T> {
        AugmentedElement::with_time_generator(self.a.eval(state.t))
    }

    /// One step of `method` on the augmented system: `(exponent, state1)`.
    pub fn step(&self, method: &Method, h: T, state: &AugmentedState<T>) -> Result<(AugmentedElement<T>, AugmentedState<T>)> {
        check_dims(self.a.dim(), state.y.dim())?;
        let dim = state.y.dim();
        if check_step_size(h)? {
            let zero = AugmentedElement::new(Mat::zeros(dim), T::zero(), T::zero());
            return Ok((zero, state.clone()));
        }
        // Magnus stages sample the field after flowing along e_0 alone.
        let advanced = |c: T| -> Result<AugmentedElement<T>> {
            let shift = AugmentedElement::new(Mat::zeros(dim), T::zero(), h * c).exp()?;
            Ok(self.eval(&shift.act(state)))
        };
        let exponent = match method {
            Method::Magnus2 => {
                let (a0, a1) = (advanced(T::zero())?, advanced(T::one())?);
                magnus_exponent(&a0, &a1, h, T::from_f64_lossy(0.25))
            }
            Method::Magnus4 => {
                let [c1, c2] = gauss2_nodes::<T>();
                let (a1, a2) = (advanced(c1)?, advanced(c2)?);
                magnus_exponent(&a1, &a2, h, T::from_f64_lossy(3f64.sqrt() / 12.0))
            }
            Method::Rkmk { tableau, options } => {
                // Stage fields read t from exp(u_i) applied to the state.
                let field = |_: usize, u: &AugmentedElement<T>| Ok(self.eval(&u.exp()?.act(state)));
                rkmk_exponent(tableau, options, h, &self.eval(state), field)?
            }
        };
        let next = exponent.exp()?.act(state);
        if !next.y.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok((exponent, next))
    }
}

/// `(h/2)(F_1 + F_2) - c h^2 [F_1, F_2]`, the shape shared by both Magnus
/// schemes.
fn magnus_exponent<T: Real>(f1: &AugmentedElement<T>, f2: &AugmentedElement<T>, h: T, c: T) -> AugmentedElement<T> {
    let half = T::from_f64_lossy(0.5);
    f1.plus(f2)
        .times(&(half * h))
        .plus(&f1.bracket(f2).times(&(-c * h * h)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AugmentedSolution<T> {
    pub state: AugmentedState<T>,
    /// `(p, q)` of each step's exponent; ideally `(0, h)`.
    pub aff_exponents: Vec<(T, T)>,
}

/// Integrates the augmented autonomous system with `nsteps` uniform steps.
pub fn solve_augmented<T: Real>(
    method: &Method,
    a: &MatFn<T>,
    t0: T,
    t_end: T,
    nsteps: usize,
    y0: &Mat<T>,
) -> Result<AugmentedSolution<T>> {
    if nsteps == 0 {
        return Err(Error::InvalidArgument("nsteps must be positive".into()));
    }
    if !(t_end > t0) {
        return Err(Error::InvalidArgument("integration needs t_end > t0".into()));
    }
    check_dims(a.dim(), y0.dim())?;
    let field = augment(a);
    let h = (t_end - t0) / T::from_f64_lossy(nsteps as f64);
    let mut state = AugmentedState::new(y0.clone(), t0);
    let mut aff_exponents = Vec::with_capacity(nsteps);
    for _ in 0..nsteps {
        let (exponent, next) = field.step(method, h, &state)?;
        aff_exponents.push((exponent.p, exponent.q));
        state = next;
    }
    Ok(AugmentedSolution { state, aff_exponents })
}

pub fn solve_augmented_named<T: Real>(
    method: &str,
    a: &MatFn<T>,
    t0: T,
    t_end: T,
    nsteps: usize,
    y0: &Mat<T>,
) -> Result<AugmentedSolution<T>> {
    solve_augmented(&Method::by_name(method)?, a, t0, t_end, nsteps, y0)
}

/// Largest entry of `expm(full matrix) - blockwise exp`, for cross-checking
/// the block formulas.
pub fn blockwise_exp_discrepancy<T: Real>(x: &AugmentedElement<T>) -> Result<f64> {
    let full = expm(&x.to_matrix())?;
    Ok((&full - &x.exp()?.to_matrix()).max_abs())
}
