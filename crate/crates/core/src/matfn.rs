//! Coefficient functions `t -> A(t)` of the linear problem `Y' = A(t) Y`.

use std::fmt;
use std::sync::Arc;

use crate::mat::Mat;
use crate::poly::MatPoly;
use crate::rational::Rational;
use crate::scalar::Real;

type Sampler<T> = Arc<dyn Fn(T) -> Mat<T> + Send + Sync>;

#[derive(Clone)]
enum Repr<T> {
    Poly {
        exact: MatPoly<Rational>,
        working: MatPoly<T>,
    },
    Sampler(Sampler<T>),
}

/// Either an exact matrix polynomial or an opaque deterministic sampler.
#[derive(Clone)]
pub struct MatFn<T> {
    dim: usize,
    repr: Repr<T>,
}

impl<T: Real> MatFn<T> {
    pub fn from_poly(exact: MatPoly<Rational>) -> Self {
        let working = exact.to_scalar();
        MatFn {
            dim: exact.dim(),
            repr: Repr::Poly { exact, working },
        }
    }

    pub fn from_sampler(dim: usize, f: impl Fn(T) -> Mat<T> + Send + Sync + 'static) -> Self {
        MatFn {
            dim,
            repr: Repr::Sampler(Arc::new(f)),
        }
    }

    pub fn constant(m: Mat<T>) -> Self {
        let dim = m.dim();
        Self::from_sampler(dim, move |_| m.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, t: T) -> Mat<T> {
        match &self.repr {
            Repr::Poly { working, .. } => working.eval(&t),
            Repr::Sampler(f) => f(t),
        }
    }

    pub fn poly(&self) -> Option<&MatPoly<Rational>> {
        match &self.repr {
            Repr::Poly { exact, .. } => Some(exact),
            Repr::Sampler(_) => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly().map(MatPoly::degree)
    }
}

impl<T> fmt::Debug for MatFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Poly { exact, .. } => f
                .debug_struct("MatFn")
                .field("dim", &self.dim)
                .field("degree", &exact.degree())
                .finish(),
            Repr::Sampler(_) => f.debug_struct("MatFn").field("dim", &self.dim).field("sampler", &true).finish(),
        }
    }
}
