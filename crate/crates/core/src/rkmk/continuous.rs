//! Continuous-stage RKMK.
//!
//! The stage index is a continuum `tau in [0, 1]`:
//! `u(tau) = h int_0^1 a(tau, s) dexpinv(u(s), A(t0 + h c(s))) ds` and
//! `v = h int_0^1 b(tau) dexpinv(u(tau), A(t0 + h c(tau))) dtau` with
//! `c(tau) = int_0^1 a(tau, s) ds`. With the step kernel `a = [s < tau]` and
//! `b = 1` the stage function is the Magnus exponent itself,
//! `u(tau) = Omega(t0 + tau h)`.
//!
//! The continuum is discretized at the nodes of a quadrature rule. Under
//! [`StageRule::Collocation`] the unknown stage field is replaced by its
//! Lagrange interpolant through the nodes and the kernel is integrated
//! against each basis polynomial. [`StageRule::Nodal`] applies the node
//! weights to the kernel directly, giving weight 1/2 to a node that sits on
//! the jump of the step kernel.

use std::fmt;
use std::sync::Arc;

use super::{solve_stages, ButcherTableau, RkmkOptions};
use crate::error::{check_dims, Error, Result};
use crate::linalg::{expm, LieAlgebra};
use crate::magnus::check_step_size;
use crate::mat::Mat;
use crate::matfn::MatFn;
use crate::quadrature::{barycentric_weights, lagrange_basis, Quadrature};
use crate::scalar::Real;

type Kernel<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;
type Weight<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// The coefficient `a(tau, s)`.
#[derive(Clone)]
pub enum StageKernel<T> {
    /// `a(tau, s) = 1` for `s < tau`, else 0.
    Step,
    Smooth(Kernel<T>),
    /// A discrete tableau: `a` is a sum of point masses at the nodes.
    Atomic(Vec<Vec<T>>),
}

impl<T> fmt::Debug for StageKernel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageKernel::Step => f.write_str("Step"),
            StageKernel::Smooth(_) => f.write_str("Smooth(..)"),
            StageKernel::Atomic(_) => f.write_str("Atomic(..)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StageRule {
    #[default]
    Collocation,
    Nodal,
}

#[derive(Clone)]
pub struct ContinuousCoeffs<T> {
    kernel: StageKernel<T>,
    b: Weight<T>,
    quadrature: Quadrature<T>,
    rule: StageRule,
    bary: Vec<T>,
}

impl<T> fmt::Debug for ContinuousCoeffs<T>
where
    T: fmt::Debug,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContinuousCoeffs")
            .field("kernel", &self.kernel)
            .field("nodes", &self.quadrature.nodes)
            .field("rule", &self.rule)
            .finish()
    }
}

/// Extra Gauss points used when integrating a smooth kernel.
const KERNEL_EXTRA_NODES: usize = 16;

impl<T: Real> ContinuousCoeffs<T> {
    pub fn new(
        kernel: StageKernel<T>,
        b: impl Fn(T) -> T + Send + Sync + 'static,
        quadrature: Quadrature<T>,
        rule: StageRule,
    ) -> Result<Self> {
        if quadrature.is_empty() || quadrature.weights.len() != quadrature.len() {
            return Err(Error::InvalidArgument("quadrature needs matching nodes and weights".into()));
        }
        if quadrature.weights.iter().any(|&w| !(w > T::zero())) {
            return Err(Error::InvalidArgument("quadrature weights must be positive".into()));
        }
        if quadrature.nodes.iter().any(|&x| !(x >= T::zero() && x <= T::one())) {
            return Err(Error::InvalidArgument("quadrature nodes must lie in [0, 1]".into()));
        }
        let distinct = quadrature.nodes.windows(2).all(|p| p[0] != p[1]);
        if !distinct && matches!(rule, StageRule::Collocation) && !matches!(kernel, StageKernel::Atomic(_)) {
            return Err(Error::InvalidArgument("collocation needs distinct nodes".into()));
        }
        if let StageKernel::Atomic(a) = &kernel {
            if a.len() != quadrature.len() || a.iter().any(|r| r.len() != quadrature.len()) {
                return Err(Error::InvalidArgument("atomic kernel must be square in the node count".into()));
            }
        }
        let bary = if distinct {
            barycentric_weights(&quadrature.nodes)
        } else {
            Vec::new()
        };
        Ok(ContinuousCoeffs {
            kernel,
            b: Arc::new(b),
            quadrature,
            rule,
            bary,
        })
    }

    /// Step kernel with `b = 1` on `m` Gauss-Legendre nodes: the coefficients
    /// whose exact stage function is the Magnus exponent.
    pub fn exact(m: usize) -> Result<Self> {
        Self::exact_with_rule(m, StageRule::Collocation)
    }

    pub fn exact_with_rule(m: usize, rule: StageRule) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("need at least one quadrature node".into()));
        }
        Self::new(StageKernel::Step, |_| T::one(), Quadrature::gauss_legendre(m), rule)
    }

    /// A Butcher tableau as point masses: nodes `c`, weights `b`, kernel `a`.
    pub fn from_tableau(tab: &ButcherTableau) -> Result<Self> {
        let (a, b, c) = tab.to_real::<T>();
        Self::new(
            StageKernel::Atomic(a),
            |_| T::one(),
            Quadrature { nodes: c, weights: b },
            StageRule::Nodal,
        )
    }

    pub fn kernel(&self) -> &StageKernel<T> {
        &self.kernel
    }

    pub fn quadrature(&self) -> &Quadrature<T> {
        &self.quadrature
    }

    pub fn rule(&self) -> StageRule {
        self.rule
    }

    pub fn b(&self, tau: T) -> T {
        (self.b)(tau)
    }

    fn fine_rule(&self) -> Quadrature<T> {
        Quadrature::gauss_legendre(2 * self.quadrature.len() + KERNEL_EXTRA_NODES)
    }

    /// `c(tau) = int_0^1 a(tau, s) ds`. For an atomic kernel only node
    /// values of `tau` are meaningful.
    pub fn c(&self, tau: T) -> Option<T> {
        match &self.kernel {
            StageKernel::Step => Some(tau),
            StageKernel::Smooth(a) => {
                let q = self.fine_rule();
                Some(q.nodes.iter().zip(&q.weights).fold(T::zero(), |acc, (&s, &w)| acc + w * a(tau, s)))
            }
            StageKernel::Atomic(a) => self
                .node_index(tau)
                .map(|i| a[i].iter().fold(T::zero(), |acc, &x| acc + x)),
        }
    }

    fn node_index(&self, tau: T) -> Option<usize> {
        self.quadrature.nodes.iter().position(|&x| x == tau)
    }

    /// Weights `W_k(tau)` with `u(tau) = h sum_k W_k(tau) f_k`.
    pub fn row_weights(&self, tau: T) -> Option<Vec<T>> {
        let q = &self.quadrature;
        match (&self.kernel, self.rule) {
            (StageKernel::Atomic(a), _) => self.node_index(tau).map(|i| a[i].clone()),
            (StageKernel::Step, StageRule::Nodal) => Some(
                q.nodes
                    .iter()
                    .zip(&q.weights)
                    .map(|(&s, &w)| {
                        if s < tau {
                            w
                        } else if s == tau {
                            w * T::from_f64_lossy(0.5)
                        } else {
                            T::zero()
                        }
                    })
                    .collect(),
            ),
            (StageKernel::Smooth(a), StageRule::Nodal) => {
                Some(q.nodes.iter().zip(&q.weights).map(|(&s, &w)| w * a(tau, s)).collect())
            }
            (StageKernel::Step, StageRule::Collocation) => {
                // int_0^tau l_k(s) ds; l_k has degree m - 1, so m Gauss points
                // on [0, tau] integrate it exactly.
                let sub = Quadrature::<T>::gauss_legendre(q.len()).on_interval(T::zero(), tau);
                Some(self.project(&sub, |_| T::one()))
            }
            (StageKernel::Smooth(a), StageRule::Collocation) => Some(self.project(&self.fine_rule(), |s| a(tau, s))),
        }
    }

    /// `int g(s) l_k(s) ds` for every basis polynomial, using `rule`.
    fn project(&self, rule: &Quadrature<T>, g: impl Fn(T) -> T) -> Vec<T> {
        let m = self.quadrature.len();
        let mut out = vec![T::zero(); m];
        for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
            let gs = g(s);
            if gs.is_zero() {
                continue;
            }
            let basis = lagrange_basis(&self.quadrature.nodes, &self.bary, s);
            for (o, l) in out.iter_mut().zip(basis) {
                *o = *o + w * gs * l;
            }
        }
        out
    }

    /// Weights for `v = h sum_k V_k f_k`.
    pub fn output_weights(&self) -> Vec<T> {
        let q = &self.quadrature;
        q.nodes.iter().zip(&q.weights).map(|(&x, &w)| w * self.b(x)).collect()
    }
}

/// The discretized stage function `tau -> u(tau)`.
#[derive(Clone, Debug)]
pub struct StageFunction<T> {
    coeffs: ContinuousCoeffs<T>,
    h: T,
    fields: Vec<Mat<T>>,
}

impl<T: Real> StageFunction<T> {
    /// `u(tau)`, or `None` where the discretization does not define it
    /// (off-node values of an atomic kernel).
    pub fn eval(&self, tau: T) -> Option<Mat<T>> {
        let w = self.coeffs.row_weights(tau)?;
        let mut acc = Mat::zeros(self.fields[0].dim());
        for (wk, fk) in w.iter().zip(&self.fields) {
            acc = &acc + &fk.scale(&(self.h * *wk));
        }
        Some(acc)
    }

    /// Stage field values `dexpinv(u_k, A(t0 + h c_k))` at the nodes.
    pub fn node_fields(&self) -> &[Mat<T>] {
        &self.fields
    }
}

#[derive(Clone, Debug)]
pub struct ContinuousStep<T> {
    pub u: StageFunction<T>,
    pub v: Mat<T>,
    pub y1: Mat<T>,
}

pub fn cstage_step<T: Real>(
    co: &ContinuousCoeffs<T>,
    opts: &RkmkOptions,
    a: &MatFn<T>,
    t0: T,
    h: T,
    y0: &Mat<T>,
) -> Result<ContinuousStep<T>> {
    check_dims(a.dim(), y0.dim())?;
    let dim = y0.dim();
    let nodes = &co.quadrature.nodes;
    if check_step_size(h)? {
        let u = StageFunction {
            coeffs: co.clone(),
            h,
            fields: vec![Mat::zeros(dim); nodes.len()],
        };
        return Ok(ContinuousStep {
            u,
            v: Mat::zeros(dim),
            y1: y0.clone(),
        });
    }
    let w = nodes
        .iter()
        .map(|&x| co.row_weights(x).expect("nodes have row weights"))
        .collect::<Vec<_>>();
    let samples = nodes
        .iter()
        .map(|&x| {
            let c = co.c(x).expect("nodes have abscissae");
            a.eval(t0 + h * c)
        })
        .collect::<Vec<_>>();
    let start = vec![Mat::zeros(dim); nodes.len()];
    let (_, fields) = solve_stages(&w, &start, h, opts, |k, _| Ok(samples[k].clone()))?;
    let v = co
        .output_weights()
        .iter()
        .zip(&fields)
        .fold(Mat::zeros(dim), |acc, (wk, fk)| acc.plus(&fk.scale(&(h * *wk))));
    let y1 = &expm(&v)? * y0;
    Ok(ContinuousStep {
        u: StageFunction {
            coeffs: co.clone(),
            h,
            fields,
        },
        v,
        y1,
    })
}
